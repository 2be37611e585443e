"""Closed-form transfer functions of the heat edges and the heat network.

A single heat edge with Dirichlet trace inputs and flux outputs has the 2x2
transfer matrix

    P(lam) = [[p1, p2], [p2, p1]],
    p1(lam) = beta*nu*coth(nu),   p2(lam) = -beta*nu/sinh(nu),

with nu = sqrt(lam/beta) taken on the principal branch, and the limiting
values p1(0) = -p2(0) = beta.  The three-edge heat network is the
interconnection P2(lam) = R P(lam) R^T with P = diag(P^1, P^2, P^3) and R the
fixed 3x6 zero-one matrix below.  On the imaginary axis the real part of P2
has the explicit entries q_j^k(s) in terms of a_k(s) = sqrt(|s|/(2*beta_k)).

All hyperbolic expressions are evaluated through exp(-nu)-scaled forms so
that the formulas stay finite for |lam| up to 1e12 (p2 -> 0, p1 -> beta*nu).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HeatEdgeParams",
    "TransferMatrix",
    "RealPartMatrix",
    "INTERCONNECTION",
    "heat_edge_transfer",
    "network_transfer_P2",
    "re_P2_on_axis",
    "eta_lower_bound",
    "mu",
    "resolvent_bound_estimate",
]

#: Interconnection of the six decoupled edge traces into the three shared
#: vertex traces: row j selects the two edge endpoints glued at vertex j.
INTERCONNECTION = np.array(
    [
        [1, 0, 0, 0, 0, 1],
        [0, 1, 1, 0, 0, 0],
        [0, 0, 0, 1, 1, 0],
    ],
    dtype=float,
)

# Below this |nu| the closed form is replaced by the lam = 0 branch; the
# jump this introduces is below 1e-8 in absolute value and is tested.
_NU_SMALL = 1e-4


@dataclass(frozen=True)
class HeatEdgeParams:
    """Thermal diffusivity of one unit-length heat edge."""

    beta: float

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive and finite, got {self.beta}")


@dataclass(frozen=True)
class TransferMatrix:
    """Value of a transfer function at one frequency.

    ``entries`` is complex symmetric (not Hermitian); values at conjugate
    frequencies are entrywise conjugate.
    """

    lam: complex
    entries: np.ndarray


@dataclass(frozen=True)
class RealPartMatrix:
    """Re P2(i s): real symmetric, strictly diagonally dominant for s != 0."""

    s: float
    entries: np.ndarray


def _require_right_half_plane(lam: complex) -> complex:
    lam = complex(lam)
    if lam.real < 0:
        raise ValueError(f"lambda must satisfy Re(lambda) >= 0, got {lam}")
    return lam


def _as_params(beta) -> HeatEdgeParams:
    if isinstance(beta, HeatEdgeParams):
        return beta
    return HeatEdgeParams(float(beta))


def _edge_p1_p2(lam: complex, beta: float) -> tuple[complex, complex]:
    """Entries p1, p2 of the single-edge transfer matrix, overflow-safe.

    With E = exp(-2 nu):  coth(nu) = (1 + E)/(1 - E)  and
    1/sinh(nu) = 2 exp(-nu)/(1 - E).  Re(nu) >= 0 on the principal branch, so
    |E| <= 1 and both exponentials underflow harmlessly to 0 as |lam| grows.
    """
    nu = cmath.sqrt(lam / beta)
    if abs(nu) < _NU_SMALL:
        return complex(beta), complex(-beta)
    em = cmath.exp(-nu)
    e2 = em * em
    denom = 1.0 - e2
    p1 = beta * nu * (1.0 + e2) / denom
    p2 = -beta * nu * 2.0 * em / denom
    return p1, p2


def heat_edge_transfer(lam: complex, params) -> TransferMatrix:
    """2x2 transfer matrix of a single heat edge at frequency ``lam``.

    Requires Re(lam) >= 0 and a positive diffusivity.  At lam = 0 returns
    beta * [[1, -1], [-1, 1]] exactly.
    """
    lam = _require_right_half_plane(lam)
    beta = _as_params(params).beta
    p1, p2 = _edge_p1_p2(lam, beta)
    entries = np.array([[p1, p2], [p2, p1]], dtype=complex)
    return TransferMatrix(lam=lam, entries=entries)


def _triple(betas) -> tuple[float, float, float]:
    betas = tuple(_as_params(b).beta for b in betas)
    if len(betas) != 3:
        raise ValueError(f"expected three diffusivities, got {len(betas)}")
    return betas


def network_transfer_P2(lam: complex, betas) -> TransferMatrix:
    """3x3 transfer matrix of the heat network, P2(lam) = R P(lam) R^T."""
    lam = _require_right_half_plane(lam)
    b1, b2, b3 = _triple(betas)
    p11, p21 = _edge_p1_p2(lam, b1)
    p12, p22 = _edge_p1_p2(lam, b2)
    p13, p23 = _edge_p1_p2(lam, b3)
    entries = np.array(
        [
            [p11 + p13, p21, p23],
            [p21, p11 + p12, p22],
            [p23, p22, p12 + p13],
        ],
        dtype=complex,
    )
    return TransferMatrix(lam=lam, entries=entries)


def _q1_q2(s: float, beta: float) -> tuple[float, float]:
    """Real parts q1 = Re p1(is), q2 = Re p2(is) in overflow-safe form.

    Multiplying numerator and denominator of the textbook quotients by
    4 exp(-2a) turns sinh/cosh into polynomials in E = exp(-2a).
    """
    a = math.sqrt(abs(s) / (2.0 * beta))
    em = math.exp(-a)
    e2 = em * em
    sin_a = math.sin(a)
    cos_a = math.cos(a)
    denom = (1.0 - e2) ** 2 + 4.0 * e2 * sin_a * sin_a
    q1 = beta * a * ((1.0 - e2 * e2) + 4.0 * e2 * cos_a * sin_a) / denom
    q2 = -beta * a * 2.0 * em * ((1.0 - e2) * cos_a + (1.0 + e2) * sin_a) / denom
    return q1, q2


def re_P2_on_axis(s: float, betas) -> RealPartMatrix:
    """Re P2(i s) from the explicit q-formulas; rejects s = 0 (0/0 there)."""
    s = float(s)
    if s == 0.0:
        raise ValueError("re_P2_on_axis is undefined at s = 0")
    b1, b2, b3 = _triple(betas)
    q11, q21 = _q1_q2(s, b1)
    q12, q22 = _q1_q2(s, b2)
    q13, q23 = _q1_q2(s, b3)
    entries = np.array(
        [
            [q11 + q13, q21, q23],
            [q21, q11 + q12, q22],
            [q23, q22, q12 + q13],
        ],
        dtype=float,
    )
    return RealPartMatrix(s=s, entries=entries)


def eta_lower_bound(s: float, betas) -> float:
    """Smallest eigenvalue of Re P2(i s); positive for every s != 0."""
    m = re_P2_on_axis(s, betas).entries
    lam_min = float(np.linalg.eigvalsh(m)[0])
    if lam_min <= 0.0:
        raise ArithmeticError(
            f"Re P2(i s) is not positive definite at s={s}: lambda_min={lam_min}"
        )
    return lam_min


def mu(s: float, betas) -> float:
    """1 + ||P2(1 + i s)||^2 with the spectral norm of the 3x3 matrix."""
    m = network_transfer_P2(1.0 + 1j * float(s), betas).entries
    norm = float(np.linalg.svd(m, compute_uv=False)[0])
    return 1.0 + norm * norm


def resolvent_bound_estimate(s: float, betas) -> float:
    """mu(s) / eta(s): the resolvent growth bound up to a fixed constant."""
    return mu(s, betas) / eta_lower_bound(s, betas)
