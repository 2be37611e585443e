"""Energy-dissipative finite-dimensional generators for the wave-heat network.

Spatial scheme (uniform grid, h = 1/n per unit edge):

* wave edges carry the stress u = y_x at the n cell midpoints and the
  velocity v = y_t at the n+1 nodes (staggered centered differences);
* heat edges carry w at the n+1 nodes with the 3-point Laplacian inside;
* each coupled vertex owns a single shared trace DOF holding the common
  value of all incident traces, updated by a lumped finite-volume balance
  over the incident half-cells.  The continuous flux balance at the vertex
  is exactly the condition that makes the boundary stresses/fluxes cancel
  from that balance.

With these stencils discrete summation by parts holds exactly, so

    Re<A_h z, z>_h  =  - sum_k beta_k * h * sum_cells (dw_k / h)^2

as an algebraic identity: the coupled system dissipates only through the
heat edges, and every assembled generator is dissipative to rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

from waveheatnet.network import EdgeKind, ExteriorBC, NetworkSpec

__all__ = [
    "DiscreteSystem",
    "DiscreteBoundaryNode",
    "IllConditionedSolveError",
    "discretize",
    "discretize_wave_damped",
    "discretize_heat_dirichlet",
    "boundary_node",
    "discrete_transfer",
    "discrete_transfer_matrix",
    "dissipation_rate",
    "heat_dissipation_identity",
    "export_matrix_market",
]

_MIN_N = 8


class IllConditionedSolveError(RuntimeError):
    """Constrained transfer solve is singular or numerically unreliable."""


@dataclass
class DiscreteSystem:
    """Assembled generator A_h with its energy weights and DOF layout.

    ``heat_edges`` maps each heat-edge field name to (beta, tail trace index,
    head trace index); a trace index of None means the trace is clamped to 0.
    """

    generator: sp.csr_matrix
    weights: np.ndarray
    n: int
    variant: str
    betas: tuple[float, ...]
    exterior_bc: Optional[ExteriorBC]
    dof_layout: dict[str, np.ndarray]
    heat_edges: dict[str, tuple[float, Optional[int], Optional[int]]] = field(
        default_factory=dict
    )

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    def inner(self, x, y) -> complex:
        return complex(np.sum(self.weights * x * np.conj(y)))

    def norm(self, x) -> float:
        return float(np.sqrt(np.sum(self.weights * np.abs(x) ** 2)))

    def energy(self, z) -> float:
        return 0.5 * self.norm(z) ** 2

    def heat_edge_nodes(self, z, name: str) -> np.ndarray:
        """Full node array of one heat edge, traces included."""
        beta, tail, head = self.heat_edges[name]
        interior = z[self.dof_layout[name]]
        left = z[tail] if tail is not None else 0.0 * interior[0]
        right = z[head] if head is not None else 0.0 * interior[0]
        return np.concatenate(([left], interior, [right]))


@dataclass
class DiscreteBoundaryNode:
    """Discrete (G, L, K) triple with a right-inverse for G.

    ``interior_rows`` lists the rows of L that carry the PDE residual; the
    remaining rows are the finite-volume trace/boundary closures.  G and K
    use second-order one-sided (3-point) endpoint stencils.
    """

    L: sp.csr_matrix
    G: np.ndarray
    K: np.ndarray
    lift: np.ndarray
    weights: np.ndarray
    interior_rows: np.ndarray
    n: int
    kind: str
    betas: tuple[float, ...]

    @property
    def dim(self) -> int:
        return self.L.shape[0]

    @property
    def boundary_dim(self) -> int:
        return self.G.shape[0]

    def inner(self, x, y) -> complex:
        return complex(np.sum(self.weights * x * np.conj(y)))


class _Builder:
    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[int] = []
        self.cols: list[int] = []
        self.vals: list[float] = []

    def add(self, i: int, j: int, v: float) -> None:
        self.rows.append(int(i))
        self.cols.append(int(j))
        self.vals.append(float(v))

    def tocsr(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.vals, (self.rows, self.cols)), shape=(self.dim, self.dim)
        )


def _check_paper_spec(spec: NetworkSpec) -> tuple[float, float, float]:
    kinds = [e.kind for e in spec.edges]
    if kinds.count(EdgeKind.WAVE) != 2 or kinds.count(EdgeKind.HEAT) != 3:
        raise ValueError("expected the fixed 2-wave / 3-heat topology")
    return spec.betas  # type: ignore[return-value]


def discretize(spec: NetworkSpec, n: int) -> DiscreteSystem:
    """Generator of the full coupled network (both exterior variants)."""
    if n < _MIN_N:
        raise ValueError(f"n must be >= {_MIN_N}, got {n}")
    b1, b2, b3 = _check_paper_spec(spec)
    h = 1.0 / n
    neumann = spec.exterior_bc is ExteriorBC.NEUMANN_STRESS

    pos = 0

    def block(size):
        nonlocal pos
        idx = np.arange(pos, pos + size)
        pos += size
        return idx

    u1 = block(n)
    # v1 nodes: Dirichlet drops node 0 (clamped); node n is the vertex trace
    v1 = block(n if neumann else n - 1)
    u2 = block(n)
    v2 = block(n - 1)  # nodes 1..n-1; node 0 and n are vertex traces
    w1 = block(n - 1)
    w2 = block(n - 1)
    w3 = block(n - 1)
    th = block(3)
    dim = pos

    def v1_node(i):
        # global index of velocity node i on wave edge 1, or None if clamped
        if i == 0:
            return v1[0] if neumann else None
        if i == n:
            return th[0]
        return v1[i] if neumann else v1[i - 1]

    def v2_node(i):
        if i == 0:
            return th[1]
        if i == n:
            return th[2]
        return v2[i - 1]

    m = _Builder(dim)

    # wave edges: du_j = (v_{j+1} - v_j)/h,  dv_i = (u_i - u_{i-1})/h
    for u, vnode in ((u1, v1_node), (u2, v2_node)):
        for j in range(n):
            for node, sgn in ((vnode(j + 1), 1.0), (vnode(j), -1.0)):
                if node is not None:
                    m.add(u[j], node, sgn / h)
        for i in range(1, n):
            m.add(vnode(i), u[i], 1.0 / h)
            m.add(vnode(i), u[i - 1], -1.0 / h)
    if neumann:
        # half-cell balance at the free end with zero boundary stress
        m.add(v1[0], u1[0], 2.0 / h)

    # heat edges: interior 3-point Laplacian; endpoints are vertex traces
    heat = {"w1": (b1, w1, th[0], th[1]), "w2": (b2, w2, th[1], th[2]),
            "w3": (b3, w3, th[2], th[0])}
    for beta, idx, tail, head in heat.values():
        for i in range(1, n):
            row = idx[i - 1]
            left = tail if i == 1 else idx[i - 2]
            right = head if i == n - 1 else idx[i]
            m.add(row, left, beta / h**2)
            m.add(row, row, -2.0 * beta / h**2)
            m.add(row, right, beta / h**2)

    # vertex balances over the three incident half-cells (mass 3h/2); the
    # continuous flux condition cancels the boundary stress/flux terms
    c = 2.0 / (3.0 * h)
    # vertex 1: wave-1 head, heat-1 tail, heat-3 head
    m.add(th[0], u1[n - 1], -c)
    m.add(th[0], w1[0], c * b1 / h)
    m.add(th[0], th[0], -c * b1 / h)
    m.add(th[0], th[0], -c * b3 / h)
    m.add(th[0], w3[n - 2], c * b3 / h)
    # vertex 2: heat-1 head, heat-2 tail, wave-2 tail
    m.add(th[1], u2[0], c)
    m.add(th[1], th[1], -c * b1 / h)
    m.add(th[1], w1[n - 2], c * b1 / h)
    m.add(th[1], w2[0], c * b2 / h)
    m.add(th[1], th[1], -c * b2 / h)
    # vertex 3: heat-2 head, heat-3 tail, wave-2 head
    m.add(th[2], u2[n - 1], -c)
    m.add(th[2], th[2], -c * b2 / h)
    m.add(th[2], w2[n - 2], c * b2 / h)
    m.add(th[2], w3[0], c * b3 / h)
    m.add(th[2], th[2], -c * b3 / h)

    weights = np.full(dim, h)
    weights[th] = 1.5 * h
    if neumann:
        weights[v1[0]] = 0.5 * h

    layout = {"u1": u1, "v1": v1, "u2": u2, "v2": v2,
              "w1": w1, "w2": w2, "w3": w3, "theta": th}
    heat_edges = {name: (beta, int(tail), int(head))
                  for name, (beta, _, tail, head) in heat.items()}
    return DiscreteSystem(
        generator=m.tocsr(), weights=weights, n=n, variant="full",
        betas=(b1, b2, b3), exterior_bc=spec.exterior_bc,
        dof_layout=layout, heat_edges=heat_edges,
    )


def discretize_wave_damped(n: int) -> DiscreteSystem:
    """Wave subnetwork with the absorbing conditions u1(1) = -v1(1),
    u2(0) = v2(0), u2(1) = -v2(1) and the clamp v1(0) = 0."""
    if n < _MIN_N:
        raise ValueError(f"n must be >= {_MIN_N}, got {n}")
    h = 1.0 / n
    u1 = np.arange(0, n)
    v1 = np.arange(n, 2 * n)          # nodes 1..n
    u2 = np.arange(2 * n, 3 * n)
    v2 = np.arange(3 * n, 4 * n + 1)  # nodes 0..n
    dim = 4 * n + 1
    m = _Builder(dim)

    def v1_node(i):
        return None if i == 0 else v1[i - 1]

    def v2_node(i):
        return v2[i]

    for u, vnode in ((u1, v1_node), (u2, v2_node)):
        for j in range(n):
            for node, sgn in ((vnode(j + 1), 1.0), (vnode(j), -1.0)):
                if node is not None:
                    m.add(u[j], node, sgn / h)
        for i in range(1, n):
            m.add(vnode(i), u[i], 1.0 / h)
            m.add(vnode(i), u[i - 1], -1.0 / h)
    # absorbing half-cell closures: boundary stress equals -(outgoing velocity)
    m.add(v1[n - 1], v1[n - 1], -2.0 / h)
    m.add(v1[n - 1], u1[n - 1], -2.0 / h)
    m.add(v2[0], v2[0], -2.0 / h)
    m.add(v2[0], u2[0], 2.0 / h)
    m.add(v2[n], v2[n], -2.0 / h)
    m.add(v2[n], u2[n - 1], -2.0 / h)

    weights = np.full(dim, h)
    weights[[v1[n - 1], v2[0], v2[n]]] = 0.5 * h
    layout = {"u1": u1, "v1": v1, "u2": u2, "v2": v2}
    return DiscreteSystem(
        generator=m.tocsr(), weights=weights, n=n, variant="wave_damped",
        betas=(), exterior_bc=None, dof_layout=layout,
    )


def discretize_heat_dirichlet(n: int, betas) -> DiscreteSystem:
    """Heat subnetwork with all vertex traces clamped to zero: three
    decoupled Dirichlet heat intervals."""
    if n < _MIN_N:
        raise ValueError(f"n must be >= {_MIN_N}, got {n}")
    betas = tuple(float(b) for b in betas)
    h = 1.0 / n
    dim = 3 * (n - 1)
    m = _Builder(dim)
    layout = {}
    heat_edges = {}
    for k, beta in enumerate(betas):
        idx = np.arange(k * (n - 1), (k + 1) * (n - 1))
        layout[f"w{k + 1}"] = idx
        heat_edges[f"w{k + 1}"] = (beta, None, None)
        for i in range(n - 1):
            m.add(idx[i], idx[i], -2.0 * beta / h**2)
            if i > 0:
                m.add(idx[i], idx[i - 1], beta / h**2)
            if i < n - 2:
                m.add(idx[i], idx[i + 1], beta / h**2)
    weights = np.full(dim, h)
    return DiscreteSystem(
        generator=m.tocsr(), weights=weights, n=n, variant="heat_dirichlet",
        betas=betas, exterior_bc=None, dof_layout=layout, heat_edges=heat_edges,
    )


def _extrap_right(coeff_rows, row, idx, sign=1.0):
    # quadratic extrapolation of midpoint samples to the right endpoint
    coeff_rows[row, idx[-1]] += sign * 15.0 / 8.0
    coeff_rows[row, idx[-2]] += sign * -10.0 / 8.0
    coeff_rows[row, idx[-3]] += sign * 3.0 / 8.0


def _extrap_left(coeff_rows, row, idx, sign=1.0):
    coeff_rows[row, idx[0]] += sign * 15.0 / 8.0
    coeff_rows[row, idx[1]] += sign * -10.0 / 8.0
    coeff_rows[row, idx[2]] += sign * 3.0 / 8.0


def _flux_left(row_vec, nodes, beta, h, sign=1.0):
    # sign * beta * w'(0) with the 3-point one-sided stencil
    row_vec[nodes[0]] += sign * beta * (-3.0) / (2.0 * h)
    row_vec[nodes[1]] += sign * beta * 4.0 / (2.0 * h)
    row_vec[nodes[2]] += sign * beta * (-1.0) / (2.0 * h)


def _flux_right(row_vec, nodes, beta, h, sign=1.0):
    row_vec[nodes[-1]] += sign * beta * 3.0 / (2.0 * h)
    row_vec[nodes[-2]] += sign * beta * (-4.0) / (2.0 * h)
    row_vec[nodes[-3]] += sign * beta * 1.0 / (2.0 * h)


def _wave_node(n: int) -> DiscreteBoundaryNode:
    h = 1.0 / n
    u1 = np.arange(0, n)
    v1 = np.arange(n, 2 * n)          # nodes 1..n
    u2 = np.arange(2 * n, 3 * n)
    v2 = np.arange(3 * n, 4 * n + 1)  # nodes 0..n
    dim = 4 * n + 1
    m = _Builder(dim)

    def v1_node(i):
        return None if i == 0 else v1[i - 1]

    def v2_node(i):
        return v2[i]

    interior = []
    for u, vnode in ((u1, v1_node), (u2, v2_node)):
        for j in range(n):
            for node, sgn in ((vnode(j + 1), 1.0), (vnode(j), -1.0)):
                if node is not None:
                    m.add(u[j], node, sgn / h)
            interior.append(u[j])
        for i in range(1, n):
            m.add(vnode(i), u[i], 1.0 / h)
            m.add(vnode(i), u[i - 1], -1.0 / h)
            interior.append(vnode(i))
    # free boundary velocity nodes: one-sided stress derivative
    m.add(v1[n - 1], u1[n - 1], 1.0 / h)
    m.add(v1[n - 1], u1[n - 2], -1.0 / h)
    m.add(v2[0], u2[1], 1.0 / h)
    m.add(v2[0], u2[0], -1.0 / h)
    m.add(v2[n], u2[n - 1], 1.0 / h)
    m.add(v2[n], u2[n - 2], -1.0 / h)

    weights = np.full(dim, h)
    weights[[v1[n - 1], v2[0], v2[n]]] = 0.5 * h

    G = np.zeros((3, dim))
    K = np.zeros((3, dim))
    _extrap_right(G, 0, u1, sign=-1.0)   # -u1(1)
    _extrap_left(G, 1, u2, sign=1.0)     # u2(0)
    _extrap_right(G, 2, u2, sign=-1.0)   # -u2(1)
    K[0, v1[n - 1]] = -1.0               # -v1(1)
    K[1, v2[0]] = -1.0                   # -v2(0)
    K[2, v2[n]] = -1.0                   # -v2(1)

    lift = np.zeros((dim, 3))
    lift[u1, 0] = -1.0                   # constant stress -g1 on edge 1
    x_mid = (np.arange(n) + 0.5) * h
    lift[u2, 1] = 1.0 - x_mid            # affine stress g2(1-x) - g3*x
    lift[u2, 2] = -x_mid
    return DiscreteBoundaryNode(
        L=m.tocsr(), G=G, K=K, lift=lift, weights=weights,
        interior_rows=np.array(interior), n=n, kind="wave", betas=(),
    )


def _heat_network_node(n: int, betas) -> DiscreteBoundaryNode:
    b = tuple(float(x) for x in betas)
    h = 1.0 / n
    w = [np.arange(k * (n - 1), (k + 1) * (n - 1)) for k in range(3)]
    th = np.arange(3 * (n - 1), 3 * (n - 1) + 3)
    dim = 3 * n
    # edge k runs from trace tail[k] to trace head[k]
    tail = [th[0], th[1], th[2]]
    head = [th[1], th[2], th[0]]
    nodes = [np.concatenate(([tail[k]], w[k], [head[k]])) for k in range(3)]

    m = _Builder(dim)
    interior = []
    for k in range(3):
        for i in range(1, n):
            row = nodes[k][i]
            m.add(row, nodes[k][i - 1], b[k] / h**2)
            m.add(row, nodes[k][i], -2.0 * b[k] / h**2)
            m.add(row, nodes[k][i + 1], b[k] / h**2)
            interior.append(row)
    # trace rows: finite-volume balance over the two incident half-cells,
    # closed with the same one-sided fluxes that define K
    trace_rows = np.zeros((dim, dim))
    for k in range(3):
        # tail end of edge k: + (interior flux) - (boundary flux)
        r = tail[k]
        trace_rows[r, nodes[k][1]] += b[k] / h**2
        trace_rows[r, nodes[k][0]] += -b[k] / h**2
        _flux_left(trace_rows[r], nodes[k], b[k], h, sign=-1.0 / h)
        # head end of edge k
        r = head[k]
        trace_rows[r, nodes[k][-2]] += b[k] / h**2
        trace_rows[r, nodes[k][-1]] += -b[k] / h**2
        _flux_right(trace_rows[r], nodes[k], b[k], h, sign=1.0 / h)
    for r in th:
        for c in np.nonzero(trace_rows[r])[0]:
            m.add(r, c, trace_rows[r, c])

    weights = np.full(dim, h)

    G = np.zeros((3, dim))
    G[0, th[0]] = 1.0
    G[1, th[1]] = 1.0
    G[2, th[2]] = 1.0
    K = np.zeros((3, dim))
    # K = (b3 w3'(1) - b1 w1'(0), b1 w1'(1) - b2 w2'(0), b2 w2'(1) - b3 w3'(0))
    _flux_right(K[0], nodes[2], b[2], h, sign=1.0)
    _flux_left(K[0], nodes[0], b[0], h, sign=-1.0)
    _flux_right(K[1], nodes[0], b[0], h, sign=1.0)
    _flux_left(K[1], nodes[1], b[1], h, sign=-1.0)
    _flux_right(K[2], nodes[1], b[1], h, sign=1.0)
    _flux_left(K[2], nodes[2], b[2], h, sign=-1.0)

    lift = np.zeros((dim, 3))
    x_int = np.arange(1, n) * h
    for k in range(3):
        tk = list(th).index(tail[k])
        hk = list(th).index(head[k])
        lift[w[k], tk] += 1.0 - x_int
        lift[w[k], hk] += x_int
    lift[th[0], 0] = lift[th[1], 1] = lift[th[2], 2] = 1.0
    return DiscreteBoundaryNode(
        L=m.tocsr(), G=G, K=K, lift=lift, weights=weights,
        interior_rows=np.array(interior), n=n, kind="heat", betas=b,
    )


def _heat_edge_node(n: int, beta: float) -> DiscreteBoundaryNode:
    beta = float(beta)
    h = 1.0 / n
    dim = n + 1
    nodes = np.arange(dim)
    m = _Builder(dim)
    for i in range(1, n):
        m.add(i, i - 1, beta / h**2)
        m.add(i, i, -2.0 * beta / h**2)
        m.add(i, i + 1, beta / h**2)
    # end rows: half-cell balance (mass h/2) closed with the one-sided
    # boundary fluxes that define K, so impedance passivity holds exactly
    end = np.zeros((2, dim))
    end[0, 1] += 2.0 * beta / h**2
    end[0, 0] += -2.0 * beta / h**2
    _flux_left(end[0], nodes, beta, h, sign=-2.0 / h)
    end[1, n - 1] += 2.0 * beta / h**2
    end[1, n] += -2.0 * beta / h**2
    _flux_right(end[1], nodes, beta, h, sign=2.0 / h)
    for r, row in ((0, end[0]), (n, end[1])):
        for c in np.nonzero(row)[0]:
            m.add(r, c, row[c])

    weights = np.full(dim, h)
    weights[[0, n]] = 0.5 * h
    G = np.zeros((2, dim))
    G[0, 0] = 1.0
    G[1, n] = 1.0
    K = np.zeros((2, dim))
    _flux_left(K[0], nodes, beta, h, sign=-1.0)
    _flux_right(K[1], nodes, beta, h, sign=1.0)
    lift = np.zeros((dim, 2))
    x = nodes * h
    lift[:, 0] = 1.0 - x
    lift[:, 1] = x
    return DiscreteBoundaryNode(
        L=m.tocsr(), G=G, K=K, lift=lift, weights=weights,
        interior_rows=np.arange(1, n), n=n, kind="heat_edge", betas=(beta,),
    )


def boundary_node(part: str, n: int, betas=None, beta: float = 1.0) -> DiscreteBoundaryNode:
    """Discrete boundary node: 'wave', 'heat' (three-edge network) or
    'heat_edge' (single edge with two traces)."""
    if n < _MIN_N:
        raise ValueError(f"n must be >= {_MIN_N}, got {n}")
    if part == "wave":
        return _wave_node(n)
    if part == "heat":
        if betas is None:
            raise ValueError("heat network node needs three betas")
        return _heat_network_node(n, betas)
    if part == "heat_edge":
        return _heat_edge_node(n, beta)
    raise ValueError(f"unknown boundary-node part {part!r}")


_COND_LIMIT = 1e13


def discrete_transfer(node: DiscreteBoundaryNode, lam: complex, u) -> np.ndarray:
    """Output K x of the constrained solve (lam - L) x = 0 (interior rows),
    G x = u."""
    return discrete_transfer_matrix(node, lam) @ np.asarray(u, dtype=complex)


def discrete_transfer_matrix(node: DiscreteBoundaryNode, lam: complex) -> np.ndarray:
    """Transfer matrix at ``lam``: columns are responses to unit inputs."""
    lam = complex(lam)
    dim, m = node.dim, node.boundary_dim
    L = node.L.toarray()
    system = np.zeros((dim, dim), dtype=complex)
    rhs = np.zeros((dim, m), dtype=complex)
    ir = node.interior_rows
    system[ir] = -L[ir]
    system[ir, ir] += lam
    other = np.setdiff1d(np.arange(dim), ir)
    system[other] = node.G
    rhs[other] = np.eye(m)
    cond = np.linalg.cond(system)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise IllConditionedSolveError(
            f"transfer solve at lambda={lam} is ill-conditioned (cond~{cond:.2e})"
        )
    x = np.linalg.solve(system, rhs)
    return node.K @ x


def dissipation_rate(sys: DiscreteSystem, z) -> float:
    """Re <A_h z, z>_h for a real or complex state z."""
    z = np.asarray(z)
    return float(np.real(np.sum(sys.weights * (sys.generator @ z) * np.conj(z))))


def heat_dissipation_identity(sys: DiscreteSystem, z) -> float:
    """- sum_k beta_k * h * sum (dw_k / h)^2 over all heat cells."""
    h = 1.0 / sys.n
    total = 0.0
    for name, (beta, _, _) in sys.heat_edges.items():
        wk = sys.heat_edge_nodes(np.asarray(z), name)
        dw = np.diff(wk)
        total -= beta * h * float(np.sum(np.abs(dw / h) ** 2))
    return total


def export_matrix_market(sys: DiscreteSystem, prefix: str) -> tuple[str, str]:
    """Write the generator as Matrix Market plus a plain-text weight vector."""
    import scipy.io

    mtx = f"{prefix}.mtx"
    wts = f"{prefix}.weights.txt"
    scipy.io.mmwrite(mtx, sys.generator)
    np.savetxt(wts, sys.weights)
    return mtx, wts
