"""FastAPI service exposing the wave-heat analyses.

Endpoints wrap the core package one-to-one: transfer-function scans,
resolvent scans with the theorem-bound comparison, energy-decay simulations
and the full verification suite.  All request/response payloads are plain
JSON so the CLI (or any other client) can persist them as CSV + sidecar.
"""

from __future__ import annotations

import math
from typing import Literal, Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field, model_validator

from waveheatnet import assembly as asm
from waveheatnet import evolution as evo
from waveheatnet import spectral as spc
from waveheatnet import transfer as tf
from waveheatnet import verify as vf
from waveheatnet.network import build_paper_network
from waveheatnet.spectral import PowerLawFit

__all__ = ["app", "RunConfig"]


class RunConfig(BaseModel):
    """Reproducible run parameters, echoed into every output."""

    betas: tuple[float, float, float] = (1.0, 1.0, 1.0)
    bc: Literal["dirichlet", "neumann"] = "dirichlet"
    n: int = Field(default=128, ge=8)
    dt: float = Field(default=1e-3, gt=0)
    T: float = Field(default=50.0, gt=0)
    s_min: float = Field(default=2.0)
    s_max: float = Field(default=200.0)
    num_points: int = Field(default=40, ge=1)
    t_window: tuple[float, float] = (5.0, 50.0)
    seed: int = 0

    @model_validator(mode="after")
    def _check(self):
        if any(b <= 0 for b in self.betas):
            raise ValueError("all betas must be positive")
        if not (0 < self.s_min <= self.s_max):
            raise ValueError("need 0 < s_min <= s_max")
        if self.dt > self.T:
            raise ValueError("need dt <= T")
        return self


class FitModel(BaseModel):
    exponent: float
    log_prefactor: float
    residual: float
    window: tuple[float, float]

    @classmethod
    def from_fit(cls, fit: Optional[PowerLawFit]) -> Optional["FitModel"]:
        if fit is None:
            return None
        return cls(exponent=fit.exponent, log_prefactor=fit.log_prefactor,
                   residual=fit.residual, window=fit.window)


class TransferRow(BaseModel):
    s: float
    eta: float
    mu: float
    bound: float
    p2_real: list[list[float]]
    p2_imag: list[list[float]]
    re_p2: list[list[float]]


class TransferScanResponse(BaseModel):
    config: RunConfig
    rows: list[TransferRow]
    eta_fit: Optional[FitModel]
    norm_fit: Optional[FitModel]


class ResolventPoint(BaseModel):
    s: float
    norm: float
    flag: str


class ResolventScanResponse(BaseModel):
    config: RunConfig
    variant: str
    rows: list[ResolventPoint]
    bound: Optional[list[float]]
    fit_measured: Optional[FitModel]
    fit_bound: Optional[FitModel]
    ratio_max_over_min: Optional[float]
    kernel: dict


class TraceModel(BaseModel):
    times: list[float]
    energies: list[float]
    metadata: dict


class SimulationRun(BaseModel):
    trace: TraceModel
    decay_fit: Optional[FitModel]
    final_energy_ratio: float


class SimulateResponse(BaseModel):
    config: RunConfig
    variant: str
    runs: dict[str, SimulationRun]


class VerifyRequest(BaseModel):
    quick: bool = False


class CriterionModel(BaseModel):
    name: str
    description: str
    passed: bool
    measured: dict
    detail: str = ""


class VerifyResponse(BaseModel):
    all_passed: bool
    results: list[CriterionModel]


Variant = Literal["full", "wave-damped", "heat-dirichlet"]


def _build_system(config: RunConfig, variant: Variant) -> asm.DiscreteSystem:
    if variant == "full":
        spec = build_paper_network(*config.betas, bc=config.bc)
        return asm.discretize(spec, config.n)
    if variant == "wave-damped":
        return asm.discretize_wave_damped(config.n)
    if variant == "heat-dirichlet":
        return asm.discretize_heat_dirichlet(config.n, config.betas)
    raise HTTPException(status_code=422, detail=f"unknown variant {variant!r}")


def _log_grid(config: RunConfig) -> np.ndarray:
    return np.logspace(math.log10(config.s_min), math.log10(config.s_max),
                       config.num_points)


app = FastAPI(
    title="waveheatnet",
    description="Numerical analyses of a coupled wave-heat network",
    version="0.1.0",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/transfer/scan", response_model=TransferScanResponse)
def transfer_scan(config: RunConfig) -> TransferScanResponse:
    grid = _log_grid(config)
    rows = []
    etas, norms = [], []
    for s in grid:
        p2 = tf.network_transfer_P2(1j * s, config.betas).entries
        rep2 = tf.re_P2_on_axis(s, config.betas).entries
        eta = tf.eta_lower_bound(s, config.betas)
        mu_s = tf.mu(s, config.betas)
        etas.append(eta)
        norms.append(math.sqrt(mu_s - 1.0))
        rows.append(TransferRow(
            s=float(s), eta=eta, mu=mu_s, bound=mu_s / eta,
            p2_real=p2.real.tolist(), p2_imag=p2.imag.tolist(),
            re_p2=rep2.tolist(),
        ))
    eta_fit = norm_fit = None
    if len(grid) >= 5:
        eta_fit = FitModel.from_fit(spc.fit_power_law(grid, etas))
        norm_fit = FitModel.from_fit(spc.fit_power_law(grid, norms))
    return TransferScanResponse(config=config, rows=rows,
                                eta_fit=eta_fit, norm_fit=norm_fit)


@app.post("/resolvent/scan", response_model=ResolventScanResponse)
def resolvent_scan(config: RunConfig,
                   variant: Variant = "full") -> ResolventScanResponse:
    sysn = _build_system(config, variant)
    scan = spc.scan_resolvent(sysn, _log_grid(config))
    rows = [ResolventPoint(s=float(s), norm=float(nm), flag=fl)
            for s, nm, fl in zip(scan.s_values, scan.norms, scan.flags)]
    bound = fit_m = fit_b = ratio_spread = None
    if variant == "full":
        comp = spc.compare_to_theorem_bound(scan, config.betas)
        bound = comp.bound.tolist()
        fit_m = FitModel.from_fit(comp.fit_measured)
        fit_b = FitModel.from_fit(comp.fit_bound)
        ratio_spread = float(comp.ratio.max() / comp.ratio.min())
    kernel = spc.kernel_check(sysn)
    return ResolventScanResponse(
        config=config, variant=variant, rows=rows, bound=bound,
        fit_measured=fit_m, fit_bound=fit_b,
        ratio_max_over_min=ratio_spread, kernel=kernel,
    )


@app.post("/simulate", response_model=SimulateResponse)
def simulate(config: RunConfig, variant: Variant = "full",
             data: Literal["classical", "mild", "both"] = "classical",
             ) -> SimulateResponse:
    sysn = _build_system(config, variant)
    kinds = ("classical", "mild") if data == "both" else (data,)
    runs = {}
    for kind in kinds:
        maker = (evo.classical_initial_data if kind == "classical"
                 else evo.mild_initial_data)
        z0 = maker(sysn, seed=config.seed)
        trace = evo.simulate(sysn, z0, T=config.T, dt=config.dt)
        try:
            fit = evo.decay_exponent(trace, config.t_window)
        except ValueError:
            fit = None  # window truncated (e.g. nilpotent wave network)
        runs[kind] = SimulationRun(
            trace=TraceModel(times=trace.times.tolist(),
                             energies=trace.energies.tolist(),
                             metadata=trace.metadata),
            decay_fit=FitModel.from_fit(fit),
            final_energy_ratio=float(trace.energies[-1] / trace.energies[0]),
        )
    return SimulateResponse(config=config, variant=variant, runs=runs)


@app.post("/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest) -> VerifyResponse:
    scale = vf.VerifyScale.quick() if request.quick else vf.VerifyScale()
    results = [CriterionModel(**r.to_dict()) for r in vf.run_all(scale)]
    return VerifyResponse(all_passed=all(r.passed for r in results),
                          results=results)
