"""Numerical laboratory for a coupled wave-heat network.

Closed-form transfer functions of the heat subnetwork, energy-dissipative
finite-difference generators for the coupled network and its two subnetworks,
resolvent-norm scans along the imaginary axis, and contractive time stepping
with power-law decay measurement.
"""

from waveheatnet.network import (
    EdgeKind,
    EdgeSpec,
    ExteriorBC,
    NetworkSpec,
    build_paper_network,
)
from waveheatnet.transfer import (
    HeatEdgeParams,
    TransferMatrix,
    RealPartMatrix,
    INTERCONNECTION,
    heat_edge_transfer,
    network_transfer_P2,
    re_P2_on_axis,
    eta_lower_bound,
    mu,
    resolvent_bound_estimate,
)

__all__ = [
    "EdgeKind",
    "EdgeSpec",
    "ExteriorBC",
    "NetworkSpec",
    "build_paper_network",
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

__version__ = "0.1.0"
