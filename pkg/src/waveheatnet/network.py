"""Symbolic description of the wave-heat metric graph.

The network under study is fixed: two unit-speed wave edges and three heat
edges joined at three coupled vertices, with one exterior vertex at the free
end of the first wave edge.  Edge orientation is the direction of increasing
spatial coordinate.  Vertex coupling (continuity of traces plus a signed flux
balance) is implied by the topology; the only variant is the exterior
boundary condition, which clamps either the velocity or the stress trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "EdgeKind",
    "ExteriorBC",
    "EdgeSpec",
    "NetworkSpec",
    "build_paper_network",
    "network_to_json",
    "network_from_json",
]

EXTERIOR_VERTEX = "ext"


class EdgeKind(str, Enum):
    WAVE = "wave"
    HEAT = "heat"


class ExteriorBC(str, Enum):
    #: y_t(0) = 0 at the exterior end (the baseline model; generator invertible)
    DIRICHLET_VELOCITY = "dirichlet"
    #: y_x(0) = 0 at the exterior end (0 becomes an eigenvalue of the generator)
    NEUMANN_STRESS = "neumann"


@dataclass(frozen=True)
class EdgeSpec:
    kind: EdgeKind
    tail: str
    head: str
    beta: float | None = None

    def __post_init__(self):
        if self.kind is EdgeKind.HEAT:
            if self.beta is None or not self.beta > 0:
                raise ValueError(f"heat edge needs beta > 0, got {self.beta}")
        elif self.beta is not None:
            raise ValueError("wave edges have unit speed and carry no beta")


@dataclass(frozen=True)
class NetworkSpec:
    edges: tuple[EdgeSpec, ...]
    exterior_bc: ExteriorBC

    @property
    def betas(self) -> tuple[float, ...]:
        return tuple(e.beta for e in self.edges if e.kind is EdgeKind.HEAT)

    @property
    def coupled_vertices(self) -> tuple[str, ...]:
        seen = []
        for e in self.edges:
            for v in (e.tail, e.head):
                if v != EXTERIOR_VERTEX and v not in seen:
                    seen.append(v)
        return tuple(seen)


def build_paper_network(
    beta1: float,
    beta2: float,
    beta3: float,
    bc: ExteriorBC | str = ExteriorBC.DIRICHLET_VELOCITY,
) -> NetworkSpec:
    """The fixed five-edge topology: wave ext->1, heat 1->2, wave 2->3,
    heat 2->3, heat 3->1."""
    bc = ExteriorBC(bc)
    edges = (
        EdgeSpec(EdgeKind.WAVE, EXTERIOR_VERTEX, "v1"),
        EdgeSpec(EdgeKind.WAVE, "v2", "v3"),
        EdgeSpec(EdgeKind.HEAT, "v1", "v2", float(beta1)),
        EdgeSpec(EdgeKind.HEAT, "v2", "v3", float(beta2)),
        EdgeSpec(EdgeKind.HEAT, "v3", "v1", float(beta3)),
    )
    return NetworkSpec(edges=edges, exterior_bc=bc)


def network_to_json(spec: NetworkSpec) -> str:
    doc = {
        "exterior_bc": spec.exterior_bc.value,
        "edges": [
            {
                "kind": e.kind.value,
                "tail": e.tail,
                "head": e.head,
                **({"beta": e.beta} if e.beta is not None else {}),
            }
            for e in spec.edges
        ],
    }
    return json.dumps(doc, indent=2)


def network_from_json(text: str) -> NetworkSpec:
    doc = json.loads(text)
    edges = tuple(
        EdgeSpec(
            kind=EdgeKind(e["kind"]),
            tail=e["tail"],
            head=e["head"],
            beta=e.get("beta"),
        )
        for e in doc["edges"]
    )
    return NetworkSpec(edges=edges, exterior_bc=ExteriorBC(doc["exterior_bc"]))
