import pytest

from waveheatnet import network as nw


def test_fixed_topology():
    spec = nw.build_paper_network(1.0, 2.0, 3.0)
    kinds = [e.kind for e in spec.edges]
    assert kinds.count(nw.EdgeKind.WAVE) == 2
    assert kinds.count(nw.EdgeKind.HEAT) == 3
    assert spec.betas == (1.0, 2.0, 3.0)
    assert spec.coupled_vertices == ("v1", "v2", "v3")
    assert spec.exterior_bc is nw.ExteriorBC.DIRICHLET_VELOCITY


def test_bc_from_string():
    spec = nw.build_paper_network(1.0, 1.0, 1.0, bc="neumann")
    assert spec.exterior_bc is nw.ExteriorBC.NEUMANN_STRESS
    with pytest.raises(ValueError):
        nw.build_paper_network(1.0, 1.0, 1.0, bc="periodic")


def test_edge_validation():
    with pytest.raises(ValueError):
        nw.EdgeSpec(nw.EdgeKind.HEAT, "a", "b")  # missing beta
    with pytest.raises(ValueError):
        nw.EdgeSpec(nw.EdgeKind.HEAT, "a", "b", beta=-1.0)
    with pytest.raises(ValueError):
        nw.EdgeSpec(nw.EdgeKind.WAVE, "a", "b", beta=1.0)  # stray beta


def test_json_round_trip():
    spec = nw.build_paper_network(0.5, 2.5, 3.5, bc="neumann")
    text = nw.network_to_json(spec)
    back = nw.network_from_json(text)
    assert back == spec


def test_exterior_vertex_excluded_from_coupled():
    spec = nw.build_paper_network(1.0, 1.0, 1.0)
    assert nw.EXTERIOR_VERTEX not in spec.coupled_vertices
