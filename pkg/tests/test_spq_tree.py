from fractions import Fraction

import pytest

from conftest import Pn, Qn, Sn, cycle, golden, single_edge, sp_graph
from orthobend.flow_oracle import random_instance
from orthobend.pipeline import prepare
from orthobend.plane_graph import GraphError
from orthobend.spq_tree import P, Q, ROOT, S, build_spq_tree, classify_p_node

H = Fraction(1, 2)

# Parameter table for two-child P-nodes: (k_ul, k_ur, k_vl, k_vr).
COEFFICIENTS = {
    "Pio2_11": (1, 1, 1, 1),
    "Pio2_12": (1, 1, H, H),
    "Pio2_21": (H, H, 1, 1),
    "Pio2_22": (H, H, H, H),
    "Pio3l_11": (1, 1, H, 1),
    "Pio3r_11": (1, 1, 1, H),
    "Pio3l_12": (H, H, H, 1),
    "Pio3r_12": (H, H, 1, H),
    "Pin3ll": (H, 1, H, 1),
    "Pin3lr": (1, H, H, 1),
    "Pin3rr": (1, H, 1, H),
}


def coeffs(pt):
    c = pt.coefficients()
    return (c["k_ul"], c["k_ur"], c["k_vl"], c["k_vr"])


def matches_table(pt) -> bool:
    """The table fixes which pole is which; a node may see it from the other pole."""
    got = coeffs(pt)
    for row in COEFFICIENTS.values():
        kul, kur, kvl, kvr = row
        if got in (row, (kvl, kvr, kul, kur)):
            return True
    return False


def test_single_edge_with_dummy_gives_root_over_two_chains():
    p = prepare(single_edge())
    t = p.tree
    assert p.dummy
    assert t.kind[t.root] == ROOT
    assert [t.kind[c] for c in t.children[t.root]] == [Q, Q]
    assert all(len(t.chain_edges[c]) == 1 for c in t.children[t.root])


def test_cycle_tree_is_root_over_reference_and_three_chain():
    t = build_spq_tree(cycle(4), 0)
    eta, ref = t.children[t.root]
    assert t.chain_edges[ref] == [0]
    assert t.kind[eta] == Q and len(t.chain_edges[eta]) == 3


def test_golden_tree_shape():
    g = golden()
    t = build_spq_tree(g, g.edge_index(0))
    nm = g.vertex_names
    assert {nm[t.s], nm[t.t]} == {1, 11}
    assert len(t.children[t.root]) == 2
    assert len(t.p_nodes()) == 5
    poles = {(nm[t.u[x]], nm[t.v[x]]): t.ptype[x].name for x in t.p_nodes()}
    assert poles[(1, 11)] == "Pio3l_11"
    assert poles[(2, 11)] == "Pio2_12"


def test_golden_nu3_coefficients():
    g = golden()
    t = build_spq_tree(g, g.edge_index(0))
    nm = g.vertex_names
    (x,) = [x for x in t.p_nodes() if (nm[t.u[x]], nm[t.v[x]]) == (2, 11)]
    assert coeffs(t.ptype[x]) == (1, 1, H, H)


def test_pio2_11_has_unit_coefficients():
    t = build_spq_tree(sp_graph(Pn(Qn(2), Qn(3))))
    (x,) = t.p_nodes()
    assert t.ptype[x].name == "Pio2_11"
    assert coeffs(t.ptype[x]) == (1, 1, 1, 1)


def test_pin3_with_mixed_sides():
    # Left child has indegree two at u, right child at v.
    term = Sn(Qn(1), Pn(Sn(Pn(Qn(1), Qn(2)), Qn(1)), Sn(Qn(1), Pn(Qn(1), Qn(2)))), Qn(1))
    t = build_spq_tree(sp_graph(term))
    (x,) = [x for x in t.p_nodes() if t.ptype[x].family == "Pin3"]
    pt = t.ptype[x]
    assert pt.name == "Pin3lr"
    # Seen from the other pole this is the table row with k_u^r = k_v^l = 1/2.
    kul, kur, kvl, kvr = coeffs(pt)
    assert (kvl, kvr, kul, kur) == COEFFICIENTS["Pin3lr"]


def test_three_child_p_node():
    t = build_spq_tree(sp_graph(Sn(Qn(1), Pn(Qn(3), Qn(2), Qn(1)), Qn(1))))
    (x,) = t.p_nodes()
    assert t.ptype[x].family == "P3"
    assert len(t.children[x]) == 3


def test_p_children_follow_embedding_left_to_right():
    t = build_spq_tree(sp_graph(Sn(Qn(1), Pn(Qn(3), Qn(1), Qn(2)), Qn(1))))
    (x,) = t.p_nodes()
    assert [len(t.chain_edges[c]) for c in t.children[x]] == [3, 1, 2]


def test_exposed_edge_of_chain_is_its_first_edge():
    t = build_spq_tree(cycle(5), 0)
    eta = t.eta
    assert len(t.chain_edges[eta]) == 4
    assert t.exposed_edge(eta) == t.chain_edges[eta][0]


def test_exposed_edge_of_series_comes_from_first_chain_child():
    t = build_spq_tree(sp_graph(Sn(Qn(2), Pn(Qn(1), Qn(2)), Qn(1))))
    s = t.eta
    assert t.kind[s] == S
    first_q = [c for c in t.children[s] if t.kind[c] == Q][0]
    assert t.exposed_edge(s) == t.chain_edges[first_q][0]


def test_series_of_pio2_22_has_no_exposed_edge():
    term = Sn(Qn(1), Pn(Sn(Pn(Qn(3), Qn(1)), Pn(Qn(3), Qn(1)), Pn(Qn(3), Qn(1))), Qn(2)), Qn(1))
    t = build_spq_tree(sp_graph(term))
    series = [x for x in range(len(t)) if t.kind[x] == S and all(t.kind[c] == P for c in t.children[x])]
    assert series
    x = series[0]
    assert [t.ptype[c].name for c in t.children[x]][1] == "Pio2_22"
    assert t.exposed_edge(x) is None


def test_opposite_external_side_is_normalized():
    g = cycle(4, "left")
    t = build_spq_tree(g, 0)
    assert t.kind[t.root] == ROOT


def test_non_series_parallel_graph_is_rejected():
    # K4 drawn planar: every reference edge leaves a non series-parallel rest.
    edges = [(0, 0, 1), (1, 1, 2), (2, 2, 0), (3, 0, 3), (4, 1, 3), (5, 2, 3)]
    rot = {0: [0, 3, 2], 1: [1, 4, 0], 2: [2, 5, 1], 3: [3, 4, 5]}
    from orthobend.plane_graph import build_graph
    g = build_graph(range(4), edges, rot, (0, "left"))
    with pytest.raises(GraphError):
        build_spq_tree(g, 0)


def check_tree(t):
    g = t.g
    root = t.root
    assert t.kind[root] == ROOT and len(t.children[root]) == 2
    assert len(t) <= 2 * g.m
    seen = []
    for x in range(len(t)):
        k = t.kind[x]
        for c in t.children[x]:
            assert t.parent[c] == x
            if k == S:
                assert t.kind[c] != S
            if k == P:
                assert t.kind[c] != P
        if k == P:
            assert len(t.children[x]) in (2, 3)
            assert classify_p_node(t, x) == t.ptype[x]
            if len(t.children[x]) == 2:
                assert matches_table(t.ptype[x])
                assert any(t.exposed_edge(c) is not None for c in t.children[x])
            for w in (t.u[x], t.v[x]):
                assert t.indeg(x, w) + t.outdeg(x, w) == g.degree(w)
        if k == Q:
            seen.extend(t.chain_edges[x])
        if k != Q:
            union = sorted(e for c in t.children[x] for e in t.edges_of(c))
            assert union == sorted(t.edges_of(x))
    assert sorted(seen) == list(range(g.m))


@pytest.mark.parametrize("seed", range(80))
def test_tree_invariants_on_random_graphs(seed):
    g = random_instance(seed, 30)
    if g.m < 2:
        return
    check_tree(prepare(g).tree)


def test_golden_tree_invariants():
    g = golden()
    check_tree(build_spq_tree(g, g.edge_index(0)))


def test_debug_dumps():
    t = build_spq_tree(cycle(4), 0)
    assert "Pr(" in t.dump_text().splitlines()[0]
    d = t.to_dict()
    assert d["kind"] == "Pr" and len(d["children"]) == 2
