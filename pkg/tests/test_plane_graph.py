import json

import pytest

from conftest import cycle, golden, path, single_edge
from orthobend.plane_graph import (
    GraphError,
    biconnect_augment,
    build_graph,
    parse_plane_graph,
)


def test_four_cycle_has_two_faces_and_degree_two():
    g = cycle(4)
    assert g.face_count() == 2
    assert all(g.degree(v) == 2 for v in range(g.n))


def test_single_edge_has_one_face():
    assert single_edge().face_count() == 1


def test_golden_is_accepted_with_euler_face_count():
    g = golden()
    assert (g.n, g.m) == (11, 16)
    assert g.n - g.m + g.face_count() == 2
    assert g.face_count() - 1 == 6


def test_faces_partition_darts():
    g = golden()
    darts = sorted(d for f in g.faces for d in f)
    assert darts == list(range(2 * g.m))


def test_canonical_round_trip():
    g = golden()
    text = g.to_json()
    assert parse_plane_graph(text).to_json() == text
    assert json.loads(text) == json.loads(json.dumps(g.to_dict(), sort_keys=True))


def test_string_ids_are_kept():
    g = build_graph(["a", "b", "c", "d"], [("x", "a", "b"), ("y", "b", "c"), ("z", "c", "d"), ("w", "d", "a")],
                    {"a": ["w", "x"], "b": ["x", "y"], "c": ["y", "z"], "d": ["z", "w"]}, ("x", "left"))
    assert g.edge_names == ["x", "y", "z", "w"]
    assert parse_plane_graph(g.to_json()).to_json() == g.to_json()


@pytest.mark.parametrize("text", [b"{not json", b"[1, 2]", b'{"vertices": []}'])
def test_malformed_input_is_rejected(text):
    with pytest.raises(GraphError):
        parse_plane_graph(text)


def test_degree_above_four_is_rejected():
    edges = [(i, 0, i + 1) for i in range(5)]
    rot = {0: list(range(5))}
    rot.update({i + 1: [i] for i in range(5)})
    with pytest.raises(GraphError, match="degree"):
        build_graph(range(6), edges, rot, (0, "right"))


def test_inconsistent_rotation_is_rejected():
    edges = [(0, 0, 1), (1, 1, 2), (2, 2, 0), (3, 0, 3), (4, 3, 1)]
    # Vertex 0 lists the edges in an order no planar embedding allows.
    rot = {0: [0, 2, 3], 1: [0, 1, 4], 2: [1, 2], 3: [3, 4]}
    with pytest.raises(GraphError):
        build_graph(range(4), edges, rot, (0, "right"))


def test_missing_rotation_entry_is_rejected():
    edges = [(0, 0, 1), (1, 1, 2), (2, 2, 0)]
    with pytest.raises(GraphError):
        build_graph(range(3), edges, {0: [2, 0], 1: [0, 1], 2: [1]}, (0, "right"))


def test_unknown_external_edge_is_rejected():
    data = cycle(4).to_dict()
    data["external_face_edge"] = {"edge": 99, "side": "left"}
    with pytest.raises(GraphError):
        parse_plane_graph(json.dumps(data))


def test_disconnected_input_is_rejected():
    edges = [(0, 0, 1), (1, 2, 3)]
    with pytest.raises(GraphError):
        build_graph(range(4), edges, {0: [0], 1: [0], 2: [1], 3: [1]}, (0, "right"))


def test_reference_edge_must_border_external_face():
    data = golden().to_dict()
    data["reference_edge"] = 5
    with pytest.raises(GraphError):
        parse_plane_graph(json.dumps(data))


def test_augment_leaves_biconnected_graph_alone():
    g = cycle(4)
    h, flag = biconnect_augment(g)
    assert h is g and flag is False


def test_augment_closes_a_path_between_its_ends():
    g = path(3)
    h, flag = biconnect_augment(g)
    assert flag
    (e,) = [e for e in range(h.m) if h.dummy[e]]
    assert {h.eu[e], h.ev[e]} == {0, 3}
    assert h.is_biconnected()


def two_triangles(side: str):
    edges = [(0, 0, 1), (1, 1, 2), (2, 2, 0), (3, 0, 3), (4, 3, 4), (5, 4, 0)]
    rot = {0: [0, 2, 3, 5], 1: [1, 0], 2: [2, 1], 3: [4, 3], 4: [5, 4]}
    return build_graph(range(5), edges, rot, (0, side))


def test_augment_rejects_triangles_sharing_a_vertex():
    # With one triangle as the external face no external chord helps.
    with pytest.raises(GraphError):
        biconnect_augment(two_triangles("right"))


def test_augment_other_embedding_of_two_triangles_succeeds():
    h, flag = biconnect_augment(two_triangles("left"))
    assert flag and h.is_biconnected()


def test_augment_changes_only_dummy_endpoint_degrees():
    g = path(4)
    h, _ = biconnect_augment(g)
    (e,) = [e for e in range(h.m) if h.dummy[e]]
    for v in range(g.n):
        extra = (h.eu[e] == v) + (h.ev[e] == v)
        assert h.degree(v) == g.degree(v) + extra <= 4
