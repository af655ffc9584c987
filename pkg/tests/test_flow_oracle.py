import pytest

from conftest import cycle, golden, theta
from oracles import ip_min_bends
from orthobend.flow_oracle import (
    GeneratorSpec,
    build_network,
    check_representation,
    flow_min_bends,
    flow_representation,
    generate_sp,
    random_instance,
)
from orthobend.pipeline import prepare
from orthobend.spq_tree import P, Q


# ------------------------------------------------------------ sanity values
def test_four_cycle_needs_no_bends():
    assert flow_min_bends(cycle(4)) == 0


def test_triangle_needs_one_bend():
    assert flow_min_bends(cycle(3)) == 1


@pytest.mark.parametrize("k", [4, 5, 8, 13])
def test_long_cycles_need_no_bends(k):
    assert flow_min_bends(cycle(k)) == 0


def test_golden_needs_five_bends():
    assert flow_min_bends(golden()) == 5


def test_network_balances():
    for seed in range(30):
        net = build_network(random_instance(seed, 30))
        assert sum(net.supply) == 0


@pytest.mark.parametrize("seed", range(40))
def test_flow_agrees_with_integer_program(seed):
    g = random_instance(seed, 12)
    assert flow_min_bends(g) == ip_min_bends(g)


@pytest.mark.parametrize("seed", range(40))
def test_flow_representation_is_valid_and_optimal(seed):
    g = random_instance(seed, 30)
    h = flow_representation(g)
    ok, bad = h.check()
    assert ok, bad
    assert h.total_bends() == flow_min_bends(g)


# ------------------------------------------------------------ generator
def test_generator_is_deterministic():
    a = generate_sp(GeneratorSpec(n=10, seed=7)).to_json()
    b = generate_sp(GeneratorSpec(n=10, seed=7)).to_json()
    assert a == b


def test_generator_rejects_tiny_spec():
    with pytest.raises(ValueError):
        generate_sp(GeneratorSpec(n=0))


@pytest.mark.parametrize("seed", range(20))
def test_generated_graphs_are_sp_4_graphs(seed):
    g = generate_sp(GeneratorSpec(n=30, seed=seed))
    assert max(g.degree(v) for v in range(g.n)) <= 4
    assert g.is_biconnected()
    prepare(g)  # raises unless the graph decomposes


def test_series_bias_gives_long_chains():
    spec = GeneratorSpec(n=30, seed=3, p_parallel=0.2, length={3: 1.0, 4: 1.0})
    t = prepare(generate_sp(spec)).tree
    assert max(len(t.chain_edges[x]) for x in range(len(t)) if t.kind[x] == Q) >= 3


def test_parallel_bias_gives_three_child_p_nodes():
    spec = GeneratorSpec(n=30, seed=3, p_parallel=0.8, width={2: 1.0})
    t = prepare(generate_sp(spec)).tree
    assert any(t.kind[x] == P and len(t.children[x]) == 3 for x in range(len(t)))


# ------------------------------------------------------------ checker
def test_checker_accepts_rectangle():
    assert check_representation(flow_representation(cycle(4))) == (True, [])


def test_checker_flags_angle_edit():
    h = flow_representation(cycle(4))
    i = h.angles[0].index(1)
    h.angles[0][i] = 2
    ok, bad = check_representation(h)
    assert not ok
    assert any(b.startswith("H1") and "vertex 0" in b for b in bad)


def test_checker_flags_face_sum():
    h = flow_representation(theta([2, 2]))
    h.bends[0] = "RL"  # zero net turn, still fine
    assert h.check()[0]
    h.bends[0] = "R"
    ok, bad = h.check()
    assert not ok and any(b.startswith("H2") for b in bad)
