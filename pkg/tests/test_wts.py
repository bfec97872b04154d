import itertools
import random

import pytest

from wtiling.generators import clique_wts, matrix_grid, permanent_wts
from wtiling.graph import Graph, Signature, grid_graph, path_graph, triangular_grid, triangular_layout
from wtiling.semiring import make_semiring
from wtiling.wts import (
    WTS, BudgetExceeded, Tile, WTSError, eval_brute, is_run, make_tile, run_weight, tile_of,
)
from support import (
    CLIQUE_RUN, PERMANENT_RUN, SAMPLE_MATRIX, five_vertex_adjacency, random_instance,
)

SIG = Signature(("next",), ("a",))


def test_tile_of_isolated_and_path():
    G = Graph(SIG, ["a"], [])
    assert tile_of(G, ["q"], 0) == Tile((), "q", "a", ())
    P = path_graph("aaa", name="next", sigma=("a",))
    assert tile_of(P, ["p", "q", "r"], 1) == Tile((("next", "p"),), "q", "a", (("next", "r"),))


def test_tile_of_grid_interior():
    G = grid_graph(3, 3, [["0"] * 3] * 3)
    t = tile_of(G, ["q"] * 9, 4)
    assert t.type == (frozenset({"right", "down"}), frozenset({"right", "down"}))


def test_is_run_single_vertex():
    T = WTS(SIG, "natural", ("q", "p"), {make_tile({}, "q", "a", {}): 1})
    G = Graph(SIG, ["a"], [])
    assert is_run(T, G, ["q"])
    assert not is_run(T, G, ["p"])
    with pytest.raises(WTSError):
        is_run(T, G, ["q", "q"])


def test_empty_graph():
    T = WTS(SIG, "natural", ("q",), {})
    G = Graph(SIG, [], [])
    assert run_weight(T, G, []) == 1
    assert eval_brute(T, G) == 1


def test_two_runs_sum():
    S = make_semiring("max-plus-int")
    T = WTS(SIG, S, ("q1", "q2"), {make_tile({}, "q1", "a", {}): 4,
                                    make_tile({}, "q2", "a", {}): -2})
    assert eval_brute(T, Graph(SIG, ["a"], [])) == 4


def test_wts_validation():
    with pytest.raises(WTSError):
        WTS(SIG, "natural", ("q",), {make_tile({}, "x", "a", {}): 1})
    with pytest.raises(WTSError):
        WTS(SIG, "natural", ("q",), {make_tile({"nope": "q"}, "q", "a", {}): 1})
    with pytest.raises(WTSError):
        WTS(SIG, "natural", ("q",), [(make_tile({}, "q", "a", {}), 1)] * 2)
    with pytest.raises(WTSError):
        WTS(SIG, "natural", ("q", "q"), {})


def test_clique_run_weight():
    G = triangular_grid(five_vertex_adjacency())
    ids = triangular_layout(5)
    rho = [None] * len(G)
    for cell, state in CLIQUE_RUN.items():
        rho[ids[(ord(cell[0]) - 65, ord(cell[-1]) - 65)]] = state
    T = clique_wts()
    assert is_run(T, G, rho)
    assert run_weight(T, G, rho) == 3


def test_permanent_run_weight_zero():
    G = matrix_grid(SAMPLE_MATRIX)
    rho = [s for row in PERMANENT_RUN for s in row]
    T = permanent_wts()
    assert is_run(T, G, rho)
    assert run_weight(T, G, rho) == 0


def test_brute_examples():
    assert eval_brute(permanent_wts(), matrix_grid([[1] * 3] * 3)) == 6
    assert eval_brute(clique_wts(), triangular_grid(five_vertex_adjacency())) == 3


def test_budget_refusal():
    T = permanent_wts()
    G = matrix_grid([[1] * 4] * 4)
    with pytest.raises(BudgetExceeded):
        eval_brute(T, G, budget=1000, prune=False)
    with pytest.raises(BudgetExceeded):
        eval_brute(T, G, budget=10)


@pytest.mark.parametrize("seed", range(20))
def test_pruned_equals_literal_enumeration(seed):
    T, G, _ = random_instance(seed, max_vertices=6)
    S = T.semiring
    assert S.eq(eval_brute(T, G), eval_brute(T, G, prune=False))


@pytest.mark.parametrize("seed", range(10))
def test_run_weight_order_independent(seed):
    T, G, _ = random_instance(seed, max_vertices=6)
    rng = random.Random(seed)
    rho = [rng.choice(T.states) for _ in G.vertices]
    base = run_weight(T, G, rho)
    for _ in range(10):
        order = list(G.vertices)
        rng.shuffle(order)
        assert T.semiring.eq(run_weight(T, G, rho, order), base)


@pytest.mark.parametrize("seed", range(10))
def test_explicit_zero_tile_changes_nothing(seed):
    T, G, _ = random_instance(seed, max_vertices=6)
    S = T.semiring
    rng = random.Random(seed)
    v = rng.randrange(len(G))
    rho = [rng.choice(T.states) for _ in G.vertices]
    extra = tile_of(G, rho, v)
    if T.is_listed(extra):
        return
    T2 = WTS(T.signature, S, T.states, {**T.weights, extra: S.zero()})
    assert S.eq(eval_brute(T2, G), eval_brute(T, G))


@pytest.mark.parametrize("seed", range(10))
def test_boolean_value_is_run_existence(seed):
    T, G, _ = random_instance(seed, semirings=("boolean",), max_vertices=5)
    exists = any(is_run(T, G, rho) and T.semiring.eq(run_weight(T, G, rho), 1)
                 for rho in itertools.product(T.states, repeat=len(G)))
    assert bool(eval_brute(T, G)) == exists
