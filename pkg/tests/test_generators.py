import random

import pytest

from wtiling.automata import eval_pw, eval_tw
from wtiling.generators import (
    CNF, GeneratorError, binary_path_wts, clique_oracle, clique_wts, cnf_to_grid,
    count_sat_oracle, gap_encoding, gap_wts, matrix_grid, nat_to_path_graph,
    natural_permanent_encoding, natural_permanent_wts, parse_dimacs, permanent_oracle,
    permanent_wts, random_adjacency, random_cnf, random_matrix, sharp_sat_wts,
)
from wtiling.graph import triangular_grid
from wtiling.wts import eval_brute
from support import SAMPLE_MATRIX, five_vertex_adjacency


def test_generated_systems_validate():
    for T in (clique_wts(), permanent_wts(), binary_path_wts(), sharp_sat_wts(), gap_wts(),
              natural_permanent_wts()):
        assert T.tiles and set(T.states) >= {t.state for t in T.tiles}


# -- clique number -----------------------------------------------------------

@pytest.mark.parametrize("adjacency, value", [
    ([[0] * 4 for _ in range(4)], 1),
    ([[int(i != j) for j in range(4)] for i in range(4)], 4),
    (five_vertex_adjacency(), 3),
])
def test_clique_examples(adjacency, value):
    G = triangular_grid(adjacency)
    assert clique_oracle(adjacency) == value
    assert eval_pw(clique_wts(), G) == value


@pytest.mark.parametrize("seed", range(8))
def test_clique_random(seed):
    rng = random.Random(seed)
    adj = random_adjacency(rng.randint(1, 6), rng)
    assert eval_tw(clique_wts(), triangular_grid(adj)) == clique_oracle(adj)


# -- permanent ---------------------------------------------------------------

@pytest.mark.parametrize("matrix, value", [
    ([[1] * 3] * 3, 6),
    ([[int(i == j) for j in range(3)] for i in range(3)], 1),
    ([[0]], 0),
    ([[1]], 1),
    (SAMPLE_MATRIX, 1),
])
def test_permanent_examples(matrix, value):
    assert permanent_oracle(matrix) == value
    assert eval_brute(permanent_wts(), matrix_grid(matrix)) == value


@pytest.mark.parametrize("seed", range(8))
def test_permanent_random(seed):
    rng = random.Random(seed)
    A = random_matrix(rng.randint(1, 4), rng, density=0.6)
    assert eval_pw(permanent_wts(), matrix_grid(A)) == permanent_oracle(A)


def test_matrix_grid_rejects_non_binary():
    with pytest.raises(GeneratorError):
        matrix_grid([[2]])


@pytest.mark.parametrize("matrix", [[[2, 1], [0, 3]], [[1, 5], [4, 2]], [[0, 0], [7, 1]], [[3]]])
def test_natural_entry_permanent(matrix):
    G = natural_permanent_encoding(matrix)
    assert eval_tw(natural_permanent_wts(), G) == permanent_oracle(matrix)


def test_natural_entry_encoding_rejects():
    with pytest.raises(GeneratorError):
        natural_permanent_encoding([[1, 2]])
    with pytest.raises(GeneratorError):
        natural_permanent_encoding([[-1]])


# -- binary counter ----------------------------------------------------------

@pytest.mark.parametrize("bits, value", [("1", 1), ("101", 5), ("000", 0), ("1101", 13), ("0", 0)])
def test_binary_examples(bits, value):
    G = nat_to_path_graph(bits)
    assert eval_brute(binary_path_wts(), G) == eval_pw(binary_path_wts(), G) == value


def test_binary_rejects_empty():
    with pytest.raises(GeneratorError):
        nat_to_path_graph("")
    with pytest.raises(GeneratorError):
        nat_to_path_graph("102")


# -- CNF ---------------------------------------------------------------------

def test_grid_labels():
    G = cnf_to_grid(CNF(2, [(1, -2)]))
    assert G.labels == ("p", "n")
    G = cnf_to_grid(CNF(3, [(1,), (-3, 2)]))
    assert len(G) == 6 and G.labels == ("p", "*", "*", "p", "*", "n")


def test_tautology_rejected():
    with pytest.raises(GeneratorError):
        cnf_to_grid(CNF(2, [(1, -1)]))


def test_dimacs():
    text = "c comment\np cnf 3 2\n1 -3 0\n2\n3 0\n"
    phi = parse_dimacs(text)
    assert phi == CNF(3, [(1, -3), (2, 3)])
    assert parse_dimacs(phi.to_dimacs()) == phi
    # a missing final terminator is tolerated
    assert parse_dimacs("p cnf 2 1\n1 2\n") == CNF(2, [(1, 2)])


@pytest.mark.parametrize("text", [
    "1 2 0\n", "p cnf 2 2\n1 0\n", "p cnf 2 1\n1 3 0\n", "p cnf 2 1\n1 x 0\n",
])
def test_dimacs_errors(text):
    with pytest.raises(GeneratorError):
        parse_dimacs(text)


@pytest.mark.parametrize("phi, value", [
    (CNF(2, [(1, 2)]), 3),
    (CNF(1, [(1,), (-1,)]), 0),
    (CNF(2, [(1, 2), (-1, 2)]), 2),
    (CNF(3, [(1,)]), 4),
])
def test_sat_examples(phi, value):
    assert count_sat_oracle(phi) == value
    assert eval_pw(sharp_sat_wts(), cnf_to_grid(phi)) == value


@pytest.mark.parametrize("seed", range(8))
def test_sat_random(seed):
    rng = random.Random(seed)
    phi = random_cnf(rng.randint(1, 5), rng.randint(1, 4), rng)
    assert eval_pw(sharp_sat_wts(), cnf_to_grid(phi)) == count_sat_oracle(phi)


def test_gap_examples():
    phi = CNF(2, [(1, 2)])
    assert eval_pw(gap_wts(), gap_encoding(phi, phi)) == 0
    G = gap_encoding(CNF(1, [(1,)]), CNF(1, [(1,), (-1,)]))
    assert eval_pw(gap_wts(), G) == 1
    assert eval_pw(gap_wts(), gap_encoding(CNF(1, [(1,), (-1,)]), CNF(1, [(1,)]))) == -1


@pytest.mark.parametrize("seed", range(5))
def test_gap_random(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    phi1, phi2 = random_cnf(n, rng.randint(1, 3), rng), random_cnf(n, rng.randint(1, 3), rng)
    expected = count_sat_oracle(phi1) - count_sat_oracle(phi2)
    assert eval_pw(gap_wts(), gap_encoding(phi1, phi2)) == expected


def test_gap_rejects_mismatched_variables():
    with pytest.raises(GeneratorError):
        gap_encoding(CNF(1, [(1,)]), CNF(2, [(1,)]))


# -- oracles -----------------------------------------------------------------

def test_oracle_values():
    assert permanent_oracle([[1] * 4] * 4) == 24
    assert clique_oracle(five_vertex_adjacency()) == 3
    assert count_sat_oracle(CNF(2, [(1, 2), (-1, 2)])) == 2


def test_oracle_guards():
    with pytest.raises(GeneratorError):
        permanent_oracle([[1] * 10] * 10)
    with pytest.raises(GeneratorError):
        clique_oracle([[0] * 11] * 11)
    with pytest.raises(GeneratorError):
        count_sat_oracle(CNF(21, [(1,)]))
