"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import random
import time

import pytest

from wtiling.automata import eval_pw, eval_tw, tree_eval
from wtiling.cli import run_bench
from wtiling.decomposition import (
    check_correspondence, check_k_bounded, heuristic_tree_decomposition,
    kword_from_linearization, kword_from_path_decomposition, ktt_from_tree_decomposition,
    path_decomposition_from_kword, path_decomposition_from_order, path_to_tree,
    validate_path_decomposition,
)
from wtiling.generators import (
    binary_path_wts, clique_oracle, clique_wts, cnf_to_grid, count_sat_oracle, gap_encoding,
    gap_wts, matrix_grid, nat_to_path_graph, permanent_oracle, permanent_wts, random_adjacency,
    random_cnf, random_matrix, sharp_sat_wts,
)
from wtiling.graph import triangular_grid
from wtiling.semiring import SEMIRING_IDS, Semiring, check_semiring_laws, make_semiring
from wtiling.terms import (
    is_well_formed_ktt, is_well_formed_kword, kword_semantics, ktt_semantics,
)
from wtiling.wts import eval_brute
from support import (
    SAMPLE_MATRIX, five_vertex_adjacency, random_bandwidth_graph, random_instance, random_term,
    random_tree_automaton, tree_runs_oracle,
)


@pytest.fixture
def report(capsys):
    def emit(number, title, failures, elapsed, limit):
        ok = not failures and elapsed < limit
        detail = f"{elapsed:.1f}s of {limit}s"
        if failures:
            detail += f"; {len(failures)} mismatches, first: {failures[0]}"
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
        assert not failures, failures[:5]
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    return emit


def test_oracle_equivalence(report):
    t0 = time.perf_counter()
    failures = []
    for seed in range(200):
        T, G, bags = random_instance(seed)
        assert len(G) <= 8 and len(T.states) <= 3 and max(map(len, bags)) <= 4
        S = T.semiring
        brute = eval_brute(T, G)
        pw = eval_pw(T, G, bags)
        tw = eval_tw(T, G, path_to_tree(bags))
        if not (S.eq(brute, pw) and S.eq(brute, tw)):
            failures.append((seed, S.name, brute, pw, tw))
    report(1, "brute force = path-width = tree-width on 200 random instances",
           failures, time.perf_counter() - t0, 60)


def test_permanent(report):
    t0 = time.perf_counter()
    rng = random.Random(2)
    matrices = [random_matrix(rng.randint(1, 5), rng, density=0.6) for _ in range(20)]
    matrices += [[[1] * n for _ in range(n)] for n in range(1, 6)]
    matrices += [[[int(i == j) for j in range(n)] for i in range(n)] for n in range(1, 6)]
    matrices.append(SAMPLE_MATRIX)
    failures = []
    T = permanent_wts()
    for A in matrices:
        G = matrix_grid(A)
        expected = permanent_oracle(A)
        got = (eval_brute(T, G), eval_tw(T, G))
        if got != (expected, expected):
            failures.append((A, expected, got))
    n_ones = [permanent_oracle([[1] * n] * n) for n in range(1, 6)]
    if n_ones != [1, 2, 6, 24, 120]:
        failures.append(("all-ones", n_ones))
    report(2, "permanent system matches the permutation-sum oracle",
           failures, time.perf_counter() - t0, 30)


def test_clique_number(report):
    t0 = time.perf_counter()
    rng = random.Random(3)
    graphs = [random_adjacency(rng.randint(1, 7), rng) for _ in range(20)]
    graphs.append(five_vertex_adjacency())
    failures = []
    T = clique_wts()
    for adj in graphs:
        G = triangular_grid(adj)
        expected = clique_oracle(adj)
        got = (eval_pw(T, G), eval_tw(T, G))
        if got != (expected, expected):
            failures.append((adj, expected, got))
    if clique_oracle(five_vertex_adjacency()) != 3:
        failures.append(("five-vertex graph", clique_oracle(five_vertex_adjacency())))
    report(3, "max-plus clique system matches the subset oracle",
           failures, time.perf_counter() - t0, 30)


def test_model_counting(report):
    t0 = time.perf_counter()
    rng = random.Random(4)
    failures = []
    T = sharp_sat_wts()
    for _ in range(20):
        phi = random_cnf(rng.randint(1, 8), rng.randint(1, 6), rng)
        expected = count_sat_oracle(phi)
        got = eval_pw(T, cnf_to_grid(phi))
        if got != expected:
            failures.append((phi, expected, got))
    Tg = gap_wts()
    for _ in range(10):
        n = rng.randint(1, 6)
        phi1 = random_cnf(n, rng.randint(1, 3), rng)
        phi2 = random_cnf(n, rng.randint(1, 3), rng)
        expected = count_sat_oracle(phi1) - count_sat_oracle(phi2)
        got = eval_pw(Tg, gap_encoding(phi1, phi2))
        if got != expected:
            failures.append((phi1, phi2, expected, got))
    report(4, "model counts and count differences match the truth-table oracle",
           failures, time.perf_counter() - t0, 60)


def test_binary_counter(report):
    t0 = time.perf_counter()
    rng = random.Random(5)
    strings = ["0" * rng.randint(1, 12)]
    strings += ["".join(rng.choice("01") for _ in range(rng.randint(1, 12))) for _ in range(29)]
    failures = []
    T = binary_path_wts()
    for bits in strings:
        expected = sum(int(b) << i for i, b in enumerate(reversed(bits)))
        got = eval_pw(T, nat_to_path_graph(bits))
        if got != expected:
            failures.append((bits, expected, got))
    report(5, "run count on bit paths equals the encoded number",
           failures, time.perf_counter() - t0, 10)


def test_semiring_laws(report):
    t0 = time.perf_counter()
    failures = []
    for name in SEMIRING_IDS:
        r = check_semiring_laws(make_semiring(name), samples=10**4, seed=6)
        if not r.passed:
            failures.append((name, r.failures[0]))
    base = make_semiring("integer")
    broken = Semiring("broken", 0, 1, base.add, lambda a, b: a - b, base.parse, base.render,
                      base.sample, base.check)
    r = check_semiring_laws(broken, samples=100, seed=6)
    if r.passed or not r.failures[0][1]:
        failures.append(("broken stub not caught", r))
    report(6, "all law checks hold on 10^4 triples; broken stub yields a witness",
           failures, time.perf_counter() - t0, 10)


def test_decomposition_round_trips(report):
    t0 = time.perf_counter()
    failures = []
    for seed in range(100):
        rng = random.Random(seed)
        G, order = random_bandwidth_graph(rng, max_vertices=12)
        bags = path_decomposition_from_order(G, order)
        # Round-trip A
        word, origin = kword_from_path_decomposition(G, bags)
        cg = kword_semantics(word, G.signature)
        if not (is_well_formed_kword(word) and check_correspondence(cg, origin, G)):
            failures.append((seed, "path decomposition to word"))
        # Round-trip B
        back = path_decomposition_from_kword(word)
        if validate_path_decomposition(cg.graph, back) > word.k:
            failures.append((seed, "word to path decomposition"))
        # linear order coherence
        k = 3
        if check_k_bounded(G, order, k):
            lw, lorder = kword_from_linearization(G, order, k=k)
            lcg = kword_semantics(lw, G.signature)
            if not (lw.k <= k and is_well_formed_kword(lw) and check_correspondence(lcg, lorder, G)):
                failures.append((seed, "linear order to word"))
        else:
            failures.append((seed, "generated order not 3-bounded"))
        term, torigin = ktt_from_tree_decomposition(G, heuristic_tree_decomposition(G))
        tcg = ktt_semantics(term, G.signature)
        if not (is_well_formed_ktt(term) and check_correspondence(tcg, torigin, G)):
            failures.append((seed, "tree decomposition to term"))
    report(7, "decomposition and term round-trips on 100 random graphs",
           failures, time.perf_counter() - t0, 30)


def test_linear_scaling(report):
    t0 = time.perf_counter()
    sizes = [50, 100, 200, 400]
    rows = run_bench("grid3xN", sizes, method="pathwidth", seed=8, repeat=3)
    times = [ms for _, ms, _ in rows]
    ratios = [b / a for a, b in zip(times, times[1:])]
    failures = [(n, round(r, 2)) for n, r in zip(sizes[1:], ratios) if r > 3]
    summary = ", ".join(f"N={n}: {ms:.0f}ms" for n, ms, _ in rows)
    report(8, f"path-width time on 3xN grids grows linearly ({summary})",
           failures, time.perf_counter() - t0, 120)


def test_tree_evaluation_micro_oracle(report):
    t0 = time.perf_counter()
    rng = random.Random(9)
    failures = []
    for i in range(50):
        semiring = rng.choice(["natural", "integer", "rational", "max-plus-int", "min-plus-nat"])
        B, tables = random_tree_automaton(rng, semiring, max_states=4)
        root = random_term(rng, rng.randint(1, 5))
        got, expected = tree_eval(B, root), tree_runs_oracle(B.semiring, tables, root)
        if not B.semiring.eq(got, expected):
            failures.append((i, semiring, got, expected))
    report(9, "bottom-up tree evaluation equals run enumeration on 50 automata",
           failures, time.perf_counter() - t0, 10)
