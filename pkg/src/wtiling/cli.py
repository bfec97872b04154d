"""Command-line interface: ``wtiling {eval,check,decompose,generate,bench}``.

Exit status: 0 success, 2 unreadable or invalid input, 3 budget or width
exceeded, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import random
import sys
import time

from . import formats
from .automata import METHODS, evaluate
from .decomposition import (
    DecompositionError, TreeDecomposition, heuristic_path_decomposition,
    heuristic_tree_decomposition, kword_from_path_decomposition, ktt_from_tree_decomposition,
    path_to_tree, validate_path_decomposition, validate_tree_decomposition,
)
from .formats import FormatError
from .generators import (
    GeneratorError, binary_path_wts, clique_oracle, clique_wts, cnf_to_grid, count_sat_oracle,
    gap_encoding, gap_wts, matrix_grid, nat_to_path_graph, parse_dimacs, permanent_oracle,
    permanent_wts, random_adjacency, random_cnf, random_matrix, sharp_sat_wts,
)
from .graph import GraphError, grid_graph, triangular_grid
from .semiring import SemiringError
from .terms import KWord, TermError, is_well_formed_kword, is_well_formed_ktt
from .wts import DEFAULT_BUDGET, ResourceError, WTSError

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_INTERNAL = 0, 2, 3, 4

INPUT_ERRORS = (FormatError, GraphError, WTSError, TermError, DecompositionError,
                GeneratorError, SemiringError)


def _load_graph(path):
    return formats.graph_from_json(formats.load(path))


def _load_wts(path):
    return formats.wts_from_json(formats.load(path))


# -- eval --------------------------------------------------------------------

def cmd_eval(args) -> int:
    T = _load_wts(args.wts)
    G = _load_graph(args.graph)
    dec = None
    if args.decomposition:
        dec = formats.decomposition_from_json(formats.load(args.decomposition))
    T.check_graph(G)
    result = evaluate(T, G, args.method, dec, args.max_width, args.budget)
    print(T.semiring.render(result.value))
    if args.stats:
        print(json.dumps(result.stats(), sort_keys=True), file=sys.stderr)
    return EXIT_OK


# -- check -------------------------------------------------------------------

def _guess_kind(doc) -> str:
    if isinstance(doc, dict):
        if "tiles" in doc:
            return "wts"
        if "vertices" in doc:
            return "graph"
        if "ops" in doc or "term" in doc:
            return "term"
        if "bags" in doc or "nodes" in doc:
            return "decomposition"
    raise FormatError("cannot tell what kind of document this is; pass --kind")


def cmd_check(args) -> int:
    kind = args.kind
    if kind == "cnf":
        phi = parse_dimacs(formats.read_text(args.file))
        cnf_to_grid(phi)
        print(f"ok: CNF with {phi.num_vars} variables and {len(phi.clauses)} clauses")
        return EXIT_OK
    doc = formats.load(args.file)
    if kind == "auto":
        kind = _guess_kind(doc)
    if kind == "graph":
        G = formats.graph_from_json(doc)
        if args.wts:
            _load_wts(args.wts).check_graph(G)
        print(f"ok: graph with {len(G)} vertices and {len(G.edges)} edges")
    elif kind == "wts":
        T = formats.wts_from_json(doc)
        if args.graph:
            T.check_graph(_load_graph(args.graph))
        print(f"ok: WTS over {T.semiring.name} with {len(T.states)} states "
              f"and {len(T.weights)} tiles")
    elif kind == "term":
        term = formats.term_from_json(doc)
        if isinstance(term, KWord):
            verdict, what = is_well_formed_kword(term), f"{term.k}-word"
        else:
            verdict, what = is_well_formed_ktt(term), f"{term.k}-tree-term"
        if not verdict:
            raise TermError(verdict.message, verdict.position)
        print(f"ok: well-formed {what} of length {len(term)}")
    elif kind == "decomposition":
        if not args.graph:
            raise FormatError("checking a decomposition needs --graph")
        G = _load_graph(args.graph)
        dec = formats.decomposition_from_json(doc)
        if isinstance(dec, TreeDecomposition):
            width, what = validate_tree_decomposition(G, dec), "tree"
        else:
            width, what = validate_path_decomposition(G, dec), "path"
        print(f"ok: {what} decomposition of width {width}")
    return EXIT_OK


# -- decompose ---------------------------------------------------------------

def cmd_decompose(args) -> int:
    G = _load_graph(args.graph)
    given = None
    if args.decomposition:
        given = formats.decomposition_from_json(formats.load(args.decomposition))
    if args.to in ("path", "kword"):
        if isinstance(given, TreeDecomposition):
            raise FormatError("a k-word needs a path decomposition")
        bags = given if given is not None else heuristic_path_decomposition(G, args.max_width)
        width = validate_path_decomposition(G, bags)
        if args.max_width is not None and width > args.max_width:
            raise ResourceError(f"decomposition width {width} exceeds {args.max_width}")
        if args.to == "path":
            doc = formats.path_decomposition_to_json(bags)
        else:
            doc = formats.kword_to_json(kword_from_path_decomposition(G, bags)[0])
    else:
        if given is None:
            td = heuristic_tree_decomposition(G, args.max_width)
        else:
            td = given if isinstance(given, TreeDecomposition) else path_to_tree(given)
        width = validate_tree_decomposition(G, td)
        if args.max_width is not None and width > args.max_width:
            raise ResourceError(f"decomposition width {width} exceeds {args.max_width}")
        if args.to == "tree":
            doc = formats.tree_decomposition_to_json(td)
        else:
            doc = formats.ktt_to_json(ktt_from_tree_decomposition(G, td)[0])
    formats.dump(doc, args.output)
    return EXIT_OK


# -- generate ----------------------------------------------------------------

FAMILIES = ("permanent", "clique", "sat", "gap", "binary")


def generate_fixture(family: str, size: int, seed: int):
    """``(wts, graph, expected value or None)`` for a seeded random instance."""
    if size < 1:
        raise GeneratorError("size must be positive")
    rng = random.Random(seed)
    if family == "permanent":
        m = random_matrix(size, rng, density=0.6)
        expected = permanent_oracle(m) if size <= 9 else None
        return permanent_wts(), matrix_grid(m), expected
    if family == "clique":
        adj = random_adjacency(size, rng)
        expected = clique_oracle(adj) if size <= 10 else None
        return clique_wts(), triangular_grid(adj), expected
    if family == "sat":
        phi = random_cnf(size, size, rng)
        expected = count_sat_oracle(phi) if size <= 20 else None
        return sharp_sat_wts(), cnf_to_grid(phi), expected
    if family == "gap":
        p1 = random_cnf(size, size // 2 + 1, rng)
        p2 = random_cnf(size, size // 2 + 1, rng)
        expected = count_sat_oracle(p1) - count_sat_oracle(p2) if size <= 20 else None
        return gap_wts(), gap_encoding(p1, p2), expected
    if family == "binary":
        bits = "1" + "".join(rng.choice("01") for _ in range(size - 1))
        return binary_path_wts(), nat_to_path_graph(bits), int(bits, 2)
    raise GeneratorError(f"unknown family {family!r}")


def cmd_generate(args) -> int:
    if args.wts == "-" and args.graph == "-":
        raise FormatError("only one of --wts and --graph may go to standard output")
    T, G, expected = generate_fixture(args.family, args.size, args.seed)
    formats.dump(formats.wts_to_json(T), args.wts)
    formats.dump(formats.graph_to_json(G), args.graph)
    if expected is not None:
        print(f"expected {T.semiring.render(expected)}", file=sys.stderr)
    return EXIT_OK


# -- bench -------------------------------------------------------------------

BENCH_FAMILIES = ("grid3xN", "sat3xN")


def parse_sizes(text: str):
    """``"a..b"`` doubles from ``a`` up to ``b``; otherwise a comma-separated list."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
            if lo < 1 or hi < lo:
                raise ValueError
            sizes = []
            while lo <= hi:
                sizes.append(lo)
                lo *= 2
            return sizes
        sizes = [int(x) for x in text.split(",")]
    except ValueError:
        raise FormatError(f"bad size list {text!r}; use 'a..b' or 'n1,n2,...'") from None
    if any(n < 1 for n in sizes):
        raise FormatError("sizes must be positive")
    return sizes


def bench_instance(family: str, n: int, rng: random.Random):
    if family == "grid3xN":
        labels = [[rng.choice("01") for _ in range(n)] for _ in range(3)]
        return grid_graph(3, n, labels, sigma=("0", "1"))
    if family == "sat3xN":
        return cnf_to_grid(random_cnf(3, n, rng))
    raise FormatError(f"unknown family {family!r}")


def run_bench(family: str, sizes, method="pathwidth", seed=0, repeat=3):
    """Rows ``(size, best wall time in ms, sha256 prefix of the rendered value)``."""
    T = permanent_wts() if family == "grid3xN" else sharp_sat_wts()
    rows = []
    for n in sizes:
        G = bench_instance(family, n, random.Random(f"{seed}:{n}"))
        best, value = None, None
        for _ in range(repeat):
            t0 = time.perf_counter()
            value = evaluate(T, G, method).value
            dt = (time.perf_counter() - t0) * 1e3
            best = dt if best is None else min(best, dt)
        digest = hashlib.sha256(T.semiring.render(value).encode()).hexdigest()[:16]
        rows.append((n, best, digest))
    return rows


def cmd_bench(args) -> int:
    rows = run_bench(args.family, parse_sizes(args.n), args.method, args.seed, args.repeat)
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("size", "time_ms", "digest"))
        for n, ms, digest in rows:
            w.writerow((n, f"{ms:.3f}", digest))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wtiling",
                                description="Evaluate weighted tiling systems on graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="compute the value of a WTS on a graph")
    e.add_argument("wts", help="WTS file ('-' for stdin)")
    e.add_argument("graph", help="graph file ('-' for stdin)")
    e.add_argument("--method", choices=METHODS, default="treewidth")
    e.add_argument("--decomposition", help="path or tree decomposition file")
    e.add_argument("--max-width", type=int)
    e.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="search-node budget of the brute-force method")
    e.add_argument("--stats", action="store_true", help="print run statistics as JSON on stderr")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("check", help="validate a file and report the first violation")
    c.add_argument("file")
    c.add_argument("--kind", choices=("auto", "graph", "wts", "term", "decomposition", "cnf"),
                   default="auto")
    c.add_argument("--graph", help="graph the decomposition or WTS refers to")
    c.add_argument("--wts", help="WTS the graph must be compatible with")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("decompose", help="emit a decomposition or a term for a graph")
    d.add_argument("graph")
    d.add_argument("--to", choices=("path", "tree", "kword", "ktt"), default="tree")
    d.add_argument("--decomposition", help="start from this decomposition instead of a heuristic one")
    d.add_argument("--max-width", type=int)
    d.add_argument("-o", "--output", default="-")
    d.set_defaults(func=cmd_decompose)

    g = sub.add_parser("generate", help="write a seeded WTS and graph fixture")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("--size", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--wts", default="wts.json", help="output path for the WTS")
    g.add_argument("--graph", default="graph.json", help="output path for the graph")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("bench", help="time an evaluation method over growing inputs")
    b.add_argument("--family", choices=BENCH_FAMILIES, default="grid3xN")
    b.add_argument("--n", default="50..400", help="'a..b' (doubling) or 'n1,n2,...'")
    b.add_argument("--method", choices=METHODS, default="pathwidth")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repeat", type=int, default=3)
    b.add_argument("-o", "--output", default="-")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
