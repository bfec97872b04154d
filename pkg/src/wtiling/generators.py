"""Ready-made tiling systems, their input encodings, and brute-force oracles.

Grid-shaped systems are generated from a local rule: for every vertex type
and own state the rule lists the admissible neighbour states, and every
combination it accepts becomes a tile.  Neighbours are named by position:
``left`` / ``up`` feed the incoming ``RIGHT`` / ``DOWN`` edges and
``right`` / ``down`` the outgoing ones.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable

from .graph import DOWN, GRID_GAMMA, RIGHT, Graph, Signature, grid_graph, path_graph
from .wts import WTS, Tile

POSITIONS = ("left", "up", "right", "down")
_IN = {"left": RIGHT, "up": DOWN}
_OUT = {"right": RIGHT, "down": DOWN}


class GeneratorError(ValueError):
    pass


def _grid_shapes():
    """All 16 sets of present neighbour positions."""
    for mask in range(16):
        yield frozenset(p for i, p in enumerate(POSITIONS) if mask >> i & 1)


def _tile(s, label, nb: dict) -> Tile:
    f_in = tuple(sorted((_IN[p], q) for p, q in nb.items() if p in _IN))
    f_out = tuple(sorted((_OUT[p], q) for p, q in nb.items() if p in _OUT))
    return Tile(f_in, s, label, f_out)


def _local_tiles(shapes, states, labels, candidates: Callable, weight: Callable):
    """Tiles from a local rule.

    ``candidates(present, s, a, pos)`` lists admissible states of the
    neighbour at ``pos`` (``None`` rules ``s`` out); ``weight(present, s, a,
    nb)`` returns the tile weight or ``None`` to reject the combination.
    """
    tiles = {}
    for present in shapes:
        order = [p for p in POSITIONS if p in present]
        for s in states:
            for a in labels:
                lists = []
                for p in order:
                    c = candidates(present, s, a, p)
                    if not c:
                        break
                    lists.append(c)
                else:
                    for combo in itertools.product(*lists):
                        nb = dict(zip(order, combo))
                        w = weight(present, s, a, nb)
                        if w is not None:
                            tiles[_tile(s, a, nb)] = w
    return tiles


# -- clique number -----------------------------------------------------------

PLUS, VMINUS, HMINUS, EMPTY_CELL = "plus", "vminus", "hminus", "empty"
CLIQUE_STATES = (PLUS, VMINUS, HMINUS, EMPTY_CELL)

# admissible (left, up) states of an off-diagonal cell, and its allowed labels
_CLIQUE_INNER = {
    EMPTY_CELL: ((VMINUS, EMPTY_CELL), (HMINUS, EMPTY_CELL), ("0", "1")),
    PLUS: ((PLUS, HMINUS), (PLUS, VMINUS), ("1",)),
    HMINUS: ((PLUS, HMINUS), (HMINUS, EMPTY_CELL), ("0", "1")),
    VMINUS: ((VMINUS, EMPTY_CELL), (PLUS, VMINUS), ("0", "1")),
}


def clique_wts() -> WTS:
    """Max-plus system whose value on a triangular adjacency grid is the clique number.

    A run marks a subset of diagonal vertices ``plus``; a cell is ``plus``
    when both its row and column start in a marked vertex, which requires the
    cell label 1.  ``hminus`` / ``vminus`` mark cells whose row / column alone
    starts marked.  Outgoing states are unconstrained; every marked diagonal
    tile weighs 1, every other tile 0.
    """
    outs = [frozenset(s) for s in ((), ("right",), ("down",), ("right", "down"))]

    def candidates(present, s, a, pos):
        if present & {"left", "up"} == {"left", "up"}:
            if pos == "left":
                return _CLIQUE_INNER[s][0]
            if pos == "up":
                return _CLIQUE_INNER[s][1]
        return CLIQUE_STATES

    def weight(present, s, a, nb):
        if "left" in present:
            return 0 if a in _CLIQUE_INNER[s][2] else None
        if s not in (PLUS, EMPTY_CELL) or a != "1":
            return None
        return 1 if s == PLUS else 0

    shapes = outs + [o | {"left", "up"} for o in outs]
    tiles = _local_tiles(shapes, CLIQUE_STATES, ("0", "1"), candidates, weight)
    return WTS(Signature(GRID_GAMMA, ("0", "1")), "max-plus-nat", CLIQUE_STATES, tiles)


# -- permanent ---------------------------------------------------------------

CIRCLE = "circle"
# state -> (where the circled vertex of the column is, where the one of the row is)
PERMANENT_ARROWS = {"nwse": ("N", "E"), "nesw": ("S", "E"), "senw": ("S", "W"), "swne": ("N", "W")}
PERMANENT_STATES = (CIRCLE,) + tuple(PERMANENT_ARROWS)


def _col(s):
    return None if s == CIRCLE else PERMANENT_ARROWS[s][0]


def _row(s):
    return None if s == CIRCLE else PERMANENT_ARROWS[s][1]


def _permanent_feasible(s, present):
    if s == CIRCLE:
        return True
    c, r = PERMANENT_ARROWS[s]
    return ("up" if c == "N" else "down") in present and ("right" if r == "E" else "left") in present


def _permanent_neighbor_ok(s, present, pos, t):
    if pos == "up":
        ok = _col(t) == "S" if s == CIRCLE or _col(s) == "S" else _col(t) in (None, "N")
    elif pos == "down":
        ok = _col(t) == "N" if s == CIRCLE or _col(s) == "N" else _col(t) in (None, "S")
    elif pos == "left":
        ok = _row(t) == "E" if s == CIRCLE or _row(s) == "E" else _row(t) in (None, "W")
    else:
        ok = _row(t) == "W" if s == CIRCLE or _row(s) == "W" else _row(t) in (None, "E")
    if not ok or t == CIRCLE:
        return ok
    # a neighbour in my column shares my row boundaries, and vice versa
    if pos in ("up", "down"):
        if "left" not in present and _row(t) == "W":
            return False
        if "right" not in present and _row(t) == "E":
            return False
    else:
        if "up" not in present and _col(t) == "N":
            return False
        if "down" not in present and _col(t) == "S":
            return False
    return True


def permanent_wts() -> WTS:
    """Natural-semiring system whose value on a square 0/1 grid is the permanent.

    A run circles one vertex per row and column; every other vertex points
    towards the circled vertex of its column (N/S) and of its row (E/W).
    A circled 0-labelled vertex weighs 0, every other tile 1.
    """
    def candidates(present, s, a, pos):
        if not _permanent_feasible(s, present):
            return None
        return [t for t in PERMANENT_STATES if _permanent_neighbor_ok(s, present, pos, t)]

    def weight(present, s, a, nb):
        if not _permanent_feasible(s, present):
            return None
        return 0 if s == CIRCLE and a == "0" else 1

    tiles = _local_tiles(list(_grid_shapes()), PERMANENT_STATES, ("0", "1"), candidates, weight)
    return WTS(Signature(GRID_GAMMA, ("0", "1")), "natural", PERMANENT_STATES, tiles)


def matrix_grid(matrix) -> Graph:
    """The 0/1 grid of a matrix (labels ``"0"``/``"1"``)."""
    rows = [[str(int(x)) for x in row] for row in matrix]
    for row in rows:
        for x in row:
            if x not in ("0", "1"):
                raise GeneratorError(f"matrix entry {x} is not 0 or 1")
    return grid_graph(len(rows), len(rows[0]) if rows else 0, rows, sigma=("0", "1"))


# -- binary numbers on paths --------------------------------------------------

SUCC = "succ"
BINARY_STATES = ("q0", "q1", "q2")


def _binary_tiles(states_in_prefix=("q0",), suffix=("q1", "q2")):
    tiles = {}
    all_states = states_in_prefix + suffix
    for p in (None,) + all_states:
        for n in (None,) + all_states:
            for s in all_states:
                for a in ("0", "1"):
                    if s == "q0":
                        if p not in (None, "q0"):
                            continue
                        if n != "q0" and a != "1":
                            continue
                    else:
                        if p is None or n == "q0":
                            continue
                    f_in = ((SUCC, p),) if p else ()
                    f_out = ((SUCC, n),) if n else ()
                    tiles[Tile(f_in, s, a, f_out)] = 1
    return tiles


def binary_path_wts() -> WTS:
    """Counts ``sum b_i 2^i`` runs on a most-significant-first bit path.

    A run labels a prefix ending on a 1 with ``q0`` and every later vertex
    freely with ``q1`` or ``q2``.
    """
    return WTS(Signature((SUCC,), ("0", "1")), "natural", BINARY_STATES, _binary_tiles())


def nat_to_path_graph(bits) -> Graph:
    bits = str(bits)
    if not bits or any(b not in "01" for b in bits):
        raise GeneratorError(f"not a nonempty bit string: {bits!r}")
    return path_graph(list(bits), name=SUCC, sigma=("0", "1"))


# -- permanent of a natural matrix -------------------------------------------

ATTACH = "attach"
FROZEN = "q4"
NAT_LABEL = "X"


def natural_permanent_encoding(matrix) -> Graph:
    """An n x n grid labelled ``X``; each cell has an ``attach`` edge to the
    head of a bit path (most significant bit first) spelling its entry."""
    n = len(matrix)
    if n == 0 or any(len(row) != n for row in matrix):
        raise GeneratorError("matrix must be square and nonempty")
    labels = [NAT_LABEL] * (n * n)
    edges = []
    for i in range(n):
        for j in range(n):
            v = i * n + j
            if j + 1 < n:
                edges.append((RIGHT, v, v + 1))
            if i + 1 < n:
                edges.append((DOWN, v, v + n))
    for i in range(n):
        for j in range(n):
            x = matrix[i][j]
            if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                raise GeneratorError(f"entry {x!r} is not a natural number")
            bits = format(x, "b")
            head = len(labels)
            edges.append((ATTACH, i * n + j, head))
            for k, b in enumerate(bits):
                labels.append(b)
                if k:
                    edges.append((SUCC, head + k - 1, head + k))
    return Graph(Signature(GRID_GAMMA + (ATTACH, SUCC), (NAT_LABEL, "0", "1")), labels, edges)


def natural_permanent_wts() -> WTS:
    """Grid permanent system whose circled cells start the binary counter on
    their attached path; paths of other cells are frozen in ``q4``."""
    tiles = {}
    perm = permanent_wts()
    for t in perm.tiles:
        heads = BINARY_STATES if t.state == CIRCLE else (FROZEN,)
        for h in heads:
            tiles[Tile(t.f_in, t.state, NAT_LABEL, tuple(sorted(t.f_out + ((ATTACH, h),))))] = 1
    for t in _binary_tiles():
        if t.f_in:
            tiles[t] = 1
        else:
            # a counting path hangs off a circled cell instead of a predecessor
            tiles[Tile(((ATTACH, CIRCLE),), t.state, t.label, t.f_out)] = 1
    for a in ("0", "1"):
        for n in (None, FROZEN):
            f_out = ((SUCC, n),) if n else ()
            tiles[Tile(((SUCC, FROZEN),), FROZEN, a, f_out)] = 1
            for g in PERMANENT_STATES:
                if g != CIRCLE:
                    tiles[Tile(((ATTACH, g),), FROZEN, a, f_out)] = 1
    states = PERMANENT_STATES + BINARY_STATES + (FROZEN,)
    sig = Signature(GRID_GAMMA + (ATTACH, SUCC), (NAT_LABEL, "0", "1"))
    return WTS(sig, "natural", states, tiles)


# -- CNF formulas ------------------------------------------------------------

@dataclass(frozen=True)
class CNF:
    """Clauses over variables ``1..num_vars``; literal ``-v`` negates ``v``."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 1:
            raise GeneratorError("a formula needs at least one variable")
        for c in self.clauses:
            for lit in c:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.num_vars:
                    raise GeneratorError(f"bad literal {lit!r}")

    def satisfied_by(self, assignment) -> bool:
        """``assignment[v - 1]`` is the truth value of variable ``v``."""
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c + (0,))) for c in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CNF:
    num_vars = num_clauses = None
    clauses, cur = [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise GeneratorError(f"bad header: {line!r}")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise GeneratorError(f"bad header: {line!r}") from None
            continue
        if num_vars is None:
            raise GeneratorError("clause before the 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise GeneratorError(f"bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
    if num_vars is None:
        raise GeneratorError("missing 'p cnf' header")
    if cur:
        clauses.append(tuple(cur))
    if len(clauses) != num_clauses:
        raise GeneratorError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    return CNF(num_vars, clauses)


def _clause_labels(phi: CNF, suffix=""):
    cols = []
    for j, c in enumerate(phi.clauses):
        lits = set(c)
        col = []
        for v in range(1, phi.num_vars + 1):
            if v in lits and -v in lits:
                raise GeneratorError(f"clause {j + 1} contains both {v} and {-v}")
            col.append(("p" if v in lits else "n" if -v in lits else "*") + suffix)
        cols.append(col)
    return cols


def cnf_to_grid(phi: CNF) -> Graph:
    """n x m grid: cell (i, j) is ``p`` / ``n`` / ``*`` as variable i+1 occurs
    positively / negatively / not at all in clause j+1."""
    if not phi.clauses:
        raise GeneratorError("a formula needs at least one clause")
    cols = _clause_labels(phi)
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(phi.num_vars)]
    return grid_graph(phi.num_vars, len(cols), rows, sigma=("p", "n", "*"))


SAT_STATES = ("Tt", "Tf", "Ft", "Ff")  # (assignment, evaluation so far)


def _satisfies(sym, assign):
    return (sym == "p" and assign == "T") or (sym == "n" and assign == "F")


def _sat_eval(present_block, s, sym, left, up):
    """Expected evaluation bit of a cell inside one formula's block."""
    a = s[0]
    hit = _satisfies(sym, a) or (up is not None and up[1] == "t")
    if "down" in present_block:
        return hit
    return (left is None or left[1] == "t") and hit


def sharp_sat_wts() -> WTS:
    """Natural-semiring system whose value on a CNF grid is the model count.

    Each row carries one truth value; a cell turns true when its literal is
    satisfied or the cell above is true; the last row also needs its left
    neighbour true.  The bottom-right tile weighs 1 when it is true, 0 otherwise.
    """
    def candidates(present, s, a, pos):
        if pos in ("left", "right"):
            return [t for t in SAT_STATES if t[0] == s[0]]
        return SAT_STATES

    def weight(present, s, a, nb):
        want = _sat_eval(present, s, a, nb.get("left"), nb.get("up"))
        if (s[1] == "t") != want:
            return None
        if "right" not in present and "down" not in present:
            return 1 if s[1] == "t" else 0
        return 1

    tiles = _local_tiles(list(_grid_shapes()), SAT_STATES, ("p", "n", "*"), candidates, weight)
    return WTS(Signature(GRID_GAMMA, ("p", "n", "*")), "natural", SAT_STATES, tiles)


# -- difference of model counts ---------------------------------------------

GAP_SKIP = {1: "skip1", 2: "skip2"}
GAP_STATES = tuple(f"{s}{tag}" for tag in (1, 2) for s in SAT_STATES) + ("skip1", "skip2")
GAP_LABELS = tuple(f"{x}{tag}" for tag in (1, 2) for x in ("p", "n", "*"))


def _gap_tag(s):
    return int(s[-1])


def _gap_skip(s):
    return s.startswith("skip")


def gap_encoding(phi1: CNF, phi2: CNF) -> Graph:
    """The grids of both formulas side by side, labels tagged ``1`` / ``2``."""
    if phi1.num_vars != phi2.num_vars:
        raise GeneratorError(
            f"formulas use {phi1.num_vars} and {phi2.num_vars} variables")
    if not phi1.clauses or not phi2.clauses:
        raise GeneratorError("both formulas need at least one clause")
    cols = _clause_labels(phi1, "1") + _clause_labels(phi2, "2")
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(phi1.num_vars)]
    return grid_graph(phi1.num_vars, len(cols), rows, sigma=GAP_LABELS)


def gap_wts() -> WTS:
    """Integer-semiring system whose value on a gap encoding is ``#phi1 - #phi2``.

    A run evaluates one formula as :func:`sharp_sat_wts` does and puts the
    other block in its skip state.  States carry the tag of their cell, so a
    tile can see where the blocks meet: rows must read ``1*2*``, columns
    keep one tag, and exactly one side of the boundary is skipped.  The
    last cell of block 1 weighs 1 when true or skipped; the last cell of
    block 2 weighs -1 when true and 1 when skipped.
    """
    def block_neighbor(s, t):
        return t if t is not None and _gap_tag(t) == _gap_tag(s) else None

    def candidates(present, s, a, pos):
        tag = int(a[-1])
        if _gap_tag(s) != tag:
            return None
        out = []
        for t in GAP_STATES:
            tt = _gap_tag(t)
            if pos in ("up", "down"):
                ok = tt == tag and _gap_skip(t) == _gap_skip(s)
            elif pos == "left":
                ok = tt < tag and _gap_skip(t) != _gap_skip(s) or \
                    tt == tag and _gap_skip(t) == _gap_skip(s)
            else:
                ok = tt > tag and _gap_skip(t) != _gap_skip(s) or \
                    tt == tag and _gap_skip(t) == _gap_skip(s)
            if ok and tt == tag and not _gap_skip(s) and pos in ("left", "right"):
                ok = t[0] == s[0]
            if ok:
                out.append(t)
        return out

    def weight(present, s, a, nb):
        tag = int(a[-1])
        left = block_neighbor(s, nb.get("left"))
        right = block_neighbor(s, nb.get("right"))
        if not _gap_skip(s):
            block = {p for p in present if p in ("up", "down")}
            if left is not None:
                block.add("left")
            want = _sat_eval(block, s, a[0], left, nb.get("up"))
            if (s[1] == "t") != want:
                return None
        true = not _gap_skip(s) and s[1] == "t"
        if "down" not in present and tag == 1 and "right" in present and right is None:
            return 1 if true or _gap_skip(s) else 0
        if "down" not in present and tag == 2 and "right" not in present:
            return -1 if true else 1 if _gap_skip(s) else 0
        return 1

    tiles = _local_tiles(list(_grid_shapes()), GAP_STATES, GAP_LABELS, candidates, weight)
    return WTS(Signature(GRID_GAMMA, GAP_LABELS), "integer", GAP_STATES, tiles)


# -- random instances --------------------------------------------------------

def random_matrix(n, rng: random.Random, density=0.5):
    return [[1 if rng.random() < density else 0 for _ in range(n)] for _ in range(n)]


def random_adjacency(n, rng: random.Random, density=0.5):
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                adj[i][j] = adj[j][i] = 1
    return adj


def random_cnf(num_vars, num_clauses, rng: random.Random, max_width=3) -> CNF:
    clauses = []
    for _ in range(num_clauses):
        width = rng.randint(1, min(max_width, num_vars))
        vs = rng.sample(range(1, num_vars + 1), width)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CNF(num_vars, clauses)


# -- oracles -----------------------------------------------------------------

def permanent_oracle(matrix, max_size=9) -> int:
    """Sum over permutations of the products of the selected entries."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise GeneratorError("matrix must be square")
    if n > max_size:
        raise GeneratorError(f"{n}x{n} matrix exceeds the oracle limit {max_size}")
    return sum(math.prod(matrix[i][p[i]] for i in range(n))
               for p in itertools.permutations(range(n)))


def clique_oracle(adjacency, max_size=10) -> int:
    """Size of the largest vertex subset whose members are pairwise adjacent."""
    n = len(adjacency)
    if n > max_size:
        raise GeneratorError(f"{n} vertices exceed the oracle limit {max_size}")
    best = 0
    for mask in range(1 << n):
        vs = [v for v in range(n) if mask >> v & 1]
        if len(vs) > best and all(adjacency[a][b] for a, b in itertools.combinations(vs, 2)):
            best = len(vs)
    return best


def count_sat_oracle(phi: CNF, max_vars=20) -> int:
    """Number of satisfying assignments, by truth table."""
    if phi.num_vars > max_vars:
        raise GeneratorError(f"{phi.num_vars} variables exceed the oracle limit {max_vars}")
    return sum(1 for bits in itertools.product((False, True), repeat=phi.num_vars)
               if phi.satisfied_by(bits))
