"""Weighted word and tree automata equivalent to a WTS on bounded-width graphs.

A state is a partial map from colours to partial tiles, encoded canonically
as a tuple of ``(colour, Tile)`` pairs sorted by colour.  While reading a
term the automaton guesses a state for every vertex; the state records the
part of each active vertex's tile seen so far, and forgetting a colour pays
the weight of the (now complete) tile.

Automata are built lazily: only states reachable on the input are ever
generated.  :func:`materialize_Bk` builds the reachable part explicitly for
inspection and export.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

from .decomposition import (TreeDecomposition, WidthExceeded, heuristic_path_decomposition,
                            heuristic_tree_decomposition, kword_from_path_decomposition,
                            ktt_from_tree_decomposition, path_to_tree,
                            validate_path_decomposition, validate_tree_decomposition)
from .graph import Graph
from .terms import Add, Forget, KTreeTerm, KWord, Leaf, Node, Union, UNION, postorder
from .wts import WTS, BudgetExceeded, Tile, eval_brute

EMPTY = ()


class AutomatonError(ValueError):
    """A letter or term node outside the automaton's alphabet."""


# -- partial tile maps -------------------------------------------------------

def state_domain(delta) -> tuple:
    return tuple(c for c, _ in delta)


def state_get(delta, color) -> Optional[Tile]:
    for c, t in delta:
        if c == color:
            return t
    return None


def _put(delta, color, tile):
    out = [(c, t) for c, t in delta if c != color]
    out.append((color, tile))
    out.sort(key=lambda p: p[0])
    return tuple(out)


def _drop(delta, color):
    return tuple((c, t) for c, t in delta if c != color)


def _extend(pairs, name, q):
    return tuple(sorted(pairs + ((name, q),)))


def _names(pairs):
    return {g for g, _ in pairs}


class _Alphabet:
    def __init__(self, T: WTS, k: int):
        self.k = k
        self.sigma = set(T.signature.sigma)
        self.gamma = set(T.signature.gamma)

    def check(self, letter):
        colors = ()
        if isinstance(letter, Node):
            if letter.label not in self.sigma:
                raise AutomatonError(f"label {letter.label!r} not in the alphabet")
            colors = (letter.color,)
        elif isinstance(letter, Forget):
            colors = (letter.color,)
        elif isinstance(letter, Add):
            if letter.name not in self.gamma:
                raise AutomatonError(f"edge name {letter.name!r} not in the alphabet")
            colors = (letter.src, letter.dst)
        else:
            raise AutomatonError(f"not a letter: {letter!r}")
        for c in colors:
            if not (isinstance(c, int) and 0 <= c <= self.k):
                raise AutomatonError(f"colour {c!r} outside [0, {self.k}]")


def _allowed(T: WTS, prune: bool):
    if not prune:
        return None
    return T.nonzero_subtiles()


def _step(T: WTS, allowed, delta, letter):
    S = T.semiring
    if isinstance(letter, Node):
        if state_get(delta, letter.color) is not None:
            return []
        out = []
        for q in T.states:
            tile = Tile(EMPTY, q, letter.label, EMPTY)
            if allowed is None or tile in allowed:
                out.append((_put(delta, letter.color, tile), S.one()))
        return out
    if isinstance(letter, Forget):
        tile = state_get(delta, letter.color)
        if tile is None:
            return []
        w = T.weight(tile)
        if S.is_zero(w):
            return []
        return [(_drop(delta, letter.color), w)]
    i, j, g = letter.src, letter.dst, letter.name
    if i == j:
        return []
    ti, tj = state_get(delta, i), state_get(delta, j)
    if ti is None or tj is None or g in _names(ti.f_out) or g in _names(tj.f_in):
        return []
    ni = ti._replace(f_out=_extend(ti.f_out, g, tj.state))
    nj = tj._replace(f_in=_extend(tj.f_in, g, ti.state))
    if allowed is not None and (ni not in allowed or nj not in allowed):
        return []
    return [(_put(_put(delta, i, ni), j, nj), S.one())]


def word_transition(T: WTS, k: int, delta, letter, prune: bool = True):
    """Successors ``(delta', weight)`` of ``delta`` on ``letter``.

    Node letters open a fresh tile for every state; Forget pays the weight of
    the closed tile (unlisted or zero-weight tiles yield no successor); Add
    records the edge in both endpoint tiles.  With ``prune`` partial tiles
    that extend to no nonzero listed tile are dropped immediately.
    """
    _Alphabet(T, k).check(letter)
    return _step(T, _allowed(T, prune), delta, letter)


def _merge(T: WTS, allowed, d1, d2):
    t2 = dict(d2)
    out = []
    for c, a in d1:
        b = t2.pop(c, None)
        if b is None:
            out.append((c, a))
            continue
        if a.state != b.state or a.label != b.label:
            return None
        if _names(a.f_in) & _names(b.f_in) or _names(a.f_out) & _names(b.f_out):
            return None
        t = Tile(tuple(sorted(a.f_in + b.f_in)), a.state, a.label,
                 tuple(sorted(a.f_out + b.f_out)))
        if allowed is not None and t not in allowed:
            return None
        out.append((c, t))
    out.extend(t2.items())
    out.sort(key=lambda p: p[0])
    return tuple(out)


def tree_transition(T: WTS, k: int, symbol, children=(), prune: bool = True):
    """Successors of a tree node.

    ``symbol`` is a ``Node`` (leaf, no children), an ``Add``/``Forget`` (one
    child state) or ``UNION`` (two child states).
    """
    allowed = _allowed(T, prune)
    children = tuple(children)
    if symbol == UNION:
        if len(children) != 2:
            raise AutomatonError("union needs two child states")
        merged = _merge(T, allowed, children[0], children[1])
        return [] if merged is None else [(merged, T.semiring.one())]
    _Alphabet(T, k).check(symbol)
    if isinstance(symbol, Node):
        if children:
            raise AutomatonError("a leaf has no children")
        return _step(T, allowed, EMPTY, symbol)
    if len(children) != 1:
        raise AutomatonError(f"{type(symbol).__name__} needs one child state")
    return _step(T, allowed, children[0], symbol)


# -- generic automata --------------------------------------------------------

@dataclass
class WordAutomaton:
    """A weighted word automaton given by its transition function.

    ``step(state, letter)`` returns ``(state', weight)`` pairs; ``final`` is a
    predicate on states.
    """

    semiring: object
    initial: tuple
    final: Callable
    step: Callable


@dataclass
class TreeAutomaton:
    """A bottom-up weighted tree automaton given by transition functions."""

    semiring: object
    leaf: Callable          # symbol -> [(q, w)]
    unary: Callable         # symbol, q -> [(q', w)]
    binary: Callable        # symbol, q1, q2 -> [(q, w)]
    final: Callable
    pairs: Optional[Callable] = None   # val1, val2 -> candidate (q1, q2) pairs


class LazyBk:
    """The B_k automaton of a WTS, built on demand with memoised transitions."""

    def __init__(self, T: WTS, k: int, prune: bool = True):
        self.T, self.k, self.prune = T, k, prune
        self.semiring = T.semiring
        self.allowed = _allowed(T, prune)
        self.alphabet = _Alphabet(T, k)
        self._cache = {}
        self.seen = {EMPTY}

    def step(self, delta, letter):
        key = (delta, letter)
        hit = self._cache.get(key)
        if hit is None:
            self.alphabet.check(letter)
            hit = _step(self.T, self.allowed, delta, letter)
            self._cache[key] = hit
            self.seen.update(q for q, _ in hit)
        return hit

    def merge(self, d1, d2):
        key = (UNION, d1, d2)
        hit = self._cache.get(key)
        if hit is None:
            m = _merge(self.T, self.allowed, d1, d2)
            hit = [] if m is None else [(m, self.semiring.one())]
            self._cache[key] = hit
            self.seen.update(q for q, _ in hit)
        return hit

    def word_automaton(self) -> WordAutomaton:
        return WordAutomaton(self.semiring, (EMPTY,), lambda q: q == EMPTY, self.step)

    def tree_automaton(self) -> TreeAutomaton:
        return TreeAutomaton(self.semiring,
                             leaf=lambda sym: self.step(EMPTY, sym),
                             unary=lambda sym, q: self.step(q, sym),
                             binary=lambda sym, a, b: self.merge(a, b),
                             final=lambda q: q == EMPTY,
                             pairs=_join_pairs)


def _join_pairs(val1, val2):
    """Pairs of child states agreeing on state and label at shared colours."""
    if not val1 or not val2:
        return []
    d1 = state_domain(next(iter(val1)))
    d2 = state_domain(next(iter(val2)))
    shared = sorted(set(d1) & set(d2))
    if not shared:
        return itertools.product(val1, val2)

    def key(delta):
        m = dict(delta)
        return tuple((m[c].state, m[c].label) for c in shared)

    buckets = {}
    for q2 in val2:
        buckets.setdefault(key(q2), []).append(q2)
    return [(q1, q2) for q1 in val1 for q2 in buckets.get(key(q1), ())]


# -- evaluation --------------------------------------------------------------

def _accumulate(S, vec, q, v):
    cur = vec.get(q)
    vec[q] = v if cur is None else S.add(cur, v)


def _prune_zeros(S, vec):
    return {q: v for q, v in vec.items() if not S.is_zero(v)}


def eval_word_automaton(B: WordAutomaton, word, trace=None):
    """``I . mu(w) . F`` computed as a sparse row vector folded left to right.

    ``trace``, if a list, receives the state vector after every letter.
    """
    S = B.semiring
    ops = word.ops if isinstance(word, KWord) else word
    vec = {q: S.one() for q in B.initial}
    for letter in ops:
        nxt = {}
        for q, v in vec.items():
            for q2, w in B.step(q, letter):
                _accumulate(S, nxt, q2, S.mul(v, w))
        vec = _prune_zeros(S, nxt)
        if trace is not None:
            trace.append(dict(vec))
    return S.sum(v for q, v in vec.items() if B.final(q))


def tree_eval_vector(B: TreeAutomaton, root):
    """Value vector at the root: for each state, the sum of the weights of the
    runs reaching it.  Bottom up, without recursion."""
    S = B.semiring
    stack = []
    for node in postorder(root):
        if isinstance(node, Leaf):
            val = {}
            for q, w in B.leaf(node.symbol):
                _accumulate(S, val, q, w)
        elif isinstance(node, Union):
            val2 = stack.pop()
            val1 = stack.pop()
            val = {}
            pairs = B.pairs(val1, val2) if B.pairs else itertools.product(val1, val2)
            for q1, q2 in pairs:
                for q, w in B.binary(node.symbol, q1, q2):
                    _accumulate(S, val, q, S.mul(S.mul(val1[q1], w), val2[q2]))
        elif len(node.children) == 1:
            val1 = stack.pop()
            val = {}
            for q1, v in val1.items():
                for q, w in B.unary(node.symbol, q1):
                    _accumulate(S, val, q, S.mul(v, w))
        else:
            raise AutomatonError(f"unsupported term node {node!r}")
        stack.append(_prune_zeros(S, val))
    return stack.pop()


def tree_eval(B: TreeAutomaton, term):
    """Sum over accepting states of :func:`tree_eval_vector`."""
    root = term.root if isinstance(term, KTreeTerm) else term
    S = B.semiring
    val = tree_eval_vector(B, root)
    return S.sum(v for q, v in val.items() if B.final(q))


@dataclass
class EvalResult:
    value: object
    method: str
    width: Optional[int] = None
    term_size: Optional[int] = None
    reachable_states: Optional[int] = None
    wall_time_ms: float = 0.0

    def stats(self) -> dict:
        return {"method": self.method, "width_used": self.width, "term_size": self.term_size,
                "reachable_states": self.reachable_states,
                "wall_time_ms": round(self.wall_time_ms, 3)}


def _check_width(width, max_width):
    if max_width is not None and width > max_width:
        raise WidthExceeded(f"decomposition width {width} exceeds the limit {max_width}")


def run_pw(T: WTS, G: Graph, decomposition=None, max_width=None, prune=True) -> EvalResult:
    """Path-width pipeline: path decomposition, k-word, lazy word B_k."""
    t0 = time.perf_counter()
    T.check_graph(G)
    S = T.semiring
    if len(G) == 0:
        return EvalResult(S.one(), "pathwidth", 0, 0, 1, (time.perf_counter() - t0) * 1e3)
    if decomposition is None:
        bags = heuristic_path_decomposition(G, max_width)
    else:
        bags = list(decomposition)
        _check_width(validate_path_decomposition(G, bags), max_width)
    word, _ = kword_from_path_decomposition(G, bags)
    B = LazyBk(T, word.k, prune)
    value = eval_word_automaton(B.word_automaton(), word)
    return EvalResult(value, "pathwidth", word.k, len(word), len(B.seen),
                      (time.perf_counter() - t0) * 1e3)


def run_tw(T: WTS, G: Graph, decomposition=None, max_width=None, prune=True) -> EvalResult:
    """Tree-width pipeline: tree decomposition, binarised k-tree-term, lazy tree B_k."""
    t0 = time.perf_counter()
    T.check_graph(G)
    S = T.semiring
    if len(G) == 0:
        return EvalResult(S.one(), "treewidth", 0, 0, 1, (time.perf_counter() - t0) * 1e3)
    if decomposition is None:
        td = heuristic_tree_decomposition(G, max_width)
    else:
        td = decomposition if isinstance(decomposition, TreeDecomposition) \
            else path_to_tree(decomposition)
        _check_width(validate_tree_decomposition(G, td), max_width)
    term, _ = ktt_from_tree_decomposition(G, td)
    B = LazyBk(T, term.k, prune)
    value = tree_eval(B.tree_automaton(), term)
    return EvalResult(value, "treewidth", term.k, len(term), len(B.seen),
                      (time.perf_counter() - t0) * 1e3)


def eval_pw(T: WTS, G: Graph, decomposition=None, max_width=None, prune=True):
    """The value of ``T`` on ``G`` via a path decomposition (heuristic if omitted)."""
    return run_pw(T, G, decomposition, max_width, prune).value


def eval_tw(T: WTS, G: Graph, decomposition=None, max_width=None, prune=True):
    """The value of ``T`` on ``G`` via a tree decomposition (min-fill if omitted)."""
    return run_tw(T, G, decomposition, max_width, prune).value


METHODS = ("brute", "pathwidth", "treewidth")


def evaluate(T: WTS, G: Graph, method="treewidth", decomposition=None, max_width=None,
             budget=None) -> EvalResult:
    if method == "brute":
        t0 = time.perf_counter()
        value = eval_brute(T, G) if budget is None else eval_brute(T, G, budget)
        return EvalResult(value, "brute", wall_time_ms=(time.perf_counter() - t0) * 1e3)
    if method == "pathwidth":
        return run_pw(T, G, decomposition, max_width)
    if method == "treewidth":
        return run_tw(T, G, decomposition, max_width)
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


# -- materialisation ---------------------------------------------------------

def alphabet(T: WTS, k: int):
    """All letters of the k-alphabet (adds between equal colours are omitted)."""
    letters = [Node(i, a) for i in range(k + 1) for a in T.signature.sigma]
    letters += [Forget(i) for i in range(k + 1)]
    letters += [Add(g, i, j) for g in T.signature.gamma
                for i in range(k + 1) for j in range(k + 1) if i != j]
    return letters


@dataclass
class MaterializedAutomaton:
    """Explicit reachable part of B_k.

    ``transitions`` holds ``(sources, letter, target, weight)`` with
    ``sources`` a tuple of state indices: empty for tree leaves, one state
    for word letters and unary nodes, two for unions.
    """

    kind: str
    semiring: object
    states: list
    initial: list
    final: list
    transitions: list

    def index(self):
        return {q: i for i, q in enumerate(self.states)}

    def word_automaton(self) -> WordAutomaton:
        table = {}
        for src, letter, dst, w in self.transitions:
            table.setdefault((self.states[src[0]], letter), []).append((self.states[dst], w))
        init = tuple(self.states[i] for i in self.initial)
        fin = {self.states[i] for i in self.final}
        return WordAutomaton(self.semiring, init, fin.__contains__,
                             lambda q, a: table.get((q, a), ()))

    def tree_automaton(self) -> TreeAutomaton:
        leaf, un, bi = {}, {}, {}
        st = self.states
        for src, letter, dst, w in self.transitions:
            if len(src) == 0:
                leaf.setdefault(letter, []).append((st[dst], w))
            elif len(src) == 1:
                un.setdefault((letter, st[src[0]]), []).append((st[dst], w))
            else:
                bi.setdefault((st[src[0]], st[src[1]]), []).append((st[dst], w))
        fin = {st[i] for i in self.final}
        return TreeAutomaton(self.semiring,
                             leaf=lambda a: leaf.get(a, ()),
                             unary=lambda a, q: un.get((a, q), ()),
                             binary=lambda a, q1, q2: bi.get((q1, q2), ()),
                             final=fin.__contains__)

    def matrix(self, letter) -> dict:
        """Sparse transition matrix ``{(i, j): weight}`` of a word letter."""
        S = self.semiring
        m = {}
        for src, a, dst, w in self.transitions:
            if a == letter and len(src) == 1:
                key = (src[0], dst)
                m[key] = S.add(m[key], w) if key in m else w
        return m


def matrix_product(S, a: dict, b: dict) -> dict:
    """Product of sparse square matrices, zero entries dropped."""
    rows = {}
    for (i, j), w in b.items():
        rows.setdefault(i, []).append((j, w))
    out = {}
    for (i, m), v in a.items():
        for j, w in rows.get(m, ()):
            _accumulate(S, out, (i, j), S.mul(v, w))
    return _prune_zeros(S, out)


def materialize_Bk(T: WTS, k: int, kind: str = "word", budget: int = 10**6,
                   prune: bool = True) -> MaterializedAutomaton:
    """Close the empty state under all transitions; refuse beyond ``budget`` states."""
    if kind not in ("word", "tree"):
        raise ValueError("kind must be 'word' or 'tree'")
    B = LazyBk(T, k, prune)
    letters = alphabet(T, k)
    index, states, transitions = {}, [], []

    def intern(q):
        if q not in index:
            if len(states) >= budget:
                raise BudgetExceeded(f"B_k has more than {budget} reachable states")
            index[q] = len(states)
            states.append(q)
            queue.append(q)
        return index[q]

    queue = deque()
    if kind == "word":
        intern(EMPTY)
        while queue:
            q = queue.popleft()
            i = index[q]
            for a in letters:
                for q2, w in B.step(q, a):
                    transitions.append(((i,), a, intern(q2), w))
        fin = [index[EMPTY]]
        return MaterializedAutomaton("word", T.semiring, states, [index[EMPTY]], fin, transitions)

    for a in letters:
        if isinstance(a, Node):
            for q, w in B.step(EMPTY, a):
                transitions.append(((), a, intern(q), w))
    done = []
    while queue:
        q = queue.popleft()
        i = index[q]
        for a in letters:
            if not isinstance(a, Node):
                for q2, w in B.step(q, a):
                    transitions.append(((i,), a, intern(q2), w))
        # unions with every state processed so far, in both orders
        done.append(q)
        for p in done:
            for x, y in ((p, q), (q, p)) if p != q else ((q, q),):
                for q2, w in B.merge(x, y):
                    transitions.append(((index[x], index[y]), UNION, intern(q2), w))
    fin = [index[EMPTY]] if EMPTY in index else []
    return MaterializedAutomaton("tree", T.semiring, states, [], fin, transitions)
