"""k-words and k-tree-terms: algebraic descriptions of coloured graphs.

A k-word is a sequence of operations over the colours ``0..k``:

* ``Node(i, a)`` creates an ``a``-labelled vertex carrying colour ``i``;
* ``Add(name, i, j)`` adds a ``name``-edge from the vertex coloured ``i`` to
  the vertex coloured ``j``;
* ``Forget(i)`` drops colour ``i``.

Tree terms add a binary :class:`Union` that glues two coloured graphs along
their shared colours.  Terms can be thousands of levels deep, so every
traversal here is iterative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union as _U

from .graph import Graph, GraphError, Signature


class TermError(ValueError):
    """A term violates well-formedness; ``position`` is 1-based."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"position {position}: {message}")
        self.position = position
        self.reason = message


class Node(NamedTuple):
    color: int
    label: str


class Add(NamedTuple):
    name: str
    src: int
    dst: int


class Forget(NamedTuple):
    color: int


Letter = _U[Node, Add, Forget]

UNION = "union"


@dataclass(frozen=True)
class KWord:
    k: int
    ops: tuple

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def __len__(self):
        return len(self.ops)


# -- tree terms --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Leaf:
    color: int
    label: str

    @property
    def symbol(self):
        return Node(self.color, self.label)

    @property
    def children(self):
        return ()


@dataclass(frozen=True, eq=False)
class Unary:
    """``Add`` or ``Forget`` applied on top of ``child``."""

    op: _U[Add, Forget]
    child: object

    @property
    def symbol(self):
        return self.op

    @property
    def children(self):
        return (self.child,)

    def __repr__(self):
        return f"Unary({self.op!r}, ...)"


@dataclass(frozen=True, eq=False)
class Union:
    left: object
    right: object

    symbol = UNION

    @property
    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return "Union(..., ...)"


def leaf(color, label):
    return Leaf(color, label)


def add(name, src, dst, child):
    return Unary(Add(name, src, dst), child)


def forget(color, child):
    return Unary(Forget(color), child)


def union(left, right):
    return Union(left, right)


@dataclass(frozen=True, eq=False)
class KTreeTerm:
    k: int
    root: object

    def __len__(self):
        return sum(1 for _ in postorder(self.root))


def postorder(root):
    """Yield the nodes of a term, children (left to right) before parents."""
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        kids = node.children
        if expanded or not kids:
            yield node
        else:
            stack.append((node, True))
            for c in reversed(kids):
                stack.append((c, False))


def leaves(root):
    return [n for n in postorder(root) if isinstance(n, Leaf)]


def term_equal(a, b) -> bool:
    """Structural equality of two term trees, without recursion."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if type(x) is not type(y) or x.symbol != y.symbol:
            return False
        stack.extend(zip(x.children, y.children))
    return True


def kword_to_ktt(word: KWord) -> KTreeTerm:
    """The caterpillar term of a word: each ``Node`` after the first is glued on with ``Union``."""
    term = None
    for pos, op in enumerate(word.ops, 1):
        if isinstance(op, Node):
            lf = Leaf(op.color, op.label)
            term = lf if term is None else Union(term, lf)
        else:
            if term is None:
                raise TermError("operation before the first vertex", pos)
            term = Unary(op, term)
    if term is None:
        raise TermError("the empty word has no tree term")
    return KTreeTerm(word.k, term)


# -- semantics ---------------------------------------------------------------

@dataclass
class ColoredGraph:
    """``graph`` plus the active colouring ``chi``; ``leaf_vertex[i]`` is the
    vertex created by the i-th leaf (``Node`` op), in left-to-right order."""

    graph: Graph
    chi: dict
    leaf_vertex: tuple = field(default=())


@dataclass(frozen=True)
class Verdict:
    ok: bool
    position: Optional[int] = None
    message: str = ""

    def __bool__(self):
        return self.ok


def _check_color(c, k, pos):
    if not (isinstance(c, int) and 0 <= c <= k):
        raise TermError(f"colour {c!r} outside [0, {k}]", pos)


def _make_signature(signature, names, labels):
    if signature is not None:
        return signature
    gamma = tuple(sorted(names)) or ("edge",)
    sigma = tuple(sorted(labels)) or ("a",)
    return Signature(gamma, sigma)


def _build(signature, labels, edges):
    try:
        return Graph(signature, labels, edges)
    except GraphError as exc:
        raise TermError(f"the described graph is invalid: {exc}") from exc


def _simulate_kword(word: KWord, build: bool, signature=None):
    k = word.k
    chi = {}
    labels = []
    edges = set()
    for pos, op in enumerate(word.ops, 1):
        if isinstance(op, Node):
            _check_color(op.color, k, pos)
            if op.color in chi:
                raise TermError(f"node on active colour {op.color}", pos)
            chi[op.color] = len(labels)
            labels.append(op.label)
        elif isinstance(op, Forget):
            _check_color(op.color, k, pos)
            if op.color not in chi:
                raise TermError(f"forget of inactive colour {op.color}", pos)
            del chi[op.color]
        elif isinstance(op, Add):
            _check_color(op.src, k, pos)
            _check_color(op.dst, k, pos)
            if op.src == op.dst:
                raise TermError("add between equal colours", pos)
            for c in (op.src, op.dst):
                if c not in chi:
                    raise TermError(f"add on inactive colour {c}", pos)
            e = (op.name, chi[op.src], chi[op.dst])
            if e in edges:
                raise TermError(f"duplicate {op.name!r}-edge", pos)
            edges.add(e)
        else:
            raise TermError(f"unknown operation {op!r}", pos)
    if not build:
        return None
    sig = _make_signature(signature, {e[0] for e in edges}, set(labels))
    return ColoredGraph(_build(sig, labels, edges), dict(chi), tuple(range(len(labels))))


def kword_semantics(word: KWord, signature: Signature = None) -> ColoredGraph:
    """The coloured graph denoted by a well-formed k-word.

    Vertex ids follow creation order.  Raises :class:`TermError` at the
    first ill-formed position.
    """
    return _simulate_kword(word, True, signature)


def is_well_formed_kword(word: KWord) -> Verdict:
    try:
        _simulate_kword(word, False)
    except TermError as exc:
        return Verdict(False, exc.position, exc.reason)
    return Verdict(True)


def _simulate_ktt(term: KTreeTerm, build: bool, signature=None):
    k = term.k
    parent = []        # union-find over leaf-created vertices
    vlabel = []
    edges = []
    results = []       # stack of (chi, active edges) per finished subterm

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for pos, node in enumerate(postorder(term.root), 1):
        if isinstance(node, Leaf):
            _check_color(node.color, k, pos)
            v = len(parent)
            parent.append(v)
            vlabel.append(node.label)
            results.append(({node.color: v}, set()))
        elif isinstance(node, Unary):
            chi, act = results[-1]
            op = node.op
            if isinstance(op, Forget):
                _check_color(op.color, k, pos)
                if op.color not in chi:
                    raise TermError(f"forget of inactive colour {op.color}", pos)
                del chi[op.color]
                act.difference_update([e for e in act if op.color in (e[1], e[2])])
            elif isinstance(op, Add):
                _check_color(op.src, k, pos)
                _check_color(op.dst, k, pos)
                if op.src == op.dst:
                    raise TermError("add between equal colours", pos)
                for c in (op.src, op.dst):
                    if c not in chi:
                        raise TermError(f"add on inactive colour {c}", pos)
                key = (op.name, op.src, op.dst)
                if key in act:
                    raise TermError(f"duplicate {op.name!r}-edge", pos)
                act.add(key)
                edges.append((op.name, chi[op.src], chi[op.dst]))
            else:
                raise TermError(f"unknown unary operation {op!r}", pos)
        elif isinstance(node, Union):
            chi2, act2 = results.pop()
            chi1, act1 = results.pop()
            for c in chi1.keys() & chi2.keys():
                a1, a2 = vlabel[find(chi1[c])], vlabel[find(chi2[c])]
                if a1 != a2:
                    raise TermError(f"label clash at shared colour {c}: {a1!r} vs {a2!r}", pos)
            dup = act1 & act2
            if dup:
                name, i, j = min(dup)
                raise TermError(f"{name!r}-edge between colours {i},{j} in both operands", pos)
            for c in chi1.keys() & chi2.keys():
                parent[find(chi2[c])] = find(chi1[c])
            chi1.update((c, v) for c, v in chi2.items() if c not in chi1)
            act1 |= act2
            results.append((chi1, act1))
        else:
            raise TermError(f"unknown term node {node!r}", pos)

    if not build:
        return None
    chi, _ = results.pop()
    renum = {}
    leaf_vertex = []
    for x in range(len(parent)):
        r = find(x)
        if r not in renum:
            renum[r] = len(renum)
        leaf_vertex.append(renum[r])
    labels = [None] * len(renum)
    for r, v in renum.items():
        labels[v] = vlabel[r]
    final_edges = [(g, renum[find(s)], renum[find(d)]) for g, s, d in edges]
    sig = _make_signature(signature, {e[0] for e in final_edges}, set(labels))
    graph = _build(sig, labels, final_edges)
    if len(graph.edges) != len(final_edges):
        raise TermError("the same edge is added twice")
    return ColoredGraph(graph, {c: renum[find(v)] for c, v in chi.items()}, tuple(leaf_vertex))


def ktt_semantics(term: KTreeTerm, signature: Signature = None) -> ColoredGraph:
    """The coloured graph of a well-formed k-tree-term.

    Vertices are numbered by their first leaf in left-to-right order.
    """
    return _simulate_ktt(term, True, signature)


def is_well_formed_ktt(term: KTreeTerm) -> Verdict:
    """Check the three well-formedness conditions bottom up.

    ``position`` is the 1-based post-order index of the offending node.
    """
    try:
        _simulate_ktt(term, False)
    except TermError as exc:
        return Verdict(False, exc.position, exc.reason)
    return Verdict(True)
