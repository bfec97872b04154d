"""Path and tree decompositions, and their translation into terms.

Constructions return the term together with ``leaf_origin``: the i-th leaf
(``Node`` op) of the term creates the image of graph vertex
``leaf_origin[i]``.  :func:`check_correspondence` verifies that a term's
semantics is the original graph under this map, which turns isomorphism
checks into a map comparison.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .graph import Graph
from .terms import (Add, ColoredGraph, Forget, KTreeTerm, KWord, Leaf, Node,
                    TermError, Unary, Union, kword_semantics, postorder)
from .wts import ResourceError


class DecompositionError(ValueError):
    """A decomposition is invalid.  ``condition`` is 1, 2, 3 or ``"structure"``."""

    def __init__(self, message, condition=None, witness=None):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


class WidthExceeded(ResourceError):
    pass


# -- path decompositions -----------------------------------------------------

def _as_bags(bags):
    return [frozenset(b) for b in bags]


def validate_path_decomposition(G: Graph, bags: Sequence) -> int:
    """Return the width of ``bags`` or raise :class:`DecompositionError`."""
    bags = _as_bags(bags)
    if not bags:
        raise DecompositionError("a path decomposition needs at least one bag", "structure")
    for idx, b in enumerate(bags):
        if not b:
            raise DecompositionError(f"bag {idx} is empty", "structure", idx)
        bad = [v for v in b if not (isinstance(v, int) and 0 <= v < len(G))]
        if bad:
            raise DecompositionError(f"bag {idx} has unknown vertex {bad[0]!r}", "structure", bad[0])
    where = {}
    for idx, b in enumerate(bags):
        for v in b:
            where.setdefault(v, []).append(idx)
    for v in G.vertices:
        if v not in where:
            raise DecompositionError(f"vertex {v} is in no bag", 1, v)
    for e in G.edges:
        _, s, d = e
        if not any(s in bags[i] for i in where[d]):
            raise DecompositionError(f"edge {e} is in no bag", 2, e)
    for v, idxs in where.items():
        for a, b in zip(idxs, idxs[1:]):
            if b != a + 1:
                raise DecompositionError(
                    f"vertex {v} is in bags {a} and {b} but not in bag {a + 1}", 3, (v, a, a + 1, b))
    return max(len(b) for b in bags) - 1


def kword_from_path_decomposition(G: Graph, bags: Sequence, k: Optional[int] = None):
    """Build a k-word describing ``(G, no active colours)`` from a path decomposition.

    Per bag: new vertices get the least free colours, edges between a new
    vertex and any coloured vertex are added, and colours of vertices absent
    from the next bag are forgotten.  Returns ``(word, leaf_origin)``.
    """
    if len(G) == 0 and not list(bags):
        return KWord(0 if k is None else k, ()), []
    width = validate_path_decomposition(G, bags)
    bags = _as_bags(bags)
    if k is None:
        k = width
    elif width > k:
        raise WidthExceeded(f"decomposition width {width} exceeds k={k}")
    ops, origin = [], []
    color = {}          # vertex -> active colour
    free = list(range(k + 1))
    heapq.heapify(free)
    prev = frozenset()
    for idx, bag in enumerate(bags):
        nxt = bags[idx + 1] if idx + 1 < len(bags) else frozenset()
        new = sorted(bag - prev)
        for u in new:
            c = heapq.heappop(free)
            color[u] = c
            ops.append(Node(c, G.labels[u]))
            origin.append(u)
        adds = set()
        for u in new:
            for g, w in G.out_edges(u):
                if w in bag:
                    adds.add(Add(g, color[u], color[w]))
            for g, w in G.in_edges(u):
                if w in bag:
                    adds.add(Add(g, color[w], color[u]))
        ops.extend(sorted(adds))
        for u in sorted(bag - nxt, key=color.__getitem__):
            c = color.pop(u)
            ops.append(Forget(c))
            heapq.heappush(free, c)
        prev = bag
    return KWord(k, ops), origin


def path_decomposition_from_kword(word: KWord) -> list:
    """Coloured-vertex sets after each prefix (empty ones dropped).

    Vertex ids are those of :func:`kword_semantics` (creation order).
    """
    kword_semantics(word)  # validates
    chi, bags, nxt = {}, [], 0
    for op in word.ops:
        if isinstance(op, Node):
            chi[op.color] = nxt
            nxt += 1
        elif isinstance(op, Forget):
            del chi[op.color]
        if chi:
            bags.append(frozenset(chi.values()))
    if not bags:
        raise TermError("the word describes no vertex")
    return bags


# -- linearizations ----------------------------------------------------------

def _check_order(G: Graph, order):
    order = list(order)
    if sorted(order) != list(G.vertices):
        raise DecompositionError("order is not a permutation of the vertices", "structure")
    return order


def boundedness(G: Graph, order) -> int:
    """The least ``k`` for which ``order`` is k-bounded: the largest number of
    vertices at or before a position that still have a neighbour after it."""
    order = _check_order(G, order)
    pos = {v: i for i, v in enumerate(order)}
    leaving = [0] * (len(order) + 1)
    pending = best = 0
    for i, v in enumerate(order):
        last = max((pos[w] for w in G.neighbors(v)), default=-1)
        if last > i:
            pending += 1
            leaving[last] += 1
        pending -= leaving[i]
        best = max(best, pending)
    return best


def check_k_bounded(G: Graph, order, k: int) -> bool:
    """Whether at most ``k`` vertices up to each ``v`` have a neighbour after ``v``."""
    return boundedness(G, order) <= k


def kword_from_linearization(G: Graph, order, k: Optional[int] = None):
    """Build a k-word from a vertex order, keeping colours only on vertices
    that still miss an edge.  Returns ``(word, leaf_origin)``."""
    order = _check_order(G, order)
    if k is None:
        k = boundedness(G, order)
    pos = {v: i for i, v in enumerate(order)}
    last = {v: max((pos[w] for w in G.neighbors(v)), default=-1) for v in order}
    ops, color = [], {}
    free = list(range(k + 1))
    for i, v in enumerate(order):
        if not free:
            raise WidthExceeded(f"order is not {k}-bounded before vertex {v}")
        c = heapq.heappop(free)
        color[v] = c
        ops.append(Node(c, G.labels[v]))
        adds = [Add(g, color[u], c) for g, u in G.in_edges(v) if pos[u] < i]
        adds += [Add(g, c, color[u]) for g, u in G.out_edges(v) if pos[u] < i]
        ops.extend(sorted(adds))
        done = [u for u in color if last[u] <= i]
        for u in sorted(done, key=color.__getitem__):
            ops.append(Forget(color[u]))
            heapq.heappush(free, color.pop(u))
    return KWord(k, ops), list(order)


def path_decomposition_from_order(G: Graph, order) -> list:
    """Bags ``{v} | {u before v with a neighbour at or after v}`` along ``order``."""
    order = _check_order(G, order)
    pos = {v: i for i, v in enumerate(order)}
    last = {v: max((pos[w] for w in G.neighbors(v)), default=-1) for v in order}
    bags, pending = [], set()
    for i, v in enumerate(order):
        bags.append(frozenset(pending | {v}))
        pending = {u for u in pending | {v} if last[u] > i}
    return bags


def _bfs_order(G: Graph, start):
    seen, order = set(), []
    starts = [start] + [v for v in G.vertices if v != start]
    for s in starts:
        if s in seen:
            continue
        seen.add(s)
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in G.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def _greedy_order(G: Graph, start):
    """Grow the order one vertex at a time, keeping the pending set small."""
    n = len(G)
    placed = [False] * n
    unplaced_nb = [len(G.neighbors(v)) for v in G.vertices]
    dist = {}
    # BFS distances break ties toward sweeping away from the start
    dq = deque([start])
    dist[start] = 0
    while dq:
        v = dq.popleft()
        for w in G.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                dq.append(w)
    order, frontier = [], set()
    nxt_component = 0
    for _ in range(n):
        if not frontier:
            while placed[nxt_component]:
                nxt_component += 1
            cand = [nxt_component] if placed[start] else [start]
        else:
            cand = frontier
        best, best_key = None, None
        for v in cand:
            # pending delta: v joins if it has unplaced neighbours;
            # neighbours whose last unplaced neighbour is v leave
            closes = sum(1 for w in G.neighbors(v) if placed[w] and unplaced_nb[w] == 1)
            joins = 1 if unplaced_nb[v] > 0 else 0
            key = (joins - closes, dist.get(v, n), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        v = best
        placed[v] = True
        order.append(v)
        frontier.discard(v)
        for w in G.neighbors(v):
            unplaced_nb[w] -= 1
            if not placed[w]:
                frontier.add(w)
    return order


def heuristic_linear_order(G: Graph):
    """A vertex order with small boundedness, chosen among a few candidates."""
    n = len(G)
    if n == 0:
        return []
    starts = {0, n - 1, min(G.vertices, key=lambda v: (len(G.neighbors(v)), v))}
    far = _bfs_order(G, 0)[-1]
    starts.add(far)
    candidates = [list(G.vertices)]
    for s in sorted(starts):
        candidates.append(_bfs_order(G, s))
        candidates.append(_greedy_order(G, s))
    best, best_k = None, None
    for order in candidates:
        k = boundedness(G, order)
        if best_k is None or k < best_k:
            best, best_k = order, k
    return best


def heuristic_path_decomposition(G: Graph, target_width: Optional[int] = None):
    order = heuristic_linear_order(G)
    bags = path_decomposition_from_order(G, order)
    width = validate_path_decomposition(G, bags)
    if target_width is not None and width > target_width:
        raise WidthExceeded(f"heuristic path decomposition has width {width} > {target_width}")
    return bags


# -- tree decompositions -----------------------------------------------------

@dataclass(frozen=True)
class TreeDecomposition:
    """A rooted tree of bags; ``children`` maps node id to child ids."""

    bags: dict
    children: dict
    root: object

    def __post_init__(self):
        object.__setattr__(self, "bags", {t: frozenset(b) for t, b in self.bags.items()})
        object.__setattr__(self, "children",
                           {t: tuple(self.children.get(t, ())) for t in self.bags})

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags.values()) - 1

    def preorder(self):
        stack, out = [self.root], []
        while stack:
            t = stack.pop()
            out.append(t)
            stack.extend(reversed(self.children[t]))
        return out

    def parents(self):
        return {c: t for t, cs in self.children.items() for c in cs}


def path_to_tree(bags) -> TreeDecomposition:
    """A chain rooted at the last bag, so bottom-up order is left to right."""
    bags = _as_bags(bags)
    n = len(bags)
    return TreeDecomposition({i: bags[i] for i in range(n)},
                             {i: ((i - 1,) if i > 0 else ()) for i in range(n)}, n - 1)


def validate_tree_decomposition(G: Graph, td: TreeDecomposition) -> int:
    """Return the width of ``td`` or raise :class:`DecompositionError`."""
    if td.root not in td.bags:
        raise DecompositionError(f"root {td.root!r} is not a node", "structure", td.root)
    for t, cs in td.children.items():
        for c in cs:
            if c not in td.bags:
                raise DecompositionError(f"node {t!r} has unknown child {c!r}", "structure", c)
    seen, stack = {td.root}, [td.root]
    while stack:
        t = stack.pop()
        for c in td.children[t]:
            if c in seen:
                raise DecompositionError(f"node {c!r} is reached twice", "structure", c)
            seen.add(c)
            stack.append(c)
    if len(seen) != len(td.bags):
        stray = next(t for t in td.bags if t not in seen)
        raise DecompositionError(f"node {stray!r} is not below the root", "structure", stray)
    for t, b in td.bags.items():
        if not b:
            raise DecompositionError(f"bag of node {t!r} is empty", "structure", t)
        bad = [v for v in b if not (isinstance(v, int) and 0 <= v < len(G))]
        if bad:
            raise DecompositionError(f"node {t!r} has unknown vertex {bad[0]!r}", "structure", bad[0])
    count = {}
    for b in td.bags.values():
        for v in b:
            count[v] = count.get(v, 0) + 1
    for v in G.vertices:
        if v not in count:
            raise DecompositionError(f"vertex {v} is in no bag", 1, v)
    covered = set()
    for b in td.bags.values():
        for v in b:
            for g, w in G.out_edges(v):
                if w in b:
                    covered.add((g, v, w))
    for e in G.edges:
        if e not in covered:
            raise DecompositionError(f"edge {e} is in no bag", 2, e)
    links = {}
    for t, cs in td.children.items():
        for c in cs:
            for v in td.bags[t] & td.bags[c]:
                links[v] = links.get(v, 0) + 1
    for v, n in count.items():
        if links.get(v, 0) != n - 1:
            raise DecompositionError(f"bags containing vertex {v} are not connected", 3, v)
    return td.width


def binarize(td: TreeDecomposition) -> TreeDecomposition:
    """Give every node at most two children by chaining copies of its bag."""
    bags, children = {}, {}
    ids = {}

    def new_id(bag):
        t = len(bags)
        bags[t] = bag
        children[t] = ()
        return t

    for t in td.preorder():
        ids[t] = new_id(td.bags[t])
    for t in td.preorder():
        cs = [ids[c] for c in td.children[t]]
        cur = ids[t]
        while len(cs) > 2:
            copy = new_id(td.bags[t])
            children[cur] = (cs[0], copy)
            cur, cs = copy, cs[1:]
        children[cur] = tuple(cs)
    return TreeDecomposition(bags, children, ids[td.root])


def ktt_from_tree_decomposition(G: Graph, td: TreeDecomposition, k: Optional[int] = None):
    """Build a k-tree-term describing ``(G, no active colours)``.

    Colours are assigned top down: a vertex shared with the parent bag keeps
    its colour, a new one takes the least colour unused in its bag.  Each edge
    is added at the first bag, bottom up, containing both endpoints.  Returns
    ``(term, leaf_origin)``.
    """
    if len(G) == 0:
        raise TermError("the empty graph has no tree term")
    width = validate_tree_decomposition(G, td)
    if k is None:
        k = width
    elif width > k:
        raise WidthExceeded(f"decomposition width {width} exceeds k={k}")
    td = binarize(td)
    parent = td.parents()
    pre = td.preorder()
    color = {}
    for t in pre:
        bag = td.bags[t]
        used = {color[v] for v in bag if v in color}
        avail = (c for c in range(k + 1) if c not in used)
        for v in sorted(bag):
            if v not in color:
                color[v] = next(avail)
    # each edge goes to the first bag, bottom up, holding both endpoints, so
    # its constraint applies as early as possible
    edges_at, placed = {t: [] for t in td.bags}, set()
    for t in reversed(pre):
        bag = td.bags[t]
        for v in bag:
            for g, d in G.out_edges(v):
                if d in bag and (g, v) not in placed:
                    placed.add((g, v))
                    edges_at[t].append(Add(g, color[v], color[d]))

    built, origin_of = {}, {}
    for t in reversed(pre):
        bag = td.bags[t]
        below = set()
        parts = []
        for c in td.children[t]:
            parts.append(built.pop(c))
            below |= td.bags[c]
        for v in sorted(bag - below):
            lf = Leaf(color[v], G.labels[v])
            origin_of[id(lf)] = v
            parts.append(lf)
        term = parts[0]
        for p in parts[1:]:
            term = Union(term, p)
        for op in sorted(edges_at[t]):
            term = Unary(op, term)
        up = td.bags[parent[t]] if t in parent else frozenset()
        for v in sorted(bag - up, key=color.__getitem__):
            term = Unary(Forget(color[v]), term)
        built[t] = term
    root = built[td.root]
    origin = [origin_of[id(n)] for n in postorder(root) if isinstance(n, Leaf)]
    return KTreeTerm(k, root), origin


def min_fill_order(G: Graph):
    """Elimination order by least fill-in; ties broken by degree, then id.

    Returns ``(order, bags)`` where ``bags[i]`` is the eliminated vertex
    together with its neighbours at elimination time.
    """
    adj = {v: set(G.neighbors(v)) for v in G.vertices}

    def fill(v):
        nb = sorted(adj[v])
        return sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b not in adj[a])

    heap = [(fill(v), len(adj[v]), v) for v in G.vertices]
    heapq.heapify(heap)
    current = {v: (f, d) for f, d, v in heap}
    order, bags = [], []
    while heap:
        f, d, v = heapq.heappop(heap)
        if v not in current or current[v] != (f, d):
            continue
        del current[v]
        nb = adj.pop(v)
        order.append(v)
        bags.append(frozenset(nb | {v}))
        for a in nb:
            adj[a].discard(v)
        nbl = sorted(nb)
        for i, a in enumerate(nbl):
            for b in nbl[i + 1:]:
                adj[a].add(b)
                adj[b].add(a)
        touched = set(nb)
        for a in nb:
            touched |= adj[a]
        for u in touched:
            key = (fill(u), len(adj[u]))
            if current.get(u) != key:
                current[u] = key
                heapq.heappush(heap, (key[0], key[1], u))
    return order, bags


def tree_decomposition_from_elimination(G: Graph, order, bags) -> TreeDecomposition:
    """Tree of elimination bags: each bag hangs below the bag of its earliest
    eliminated neighbour; then bags contained in their parent are merged."""
    pos = {v: i for i, v in enumerate(order)}
    parent = {}
    roots = []
    for i, v in enumerate(order):
        rest = [u for u in bags[i] if u != v]
        if rest:
            parent[i] = pos[min(rest, key=pos.__getitem__)]
        else:
            roots.append(i)
    root = roots[-1]
    for r in roots[:-1]:
        parent[r] = root
    children = {i: [] for i in range(len(order))}
    for c, p in parent.items():
        children[p].append(c)
    nodes = {i: bags[i] for i in range(len(order))}
    # contract children whose bag is contained in the parent's
    for c in sorted(parent, key=lambda i: -i):
        if c not in parent:
            continue
        p = parent[c]
        if not nodes[c] <= nodes[p]:
            continue
        children[p].remove(c)
        for g in children.pop(c):
            children[p].append(g)
            parent[g] = p
        del parent[c]
        del nodes[c]
    return TreeDecomposition(nodes, {t: tuple(sorted(cs)) for t, cs in children.items()}, root)


def heuristic_tree_decomposition(G: Graph, target_width: Optional[int] = None) -> TreeDecomposition:
    """Min-fill elimination heuristic, validated before it is returned.

    Min-fill can lose to a plain sweep on long grids, so the heuristic path
    decomposition is tried too and the narrower of the two is kept.
    """
    if len(G) == 0:
        raise DecompositionError("the empty graph has no tree decomposition", "structure")
    order, bags = min_fill_order(G)
    td = tree_decomposition_from_elimination(G, order, bags)
    width = validate_tree_decomposition(G, td)
    chain = path_to_tree(heuristic_path_decomposition(G))
    chain_width = validate_tree_decomposition(G, chain)
    if chain_width < width:
        td, width = chain, chain_width
    if target_width is not None and width > target_width:
        raise WidthExceeded(f"heuristic tree decomposition has width {width} > {target_width}")
    return td


# -- correspondence ----------------------------------------------------------

def check_correspondence(colored: ColoredGraph, leaf_origin, G: Graph) -> bool:
    """Whether ``colored`` is ``(G, no active colours)`` via the leaf map."""
    if colored.chi:
        return False
    H = colored.graph
    if len(colored.leaf_vertex) != len(leaf_origin):
        return False
    to_g = {}
    for h, g in zip(colored.leaf_vertex, leaf_origin):
        if to_g.setdefault(h, g) != g:
            return False
    if len(to_g) != len(H) or sorted(to_g.values()) != list(G.vertices):
        return False
    if any(H.labels[h] != G.labels[g] for h, g in to_g.items()):
        return False
    mapped = sorted((name, to_g[s], to_g[d]) for name, s, d in H.edges)
    return mapped == sorted(G.edges)
