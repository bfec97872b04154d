"""Weighted tiling systems and their brute-force semantics."""

from __future__ import annotations

import itertools
import sys
from typing import Mapping, NamedTuple

from .graph import Graph, Signature
from .semiring import Semiring, make_semiring

DEFAULT_BUDGET = 10**7


class WTSError(ValueError):
    pass


class ResourceError(RuntimeError):
    """An evaluation would exceed its configured budget."""


class BudgetExceeded(ResourceError):
    pass


class Tile(NamedTuple):
    """``(f_in, state, label, f_out)`` with the maps as sorted ``(name, state)`` pairs."""

    f_in: tuple
    state: str
    label: str
    f_out: tuple

    @property
    def type(self):
        return (frozenset(g for g, _ in self.f_in), frozenset(g for g, _ in self.f_out))

    def in_map(self) -> dict:
        return dict(self.f_in)

    def out_map(self) -> dict:
        return dict(self.f_out)


def make_tile(f_in: Mapping, state, label, f_out: Mapping) -> Tile:
    return Tile(tuple(sorted(dict(f_in).items())), state, label,
                tuple(sorted(dict(f_out).items())))


def subtiles(tile: Tile):
    """All tiles obtained by restricting ``f_in`` / ``f_out`` to sub-domains."""
    ins = [tuple(c for c, keep in zip(tile.f_in, mask) if keep)
           for mask in itertools.product((False, True), repeat=len(tile.f_in))]
    outs = [tuple(c for c, keep in zip(tile.f_out, mask) if keep)
            for mask in itertools.product((False, True), repeat=len(tile.f_out))]
    for fi in ins:
        for fo in outs:
            yield Tile(fi, tile.state, tile.label, fo)


class WTS:
    """A weighted tiling system ``(Q, Delta, wgt)`` over a fixed signature.

    ``tiles`` is either a mapping ``Tile -> weight`` or an iterable of
    ``(tile, weight)`` pairs.  Tiles that are not listed have weight zero.
    """

    def __init__(self, signature: Signature, semiring, states, tiles):
        self.signature = signature
        self.semiring: Semiring = make_semiring(semiring)
        self.states = tuple(states)
        if not self.states:
            raise WTSError("a WTS needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise WTSError("duplicate state names")
        pairs = tiles.items() if isinstance(tiles, Mapping) else tiles
        qset, sigma, gamma = set(self.states), set(signature.sigma), set(signature.gamma)
        weights = {}
        for tile, w in pairs:
            if not isinstance(tile, Tile):
                tile = make_tile(*tile)
            if tile in weights:
                raise WTSError(f"duplicate tile {tile}")
            if tile.state not in qset:
                raise WTSError(f"tile {tile}: unknown state {tile.state!r}")
            if tile.label not in sigma:
                raise WTSError(f"tile {tile}: unknown label {tile.label!r}")
            for g, q in tile.f_in + tile.f_out:
                if g not in gamma:
                    raise WTSError(f"tile {tile}: unknown edge name {g!r}")
                if q not in qset:
                    raise WTSError(f"tile {tile}: unknown state {q!r}")
            weights[tile] = self.semiring.check(w)
        self.weights = weights
        self._nonzero_subtiles = None

    def __repr__(self):
        return (f"WTS({self.semiring.name}, |Q|={len(self.states)}, "
                f"|Delta|={len(self.weights)})")

    @property
    def tiles(self):
        return self.weights.keys()

    def weight(self, tile: Tile):
        return self.weights.get(tile, self.semiring.zero())

    def is_listed(self, tile: Tile) -> bool:
        return tile in self.weights

    def nonzero_subtiles(self) -> frozenset:
        """Partial tiles that extend to some listed tile of nonzero weight."""
        if self._nonzero_subtiles is None:
            S = self.semiring
            acc = set()
            for t, w in self.weights.items():
                if not S.is_zero(w):
                    acc.update(subtiles(t))
            self._nonzero_subtiles = frozenset(acc)
        return self._nonzero_subtiles

    def check_graph(self, G: Graph):
        """Raise unless ``G``'s edge names and labels are covered by this WTS."""
        if not set(G.signature.gamma) <= set(self.signature.gamma):
            raise WTSError("graph uses edge names unknown to the WTS")
        if not set(G.labels) <= set(self.signature.sigma):
            raise WTSError("graph uses labels unknown to the WTS")


def _rho_lookup(G: Graph, rho):
    if isinstance(rho, Mapping):
        if set(rho) != set(G.vertices):
            raise WTSError("labeling must be defined exactly on the graph's vertices")
        return rho
    rho = tuple(rho)
    if len(rho) != len(G):
        raise WTSError(f"labeling has {len(rho)} entries for {len(G)} vertices")
    return rho


def tile_of(G: Graph, rho, v) -> Tile:
    """The tile of ``v`` under the labeling ``rho``."""
    G._check_vertex(v)
    return Tile(tuple((g, rho[u]) for g, u in G.in_edges(v)), rho[v], G.labels[v],
                tuple((g, rho[u]) for g, u in G.out_edges(v)))


def is_run(T: WTS, G: Graph, rho) -> bool:
    rho = _rho_lookup(G, rho)
    return all(T.is_listed(tile_of(G, rho, v)) for v in G.vertices)


def run_weight(T: WTS, G: Graph, rho, order=None):
    """Product of the tile weights; zero when ``rho`` is not a run."""
    rho = _rho_lookup(G, rho)
    S = T.semiring
    acc = S.one()
    for v in (G.vertices if order is None else order):
        acc = S.mul(acc, T.weight(tile_of(G, rho, v)))
    return acc


def eval_brute(T: WTS, G: Graph, budget: int = DEFAULT_BUDGET, prune: bool = True):
    """Sum of the weights of all runs of ``T`` on ``G``.

    Labelings are enumerated lexicographically (vertex 0 most significant).
    With ``prune=False`` every one of the ``|Q|^|V|`` labelings is visited and
    the call is refused up front when that count exceeds ``budget``.  With
    ``prune=True`` the same enumeration is done depth first, skipping a
    subtree as soon as some vertex's partially known tile cannot be completed
    to a listed tile or the running product is zero; ``budget`` then bounds
    the number of search nodes visited.
    """
    T.check_graph(G)
    if prune:
        return _brute_pruned(T, G, budget)
    n, Q = len(G), T.states
    if len(Q) ** n > budget:
        raise BudgetExceeded(f"{len(Q)}^{n} labelings exceed the budget of {budget}")
    S = T.semiring
    total = S.zero()
    for rho in itertools.product(Q, repeat=n):
        total = S.add(total, run_weight(T, G, rho))
    return total


def _brute_pruned(T: WTS, G: Graph, budget: int):
    S = T.semiring
    n = len(G)
    if n == 0:
        return S.one()

    # Every restriction of a listed tile, keyed by the full type it came from.
    partial = set()
    for t in T.tiles:
        ty = t.type
        for s in subtiles(t):
            partial.add((ty, s))

    types = [G.vertex_type(v) for v in G.vertices]
    types = [(ty.incoming, ty.outgoing) for ty in types]
    ins = [G.in_edges(v) for v in G.vertices]
    outs = [G.out_edges(v) for v in G.vertices]
    closing = [max((v,) + G.neighbors(v)) for v in G.vertices]
    closes_at = [[] for _ in range(n)]
    for v in G.vertices:
        closes_at[closing[v]].append(v)
    touched_at = []
    for x in G.vertices:
        touched_at.append([w for w in (x,) + G.neighbors(x) if w <= x and closing[w] > x])

    rho = [None] * n
    states = T.states
    visited = 0

    def known_tile(w, x):
        fi = tuple((g, rho[u]) for g, u in ins[w] if u <= x)
        fo = tuple((g, rho[u]) for g, u in outs[w] if u <= x)
        return Tile(fi, rho[w], G.labels[w], fo)

    def dfs(x, acc):
        nonlocal visited
        total = S.zero()
        for q in states:
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"brute-force search exceeded {budget} nodes")
            rho[x] = q
            w_acc = acc
            ok = True
            for w in closes_at[x]:
                tile = known_tile(w, x)
                if tile not in T.weights:
                    ok = False
                    break
                w_acc = S.mul(w_acc, T.weights[tile])
            if not ok or S.is_zero(w_acc):
                continue
            for w in touched_at[x]:
                if (types[w], known_tile(w, x)) not in partial:
                    ok = False
                    break
            if not ok:
                continue
            if x + 1 == n:
                total = S.add(total, w_acc)
            else:
                total = S.add(total, dfs(x + 1, w_acc))
        rho[x] = None
        return total

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, n + 1000))
    try:
        return dfs(0, S.one())
    finally:
        sys.setrecursionlimit(limit)
