"""Shared instances and independent oracles for the test suite."""

import itertools
import random

from wtiling.decomposition import path_decomposition_from_order
from wtiling.graph import Graph, Signature
from wtiling.semiring import make_semiring
from wtiling.terms import Add, Forget, Leaf, Node, Unary, Union
from wtiling.automata import TreeAutomaton
from wtiling.wts import WTS, make_tile, tile_of

# five vertices A..E = 0..4 whose largest clique is {B, C, E}
FIVE_VERTEX_EDGES = ("AB", "BC", "AD", "BE", "AE", "DC", "CE", "BD")


def five_vertex_adjacency():
    adj = [[0] * 5 for _ in range(5)]
    for a, b in FIVE_VERTEX_EDGES:
        i, j = ord(a) - 65, ord(b) - 65
        adj[i][j] = adj[j][i] = 1
    return adj


# a 5x5 0/1 matrix with permanent 1
SAMPLE_MATRIX = [
    [1, 1, 1, 1, 1],
    [0, 1, 0, 0, 0],
    [0, 0, 1, 1, 1],
    [0, 1, 1, 0, 0],
    [0, 0, 0, 1, 0],
]

# a weight-3 clique run on the five-vertex triangular grid, cell {x, y} -> state;
# the marked vertices are B, C, E
CLIQUE_RUN = {
    "A": "empty", "B": "plus", "C": "plus", "D": "empty", "E": "plus",
    "AB": "vminus", "AC": "vminus", "AD": "empty", "AE": "vminus",
    "BC": "plus", "BD": "hminus", "BE": "plus",
    "CD": "hminus", "CE": "plus", "DE": "vminus",
}

# a permanent-system run on SAMPLE_MATRIX (row-major) circling two 0 entries
PERMANENT_RUN = [
    ["nesw", "circle", "senw", "senw", "senw"],
    ["nesw", "nwse", "nesw", "circle", "senw"],
    ["nesw", "nwse", "nesw", "nwse", "circle"],
    ["nesw", "nwse", "circle", "swne", "swne"],
    ["circle", "swne", "swne", "swne", "swne"],
]

ORACLE_SEMIRINGS = ("boolean", "natural", "integer", "rational", "max-plus-int", "min-plus-nat")


def random_bandwidth_graph(rng: random.Random, max_vertices=8, band=3, names=("a", "b"),
                           labels=("x", "y")):
    """A random graph whose edges join vertices at most ``band`` apart in a
    hidden order; returns ``(G, order)`` where the order is ``band``-bounded."""
    n = rng.randint(1, max_vertices)
    order = list(range(n))
    rng.shuffle(order)
    edges, outs, ins = set(), set(), set()
    for _ in range(rng.randint(0, 2 * n)):
        i = rng.randrange(n)
        j = i + rng.randint(1, band)
        if j >= n:
            continue
        g = rng.choice(names)
        s, d = order[i], order[j]
        if rng.random() < 0.5:
            s, d = d, s
        if (g, s) in outs or (g, d) in ins:
            continue
        outs.add((g, s))
        ins.add((g, d))
        edges.add((g, s, d))
    G = Graph(Signature(names, labels), [rng.choice(labels) for _ in range(n)], edges)
    return G, order


def random_wts_for(G: Graph, rng: random.Random, semiring, max_states=3, tiles_per_vertex=6):
    """A random WTS on ``G``'s signature with one planted run and random extra tiles."""
    S = make_semiring(semiring)
    Q = ("p", "q", "r")[:rng.randint(1, max_states)]
    sigma = G.signature.sigma
    tiles = {}
    planted = [rng.choice(Q) for _ in G.vertices]
    for v in G.vertices:
        tiles[tile_of(G, planted, v)] = S.sample(rng)
        ty = G.vertex_type(v)
        for _ in range(tiles_per_vertex):
            t = make_tile({g: rng.choice(Q) for g in ty.incoming}, rng.choice(Q),
                          rng.choice(sigma), {g: rng.choice(Q) for g in ty.outgoing})
            tiles[t] = S.sample(rng)
    return WTS(G.signature, S, Q, tiles)


def random_instance(seed: int, semirings=ORACLE_SEMIRINGS, max_vertices=8):
    """``(T, G, path bags)`` with bags of width at most 3."""
    rng = random.Random(seed)
    G, order = random_bandwidth_graph(rng, max_vertices)
    T = random_wts_for(G, rng, rng.choice(semirings))
    return T, G, path_decomposition_from_order(G, order)


# -- small tree automata -----------------------------------------------------

TA_LEAVES = (Node(0, "a"), Node(1, "b"))
TA_UNARY = (Add("e", 0, 1), Forget(0))


def random_tree_automaton(rng: random.Random, semiring="natural", max_states=4):
    """Explicit random tables; returns ``(automaton, tables)``."""
    S = make_semiring(semiring)
    Q = list(range(rng.randint(1, max_states)))

    def weights():
        return {q: S.sample(rng) for q in rng.sample(Q, rng.randint(0, len(Q)))}

    leaf = {a: weights() for a in TA_LEAVES}
    unary = {(a, q): weights() for a in TA_UNARY for q in Q}
    binary = {(q1, q2): weights() for q1 in Q for q2 in Q}
    final = set(rng.sample(Q, rng.randint(1, len(Q))))
    B = TreeAutomaton(S, leaf=lambda a: leaf[a].items(),
                      unary=lambda a, q: unary[(a, q)].items(),
                      binary=lambda a, q1, q2: binary[(q1, q2)].items(),
                      final=final.__contains__)
    return B, (Q, leaf, unary, binary, final)


def random_term(rng: random.Random, size: int):
    """A random term with exactly ``size`` nodes over the small alphabet."""
    if size == 1:
        a = rng.choice(TA_LEAVES)
        return Leaf(a.color, a.label)
    if size == 2 or rng.random() < 0.5:
        return Unary(rng.choice(TA_UNARY), random_term(rng, size - 1))
    left = rng.randint(1, size - 2)
    return Union(random_term(rng, left), random_term(rng, size - 1 - left))


def tree_runs_oracle(S, tables, root):
    """Sum over every state assignment to the nodes of the product of the
    transition weights, restricted to accepting roots."""
    Q, leaf, unary, binary, final = tables
    nodes = []
    stack = [root]
    while stack:
        n = stack.pop()
        nodes.append(n)
        stack.extend(n.children)
    idx = {id(n): i for i, n in enumerate(nodes)}
    total = S.zero()
    for rho in itertools.product(Q, repeat=len(nodes)):
        if rho[0] not in final:
            continue
        w = S.one()
        for i, n in enumerate(nodes):
            kids = [rho[idx[id(c)]] for c in n.children]
            if isinstance(n, Leaf):
                table = leaf[n.symbol]
            elif isinstance(n, Union):
                table = binary[(kids[0], kids[1])]
            else:
                table = unary[(n.symbol, kids[0])]
            if rho[i] not in table:
                w = S.zero()
                break
            w = S.mul(w, table[rho[i]])
        total = S.add(total, w)
    return total
