"""JSON file formats for graphs, tiling systems, terms, decompositions and automata.

Every ``*_to_json`` returns plain data that ``*_from_json`` accepts back;
weights are written in the semiring's text syntax.  Parsers raise
:class:`FormatError` with a short description of the first problem found.
"""

from __future__ import annotations

import json
import sys
from typing import Any

from .automata import MaterializedAutomaton
from .decomposition import TreeDecomposition
from .graph import Graph, GraphError, Signature
from .semiring import SemiringError
from .terms import UNION, Add, Forget, KTreeTerm, KWord, Leaf, Node, Unary, Union, postorder
from .wts import WTS, Tile, WTSError


class FormatError(ValueError):
    pass


# -- files -------------------------------------------------------------------

def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


def write_text(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None


def load(path: str):
    return loads(read_text(path))


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def dump(doc, path: str):
    write_text(path, dumps(doc))


def _field(doc, key, kind, where):
    if not isinstance(doc, dict):
        raise FormatError(f"{where}: expected an object")
    if key not in doc:
        raise FormatError(f"{where}: missing field {key!r}")
    value = doc[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise FormatError(f"{where}: field {key!r} has the wrong type")
    return value


def _strings(values, where):
    if not all(isinstance(x, str) for x in values):
        raise FormatError(f"{where}: expected a list of strings")
    return tuple(values)


# -- graphs ------------------------------------------------------------------

def graph_to_json(G: Graph) -> dict:
    return {
        "sigma": list(G.signature.sigma),
        "gamma": list(G.signature.gamma),
        "vertices": [{"id": v, "label": a} for v, a in enumerate(G.labels)],
        "edges": [{"name": g, "src": s, "dst": d} for g, s, d in sorted(G.edges)],
    }


def graph_from_json(doc) -> Graph:
    sigma = _strings(_field(doc, "sigma", list, "graph"), "graph.sigma")
    gamma = _strings(_field(doc, "gamma", list, "graph"), "graph.gamma")
    vertices = _field(doc, "vertices", list, "graph")
    edges = _field(doc, "edges", list, "graph")
    labels = [None] * len(vertices)
    for i, v in enumerate(vertices):
        vid = _field(v, "id", int, f"graph.vertices[{i}]")
        label = _field(v, "label", str, f"graph.vertices[{i}]")
        if not 0 <= vid < len(vertices) or labels[vid] is not None:
            raise FormatError(f"graph.vertices[{i}]: ids must be 0..{len(vertices) - 1}, each once")
        labels[vid] = label
    triples = []
    for i, e in enumerate(edges):
        where = f"graph.edges[{i}]"
        triples.append((_field(e, "name", str, where), _field(e, "src", int, where),
                        _field(e, "dst", int, where)))
    try:
        return Graph(Signature(gamma, sigma), labels, triples)
    except GraphError as exc:
        raise FormatError(f"invalid graph: {exc}") from None


# -- tiling systems ----------------------------------------------------------

def wts_to_json(T: WTS) -> dict:
    S = T.semiring
    return {
        "semiring": S.name,
        "sigma": list(T.signature.sigma),
        "gamma": list(T.signature.gamma),
        "states": list(T.states),
        "tiles": [{"in": dict(t.f_in), "state": t.state, "label": t.label,
                   "out": dict(t.f_out), "weight": S.render(w)}
                  for t, w in T.weights.items()],
    }


def wts_from_json(doc) -> WTS:
    semiring = _field(doc, "semiring", str, "wts")
    sigma = _strings(_field(doc, "sigma", list, "wts"), "wts.sigma")
    gamma = _strings(_field(doc, "gamma", list, "wts"), "wts.gamma")
    states = _strings(_field(doc, "states", list, "wts"), "wts.states")
    try:
        sig = Signature(gamma, sigma)
        T = WTS(sig, semiring, states, ())
    except (GraphError, SemiringError, WTSError) as exc:
        raise FormatError(f"invalid WTS: {exc}") from None
    S = T.semiring
    tiles = []
    for i, t in enumerate(_field(doc, "tiles", list, "wts")):
        where = f"wts.tiles[{i}]"
        f_in = _field(t, "in", dict, where)
        f_out = _field(t, "out", dict, where)
        weight = _field(t, "weight", str, where)
        try:
            w = S.parse(weight)
        except SemiringError as exc:
            raise FormatError(f"{where}: {exc}") from None
        tiles.append((Tile(tuple(sorted(f_in.items())), _field(t, "state", str, where),
                           _field(t, "label", str, where), tuple(sorted(f_out.items()))), w))
    try:
        return WTS(sig, semiring, states, tiles)
    except (SemiringError, WTSError) as exc:
        raise FormatError(f"invalid WTS: {exc}") from None


# -- terms -------------------------------------------------------------------

def letter_to_json(letter) -> Any:
    if isinstance(letter, Node):
        return {"op": "node", "color": letter.color, "label": letter.label}
    if isinstance(letter, Add):
        return {"op": "add", "name": letter.name, "src": letter.src, "dst": letter.dst}
    if isinstance(letter, Forget):
        return {"op": "forget", "color": letter.color}
    if letter == UNION:
        return {"op": "union"}
    raise FormatError(f"unknown letter {letter!r}")


def letter_from_json(doc, where="letter"):
    op = _field(doc, "op", str, where)
    if op == "node":
        return Node(_field(doc, "color", int, where), _field(doc, "label", str, where))
    if op == "add":
        return Add(_field(doc, "name", str, where), _field(doc, "src", int, where),
                   _field(doc, "dst", int, where))
    if op == "forget":
        return Forget(_field(doc, "color", int, where))
    if op == "union":
        return UNION
    raise FormatError(f"{where}: unknown op {op!r}")


def kword_to_json(word: KWord) -> dict:
    return {"k": word.k, "ops": [letter_to_json(op) for op in word.ops]}


def kword_from_json(doc) -> KWord:
    k = _field(doc, "k", int, "k-word")
    ops = []
    for i, op in enumerate(_field(doc, "ops", list, "k-word")):
        letter = letter_from_json(op, f"k-word.ops[{i}]")
        if letter == UNION:
            raise FormatError(f"k-word.ops[{i}]: union is not a word letter")
        ops.append(letter)
    return KWord(k, ops)


def _node_to_json(node, kids):
    if isinstance(node, Leaf):
        return letter_to_json(node.symbol)
    doc = letter_to_json(node.symbol)
    if isinstance(node, Union):
        doc["left"], doc["right"] = kids
    else:
        doc["child"] = kids[0]
    return doc


def ktt_to_json(term: KTreeTerm) -> dict:
    """``{"k": k, "term": nested}``; unions carry ``left`` / ``right``, add and
    forget carry ``child``, nodes are leaves."""
    done = []
    for node in postorder(term.root):
        n = len(node.children)
        kids = done[len(done) - n:] if n else []
        if n:
            del done[len(done) - n:]
        done.append(_node_to_json(node, kids))
    return {"k": term.k, "term": done[0]}


def ktt_from_json(doc) -> KTreeTerm:
    k = _field(doc, "k", int, "k-tree-term")
    root = _field(doc, "term", dict, "k-tree-term")
    built = {}
    stack = [(root, False)]
    while stack:
        obj, expanded = stack.pop()
        letter = letter_from_json(obj, "k-tree-term node")
        if isinstance(letter, Node):
            built[id(obj)] = Leaf(letter.color, letter.label)
            continue
        keys = ("left", "right") if letter == UNION else ("child",)
        kids = [_field(obj, key, dict, f"{obj['op']} node") for key in keys]
        if not expanded:
            stack.append((obj, True))
            stack.extend((c, False) for c in kids)
            continue
        made = [built.pop(id(c)) for c in kids]
        built[id(obj)] = Union(*made) if letter == UNION else Unary(letter, made[0])
    return KTreeTerm(k, built[id(root)])


def term_from_json(doc):
    """A k-word or a k-tree-term, whichever the document holds."""
    if isinstance(doc, dict) and "ops" in doc:
        return kword_from_json(doc)
    if isinstance(doc, dict) and "term" in doc:
        return ktt_from_json(doc)
    raise FormatError("term: expected an 'ops' list or a 'term' object")


def term_to_json(term) -> dict:
    return kword_to_json(term) if isinstance(term, KWord) else ktt_to_json(term)


# -- decompositions ----------------------------------------------------------

def path_decomposition_to_json(bags) -> dict:
    return {"bags": [sorted(b) for b in bags]}


def tree_decomposition_to_json(td: TreeDecomposition) -> dict:
    ids = {t: i for i, t in enumerate(td.preorder())}
    nodes = [{"id": ids[t], "bag": sorted(td.bags[t]),
              "children": [ids[c] for c in td.children[t]]} for t in td.preorder()]
    return {"nodes": nodes, "root": ids[td.root]}


def decomposition_from_json(doc):
    """A list of bags (path) or a :class:`TreeDecomposition`."""
    if isinstance(doc, dict) and "bags" in doc:
        bags = _field(doc, "bags", list, "decomposition")
        for i, b in enumerate(bags):
            if not isinstance(b, list) or not all(isinstance(v, int) for v in b):
                raise FormatError(f"decomposition.bags[{i}]: expected a list of ids")
        return [frozenset(b) for b in bags]
    if isinstance(doc, dict) and "nodes" in doc:
        bags, children = {}, {}
        for i, n in enumerate(_field(doc, "nodes", list, "decomposition")):
            where = f"decomposition.nodes[{i}]"
            t = _field(n, "id", int, where)
            if t in bags:
                raise FormatError(f"{where}: duplicate id {t}")
            bag = _field(n, "bag", list, where)
            kids = _field(n, "children", list, where)
            if not all(isinstance(v, int) for v in bag + kids):
                raise FormatError(f"{where}: bag and children must hold ids")
            bags[t], children[t] = bag, kids
        root = _field(doc, "root", int, "decomposition")
        for t, kids in children.items():
            for c in kids:
                if c not in bags:
                    raise FormatError(f"decomposition: node {t} has unknown child {c}")
        if root not in bags:
            raise FormatError(f"decomposition: unknown root {root}")
        return TreeDecomposition(bags, children, root)
    raise FormatError("decomposition: expected 'bags' or 'nodes'")


def decomposition_to_json(dec) -> dict:
    if isinstance(dec, TreeDecomposition):
        return tree_decomposition_to_json(dec)
    return path_decomposition_to_json(dec)


# -- automata ----------------------------------------------------------------

def state_to_json(delta) -> list:
    return [{"color": c, "in": dict(t.f_in), "state": t.state, "label": t.label,
             "out": dict(t.f_out)} for c, t in delta]


def automaton_to_json(M: MaterializedAutomaton) -> dict:
    S = M.semiring
    trans = []
    for src, letter, dst, w in M.transitions:
        trans.append({"from": list(src) if M.kind == "tree" else src[0],
                      "letter": letter_to_json(letter), "to": dst, "weight": S.render(w)})
    return {"kind": M.kind, "semiring": S.name,
            "states": [state_to_json(q) for q in M.states],
            "initial": list(M.initial), "final": list(M.final), "transitions": trans}
