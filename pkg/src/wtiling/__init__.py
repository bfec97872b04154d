"""Semiring-generic evaluation of weighted tiling systems on graphs of bounded width."""

from .automata import eval_pw, eval_tw, evaluate, materialize_Bk, tree_eval
from .graph import Graph, GraphError, Signature, grid_graph, path_graph, triangular_grid
from .semiring import NEG_INF, POS_INF, Semiring, check_semiring_laws, make_semiring
from .terms import KTreeTerm, KWord
from .wts import WTS, Tile, eval_brute, make_tile

__all__ = [
    "Graph", "GraphError", "KTreeTerm", "KWord", "NEG_INF", "POS_INF", "Semiring",
    "Signature", "Tile", "WTS", "check_semiring_laws", "eval_brute", "eval_pw", "eval_tw",
    "evaluate", "grid_graph", "make_semiring", "make_tile", "materialize_Bk", "path_graph",
    "tree_eval", "triangular_grid",
]
