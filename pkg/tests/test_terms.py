import pytest

from wtiling.graph import Signature
from wtiling.terms import (
    Add, Forget, KTreeTerm, KWord, Node, TermError, add, forget,
    is_well_formed_ktt, is_well_formed_kword, kword_semantics, kword_to_ktt, ktt_semantics, leaf,
    postorder, term_equal, union,
)

SIG = Signature(("next",), ("a", "b"))


def test_empty_word():
    cg = kword_semantics(KWord(1, ()), SIG)
    assert len(cg.graph) == 0 and cg.chi == {}


def test_two_vertex_word():
    w = KWord(1, [Node(0, "a"), Node(1, "b"), Add("next", 0, 1), Forget(0), Forget(1)])
    cg = kword_semantics(w, SIG)
    assert cg.graph.labels == ("a", "b")
    assert cg.graph.edges == (("next", 0, 1),)
    assert cg.chi == {}


@pytest.mark.parametrize("ops, position", [
    ([Node(0, "a"), Node(0, "b")], 2),
    ([Forget(0)], 1),
    ([Node(0, "a"), Node(1, "b"), Add("next", 0, 1), Add("next", 0, 1)], 4),
    ([Node(0, "a"), Add("next", 0, 0)], 2),
    ([Node(0, "a"), Add("next", 0, 1)], 2),
    ([Node(5, "a")], 1),
])
def test_ill_formed_words(ops, position):
    verdict = is_well_formed_kword(KWord(1, ops))
    assert not verdict and verdict.position == position
    with pytest.raises(TermError):
        kword_semantics(KWord(1, ops))


def test_leaf_semantics():
    cg = ktt_semantics(KTreeTerm(0, leaf(0, "a")), SIG)
    assert cg.graph.labels == ("a",) and cg.chi == {0: 0}


def test_union_with_add_and_forget():
    t = forget(0, add("next", 0, 1, union(leaf(0, "a"), leaf(1, "b"))))
    cg = ktt_semantics(KTreeTerm(1, t), SIG)
    assert cg.graph.edges == (("next", 0, 1),)
    assert cg.chi == {1: 1}


def test_union_merges_shared_colour():
    t = union(add("next", 0, 1, union(leaf(0, "a"), leaf(1, "b"))),
              add("next", 1, 2, union(leaf(1, "b"), leaf(2, "a"))))
    cg = ktt_semantics(KTreeTerm(2, t), SIG)
    assert len(cg.graph) == 3
    assert cg.leaf_vertex == (0, 1, 1, 2)


def test_label_clash():
    t = union(leaf(0, "a"), leaf(0, "b"))
    verdict = is_well_formed_ktt(KTreeTerm(0, t))
    assert not verdict and verdict.position == 3
    with pytest.raises(TermError):
        ktt_semantics(KTreeTerm(0, t))


def test_well_formed_forget_leaf():
    assert is_well_formed_ktt(KTreeTerm(0, forget(0, leaf(0, "a"))))


def test_add_on_inactive_colour():
    verdict = is_well_formed_ktt(KTreeTerm(1, add("e", 0, 1, leaf(0, "a"))))
    assert not verdict and verdict.position == 2


def test_duplicated_add_across_union():
    base = union(leaf(0, "a"), leaf(1, "a"))
    t = union(add("e", 0, 1, base), add("e", 0, 1, union(leaf(0, "a"), leaf(1, "a"))))
    verdict = is_well_formed_ktt(KTreeTerm(1, t))
    assert not verdict and "both operands" in verdict.message


def test_word_and_caterpillar_agree():
    w = KWord(1, [Node(0, "a"), Node(1, "b"), Add("next", 0, 1), Forget(0), Node(0, "a"),
                  Add("next", 1, 0), Forget(1)])
    g1 = kword_semantics(w, SIG)
    g2 = ktt_semantics(kword_to_ktt(w), SIG)
    assert g1.graph == g2.graph and g1.chi == g2.chi


def test_deep_terms_do_not_recurse():
    w = [Node(0, "a")]
    for _ in range(5000):
        w += [Node(1, "a"), Add("next", 0, 1), Forget(0), Node(0, "a"), Add("next", 1, 0), Forget(1)]
    term = kword_to_ktt(KWord(1, w))
    # one union per leaf after the first
    assert len(list(postorder(term.root))) == len(w) + 10000
    assert "..." in repr(term.root)
    assert len(ktt_semantics(term).graph) == 10001
    assert term_equal(term.root, kword_to_ktt(KWord(1, w)).root)
