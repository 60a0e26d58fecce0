import random

import pytest
from hypothesis import given, settings, strategies as st

from nestql import gen
from nestql.values import ATOMIC, DEEP, ValueError_
from nestql.xmlxq import (
    CHILD, DESCENDANT, AxisStep, Elem, EmptyElem, EmptySeq, For, If, Let,
    Seq, Tree, Var, VarEq, decide_xq, eval_xq, parse_xml, parse_xq,
    print_xml, print_xq, tree_nodes, xq_desugar,
)


DOC = parse_xml("<r><a><c/></a><b/><a/></r>")


def run(q, doc=DOC):
    return eval_xq(q, (doc,))


def show(trees):
    return [print_xml(t) for t in trees]


# One unit test per semantic evaluation rule.

def test_rule_empty_element():
    assert show(run(EmptyElem("a"))) == ["<a/>"]


def test_rule_element_wraps_its_body_sequence():
    q = Elem("x", Seq(EmptyElem("a"), EmptyElem("b")))
    assert show(run(q)) == ["<x><a/><b/></x>"]


def test_rule_empty_sequence():
    assert run(EmptySeq()) == []


def test_rule_sequence_concatenates():
    q = Seq(EmptyElem("b"), EmptyElem("a"))
    assert show(run(q)) == ["<b/>", "<a/>"]


def test_rule_for_iterates_in_order():
    q = For(AxisStep(1, CHILD, "*"), Var(2))
    assert show(run(q)) == ["<a><c/></a>", "<b/>", "<a/>"]


def test_rule_let_binds_a_singleton():
    q = Let(Elem("w", Var(1)), Var(2))
    assert show(run(q)) == ["<w><r><a><c/></a><b/><a/></r></w>"]


def test_rule_variable_lookup():
    assert run(Var(1)) == [DOC]


def test_rule_axis_step_filters_by_test_in_document_order():
    q = AxisStep(1, CHILD, "a")
    assert show(run(q)) == ["<a><c/></a>", "<a/>"]
    q = AxisStep(1, DESCENDANT, "c")
    assert show(run(q)) == ["<c/>"]


def test_rule_if_with_empty_else_branch():
    yes = If(EmptyElem("t"), EmptyElem("a"))
    assert show(run(yes)) == ["<a/>"]
    no = If(EmptySeq(), EmptyElem("a"))
    assert run(no) == []


def test_rule_var_equality_yields_yes_or_nothing():
    doc = parse_xml("<r><a/><a/><b/></r>")
    eq_ab = For(AxisStep(1, CHILD, "a"),
                For(AxisStep(1, CHILD, "a"), VarEq(2, 3, DEEP)))
    assert show(run(eq_ab, doc)) == ["<yes/>"] * 4
    ne = For(AxisStep(1, CHILD, "a"),
             For(AxisStep(1, CHILD, "b"), VarEq(2, 3, DEEP)))
    assert run(ne, doc) == []


def test_atomic_equality_requires_leaves():
    doc = parse_xml("<r><a><c/></a><a><c/></a></r>")
    deep = For(AxisStep(1, CHILD, "a"),
               For(AxisStep(1, CHILD, "a"), VarEq(2, 3, DEEP)))
    assert len(run(deep, doc)) == 4
    atomic = For(AxisStep(1, CHILD, "a"),
                 For(AxisStep(1, CHILD, "a"), VarEq(2, 3, ATOMIC)))
    with pytest.raises(ValueError_):
        run(atomic, doc)


def test_let_rejects_non_singleton_binding():
    q = Let(Seq(EmptyElem("a"), EmptyElem("a")), Var(2))
    with pytest.raises(ValueError_):
        run(q)


def test_decide_requires_one_tree_and_checks_children():
    assert decide_xq(parse_xq("<a>{$root/b}</a>"), DOC)
    assert not decide_xq(parse_xq("<a>{$root/z}</a>"), DOC)


def test_xml_print_parse_roundtrip():
    assert parse_xml(print_xml(DOC)) == DOC


@given(st.integers(0, 10 ** 6))
def test_query_print_parse_roundtrip(seed):
    """Reparsing may reassociate sequences and conditions, so the check
    is that the printed form is a fixpoint and the meaning is kept."""
    rng = random.Random(seed)
    q = gen.gen_tree_query(rng, 5)
    doc = gen.gen_doc(rng, 15)
    q2 = parse_xq(print_xq(q))
    assert print_xq(q2) == print_xq(q)
    assert eval_xq(q2, (doc,)) == eval_xq(q, (doc,))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60)
def test_desugared_query_agrees(seed):
    rng = random.Random(seed)
    q = gen.gen_tree_query(rng, 4)
    doc = gen.gen_doc(rng, 15)
    assert eval_xq(xq_desugar(q), (doc,)) == eval_xq(q, (doc,))
