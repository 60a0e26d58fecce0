import random

import pytest
from hypothesis import given, strategies as st

from nestql import gen
from nestql.values import (
    ATOMIC, DEEP, LIST, MON, SET, Atom, ValueError_, make_coll,
    make_tuple, parse_type, parse_value, print_type, print_value,
    value_equal, value_nodes,
)


def test_set_elements_are_sorted_and_deduplicated():
    v = make_coll(SET, [Atom("b"), Atom("a"), Atom("b")])
    assert print_value(v) == "{a, b}"


def test_list_keeps_order_and_duplicates():
    v = make_coll(LIST, [Atom("b"), Atom("a"), Atom("b")])
    assert print_value(v) == "[b, a, b]"


def test_bag_sorts_but_keeps_duplicates():
    v = make_coll("bag", [Atom("b"), Atom("a"), Atom("b")])
    assert print_value(v) == "{|a, b, b|}"


def test_tuple_fields_keep_construction_order():
    v = make_tuple([("B", Atom("y")), ("A", Atom("x"))])
    assert print_value(v) == "<B: y, A: x>"


def test_duplicate_tuple_label_rejected():
    with pytest.raises(ValueError_):
        make_tuple([("A", Atom("x")), ("A", Atom("y"))])


def test_atomic_equality_only_on_atoms():
    assert value_equal(Atom("a"), Atom("a"), ATOMIC)
    assert not value_equal(Atom("a"), Atom("b"), ATOMIC)
    with pytest.raises(ValueError_):
        value_equal(make_tuple([]), make_tuple([]), ATOMIC)


def test_mon_equality_rejects_collections():
    s = make_coll(SET, [Atom("a")])
    with pytest.raises(ValueError_):
        value_equal(s, s, MON)
    t = make_tuple([("A", Atom("a"))])
    assert value_equal(t, t, MON)


def test_deep_equality_ignores_nothing():
    a = make_coll(SET, [make_coll(LIST, [Atom("a"), Atom("b")])])
    b = make_coll(SET, [make_coll(LIST, [Atom("b"), Atom("a")])])
    assert not value_equal(a, b, DEEP)
    assert value_equal(a, a, DEEP)


def test_value_nodes_counts_every_node():
    v = parse_value("{<A: a, B: [b, c]>}")
    # set + tuple + atom + list + 2 atoms
    assert value_nodes(v) == 6


@given(st.integers(0, 10 ** 6))
def test_print_parse_roundtrip(seed):
    rng = random.Random(seed)
    t = gen.gen_type(rng, 3, LIST)
    v = gen.gen_value(rng, t)
    assert parse_value(print_value(v)) == v


@given(st.integers(0, 10 ** 6))
def test_type_print_parse_roundtrip(seed):
    rng = random.Random(seed)
    t = gen.gen_type(rng, 3, SET)
    assert parse_type(print_type(t)) == t


def test_parse_error_reports_position():
    with pytest.raises(ValueError_) as e:
        parse_value("<A: a, >")
    assert "position" in str(e.value)
