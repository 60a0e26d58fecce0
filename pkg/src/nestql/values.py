"""Complex values: atoms, tuples with labeled fields, and collections.

Values are immutable. Collections come in three kinds: sets (canonical,
duplicate-free), lists (ordered, duplicates kept) and bags (multiplicities
kept, order canonical). A small text format with tuple brackets ``<...>``,
set braces ``{...}``, list brackets ``[...]`` and bag braces ``{|...|}``
round-trips through :func:`parse_value` / :func:`print_value`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple as Tup


class ValueError_(Exception):
    """Raised for malformed values, parse errors and mode violations."""


SET = "set"
LIST = "list"
BAG = "bag"

KINDS = (SET, LIST, BAG)

_KIND_RANK = {SET: 0, LIST: 1, BAG: 2}

_BARE_ATOM = re.compile(r"[A-Za-z0-9_#+\-]+")


@dataclass(frozen=True)
class Value:
    pass


@dataclass(frozen=True)
class Atom(Value):
    label: str


@dataclass(frozen=True)
class Tuple(Value):
    fields: Tup[Tup[str, Value], ...]

    def __post_init__(self):
        labels = [l for l, _ in self.fields]
        if len(set(labels)) != len(labels):
            raise ValueError_("duplicate tuple label in %r" % (labels,))

    def field(self, label: str) -> Value:
        for l, v in self.fields:
            if l == label:
                return v
        raise ValueError_("no field %r in tuple with fields %r"
                          % (label, [l for l, _ in self.fields]))

    def labels(self) -> Tup[str, ...]:
        return tuple(l for l, _ in self.fields)


@dataclass(frozen=True)
class Coll(Value):
    kind: str
    elems: Tup[Value, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError_("bad collection kind %r" % (self.kind,))


UNIT = Tuple(())


def sort_key(v: Value):
    """Total order on values: atoms < tuples < collections."""
    if isinstance(v, Atom):
        return (0, v.label)
    if isinstance(v, Tuple):
        return (1, v.labels(), tuple(sort_key(x) for _, x in v.fields))
    assert isinstance(v, Coll)
    return (2, _KIND_RANK[v.kind], len(v.elems),
            tuple(sort_key(x) for x in v.elems))


def make_coll(kind: str, elems: Iterable[Value]) -> Coll:
    """Build a collection in canonical form (sets deduped + sorted,
    bags sorted, lists as given)."""
    elems = list(elems)
    if kind == SET:
        seen = {}
        for e in elems:
            seen.setdefault(sort_key(e), e)
        elems = [seen[k] for k in sorted(seen)]
    elif kind == BAG:
        elems = sorted(elems, key=sort_key)
    return Coll(kind, tuple(elems))


def make_tuple(fields: Iterable[Tup[str, Value]]) -> Tuple:
    return Tuple(tuple(fields))


def value_nodes(v: Value) -> int:
    """Number of nodes in the value tree (atoms count 1, tuples and
    collections count 1 plus their members)."""
    if isinstance(v, Atom):
        return 1
    if isinstance(v, Tuple):
        return 1 + sum(value_nodes(x) for _, x in v.fields)
    return 1 + sum(value_nodes(x) for x in v.elems)


# ---------------------------------------------------------------------------
# Types

@dataclass(frozen=True)
class Type:
    pass


@dataclass(frozen=True)
class DomType(Type):
    pass


@dataclass(frozen=True)
class CollType(Type):
    kind: str
    elem: Type


@dataclass(frozen=True)
class TupleType(Type):
    fields: Tup[Tup[str, Type], ...]

    def __post_init__(self):
        labels = [l for l, _ in self.fields]
        if len(set(labels)) != len(labels):
            raise ValueError_("duplicate tuple type label in %r" % (labels,))

    def field(self, label: str) -> Type:
        for l, t in self.fields:
            if l == label:
                return t
        raise ValueError_("no field %r in tuple type" % (label,))

    def labels(self) -> Tup[str, ...]:
        return tuple(l for l, _ in self.fields)


DOM = DomType()
UNIT_T = TupleType(())


def print_type(t: Type) -> str:
    if isinstance(t, DomType):
        return "Dom"
    if isinstance(t, CollType):
        inner = print_type(t.elem)
        if t.kind == SET:
            return "{%s}" % inner
        if t.kind == LIST:
            return "[%s]" % inner
        return "{|%s|}" % inner
    assert isinstance(t, TupleType)
    return "<%s>" % ", ".join("%s: %s" % (l, print_type(x))
                              for l, x in t.fields)


def check_type(v: Value, t: Type, path: str = "") -> Tup[bool, Optional[str]]:
    """Check whether v inhabits t; on mismatch return the path to the
    first offending sub-value."""
    where = path or "<root>"
    if isinstance(t, DomType):
        if isinstance(v, Atom):
            return True, None
        return False, "%s: expected atom" % where
    if isinstance(t, CollType):
        if not isinstance(v, Coll) or v.kind != t.kind:
            return False, "%s: expected %s collection" % (where, t.kind)
        for i, e in enumerate(v.elems):
            ok, diag = check_type(e, t.elem, "%s.%d" % (path, i + 1) if path
                                  else str(i + 1))
            if not ok:
                return False, diag
        return True, None
    assert isinstance(t, TupleType)
    if not isinstance(v, Tuple) or v.labels() != t.labels():
        return False, "%s: expected tuple with fields %r" % (
            where, list(t.labels()))
    for (l, e), (_, ft) in zip(v.fields, t.fields):
        ok, diag = check_type(e, ft, "%s.%s" % (path, l) if path else l)
        if not ok:
            return False, diag
    return True, None


def type_ok(v: Value, t: Type) -> bool:
    return check_type(v, t)[0]


# ---------------------------------------------------------------------------
# Equality in three strengths

ATOMIC = "atomic"
MON = "mon"
DEEP = "deep"


def _set_free(v: Value) -> bool:
    if isinstance(v, Atom):
        return True
    if isinstance(v, Tuple):
        return all(_set_free(x) for _, x in v.fields)
    return False


def value_equal(a: Value, b: Value, mode: str = DEEP) -> bool:
    if mode == ATOMIC:
        if not isinstance(a, Atom) or not isinstance(b, Atom):
            bad = a if not isinstance(a, Atom) else b
            raise ValueError_("atomic equality on non-atom %s"
                              % print_value(bad))
        return a.label == b.label
    if mode == MON:
        for v in (a, b):
            if not _set_free(v):
                raise ValueError_("mon equality on collection-bearing value %s"
                                  % print_value(v))
        return _deep_eq(a, b)
    if mode == DEEP:
        return _deep_eq(a, b)
    raise ValueError_("unknown equality mode %r" % (mode,))


def _deep_eq(a: Value, b: Value) -> bool:
    if isinstance(a, Atom) and isinstance(b, Atom):
        return a.label == b.label
    if isinstance(a, Tuple) and isinstance(b, Tuple):
        return (a.labels() == b.labels()
                and all(_deep_eq(x, y)
                        for (_, x), (_, y) in zip(a.fields, b.fields)))
    if isinstance(a, Coll) and isinstance(b, Coll):
        if a.kind != b.kind:
            return False
        if a.kind == LIST:
            return (len(a.elems) == len(b.elems)
                    and all(_deep_eq(x, y)
                            for x, y in zip(a.elems, b.elems)))
        # sets and bags are stored canonically, so pointwise comparison
        # of the canonical forms decides extensional/multiset equality
        ca, cb = make_coll(a.kind, a.elems), make_coll(b.kind, b.elems)
        return (len(ca.elems) == len(cb.elems)
                and all(_deep_eq(x, y)
                        for x, y in zip(ca.elems, cb.elems)))
    return False


# ---------------------------------------------------------------------------
# Text format

def print_atom(label: str) -> str:
    if label and _BARE_ATOM.fullmatch(label):
        return label
    return '"%s"' % label.replace("\\", "\\\\").replace('"', '\\"')


def print_value(v: Value) -> str:
    if isinstance(v, Atom):
        return print_atom(v.label)
    if isinstance(v, Tuple):
        return "<%s>" % ", ".join("%s: %s" % (l, print_value(x))
                                  for l, x in v.fields)
    assert isinstance(v, Coll)
    body = ", ".join(print_value(x) for x in v.elems)
    if v.kind == SET:
        return "{%s}" % body
    if v.kind == LIST:
        return "[%s]" % body
    return "{|%s|}" % body


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, n: int = 1) -> str:
        return self.text[self.pos:self.pos + n]

    def error(self, msg: str):
        raise ValueError_("%s at position %d" % (msg, self.pos))

    def expect(self, tok: str):
        self.skip_ws()
        if self.text.startswith(tok, self.pos):
            self.pos += len(tok)
        else:
            self.error("expected %r" % tok)

    def try_tok(self, tok: str) -> bool:
        self.skip_ws()
        if self.text.startswith(tok, self.pos):
            self.pos += len(tok)
            return True
        return False

    def atom(self) -> str:
        self.skip_ws()
        if self.peek() == '"':
            self.pos += 1
            out = []
            while self.pos < len(self.text) and self.text[self.pos] != '"':
                c = self.text[self.pos]
                if c == "\\" and self.pos + 1 < len(self.text):
                    self.pos += 1
                    c = self.text[self.pos]
                out.append(c)
                self.pos += 1
            if self.pos >= len(self.text):
                self.error("unterminated quoted atom")
            self.pos += 1
            return "".join(out)
        m = _BARE_ATOM.match(self.text, self.pos)
        if not m:
            self.error("expected atom")
        self.pos = m.end()
        return m.group(0)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_items(sc: _Scanner, closer: str):
    elems = []
    sc.skip_ws()
    if sc.try_tok(closer):
        return elems
    while True:
        elems.append(_parse(sc))
        if sc.try_tok(closer):
            return elems
        sc.expect(",")


def _parse(sc: _Scanner) -> Value:
    sc.skip_ws()
    c = sc.peek()
    if c == "<":
        sc.expect("<")
        fields = []
        if not sc.try_tok(">"):
            while True:
                label = sc.atom()
                sc.expect(":")
                fields.append((label, _parse(sc)))
                if sc.try_tok(">"):
                    break
                sc.expect(",")
        return make_tuple(fields)
    if sc.peek(2) == "{|":
        sc.expect("{|")
        return make_coll(BAG, _parse_items(sc, "|}"))
    if c == "{":
        sc.expect("{")
        return make_coll(SET, _parse_items(sc, "}"))
    if c == "[":
        sc.expect("[")
        return make_coll(LIST, _parse_items(sc, "]"))
    return Atom(sc.atom())


def parse_value(text: str) -> Value:
    sc = _Scanner(text)
    v = _parse(sc)
    if not sc.at_end():
        sc.error("trailing input")
    return v


def parse_type(text: str) -> Type:
    sc = _Scanner(text)
    t = _parse_type(sc)
    if not sc.at_end():
        sc.error("trailing input")
    return t


def _parse_type(sc: _Scanner) -> Type:
    sc.skip_ws()
    if sc.try_tok("Dom"):
        return DOM
    c = sc.peek()
    if c == "<":
        sc.expect("<")
        fields = []
        if not sc.try_tok(">"):
            while True:
                label = sc.atom()
                sc.expect(":")
                fields.append((label, _parse_type(sc)))
                if sc.try_tok(">"):
                    break
                sc.expect(",")
        return TupleType(tuple(fields))
    if sc.peek(2) == "{|":
        sc.expect("{|")
        t = _parse_type(sc)
        sc.expect("|}")
        return CollType(BAG, t)
    if c == "{":
        sc.expect("{")
        t = _parse_type(sc)
        sc.expect("}")
        return CollType(SET, t)
    if c == "[":
        sc.expect("[")
        t = _parse_type(sc)
        sc.expect("]")
        return CollType(LIST, t)
    sc.error("expected type")
