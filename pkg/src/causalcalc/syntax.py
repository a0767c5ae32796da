"""S-expression reader and canonical printer for terms, types and events.

Grammar::

    term  := (id TY) | (swap TY TY) | (copy TY) | (del TY)
           | (lit TY TY MAT) | (const TY VAL)
           | (seq term term) | (par term term) | (mix RAT term term)
           | (apply TY TY) | (spec)
    TY    := unit | (enum NAME NAT) | code | (tensor TY TY)
    MAT   := ( ROW+ ) ; ROW := ( RAT+ ) ; RAT := INT | INT/POSINT
    VAL   := NAT | (code "ESCAPED") | (pair VAL VAL) | unit

The printer emits the canonical form: single spaces, reduced rationals,
normalized types and terms, right-nested ``seq``/``par``/``tensor``/``pair``.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import CalculusError, TermSyntaxError, TypeMismatch
from .terms import (Apply, Const, Copy, Del, Id, Lit, Mix, Par, Seq, Spec,
                    Swap, Term, normalize_term, typecheck)
from .types import OMEGA, UNIT, CodeType, Enum, TypeExpr

_RAT = re.compile(r"^-?\d+(/\d+)?$")
_NAT = re.compile(r"^\d+$")


@dataclass
class _Atom:
    text: str
    offset: int


@dataclass
class _Str:
    text: str
    offset: int


@dataclass
class _List:
    items: list
    offset: int


def _read(text: str):
    """Read exactly one s-expression; offsets are UTF-8 byte positions."""
    data = text.encode("utf-8")
    n = len(data)
    pos = 0

    def skip():
        nonlocal pos
        while pos < n and data[pos] in b" \t\r\n":
            pos += 1

    def read_one():
        nonlocal pos
        skip()
        if pos >= n:
            raise TermSyntaxError("unexpected end of input", pos)
        c = data[pos:pos + 1]
        start = pos
        if c == b"(":
            pos += 1
            items = []
            while True:
                skip()
                if pos >= n:
                    raise TermSyntaxError("unclosed parenthesis", start)
                if data[pos:pos + 1] == b")":
                    pos += 1
                    return _List(items, start)
                items.append(read_one())
        if c == b")":
            raise TermSyntaxError("unexpected ')'", pos)
        if c == b'"':
            pos += 1
            buf = bytearray()
            while True:
                if pos >= n:
                    raise TermSyntaxError("unterminated string", start)
                ch = data[pos]
                if ch == 0x5C:  # backslash
                    if pos + 1 >= n:
                        raise TermSyntaxError("dangling escape", pos)
                    buf.append(data[pos + 1])
                    pos += 2
                elif ch == 0x22:
                    pos += 1
                    return _Str(buf.decode("utf-8"), start)
                else:
                    buf.append(ch)
                    pos += 1
        while pos < n and data[pos] not in b" \t\r\n()\"":
            pos += 1
        return _Atom(data[start:pos].decode("utf-8"), start)

    node = read_one()
    skip()
    if pos != n:
        raise TermSyntaxError("trailing input after term", pos)
    return node


def _head(node) -> str | None:
    if isinstance(node, _List) and node.items and isinstance(node.items[0], _Atom):
        return node.items[0].text
    return None


def _expect_args(node: _List, k: int, what: str):
    if len(node.items) != k + 1:
        raise TermSyntaxError(f"{what} takes {k} argument(s), got {len(node.items) - 1}", node.offset)
    return node.items[1:]


def _rat(node) -> Fraction:
    if not isinstance(node, _Atom) or not _RAT.match(node.text):
        raise TermSyntaxError("expected a rational", node.offset)
    num, _, den = node.text.partition("/")
    if den and int(den) == 0:
        raise TermSyntaxError("zero denominator", node.offset)
    return Fraction(int(num), int(den) if den else 1)


def _nat(node) -> int:
    if not isinstance(node, _Atom) or not _NAT.match(node.text):
        raise TermSyntaxError("expected a natural number", node.offset)
    return int(node.text)


def _type(node) -> TypeExpr:
    if isinstance(node, _Atom):
        if node.text == "unit":
            return UNIT
        if node.text == "code":
            return TypeExpr((OMEGA,))
        raise TermSyntaxError(f"unknown type {node.text!r}", node.offset)
    head = _head(node)
    if head == "enum":
        name, size = _expect_args(node, 2, "enum")
        if not isinstance(name, _Atom):
            raise TermSyntaxError("enum name must be a symbol", name.offset)
        try:
            return TypeExpr((Enum(name.text, _nat(size)),))
        except ValueError as exc:
            raise TermSyntaxError(str(exc), node.offset) from None
    if head == "tensor":
        a, b = _expect_args(node, 2, "tensor")
        return _type(a) @ _type(b)
    raise TermSyntaxError("expected a type", node.offset)


def _val_leaves(node) -> list:
    if isinstance(node, _Atom):
        if node.text == "unit":
            return []
        return [_nat(node)]
    head = _head(node)
    if head == "code":
        (s,) = _expect_args(node, 1, "code")
        if not isinstance(s, _Str):
            raise TermSyntaxError("code value must be a string literal", s.offset)
        return [s.text]
    if head == "pair":
        a, b = _expect_args(node, 2, "pair")
        return _val_leaves(a) + _val_leaves(b)
    raise TermSyntaxError("expected a value", node.offset)


def _term(node) -> Term:
    t = _build(node)
    try:
        typecheck(t)
    except CalculusError as exc:
        raise exc.at(node.offset) from None
    return t


def _build(node) -> Term:
    head = _head(node)
    if head is None:
        raise TermSyntaxError("expected a term", node.offset)
    if head == "id":
        (t,) = _expect_args(node, 1, head)
        return Id(_type(t))
    if head == "swap":
        a, b = _expect_args(node, 2, head)
        return Swap(_type(a), _type(b))
    if head == "copy":
        (t,) = _expect_args(node, 1, head)
        return Copy(_type(t))
    if head == "del":
        (t,) = _expect_args(node, 1, head)
        return Del(_type(t))
    if head == "lit":
        a, b, mat = _expect_args(node, 3, head)
        if not isinstance(mat, _List) or not mat.items:
            raise TermSyntaxError("matrix must be a non-empty list of rows", mat.offset)
        rows = []
        for row in mat.items:
            if not isinstance(row, _List) or not row.items:
                raise TermSyntaxError("matrix row must be a non-empty list", row.offset)
            rows.append(tuple(_rat(x) for x in row.items))
        return Lit(_type(a), _type(b), tuple(rows))
    if head == "const":
        t, v = _expect_args(node, 2, head)
        return Const(_type(t), tuple(_val_leaves(v)))
    if head in ("seq", "par"):
        f, g = _expect_args(node, 2, head)
        return (Seq if head == "seq" else Par)(_term(f), _term(g))
    if head == "mix":
        p, f, g = _expect_args(node, 3, head)
        return Mix(_rat(p), _term(f), _term(g))
    if head == "apply":
        a, b = _expect_args(node, 2, head)
        return Apply(_type(a), _type(b))
    if head == "spec":
        _expect_args(node, 0, head)
        return Spec()
    raise TermSyntaxError(f"unknown term constructor {head!r}", node.offset)


def parse(text: str) -> Term:
    """Parse and type-check one term."""
    return _term(_read(text))


# terms are immutable, so repeated codes can share one parse
parse_cached = functools.lru_cache(maxsize=4096)(parse)


def parse_type(text: str) -> TypeExpr:
    return _type(_read(text))


def parse_event(text: str, ty: TypeExpr) -> tuple:
    ev = tuple(_val_leaves(_read(text)))
    if not ty.contains(ev):
        raise TypeMismatch(f"value {text.strip()!r} does not inhabit {ty!r}")
    return ev


def parse_events(text: str, ty: TypeExpr) -> list[tuple]:
    """Parse a parenthesised list of values, e.g. ``"(0 1 (pair 1 0))"``."""
    node = _read(text)
    if not isinstance(node, _List) or _head(node) in ("pair", "code"):
        raise TermSyntaxError("probe list must be a parenthesised list of values", node.offset)
    out = []
    for item in node.items:
        ev = tuple(_val_leaves(item))
        if not ty.contains(ev):
            raise TypeMismatch(f"probe {ev!r} does not inhabit {ty!r}")
        out.append(ev)
    return out


# printing


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def format_rat(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _factor(f) -> str:
    if isinstance(f, CodeType):
        return "code"
    return f"(enum {f.name} {f.size})"


def format_type(t: TypeExpr) -> str:
    fs = [_factor(f) for f in t.factors]
    if not fs:
        return "unit"
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = f"(tensor {f} {out})"
    return out


def _leaf(x) -> str:
    if isinstance(x, str):
        return f'(code "{_escape(x)}")'
    return str(x)


def format_event(ev: tuple) -> str:
    if not ev:
        return "unit"
    out = _leaf(ev[-1])
    for x in reversed(ev[:-1]):
        out = f"(pair {_leaf(x)} {out})"
    return out


def _print(t: Term) -> str:
    match t:
        case Id(ty):
            return f"(id {format_type(ty)})"
        case Swap(a, b):
            return f"(swap {format_type(a)} {format_type(b)})"
        case Copy(ty):
            return f"(copy {format_type(ty)})"
        case Del(ty):
            return f"(del {format_type(ty)})"
        case Lit(a, b, m):
            rows = " ".join("(" + " ".join(map(format_rat, r)) + ")" for r in m)
            return f"(lit {format_type(a)} {format_type(b)} ({rows}))"
        case Const(ty, v):
            return f"(const {format_type(ty)} {format_event(v)})"
        case Seq(f, g):
            return f"(seq {_print(f)} {_print(g)})"
        case Par(f, g):
            return f"(par {_print(f)} {_print(g)})"
        case Mix(p, f, g):
            return f"(mix {format_rat(p)} {_print(f)} {_print(g)})"
        case Apply(a, b):
            return f"(apply {format_type(a)} {format_type(b)})"
        case Spec():
            return "(spec)"
    raise TypeError(f"not a term: {t!r}")


def serialize(t: Term) -> str:
    """Canonical code of a well-typed term."""
    typecheck(t)
    return _print(normalize_term(t))
