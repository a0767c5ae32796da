"""String-diagram terms, their type checker and unit/associativity normal form."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BadMatrix, BadWeight, TypeMismatch
from .types import OMEGA_T, UNIT, TypeExpr

Signature = tuple[TypeExpr, TypeExpr]


class Term:
    """Base of the term AST. Subclasses are frozen dataclasses."""

    __slots__ = ()

    def then(self, other: Term) -> Term:
        return Seq(self, other)

    def __rshift__(self, other: Term) -> Term:
        return Seq(self, other)

    def __matmul__(self, other: Term) -> Term:
        return Par(self, other)

    @property
    def dom(self) -> TypeExpr:
        return typecheck(self)[0]

    @property
    def cod(self) -> TypeExpr:
        return typecheck(self)[1]


def _sigslot():
    return field(default=None, init=False, repr=False, compare=False)


@dataclass(frozen=True)
class Id(Term):
    t: TypeExpr
    _sig: Signature | None = _sigslot()


@dataclass(frozen=True)
class Swap(Term):
    t1: TypeExpr
    t2: TypeExpr
    _sig: Signature | None = _sigslot()


@dataclass(frozen=True)
class Copy(Term):
    t: TypeExpr
    _sig: Signature | None = _sigslot()


@dataclass(frozen=True)
class Del(Term):
    t: TypeExpr
    _sig: Signature | None = _sigslot()


def _frac_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class Lit(Term):
    """A literal substochastic matrix, ``|dom|`` rows by ``|cod|`` columns."""

    dom_t: TypeExpr
    cod_t: TypeExpr
    matrix: tuple[tuple[Fraction, ...], ...]
    _sig: Signature | None = _sigslot()

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frac_matrix(self.matrix))


@dataclass(frozen=True)
class Const(Term):
    """A vector ``I -> t`` sitting on the single event ``v``."""

    t: TypeExpr
    v: tuple
    _sig: Signature | None = _sigslot()


@dataclass(frozen=True)
class Seq(Term):
    f: Term
    g: Term
    _sig: Signature | None = _sigslot()


@dataclass(frozen=True)
class Par(Term):
    f: Term
    g: Term
    _sig: Signature | None = _sigslot()


@dataclass(frozen=True)
class Mix(Term):
    p: Fraction
    f: Term
    g: Term
    _sig: Signature | None = _sigslot()

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))


@dataclass(frozen=True)
class Apply(Term):
    """Universal testing: runs the model on the left wire against inputs of type ``a``."""

    a: TypeExpr
    b: TypeExpr
    _sig: Signature | None = _sigslot()


@dataclass(frozen=True)
class Spec(Term):
    """The specializer Ω⊗Ω → Ω."""

    _sig: Signature | None = _sigslot()


def _check_matrix(t: Lit) -> None:
    for ty in (t.dom_t, t.cod_t):
        if not ty.is_finite:
            raise BadMatrix(f"literal over non-finite type {ty!r}")
    nrows, ncols = t.dom_t.size, t.cod_t.size
    if len(t.matrix) != nrows:
        raise BadMatrix(f"literal {t.dom_t!r} -> {t.cod_t!r} needs {nrows} rows, got {len(t.matrix)}")
    for i, row in enumerate(t.matrix):
        if len(row) != ncols:
            raise BadMatrix(f"row {i} needs {ncols} entries, got {len(row)}")
        if any(x < 0 for x in row):
            raise BadMatrix(f"row {i} has a negative entry")
        if sum(row) > 1:
            raise BadMatrix(f"row {i} has mass {sum(row)} > 1")


def _compute(t: Term) -> Signature:
    match t:
        case Id(ty):
            return ty, ty
        case Swap(a, b):
            return a @ b, b @ a
        case Copy(ty):
            return ty, ty @ ty
        case Del(ty):
            return ty, UNIT
        case Lit():
            _check_matrix(t)
            return t.dom_t, t.cod_t
        case Const(ty, v):
            if not ty.contains(v):
                raise TypeMismatch(f"constant {v!r} does not inhabit {ty!r}")
            return UNIT, ty
        case Seq(f, g):
            (a, b), (b2, c) = typecheck(f), typecheck(g)
            if b != b2:
                raise TypeMismatch(f"cannot compose {a!r} -> {b!r} with {b2!r} -> {c!r}")
            return a, c
        case Par(f, g):
            (a, b), (c, d) = typecheck(f), typecheck(g)
            return a @ c, b @ d
        case Mix(p, f, g):
            if not 0 <= p <= 1:
                raise BadWeight(f"mixing weight {p} outside [0, 1]")
            sf, sg = typecheck(f), typecheck(g)
            if sf != sg:
                raise TypeMismatch(f"mix branches disagree: {sf[0]!r} -> {sf[1]!r} vs {sg[0]!r} -> {sg[1]!r}")
            return sf
        case Apply(a, b):
            return OMEGA_T @ a, b
        case Spec():
            return OMEGA_T @ OMEGA_T, OMEGA_T
    raise TypeError(f"not a term: {t!r}")


def typecheck(t: Term) -> Signature:
    """Return ``(dom, cod)`` of ``t`` or raise TypeMismatch/BadMatrix/BadWeight."""
    sig = t._sig
    if sig is None:
        sig = _compute(t)
        object.__setattr__(t, "_sig", sig)
    return sig


def _flatten(t: Term, kind: type) -> list[Term]:
    if isinstance(t, kind):
        return _flatten(t.f, kind) + _flatten(t.g, kind)
    return [t]


def _nest(kind: type, parts: list[Term]) -> Term:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = kind(p, out)
    return out


def normalize_term(t: Term) -> Term:
    """Unit/associativity normal form.

    Sequential and parallel chains are flattened and re-nested to the right,
    identities vanish from sequential chains, unit-typed identities vanish
    from parallel chains, and adjacent parallel identities (or deletions)
    merge into one over the tensored type.
    """
    dom, _ = typecheck(t)
    match t:
        case Seq():
            parts = []
            for p in _flatten(t, Seq):
                n = normalize_term(p)
                parts.extend(q for q in _flatten(n, Seq) if not isinstance(q, Id))
            return _nest(Seq, parts) if parts else Id(dom)
        case Par():
            parts: list[Term] = []
            for p in _flatten(t, Par):
                for q in _flatten(normalize_term(p), Par):
                    if isinstance(q, Id) and q.t.is_unit:
                        continue
                    prev = parts[-1] if parts else None
                    if isinstance(q, Id) and isinstance(prev, Id):
                        parts[-1] = Id(prev.t @ q.t)
                    elif isinstance(q, Del) and isinstance(prev, Del):
                        parts[-1] = Del(prev.t @ q.t)
                    else:
                        parts.append(q)
            return _nest(Par, parts) if parts else Id(UNIT)
        case Mix(p, f, g):
            return Mix(p, normalize_term(f), normalize_term(g))
        case Copy(ty) | Del(ty) if ty.is_unit:
            return Id(UNIT)
        case Swap(a, b) if a.is_unit or b.is_unit:
            return Id(a @ b)
    return t
