"""Subprobability-kernel semantics.

A term denotes a kernel: a map from input events to finitely supported
subdistributions over output events, with exact rational weights. Failure
of any kind during evaluation (unparseable or ill-typed codes, exhausted
fuel) shows up as missing mass rather than as an exception.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import InvalidEvent, NeedProbes, TypeMismatch
from .terms import (Apply, Const, Copy, Del, Id, Lit, Mix, Par, Seq, Spec,
                    Swap, Term, typecheck)
from .types import UNIT, TypeExpr

DEFAULT_FUEL = 64

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SubDist(Mapping):
    """Finitely supported subprobability distribution over events.

    Zero weights are never stored. Two SubDists compare equal iff they
    assign the same exact weight to every event.
    """

    __slots__ = ("_w",)

    def __init__(self, weights=()):
        w = {}
        items = weights.items() if isinstance(weights, Mapping) else weights
        for e, p in items:
            p = Fraction(p)
            if p < 0:
                raise ValueError(f"negative weight {p} on {e!r}")
            if p:
                w[e] = w.get(e, _ZERO) + p
        self._w = w

    @classmethod
    def point(cls, event, weight=_ONE) -> SubDist:
        return cls({event: weight})

    @classmethod
    def zero(cls) -> SubDist:
        return cls()

    def __getitem__(self, event) -> Fraction:
        return self._w[event]

    def get(self, event, default=_ZERO):
        return self._w.get(event, default)

    def __iter__(self):
        return iter(self._w)

    def __len__(self):
        return len(self._w)

    def __eq__(self, other):
        if isinstance(other, SubDist):
            return self._w == other._w
        if isinstance(other, Mapping):
            return self._w == {k: Fraction(v) for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._w.items()))

    def __repr__(self):
        inner = ", ".join(f"{e!r}: {p}" for e, p in self.sorted_items())
        return f"SubDist({{{inner}}})"

    @property
    def mass(self) -> Fraction:
        return sum(self._w.values(), _ZERO)

    def sorted_items(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self._w.items(), key=lambda kv: _event_key(kv[0]))

    def scale(self, c) -> SubDist:
        return SubDist((e, p * c) for e, p in self._w.items())

    def __add__(self, other: SubDist) -> SubDist:
        return SubDist(list(self._w.items()) + list(other._w.items()))

    def is_point(self) -> bool:
        return len(self._w) == 1 and next(iter(self._w.values())) == 1

    def distance(self, other: SubDist) -> Fraction:
        """Largest absolute per-event weight difference."""
        keys = set(self._w) | set(other._w)
        return max((abs(self.get(k) - other.get(k)) for k in keys), default=_ZERO)


def _event_key(e: tuple):
    # ints sort before code strings at any position
    return tuple((0, x, "") if isinstance(x, int) else (1, 0, x) for x in e)


class Kernel:
    """A causal process denotation ``dom -> SubDist(cod)``.

    Rows are computed on demand and memoized, so a kernel over finite types
    materializes into its matrix after one pass, while kernels over Ω stay
    lazy.
    """

    __slots__ = ("dom", "cod", "_fn", "_rows")

    def __init__(self, dom: TypeExpr, cod: TypeExpr, fn: Callable[[tuple], SubDist]):
        self.dom = dom
        self.cod = cod
        self._fn = fn
        self._rows: dict[tuple, SubDist] = {}

    def __call__(self, x: tuple) -> SubDist:
        row = self._rows.get(x)
        if row is None:
            self.dom.check(x)
            row = self._fn(x)
            self._rows[x] = row
        return row

    def __repr__(self):
        return f"Kernel({self.dom!r} -> {self.cod!r})"

    def rows(self) -> list[SubDist]:
        return [self(x) for x in self.dom.events()]

    def matrix(self) -> list[list[Fraction]]:
        """Dense substochastic matrix in row-major event order."""
        cols = list(self.cod.events())
        return [[row.get(y) for y in cols] for row in self.rows()]

    @classmethod
    def from_matrix(cls, dom: TypeExpr, cod: TypeExpr, matrix) -> Kernel:
        cols = list(cod.events())
        table = {x: SubDist(zip(cols, row)) for x, row in zip(dom.events(), matrix)}
        return cls(dom, cod, table.__getitem__)


def kernel_apply(k: Kernel, x: tuple) -> SubDist:
    if not k.dom.contains(x):
        raise InvalidEvent(f"{x!r} does not inhabit {k.dom!r}")
    return k(x)


def _push(d: SubDist, k: Callable[[tuple], SubDist]) -> SubDist:
    acc: dict = {}
    for y, p in d.items():
        for z, q in k(y).items():
            acc[z] = acc.get(z, _ZERO) + p * q
    return SubDist(acc)


def kernel_seq(k1: Kernel, k2: Kernel) -> Kernel:
    """``k2 ∘ k1``: first ``k1``, then ``k2``."""
    if k1.cod != k2.dom:
        raise TypeMismatch(f"cannot compose {k1!r} with {k2!r}")
    return Kernel(k1.dom, k2.cod, lambda x: _push(k1(x), k2))


def _product(d1: SubDist, d2: SubDist) -> SubDist:
    return SubDist((y + v, p * q) for y, p in d1.items() for v, q in d2.items())


def kernel_par(k1: Kernel, k2: Kernel) -> Kernel:
    n = len(k1.dom)
    return Kernel(k1.dom @ k2.dom, k1.cod @ k2.cod,
                  lambda x: _product(k1(x[:n]), k2(x[n:])))


def kernel_mix(p, k1: Kernel, k2: Kernel) -> Kernel:
    p = Fraction(p)
    return Kernel(k1.dom, k1.cod, lambda x: k1(x).scale(p) + k2(x).scale(1 - p))


def deterministic(dom: TypeExpr, cod: TypeExpr, f: Callable[[tuple], tuple]) -> Kernel:
    return Kernel(dom, cod, lambda x: SubDist.point(f(x)))


def identity(t: TypeExpr) -> Kernel:
    return deterministic(t, t, lambda x: x)


def copy_kernel(t: TypeExpr) -> Kernel:
    return deterministic(t, t @ t, lambda x: x + x)


def delete_kernel(t: TypeExpr) -> Kernel:
    return deterministic(t, UNIT, lambda x: ())


def swap_kernel(a: TypeExpr, b: TypeExpr) -> Kernel:
    n = len(a)
    return deterministic(a @ b, b @ a, lambda x: x[n:] + x[:n])


def data_services(t: TypeExpr) -> tuple[Kernel, Kernel, Kernel]:
    """Copy ``t -> t⊗t``, delete ``t -> I`` and the symmetry ``t⊗t -> t⊗t``."""
    return copy_kernel(t), delete_kernel(t), swap_kernel(t, t)


# evaluation


def load_code(code: str) -> Term | None:
    """Parse and type-check a code, or ``None`` if it is not a well-typed term."""
    from .errors import CalculusError
    from .syntax import parse_cached
    try:
        return parse_cached(code)
    except (CalculusError, RecursionError):
        return None


def _apply_kernel(a: TypeExpr, b: TypeExpr, fuel: int) -> Kernel:
    def run(x):
        if fuel <= 0:
            return SubDist.zero()
        term = load_code(x[0])
        if term is None or typecheck(term) != (a, b):
            return SubDist.zero()
        return evaluate(term, fuel - 1)(x[1:])

    return Kernel(typecheck(Apply(a, b))[0], b, run)


def _spec_kernel() -> Kernel:
    from .modeling import try_specialize

    def run(x):
        out = try_specialize(x[0], (x[1],))
        return SubDist.zero() if out is None else SubDist.point((out,))

    dom, cod = typecheck(Spec())
    return Kernel(dom, cod, run)


_cache: dict[tuple[Term, int], Kernel] = {}


def evaluate(t: Term, fuel: int = DEFAULT_FUEL) -> Kernel:
    """Denotation of a well-typed term.

    ``fuel`` bounds how many nested ``apply`` unfoldings are allowed; each
    unfolding runs the loaded code with one unit less.
    """
    key = (t, fuel)
    k = _cache.get(key)
    if k is None:
        k = _evaluate(t, fuel)
        if len(_cache) > 20000:
            _cache.clear()
        _cache[key] = k
    return k


def _evaluate(t: Term, fuel: int) -> Kernel:
    dom, cod = typecheck(t)
    match t:
        case Id(ty):
            return identity(ty)
        case Swap(a, b):
            return swap_kernel(a, b)
        case Copy(ty):
            return copy_kernel(ty)
        case Del(ty):
            return delete_kernel(ty)
        case Lit(a, b, m):
            return Kernel.from_matrix(a, b, m)
        case Const(ty, v):
            return Kernel(UNIT, ty, lambda x: SubDist.point(v))
        case Seq(f, g):
            return kernel_seq(evaluate(f, fuel), evaluate(g, fuel))
        case Par(f, g):
            return kernel_par(evaluate(f, fuel), evaluate(g, fuel))
        case Mix(p, f, g):
            return kernel_mix(p, evaluate(f, fuel), evaluate(g, fuel))
        case Apply(a, b):
            return _apply_kernel(a, b, fuel)
        case Spec():
            return _spec_kernel()
    raise TypeError(f"not a term: {t!r}")


# comparison and function detection


def _probe_list(k: Kernel, probes: Iterable[tuple] | None) -> list[tuple]:
    if probes is None:
        if not k.dom.is_finite:
            raise NeedProbes(f"domain {k.dom!r} involves Ω; supply probe events")
        return list(k.dom.events())
    probes = list(probes)
    for x in probes:
        if not k.dom.contains(x):
            raise InvalidEvent(f"probe {x!r} does not inhabit {k.dom!r}")
    return probes


def indistinguishable(k1: Kernel, k2: Kernel, probes: Iterable[tuple] | None = None) -> bool:
    """Exact equality of ``k1`` and ``k2`` on every probe (all events when finite)."""
    if (k1.dom, k1.cod) != (k2.dom, k2.cod):
        raise TypeMismatch(f"{k1!r} and {k2!r} have different types")
    return all(k1(x) == k2(x) for x in _probe_list(k1, probes))


def function_defects(k: Kernel, probes: Iterable[tuple] | None = None) -> dict[str, bool]:
    """Row test: which of totality and single-valuedness hold."""
    total = single = True
    for x in _probe_list(k, probes):
        row = k(x)
        if row.mass != 1:
            total = False
        if len(row) > 1:
            single = False
    return {"total": total, "single-valued": single}


def is_function_rows(k: Kernel, probes: Iterable[tuple] | None = None) -> bool:
    return all(k(x).is_point() for x in _probe_list(k, probes))


def is_comonoid_homomorphism(k: Kernel, probes: Iterable[tuple] | None = None) -> bool:
    """``Δ∘f = (f⊗f)∘Δ`` and ``⊤∘f = ⊤``, compared as kernels."""
    probes = _probe_list(k, probes)
    copies = kernel_seq(k, copy_kernel(k.cod))
    pairs = kernel_seq(copy_kernel(k.dom), kernel_par(k, k))
    dropped = kernel_seq(k, delete_kernel(k.cod))
    return (indistinguishable(copies, pairs, probes)
            and indistinguishable(dropped, delete_kernel(k.dom), probes))


def is_function(k: Kernel, probes: Iterable[tuple] | None = None) -> bool:
    """Total and single-valued; cross-checked against the comonoid test."""
    rows = is_function_rows(k, probes)
    homo = is_comonoid_homomorphism(k, probes)
    if rows != homo:
        raise AssertionError(f"function tests disagree on {k!r}: rows={rows}, comonoid={homo}")
    return rows


def dump_kernel(k: Kernel, probes: Iterable[tuple] | None = None) -> str:
    """One line per probe: ``EVENT -> {EVENT: RAT, ...}``."""
    from .syntax import format_event, format_rat
    lines = []
    for x in _probe_list(k, probes):
        body = ", ".join(f"{format_event(y)}: {format_rat(p)}" for y, p in k(x).sorted_items())
        lines.append(f"{format_event(x)} -> {{{body}}}")
    return "\n".join(lines)
