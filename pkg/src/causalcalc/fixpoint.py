"""Self-confirming models for processes that take their own model as input.

Given ``q : Ω⊗A -> B`` we form

    G = q ∘ ((Ξ ∘ Δ) ⊗ A)        a model-parametrized process, inlined as code
    Γ = Ξ(G, G)                   its self-application

and check ``q(Γ, a) ≈ ⟦Γ⟧(a)`` on every ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import BadCode, CalculusError, NotFinite, WrongSignature
from .modeling import specialize
from .semantics import DEFAULT_FUEL, SubDist, evaluate
from .syntax import format_event, format_rat, parse, serialize
from .terms import Apply, Copy, Id, Par, Seq, Spec, typecheck
from .types import OMEGA, OMEGA_T, TypeExpr


@dataclass(frozen=True)
class ProbeRow:
    event: tuple
    left: SubDist
    right: SubDist

    @property
    def discrepancy(self) -> Fraction:
        return self.left.distance(self.right)

    @property
    def exact(self) -> bool:
        return self.left == self.right


@dataclass(frozen=True)
class FixpointResult:
    q: str
    G: str
    gamma: str
    a: TypeExpr
    b: TypeExpr
    report: tuple[ProbeRow, ...] | None = None
    fuel: int | None = None
    epsilon: Fraction = Fraction(0)
    passed: bool | None = None
    converging: bool | None = field(default=None)

    @property
    def exact(self) -> bool:
        return self.report is not None and all(r.exact for r in self.report)

    def table(self) -> str:
        if self.report is None:
            return ""
        lines = ["a | L-mass | R-mass | max-entry-discrepancy | exact?"]
        for r in self.report:
            lines.append(" | ".join([
                format_event(r.event), format_rat(r.left.mass), format_rat(r.right.mass),
                format_rat(r.discrepancy), "yes" if r.exact else "no"]))
        return "\n".join(lines)


def _signature(q: str) -> tuple:
    try:
        term = parse(q)
    except CalculusError as exc:
        raise BadCode(str(exc)) from None
    dom, cod = typecheck(term)
    if not dom.factors or dom.factors[0] != OMEGA:
        raise WrongSignature(f"process must take a model first, got domain {dom!r}")
    return term, dom.split(1)[1], cod


def build_self_confirming(q: str) -> FixpointResult:
    term, a, b = _signature(q)
    self_model = Seq(Copy(OMEGA_T), Spec())
    G = serialize(Seq(Par(self_model, Id(a)), term))
    gamma = specialize(G, (G,))
    return FixpointResult(q=serialize(term), G=G, gamma=gamma, a=a, b=b)


def compare(r: FixpointResult, fuel: int) -> tuple[ProbeRow, ...]:
    """``L(a) = ⟦q⟧(Γ, a)`` against ``R(a) = ⟦Id⟧(Γ, a)`` on every ``a``."""
    if not r.a.is_finite:
        raise NotFinite(f"input type {r.a!r} involves Ω")
    left = evaluate(parse(r.q), fuel)
    right = evaluate(Apply(r.a, r.b), fuel)
    rows = []
    for x in r.a.events():
        ev = (r.gamma,) + x
        rows.append(ProbeRow(x, left(ev), right(ev)))
    return tuple(rows)


def verify_self_confirming(r: FixpointResult, fuel: int = DEFAULT_FUEL, epsilon=0) -> FixpointResult:
    """Attach the per-probe report and a verdict.

    Exact agreement passes outright. Otherwise every discrepancy must be
    within ``epsilon`` and must shrink when the fuel is doubled.
    """
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    report = compare(r, fuel)
    worst = max((p.discrepancy for p in report), default=Fraction(0))
    if worst == 0:
        return replace(r, report=report, fuel=fuel, epsilon=epsilon, passed=True, converging=True)
    doubled = compare(r, 2 * fuel)
    converging = all(d.discrepancy < p.discrepancy or p.discrepancy == 0
                     for p, d in zip(report, doubled))
    passed = worst <= epsilon and converging
    return replace(r, report=report, fuel=fuel, epsilon=epsilon, passed=passed, converging=converging)
