"""Models as causal factors: prediction, synthesis, steering, specialization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import (BadCode, BadParam, CalculusError, NotAFunction, NotFinite,
                     TypeMismatch)
from .semantics import Kernel, evaluate, is_function
from .syntax import parse_cached, serialize
from .terms import Apply, Const, Id, Lit, Par, Seq, Term, typecheck
from .types import OMEGA_T, TypeExpr


@dataclass(frozen=True)
class ParamModel:
    """A ``Y``-parametrized model ``Y -> Ω``; closed when ``Y`` is the unit."""

    term: Term

    def __post_init__(self):
        _, cod = typecheck(self.term)
        if cod != OMEGA_T:
            raise TypeMismatch(f"a model must have codomain Ω, got {cod!r}")

    @property
    def param_type(self) -> TypeExpr:
        return typecheck(self.term)[0]


@dataclass(frozen=True)
class SteeringMap:
    """A deterministic function ``X -> Y`` used to reparametrize models."""

    term: Term
    probes: tuple | None = None

    def __post_init__(self):
        k = evaluate(self.term)
        if not is_function(k, self.probes):
            raise NotAFunction(f"steering map {serialize(self.term)} is not a function")


def prediction(model: ParamModel | Term, a: TypeExpr, b: TypeExpr) -> Term:
    """The process ``Y⊗a -> b`` predicted by a parametrized model."""
    term = model.term if isinstance(model, ParamModel) else model
    if typecheck(term)[1] != OMEGA_T:
        raise TypeMismatch("prediction needs a model with codomain Ω")
    return Seq(Par(term, Id(a)), Apply(a, b))


def synthesize_model(k: Kernel) -> str:
    """A code whose universal testing reproduces the finite kernel ``k`` exactly."""
    if not (k.dom.is_finite and k.cod.is_finite):
        raise NotFinite(f"cannot tabulate {k!r}")
    return serialize(Lit(k.dom, k.cod, k.matrix()))


def steer(model: ParamModel, s: SteeringMap | Term, probes: Iterable[tuple] | None = None) -> ParamModel:
    if not isinstance(s, SteeringMap):
        s = SteeringMap(s, tuple(probes) if probes is not None else None)
    if typecheck(s.term)[1] != model.param_type:
        raise TypeMismatch(
            f"steering map lands in {typecheck(s.term)[1]!r}, model expects {model.param_type!r}")
    return ParamModel(Seq(s.term, model.term))


def _specialized_term(term: Term, x: tuple) -> Term:
    dom, _ = typecheck(term)
    head, rest = dom.split(len(x))
    if len(x) == 0 or len(head) != len(x) or not head.contains(x):
        raise BadParam(f"{x!r} does not inhabit the leading factor(s) of {dom!r}")
    return Seq(Par(Const(head, x), Id(rest)), term)


def specialize(code: str, x: tuple) -> str:
    """Fix the leading input(s) of ``code`` to ``x``.

    ``x`` is an event for the first ``len(x)`` factors of the code's domain;
    the result is a code of type ``rest -> cod`` with
    ``⟦specialize(p, x)⟧(a) = ⟦p⟧(x + a)``.
    """
    try:
        term = parse_cached(code)
    except CalculusError as exc:
        raise BadCode(str(exc)) from None
    return serialize(_specialized_term(term, tuple(x)))


def try_specialize(code: str, x: tuple) -> str | None:
    """Runtime specializer: ``None`` where :func:`specialize` would raise."""
    from .semantics import load_code
    term = load_code(code)
    if term is None:
        return None
    try:
        return serialize(_specialized_term(term, x))
    except BadParam:
        return None
