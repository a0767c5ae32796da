"""ASCII rendering of terms as stacked layers of boxes, inputs at the bottom."""

from __future__ import annotations

from .syntax import format_rat
from .terms import (Apply, Const, Copy, Del, Id, Lit, Mix, Par, Seq, Spec,
                    Swap, Term, _flatten, normalize_term, typecheck)
from .types import CodeType, TypeExpr


def type_label(t: TypeExpr) -> str:
    if t.is_unit:
        return "I"
    return "*".join("code" if isinstance(f, CodeType) else f"{f.name}{f.size}" for f in t.factors)


def _label(t: Term) -> str:
    match t:
        case Id(ty):
            return type_label(ty)
        case Swap(a, b):
            return f"swap {type_label(a)},{type_label(b)}"
        case Copy(ty):
            return f"copy {type_label(ty)}"
        case Del(ty):
            return f"del {type_label(ty)}"
        case Lit(a, b, _):
            return f"lit {type_label(a)}->{type_label(b)}"
        case Const(ty, _):
            return f"const {type_label(ty)}"
        case Mix(p, _, _):
            dom, cod = typecheck(t)
            return f"mix {format_rat(p)} {type_label(dom)}->{type_label(cod)}"
        case Apply(a, b):
            return f"apply {type_label(a)}->{type_label(b)}"
        case Spec():
            return "spec"
        case Seq():
            dom, cod = typecheck(t)
            return f"seq {type_label(dom)}->{type_label(cod)}"
    raise TypeError(f"not a term: {t!r}")


def _box(t: Term) -> str:
    return _label(t) if isinstance(t, Id) else f"[ {_label(t)} ]"


def _wires(boxes: list[str]) -> str:
    return "  ".join("|".center(len(b)) for b in boxes).rstrip()


def render(t: Term) -> str:
    """Boxes stacked bottom to top in the order causation flows."""
    dom, cod = typecheck(t)
    layers = [[_box(b) for b in _flatten(step, Par)]
              for step in _flatten(normalize_term(t), Seq)]
    lines = [f"out: {type_label(cod)}"]
    for boxes in reversed(layers):
        lines.append(_wires(boxes))
        lines.append("  ".join(boxes))
    lines.append(_wires(layers[0]))
    lines.append(f"in:  {type_label(dom)}")
    return "\n".join(lines)
