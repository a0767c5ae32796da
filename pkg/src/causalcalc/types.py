"""Event types as flat tensor lists.

The monoidal product is list concatenation and the unit ``I`` is the empty
list, so unit and associativity laws hold by construction rather than by
coherence isomorphisms.

Events are plain tuples with one component per factor: an ``int`` for an
enum factor, a ``str`` (code text) for the model type Ω. The unit event is
``()``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import InvalidEvent, NotFinite

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-']*$")


@dataclass(frozen=True)
class Enum:
    name: str
    size: int

    def __post_init__(self):
        if not _NAME.match(self.name):
            raise ValueError(f"bad enum name {self.name!r}")
        if self.size < 1:
            raise ValueError(f"enum {self.name} must have positive cardinality")

    def __repr__(self):
        return f"Enum({self.name},{self.size})"


@dataclass(frozen=True)
class CodeType:
    def __repr__(self):
        return "Ω"


BaseType = Union[Enum, CodeType]

#: the type of causal models
OMEGA = CodeType()


@dataclass(frozen=True)
class TypeExpr:
    factors: tuple[BaseType, ...] = ()

    def __matmul__(self, other: TypeExpr) -> TypeExpr:
        return TypeExpr(self.factors + other.factors)

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __repr__(self):
        if not self.factors:
            return "I"
        return "⊗".join(map(repr, self.factors))

    @property
    def is_unit(self) -> bool:
        return not self.factors

    @property
    def is_finite(self) -> bool:
        return all(isinstance(f, Enum) for f in self.factors)

    @property
    def size(self) -> int:
        """Number of events; only defined for finite types."""
        if not self.is_finite:
            raise NotFinite(f"type {self!r} involves Ω")
        return math.prod(f.size for f in self.factors)

    def split(self, n: int) -> tuple[TypeExpr, TypeExpr]:
        return TypeExpr(self.factors[:n]), TypeExpr(self.factors[n:])

    def events(self) -> Iterator[tuple]:
        """All events in index order (row-major over the factor list)."""
        if not self.is_finite:
            raise NotFinite(f"type {self!r} involves Ω")
        return itertools.product(*(range(f.size) for f in self.factors))

    def index(self, event: tuple) -> int:
        """Row-major position of ``event``; pair ``(a, u)`` maps to ``a*|U| + u``."""
        self.check(event)
        i = 0
        for f, x in zip(self.factors, event):
            i = i * f.size + x
        return i

    def contains(self, event) -> bool:
        if not isinstance(event, tuple) or len(event) != len(self.factors):
            return False
        for f, x in zip(self.factors, event):
            if isinstance(f, Enum):
                if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < f.size:
                    return False
            elif not isinstance(x, str):
                return False
        return True

    def check(self, event) -> None:
        if not self.contains(event):
            raise InvalidEvent(f"{event!r} does not inhabit {self!r}")


UNIT = TypeExpr()


def enum(name: str, size: int) -> TypeExpr:
    return TypeExpr((Enum(name, size),))


OMEGA_T = TypeExpr((OMEGA,))


def tensor(*parts) -> TypeExpr:
    """Tensor arbitrarily nested types into a flat factor list.

    Accepts TypeExprs, bare base types, ``None`` for the unit, and nested
    tuples/lists of any of these.
    """
    out: list[BaseType] = []

    def walk(p):
        if p is None:
            return
        if isinstance(p, TypeExpr):
            out.extend(p.factors)
        elif isinstance(p, (Enum, CodeType)):
            out.append(p)
        elif isinstance(p, (tuple, list)):
            for q in p:
                walk(q)
        else:
            raise TypeError(f"not a type: {p!r}")

    walk(parts)
    return TypeExpr(tuple(out))


normalize_type = tensor
