import pytest
from hypothesis import given
from hypothesis import strategies as st

from causalcalc.errors import InvalidEvent, NotFinite
from causalcalc.types import OMEGA, OMEGA_T, UNIT, Enum, TypeExpr, enum, normalize_type

A, B, C = Enum("A", 2), Enum("B", 3), Enum("C", 1)

base = st.sampled_from([A, B, C, OMEGA])
nested = st.recursive(st.one_of(base, st.none()),
                      lambda inner: st.lists(inner, max_size=3).map(tuple), max_leaves=10)


def test_unit_is_dropped():
    assert normalize_type((None, enum("X", 2))) == TypeExpr((Enum("X", 2),))


def test_associativity_flattens():
    assert normalize_type(((A, B), C)) == TypeExpr((A, B, C))
    assert normalize_type((A, (B, C))) == TypeExpr((A, B, C))


def test_unit_tensor_unit_is_unit():
    assert normalize_type((UNIT, UNIT)) == UNIT
    assert UNIT.factors == ()


@given(nested)
def test_normalize_idempotent(t):
    once = normalize_type(t)
    assert normalize_type(once) == once


@given(nested, nested)
def test_normalize_is_monoid_hom(s, t):
    assert normalize_type((s, t)) == normalize_type(s) @ normalize_type(t)


def test_events_row_major_and_index():
    t = enum("A", 2) @ enum("U", 3)
    evs = list(t.events())
    assert evs[:4] == [(0, 0), (0, 1), (0, 2), (1, 0)]
    assert [t.index(e) for e in evs] == list(range(6))
    assert t.index((1, 2)) == 1 * 3 + 2


def test_unit_has_one_event():
    assert list(UNIT.events()) == [()]
    assert UNIT.size == 1


def test_event_validity():
    t = enum("A", 2) @ OMEGA_T
    assert t.contains((1, "(spec)"))
    assert not t.contains((2, "(spec)"))
    assert not t.contains((1,))
    assert not t.contains(("x", 1))
    with pytest.raises(InvalidEvent):
        t.check((True, "x"))


def test_omega_not_finite():
    with pytest.raises(NotFinite):
        OMEGA_T.size
    with pytest.raises(NotFinite):
        list((enum("A", 2) @ OMEGA_T).events())


def test_bad_enum():
    with pytest.raises(ValueError):
        Enum("A", 0)
    with pytest.raises(ValueError):
        Enum("has space", 2)
