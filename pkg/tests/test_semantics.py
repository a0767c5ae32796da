import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from causalcalc.errors import InvalidEvent, NeedProbes, TypeMismatch
from causalcalc.modeling import specialize
from causalcalc.laws import (rand_function_matrix, rand_matrix,
                             rand_stochastic_matrix, rand_term, rand_type)
from causalcalc.semantics import (Kernel, SubDist, data_services, dump_kernel,
                                  evaluate, function_defects, identity,
                                  indistinguishable, is_comonoid_homomorphism,
                                  is_function, is_function_rows, kernel_apply,
                                  kernel_par, kernel_seq)
from causalcalc.syntax import serialize
from causalcalc.terms import (Apply, Const, Copy, Del, Id, Lit, Mix, Par, Seq,
                              Spec, Swap)
from causalcalc.types import OMEGA_T, UNIT, enum

from conftest import X2, X3, Y2

seeds = st.integers(0, 2**32 - 1)
HALF = F(1, 2)
M1 = [[HALF, HALF], [0, 1]]
M2 = [[1, 0], [F(1, 3), F(2, 3)]]


def test_subdist_drops_zero_and_merges():
    d = SubDist([((0,), F(1, 4)), ((1,), 0), ((0,), F(1, 4))])
    assert dict(d) == {(0,): HALF}
    assert d.mass == HALF
    assert SubDist.zero().mass == 0
    with pytest.raises(ValueError):
        SubDist({(0,): -1})


def test_literal_row_readout():
    k = evaluate(Lit(X2, X2, M1))
    assert k((0,)) == {(0,): HALF, (1,): HALF}


def test_seq_matches_hand_product():
    k = evaluate(Seq(Lit(X2, X2, M1), Lit(X2, X2, M2)))
    # (1/2)(1, 0) + (1/2)(1/3, 2/3)
    assert k((0,)) == {(0,): F(2, 3), (1,): F(1, 3)}
    assert k.matrix() == oracles.matmul(M1, M2)


def test_kernel_apply():
    assert kernel_apply(identity(enum("A", 3)), (2,)) == {(2,): 1}
    zero = evaluate(Lit(X2, Y2, [[0, 0], [0, 0]]))
    assert kernel_apply(zero, (1,)).mass == 0 and len(kernel_apply(zero, (1,))) == 0
    copy, _, _ = data_services(X2)
    assert kernel_apply(copy, (1,)) == {(1, 1): 1}
    with pytest.raises(InvalidEvent):
        kernel_apply(copy, (2,))
    with pytest.raises(InvalidEvent):
        kernel_apply(copy, 1)


def test_seq_units_and_zero(rng):
    for _ in range(20):
        a, b = rand_type(rng), rand_type(rng)
        k = Kernel.from_matrix(a, b, rand_matrix(rng, a, b))
        assert indistinguishable(kernel_seq(identity(a), k), k)
        assert indistinguishable(kernel_seq(k, identity(b)), k)
        zero = Kernel.from_matrix(b, b, [[0] * b.size] * b.size)
        assert all(row.mass == 0 for row in kernel_seq(k, zero).rows())


def test_seq_type_mismatch():
    with pytest.raises(TypeMismatch):
        kernel_seq(identity(X2), identity(X3))


def test_seq_two_stochastic_against_oracle(rng):
    for _ in range(10):
        m1 = rand_stochastic_matrix(rng, X3, X2)
        m2 = rand_stochastic_matrix(rng, X2, X3)
        k = kernel_seq(Kernel.from_matrix(X3, X2, m1), Kernel.from_matrix(X2, X3, m2))
        assert k.matrix() == oracles.matmul(m1, m2)


def test_par_identity_and_kronecker():
    a, b = enum("A", 2), enum("B", 3)
    assert indistinguishable(kernel_par(identity(a), identity(b)), identity(a @ b))
    v = Kernel.from_matrix(UNIT, X2, [[HALF, HALF]])
    w = Kernel.from_matrix(UNIT, Y2, [[0, 1]])
    assert kernel_par(v, w)(()) == {(0, 1): HALF, (1, 1): HALF}


def test_par_index_convention(rng):
    a, u, b, v = enum("A", 2), enum("U", 3), enum("B", 2), enum("V", 2)
    m1, m2 = rand_matrix(rng, a, b), rand_matrix(rng, u, v)
    k = kernel_par(Kernel.from_matrix(a, b, m1), Kernel.from_matrix(u, v, m2))
    assert k.matrix() == oracles.kron(m1, m2)


def test_par_with_unit_kernel(rng):
    m = rand_matrix(rng, X2, Y2)
    k = Kernel.from_matrix(X2, Y2, m)
    assert indistinguishable(kernel_par(k, identity(UNIT)), k)
    assert indistinguishable(kernel_par(identity(UNIT), k), k)


def test_data_services():
    copy, delete, swap = data_services(enum("A", 5))
    assert all(delete((x,)) == {(): 1} for x in range(5))
    c3, d3, _ = data_services(X3)
    counit = kernel_seq(c3, kernel_par(d3, identity(X3)))
    assert indistinguishable(counit, identity(X3))
    c2, _, s2 = data_services(X2)
    assert indistinguishable(kernel_seq(c2, s2), c2)


@pytest.mark.parametrize("rows, expected", [
    ([[0, 1, 0], [1, 0, 0], [0, 0, 1]], True),
    ([[HALF, HALF], [0, 1]], False),
    ([[HALF, 0], [0, 1]], False),
])
def test_is_function(rows, expected):
    k = Kernel.from_matrix(enum("A", len(rows)), enum("B", len(rows[0])), rows)
    assert is_function(k) is expected
    assert is_comonoid_homomorphism(k) is expected


def test_function_defects():
    k = Kernel.from_matrix(X2, Y2, [[HALF, 0], [HALF, HALF]])
    assert function_defects(k) == {"total": False, "single-valued": False}
    k = Kernel.from_matrix(X2, Y2, [[HALF, HALF], [0, 1]])
    assert function_defects(k) == {"total": True, "single-valued": False}


def test_is_function_over_omega_needs_probes():
    k = evaluate(Del(OMEGA_T))
    with pytest.raises(NeedProbes):
        is_function(k)
    assert is_function(k, [("(spec)",), ("junk",)])
    assert not is_function(evaluate(Apply(UNIT, X2)), [("junk",)])


def test_indistinguishable():
    k = evaluate(Lit(X2, Y2, M1))
    assert indistinguishable(k, k)
    eps = F(1, 1000000)
    nudged = evaluate(Lit(X2, Y2, [[HALF, HALF - eps], [0, 1]]))
    assert not indistinguishable(k, nudged)
    assert indistinguishable(k, nudged, probes=[(1,)])
    with pytest.raises(InvalidEvent):
        indistinguishable(k, nudged, probes=[(5,)])
    with pytest.raises(TypeMismatch):
        indistinguishable(k, identity(X2 @ X2))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_middle_two_interchange(seed):
    rng = random.Random(seed)
    a, b, c, u, v, w = (enum(n, rng.randint(1, 3)) for n in "ABCUVW")
    f, g = Lit(a, b, rand_matrix(rng, a, b)), Lit(b, c, rand_matrix(rng, b, c))
    t, s = Lit(u, v, rand_matrix(rng, u, v)), Lit(v, w, rand_matrix(rng, v, w))
    left = evaluate(Par(Seq(f, g), Seq(t, s)))
    right = evaluate(Seq(Par(f, t), Par(g, s)))
    assert indistinguishable(left, right)
    assert left.matrix() == oracles.kron(oracles.matmul(f.matrix, g.matrix),
                                         oracles.matmul(t.matrix, s.matrix))


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_substochastic_closure(seed):
    rng = random.Random(seed)
    t = rand_term(rng, rand_type(rng), rand_type(rng), depth=3)
    assert all(row.mass <= 1 for row in evaluate(t).rows())


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_mix_is_pointwise_affine(seed):
    rng = random.Random(seed)
    a, b = rand_type(rng), rand_type(rng)
    m1, m2 = rand_matrix(rng, a, b), rand_matrix(rng, a, b)
    p = F(rng.randint(0, 6), 6)
    k = evaluate(Mix(p, Lit(a, b, m1), Lit(a, b, m2)))
    assert k.matrix() == oracles.mix(p, m1, m2)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_unit_laws(seed):
    rng = random.Random(seed)
    a, b = rand_type(rng), rand_type(rng)
    f = rand_term(rng, a, b)
    k = evaluate(f)
    assert indistinguishable(evaluate(Seq(Id(a), f)), k)
    assert indistinguishable(evaluate(Seq(f, Id(b))), k)
    assert indistinguishable(evaluate(Par(f, Id(UNIT))), k)


@pytest.mark.parametrize("t", [X2, X3, X2 @ Y2, enum("A", 4)])
def test_comonoid_laws(t):
    copy, delete, swap = data_services(t)
    i = identity(t)
    assert indistinguishable(kernel_seq(copy, kernel_par(copy, i)),
                             kernel_seq(copy, kernel_par(i, copy)))
    assert indistinguishable(kernel_seq(copy, kernel_par(delete, i)), i)
    assert indistinguishable(kernel_seq(copy, kernel_par(i, delete)), i)
    assert indistinguishable(kernel_seq(copy, swap), copy)


def test_structural_terms():
    a, b = enum("A", 2), enum("B", 3)
    assert evaluate(Swap(a, b))((1, 2)) == {(2, 1): 1}
    assert evaluate(Copy(a @ b))((1, 2)) == {(1, 2, 1, 2): 1}
    assert evaluate(Del(a))((0,)) == {(): 1}
    assert evaluate(Const(b, (2,)))(()) == {(2,): 1}


def test_scalars_multiply():
    p, q = Lit(UNIT, UNIT, [[F(2, 3)]]), Lit(UNIT, UNIT, [[F(3, 4)]])
    assert evaluate(p)(()) == {(): F(2, 3)}
    assert evaluate(Seq(p, q))(()) == {(): HALF}
    assert evaluate(Par(p, q))(()) == {(): HALF}


def test_vectors_and_covectors():
    vec = Lit(UNIT, X2, [[F(1, 4), F(3, 4)]])
    cov = Lit(X2, UNIT, [[HALF], [1]])
    # covector after vector is a scalar
    assert evaluate(Seq(vec, cov))(()) == {(): F(1, 8) + F(3, 4)}


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_functions_closed_under_composition(seed):
    rng = random.Random(seed)
    a, b, c = rand_type(rng), rand_type(rng), rand_type(rng)
    f = Kernel.from_matrix(a, b, rand_function_matrix(rng, a, b))
    g = Kernel.from_matrix(b, c, rand_function_matrix(rng, b, c))
    assert is_function(kernel_seq(f, g)) and is_function(kernel_par(f, g))


@pytest.mark.parametrize("m, n", [(m, n) for m in (1, 2, 3) for n in (1, 2, 3)])
def test_function_tests_agree_exhaustively(m, n):
    a, b = enum("A", m), enum("B", n)
    for rows in oracles.all_functions(m, n):
        k = Kernel.from_matrix(a, b, rows)
        assert is_function_rows(k) and is_comonoid_homomorphism(k)


def test_apply_runs_literal_codes():
    a, b = enum("A", 3), enum("B", 2)
    rng = random.Random(7)
    for _ in range(10):
        m = rand_matrix(rng, a, b)
        code = serialize(Lit(a, b, m))
        k = evaluate(Apply(a, b))
        for x in a.events():
            got = k((code,) + x)
            assert [got.get((j,)) for j in range(2)] == list(m[x[0]])


def test_apply_failures_are_zero_mass():
    k = evaluate(Apply(X2, Y2))
    assert k(("(not a term", 0)).mass == 0
    assert k(("(id (enum X 2))", 0)).mass == 0       # wrong signature
    assert k(("(lit (enum X 2) (enum Y 2) ((1 0) (0 1)))", 0)).mass == 1
    assert evaluate(Apply(X2, Y2), fuel=0)(("(lit (enum X 2) (enum Y 2) ((1 0) (0 1)))", 0)).mass == 0


def test_spec_runtime():
    k = evaluate(Spec())
    target = serialize(Apply(UNIT, X2))
    out = k((target, "(const (enum X 2) 1)"))
    (code,), = out.keys()
    assert evaluate(Apply(UNIT, X2))((code,)) == {(1,): 1}
    assert k(("(lit (enum X 2) (enum X 2) ((1 0) (0 1)))", "x")).mass == 0
    assert k(("garbage", "x")).mass == 0


def _self_loop(fuel):
    # G(w) = 1/2 run(spec(w, w)) + 1/2 δ_0 ; Γ = spec(G, G) is a closed I -> X code
    body = Mix(HALF, Apply(UNIT, X2), Seq(Del(OMEGA_T), Const(X2, (0,))))
    g = serialize(Seq(Seq(Copy(OMEGA_T), Spec()), body))
    gamma = specialize(g, (g,))
    return evaluate(Apply(UNIT, X2), fuel)((gamma,))


def test_fuel_monotone():
    masses = [_self_loop(n).mass for n in range(8)]
    assert masses == sorted(masses)
    assert masses[0] == 0 and masses[1] == HALF and masses[4] == F(15, 16)


def test_dump_format():
    k = evaluate(Lit(X2, Y2, [[HALF, HALF], [0, 1]]))
    assert dump_kernel(k) == "0 -> {0: 1/2, 1: 1/2}\n1 -> {1: 1}"
    z = evaluate(Lit(X2, X2 @ Y2, [[0, 0, 0, 0], [0, F(1, 3), 0, 0]]))
    assert dump_kernel(z) == "0 -> {}\n1 -> {(pair 0 1): 1/3}"
