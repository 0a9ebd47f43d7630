import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from symquad.algebra import diff_total, jet_ring, random_rational, sigma_ring
from symquad.errors import (
    DegenerateInitialData,
    GenericityViolated,
    NotAlmostGeneric,
    NotGeneric,
    NotReducible,
    ZeroScale,
)
from symquad.reduction import (
    AlmostGenericReduction,
    ReducedODE,
    ReductionData,
    apply_L_sigma,
    chazy_c,
    chazy_companion_check,
    chazy_ode,
    gen_darboux_halphen,
    initial_jets,
    reduce,
    reduce_almost_generic,
    reduce_generic,
    rescale_ode,
    sigma_system,
    sigma_system_newton,
)
from symquad.systems import Kind, SymmetricSystem, classify
from symquad.verify import reference_n2, reference_n3

from conftest import rationals

DH = SymmetricSystem(3, 2, -2, F(1, 2), F(-1, 2))
LV3 = SymmetricSystem(3, -2, 1, 0, 0)
LAX = SymmetricSystem(3, 0, 1, 0, -1)


def generic_systems(n_min=1, n_max=5):
    return st.builds(SymmetricSystem, st.integers(n_min, n_max), rationals(20), rationals(20),
                     rationals(20), rationals(20)).filter(
        lambda s: classify(s.canonical()).kind is Kind.GENERIC)


# --- sigma system --------------------------------------------------------------

def test_sigma_system_darboux_halphen():
    s1, s2, s3 = sigma_ring(3).gens
    S = sigma_system(DH)
    assert S.rhs == (-s2, -s3 * 6, s2 ** 2 - s1 * s3 * 4)
    assert S.c == (-1, -6)


def test_sigma_system_lotka_volterra():
    s1, s2, s3 = sigma_ring(3).gens
    S = sigma_system(LV3)
    assert S.rhs[0] == s2 * 4 - s1 ** 2
    assert S.c == (4, 6)


def test_sigma_system_two_dimensional_example():
    s1, s2 = sigma_ring(2).gens
    S = sigma_system(SymmetricSystem(2, 0, 2, -1, 0))
    assert S.rhs == (sigma_ring(2).zero(), -s1 ** 3 + s1 * s2 * 4)


@given(st.builds(SymmetricSystem, st.integers(1, 6), rationals(), rationals(), rationals(),
                 rationals()))
def test_sigma_system_two_routes_agree(sys):
    assert sigma_system(sys).rhs == sigma_system_newton(sys).rhs


@given(st.builds(SymmetricSystem, st.integers(2, 5), rationals(), rationals(), rationals(),
                 rationals()))
def test_sigma_rhs_weights(sys):
    for k, r in enumerate(sigma_system(sys).rhs, start=1):
        assert r.is_zero() or r.grade() == -4 * (k + 1)


def test_L_sigma_examples():
    S = sigma_system(DH)
    s1, s2, s3 = sigma_ring(3).gens
    assert apply_L_sigma(S, s1) == -s2
    assert apply_L_sigma(S, apply_L_sigma(S, s1)) == s3 * 6
    assert apply_L_sigma(S, sigma_ring(3).const(5)).is_zero()


# --- generic reductions ---------------------------------------------------------

def test_two_dimensional_example():
    red = reduce_generic(SymmetricSystem(2, 1, 0, 0, 0))
    h, h1 = jet_ring(2).gens[:2]
    assert red.ode == ReducedODE(2, {(1, 1): -3, (3, 0): 1})
    assert red.sigma_exprs[1] == (h ** 2 - h1) / 2


def test_one_dimensional_reduction():
    red = reduce_generic(SymmetricSystem(1, 3))
    assert red.ode == ReducedODE(1, {(2,): -3})


@given(generic_systems(2, 2))
def test_two_dimensional_formula(sys):
    a, b, g, _ = sys.canonical().params
    ode, s2 = reference_n2(a, b, g)
    red = reduce_generic(sys)
    assert red.ode == ode and red.sigma_exprs[1] == s2


@given(generic_systems(3, 3))
def test_three_dimensional_formula(sys):
    lam, s2, s3 = reference_n3(*sys.params)
    red = reduce_generic(sys)
    assert red.ode.terms == {w: v for w, v in zip(
        [(1, 0, 1), (0, 2, 0), (2, 1, 0), (4, 0, 0)], [x / lam[0] for x in lam[1:]]) if v != 0}
    assert red.sigma_exprs[1:] == (s2, s3)


# Computed offline by an independent computer-algebra elimination.
ORACLE = {
    (4, 1, 2, -1, F(1, 2)): (
        {(0, 1, 1, 0): F(-49, 3), (1, 0, 0, 1): -20, (1, 2, 0, 0): F(85, 3),
         (2, 0, 1, 0): F(295, 3), (3, 1, 0, 0): 200, (5, 0, 0, 0): F(-1375, 3)},
        lambda h, h1, h2, h3: [
            h ** 2 / 6 - h1 / 6,
            h ** 3 * F(-7, 18) - h * h1 * F(2, 9) + h2 / 18,
            h ** 4 * F(-53, 72) - h ** 2 * h1 / 36 + h * h2 * F(11, 72) + h1 ** 2 / 24 - h3 / 72]),
    (4, 3, -1, F(2, 3), 1): (
        {(0, 1, 1, 0): F(-211, 7), (1, 0, 0, 1): F(-34, 3), (1, 2, 0, 0): F(2099, 21),
         (2, 0, 1, 0): F(1223, 21), (3, 1, 0, 0): F(-1538, 7), (5, 0, 0, 0): F(492, 7)},
        lambda h, h1, h2, h3: [
            h ** 2 * F(13, 21) - h1 / 14,
            h ** 3 * F(40, 189) - h * h1 * F(37, 378) + h2 / 126,
            h ** 4 * F(13, 294) - h ** 2 * h1 * F(229, 5292) + h * h2 * F(37, 4536)
            + h1 ** 2 * F(205, 31752) - h3 / 1512]),
    (5, 1, 1, 1, 1): (
        {(0, 0, 2, 0, 0): F(-170, 3), (0, 1, 0, 1, 0): F(-503, 6), (0, 3, 0, 0, 0): F(4555, 12),
         (1, 0, 0, 0, 1): -34, (1, 1, 1, 0, 0): F(10027, 6), (2, 0, 0, 1, 0): 449,
         (2, 2, 0, 0, 0): F(-18902, 3), (3, 0, 1, 0, 0): -3044, (4, 1, 0, 0, 0): 11628,
         (6, 0, 0, 0, 0): -4320},
        lambda h, h1, h2, h3, h4: [
            h ** 2 - h1 / 12,
            h ** 3 - h * h1 * F(19, 36) + h2 / 36,
            h ** 4 - h ** 2 * h1 * F(83, 72) + h * h2 * F(23, 144) + h1 ** 2 * F(35, 288)
            - h3 / 144,
            h ** 5 - h ** 3 * h1 * F(679, 360) + h ** 2 * h2 * F(281, 720)
            + h * h1 ** 2 * F(473, 864) - h * h3 * F(7, 180) - h1 * h2 * F(17, 216) + h4 / 720]),
}


@pytest.mark.parametrize("key", list(ORACLE))
def test_matches_offline_elimination(key):
    n, *params = key
    terms, exprs = ORACLE[key]
    red = reduce_generic(SymmetricSystem(n, *params))
    assert red.ode == ReducedODE(n, terms)
    assert list(red.sigma_exprs[1:]) == exprs(*jet_ring(n).gens[:n])


@given(generic_systems(1, 5))
def test_reduced_ode_is_weight_homogeneous(sys):
    red = reduce_generic(sys)
    assert red.ode.is_homogeneous()
    for k, e in enumerate(red.sigma_exprs, start=1):
        assert e.grade() == -4 * k


@given(generic_systems(2, 4), st.integers(0, 10 ** 6))
def test_sigma_exprs_solve_the_sigma_system(sys, seed):
    """Substituting sigma_k(h) into the sigma system leaves only the reduced ODE."""
    red = reduce_generic(sys)
    S = sigma_system(sys.canonical())
    n = sys.n
    J = jet_ring(n + 1)
    exprs = [e.extend(J) for e in red.sigma_exprs]
    for k in range(n - 1):
        rhs = S.rhs[k].subs({i: exprs[i] for i in range(n)}, target=J)
        assert diff_total(exprs[k]) == rhs
    # the last equation holds on solutions: evaluate at jets satisfying the ODE
    rng = random.Random(seed)
    jets = [random_rational(rng, 9) for _ in range(n)]
    jets.append(red.ode.highest_derivative(jets))
    rhs = S.rhs[n - 1].subs({i: exprs[i] for i in range(n)}, target=J)
    assert diff_total(exprs[n - 1]).eval(jets) == rhs.eval(jets)


def test_non_generic_rejected():
    with pytest.raises(NotGeneric):
        reduce_generic(LAX)
    with pytest.raises(NotReducible):
        reduce(SymmetricSystem(3, 0, 1, 1, 0))
    with pytest.raises(NotReducible):
        reduce(SymmetricSystem(4, 4, 1, 0, -1))


# --- almost generic --------------------------------------------------------------

def test_lax_is_reduced_to_second_order():
    red = reduce(LAX)
    assert isinstance(red, AlmostGenericReduction)
    assert red.ode == ReducedODE(2, {(1, 1): -2})
    assert red.n == 3 and red.last_c == 3


def test_two_dimensional_almost_generic():
    b, g = F(3), F(-1, 2)
    red = reduce_almost_generic(SymmetricSystem(2, 0, b, g, 0))
    h = jet_ring(2).gen(0)
    assert red.ode == ReducedODE(1, {(2,): -(b + 2 * g)})
    assert red.last_linear == (2 * b, h ** 3 * g)


def test_almost_generic_rejects_generic():
    with pytest.raises(NotAlmostGeneric):
        reduce_almost_generic(DH)


# --- serialization -----------------------------------------------------------------

def test_reduction_json_round_trip():
    red = reduce_generic(LV3)
    assert ReductionData.from_json(json.dumps(red.to_json())) == red
    lax = reduce(LAX)
    assert AlmostGenericReduction.from_json(json.dumps(lax.to_json())) == lax


def test_ode_json_round_trip():
    ode = reduce_generic(SymmetricSystem(4, 1, 2, -1, F(1, 2))).ode
    assert ReducedODE.from_json(json.loads(json.dumps(ode.to_json()))) == ode


# --- initial data ------------------------------------------------------------------

def test_initial_jets_examples():
    assert initial_jets(DH, [1, 2, 3]) == [6, -11, 36]
    assert initial_jets(LV3, [1, 2, 3]) == [6, 8, 48]


def test_initial_jets_reproduce_sigma():
    red = reduce_generic(DH)
    x0 = [1, 2, 3]
    jets = initial_jets(DH, x0)
    assert [e.eval(jets) for e in red.sigma_exprs] == [6, 11, 6]


def test_initial_jets_need_distinct_coordinates():
    with pytest.raises(DegenerateInitialData):
        initial_jets(DH, [1, 1, 2])


def test_initial_jets_complex():
    jets = initial_jets(DH, [1j, 2, 3.5])
    assert abs(jets[0] - (5.5 + 1j)) < 1e-14


# --- rescaling and Chazy -------------------------------------------------------------

def test_rescale_by_two():
    ode = ReducedODE(2, {(1, 1): -3, (3, 0): 1})
    assert rescale_ode(ode, 2) == ReducedODE(2, {(1, 1): F(-3, 2), (3, 0): F(1, 4)})


def test_darboux_halphen_rescales_to_chazy3():
    assert rescale_ode(reduce_generic(DH).ode, -2) == chazy_ode(0)


def test_zero_scale_rejected():
    with pytest.raises(ZeroScale):
        rescale_ode(ReducedODE(1, {(2,): 1}), 0)


@pytest.mark.parametrize("a, b, c", [(1, 0, 0), (2, 1, F(1, 16))])
def test_chazy_parameter(a, b, c):
    assert chazy_c(a, b) == c
    assert chazy_companion_check(a, b)


def test_chazy_parameter_requires_genericity():
    with pytest.raises(GenericityViolated):
        chazy_c(1, 1)


def test_generalized_halphen_at_one_zero_is_darboux_halphen():
    assert gen_darboux_halphen(1, 0) == DH


@given(rationals(20), rationals(20))
def test_chazy_companion_random(a, b):
    if (a + 2 * b) * (a - b) == 0:
        return
    assert chazy_companion_check(a, b)
