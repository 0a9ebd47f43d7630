import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from symquad.algebra import random_rational, sigma_ring, xi_ring
from symquad.errors import DegenerateInput, DimensionTooLarge, NotSymmetricInput
from symquad.symfun import (
    discriminant_from_sigma,
    discriminant_log_derivative_check,
    discriminant_of_roots,
    discriminant_xi,
    elementary_in_power_sums,
    elementary_xi,
    express_in_sigma,
    is_symmetric,
    monic_coeffs,
    newton_determinant_p,
    newton_determinant_sigma,
    newton_in_sigma,
    power_sum_xi,
    symmetrize,
    vieta_image,
)
from symquad.systems import SymmetricSystem

from conftest import distinct_points, rationals

DH = SymmetricSystem(3, 2, -2, Fraction(1, 2), Fraction(-1, 2))


# --- Vieta and coefficients ----------------------------------------------------

@pytest.mark.parametrize("x, h", [([1, 2, 3], [6, 11, 6]), ([7, 0, 0, 0], [7, 0, 0, 0]),
                                  ([2, 3], [5, 6])])
def test_vieta_image(x, h):
    assert vieta_image(x) == h


@pytest.mark.parametrize("h, coeffs", [([5, 6], [1, -5, 6]), ([6, 11, 6], [1, -6, 11, -6]),
                                       ([0, 0, 0], [1, 0, 0, 0])])
def test_monic_coeffs(h, coeffs):
    assert monic_coeffs(h) == coeffs


# --- Newton identities -----------------------------------------------------------

def test_classical_power_sums():
    s1, s2, s3 = sigma_ring(3).gens
    assert newton_in_sigma(2, 3) == s1 ** 2 - s2 * 2
    assert newton_in_sigma(3, 3) == s1 ** 3 - s1 * s2 * 3 + s3 * 3


@pytest.mark.parametrize("n", [1, 2, 5])
def test_p0_is_dimension(n):
    assert newton_in_sigma(0, n) == sigma_ring(n).const(n)


@pytest.mark.parametrize("n", range(1, 7))
def test_power_sums_round_trip(n):
    for k in range(1, 13):
        assert express_in_sigma(power_sum_xi(k, n)) == newton_in_sigma(k, n)


@given(st.integers(1, 6), st.integers(1, 8), st.integers(0, 10 ** 6))
def test_determinant_identities(n, k, seed):
    rng = random.Random(seed)
    x = [random_rational(rng, 20) for _ in range(n)]
    sig = vieta_image(x)
    powers = [sum(v ** j for v in x) for j in range(1, k + 1)]
    assert newton_determinant_p(k, sig) == powers[-1]
    sigma_k = sig[k - 1] if k <= n else 0
    assert newton_determinant_sigma(k, powers) == math.factorial(k) * sigma_k


@given(st.integers(1, 6), st.integers(0, 10 ** 6))
def test_elementary_from_power_sums(n, seed):
    rng = random.Random(seed)
    x = [random_rational(rng, 20) for _ in range(n)]
    powers = [sum(v ** j for v in x) for j in range(1, n + 1)]
    sig = vieta_image(x)
    for k in range(1, n + 1):
        assert elementary_in_power_sums(k, n).eval(powers) == sig[k - 1]


# --- expressing in sigma -----------------------------------------------------------

def test_p2_in_two_variables():
    s1, s2 = sigma_ring(2).gens
    assert express_in_sigma(power_sum_xi(2, 2)) == s1 ** 2 - s2 * 2


def test_two_dimensional_discriminant():
    s1, s2 = sigma_ring(2).gens
    x1, x2 = xi_ring(2).gens
    assert express_in_sigma((x1 - x2) ** 2) == s1 ** 2 - s2 * 4


def test_product_is_sigma3():
    assert express_in_sigma(elementary_xi(3, 3)) == sigma_ring(3).gens[2]


def test_asymmetric_input_rejected():
    x1, x2 = xi_ring(2).gens
    with pytest.raises(NotSymmetricInput) as info:
        express_in_sigma(x1 * x1 + x2)
    assert info.value.witness == (1, 2)


# --- symmetrization ----------------------------------------------------------------

def test_symmetrize_square():
    x1, x2 = xi_ring(2).gens
    assert symmetrize(x1 ** 2) == (x1 ** 2 + x2 ** 2) / 2


def test_symmetrize_fixes_symmetric():
    assert symmetrize(elementary_xi(2, 3)) == elementary_xi(2, 3)


def test_symmetrize_antisymmetric_vanishes():
    x1, x2 = xi_ring(2).gens
    assert symmetrize(x1 - x2).is_zero()


def test_symmetrize_refuses_large_n():
    with pytest.raises(DimensionTooLarge):
        symmetrize(xi_ring(9).gens[0])


@given(st.integers(2, 4), st.integers(0, 10 ** 6))
def test_symmetrize_idempotent(n, seed):
    rng = random.Random(seed)
    ring = xi_ring(n)
    P = ring.zero()
    for _ in range(3):
        e = [rng.randint(0, 2) for _ in range(n)]
        P = P + ring.monomial(e, random_rational(rng, 9))
    S = symmetrize(P)
    assert is_symmetric(S)
    assert symmetrize(S) == S


# --- discriminants ----------------------------------------------------------------

@pytest.mark.parametrize("h, value", [([5, 6], 1), ([6, 11, 6], 4), ([2, 1], 0)])
def test_discriminant_examples(h, value):
    assert discriminant_from_sigma(h) == value


def test_three_dimensional_closed_form():
    h1, h2, h3 = 6, 11, 6
    closed = (-27 * h3 ** 2 + 18 * h1 * h2 * h3 - 4 * h1 ** 3 * h3 - 4 * h2 ** 3
              + h1 ** 2 * h2 ** 2)
    assert discriminant_from_sigma([h1, h2, h3]) == closed == 4


@given(st.integers(2, 5).flatmap(lambda n: distinct_points(n) | st.lists(rationals(), min_size=n,
                                                                         max_size=n)))
def test_discriminant_matches_product(x):
    assert discriminant_from_sigma(vieta_image(x)) == discriminant_of_roots(x)
    assert discriminant_xi(len(x)).eval(x) == discriminant_of_roots(x)


def test_log_derivative_two_dimensional():
    assert discriminant_log_derivative_check(SymmetricSystem(2, 1, 0, 0, 0), [3, Fraction(-1, 2)])


def test_log_derivative_darboux_halphen():
    assert (2 - 1) * (2 * DH.alpha + 3 * DH.beta) * 2 == -4
    assert discriminant_log_derivative_check(DH, [1, 2, 3])


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.builds(SymmetricSystem, st.just(n), rationals(), rationals(), rationals(), rationals()),
    distinct_points(n))))
def test_log_derivative_random(case):
    sys, x = case
    assert discriminant_log_derivative_check(sys, x)


def test_log_derivative_degenerate_point():
    with pytest.raises(DegenerateInput):
        discriminant_log_derivative_check(DH, [1, 1, 3])
