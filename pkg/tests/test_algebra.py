import json
import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from symquad.algebra import (
    MultiPoly,
    diff_total,
    exact_det,
    exact_inverse,
    exact_kernel,
    jet_ring,
    matrix_rank,
    mpoly_eval,
    parse_scalar,
    poly_from_json,
    serialize_scalar,
    sigma_ring,
    to_scalar,
    xi_ring,
)
from symquad.errors import MissingVariable, MixedScalarMode, SingularMatrix

from conftest import rationals


# --- scalars ---------------------------------------------------------------

def test_rational_is_canonical():
    v = to_scalar("-6/4")
    assert (v.numerator, v.denominator) == (-3, 2)


@pytest.mark.parametrize("value, text", [(Fraction(3, 1), "3"), (Fraction(-7, 3), "-7/3")])
def test_rational_serialization(value, text):
    assert serialize_scalar(value) == text
    assert parse_scalar(text) == value


def test_complex_serializes_as_pair():
    assert serialize_scalar(1 + 2j) == [1.0, 2.0]
    assert parse_scalar([1.0, 2.0]) == 1 + 2j


def test_booleans_are_rejected():
    with pytest.raises(TypeError):
        to_scalar(True)


# --- evaluation ------------------------------------------------------------

def test_eval_discriminant_of_two_roots():
    s1, s2 = sigma_ring(2).gens
    assert mpoly_eval(s1 ** 2 - s2 * 4, {"s1": 5, "s2": 6}) == 1


def test_eval_product():
    x1, x2, x3 = xi_ring(3).gens
    assert mpoly_eval(x1 * x2 * x3, {"x1": 1, "x2": 2, "x3": 3}) == 6


def test_eval_power_sum_exact():
    x1, x2 = xi_ring(2).gens
    value = mpoly_eval(x1 ** 2 + x2 ** 2, {"x1": Fraction(3, 2), "x2": Fraction(1, 2)})
    assert value == Fraction(5, 2) and isinstance(value, Fraction)


def test_eval_missing_variable():
    x1, x2 = xi_ring(2).gens
    with pytest.raises(MissingVariable):
        mpoly_eval(x1 * x2, {"x1": 1})


def test_eval_mixed_modes():
    x1, x2 = xi_ring(2).gens
    with pytest.raises(MixedScalarMode):
        (x1 * x2).eval([1, 2.5])


def test_polynomials_never_mix_modes():
    x1, _ = xi_ring(2).gens
    with pytest.raises(MixedScalarMode):
        x1 + x1.to_numeric()


def test_numeric_eval_is_complex():
    x1, x2 = xi_ring(2).gens
    assert (x1 * x2).to_numeric().eval([1j, 2.0]) == 2j


# --- jets ------------------------------------------------------------------

def test_diff_total_examples():
    h, h1, h2 = jet_ring(2).gens
    assert diff_total(h ** 2) == h * h1 * 2
    assert diff_total(h * h1) == h1 ** 2 + h * h2
    assert diff_total(jet_ring(2).const(1)).is_zero()


def test_diff_total_lowers_grade_by_four():
    h, h1, h2 = jet_ring(3).gens[:3]
    p = h ** 2 * h1 + h2 * h
    assert diff_total(p).grade() == p.grade() - 4


def _random_poly(ring, rng, terms=4, degree=3):
    p = ring.zero()
    for _ in range(terms):
        e = [0] * ring.nvars
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(ring.nvars)] += 1
        p = p + ring.monomial(e, Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
    return p


def _random_homogeneous(ring, rng, weight_choices=3):
    p = ring.zero()
    degree = rng.randint(1, weight_choices)
    for _ in range(3):
        e = [0] * ring.nvars
        for _ in range(degree):
            e[rng.randrange(ring.nvars)] += 1
        p = p + ring.monomial(e, rng.randint(1, 9))
    return p


@given(st.integers(0, 10 ** 6))
def test_ring_axioms(seed):
    rng = random.Random(seed)
    ring = xi_ring(3)
    p, q, r = (_random_poly(ring, rng) for _ in range(3))
    assert (p * q) * r == p * (q * r)
    assert (p + q) + r == p + (q + r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert (p - p).is_zero()


@given(st.integers(0, 10 ** 6))
def test_grade_is_additive(seed):
    rng = random.Random(seed)
    ring = xi_ring(3)
    p, q = _random_homogeneous(ring, rng), _random_homogeneous(ring, rng)
    assert (p * q).grade() == p.grade() + q.grade()


def test_grade_undefined_for_mixed_weights():
    x1, x2 = xi_ring(2).gens
    assert (x1 + x1 * x2).grade() is None


@given(st.integers(0, 10 ** 6))
def test_diff_total_is_a_derivation(seed):
    rng = random.Random(seed)
    ring = jet_ring(4)
    p, q = _random_poly(ring, rng), _random_poly(ring, rng)
    assert diff_total(p * q) == diff_total(p) * q + p * diff_total(q)


def test_no_zero_coefficients_stored():
    x1, x2 = xi_ring(2).gens
    p = x1 * 2 + x2 - x1 * 2
    assert list(p.terms) == [(0, 1)]


def test_equality_is_structural():
    x1, x2 = xi_ring(2).gens
    assert x1 * x2 + x1 == x1 + x2 * x1


def test_poly_json_round_trip():
    s1, s2, s3 = sigma_ring(3).gens
    p = s1 ** 3 - s1 * s2 * Fraction(3, 7) + s3
    assert poly_from_json(json.loads(json.dumps(p.to_json()))) == p


# --- linear algebra --------------------------------------------------------

def test_kernel_examples():
    assert exact_kernel([[1, 0], [0, 1]]) == []
    assert len(exact_kernel([[0, 0, 0], [0, 0, 0]])) == 3
    assert exact_kernel([[1, 1, 1]]) == [[1, -1, 0], [1, 0, -1]]


@given(st.lists(st.lists(rationals(9), min_size=5, max_size=5), min_size=1, max_size=4))
def test_kernel_rank_nullity(M):
    K = exact_kernel(M)
    for v in K:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)
        # content one: coprime integers
        assert all(Fraction(c).denominator == 1 for c in v)
        g = 0
        for c in v:
            g = gcd(g, int(c))
        assert g == 1
    assert matrix_rank(M) + len(K) == 5


def test_det_and_inverse():
    M = [[2, 1], [1, 1]]
    assert exact_det(M) == 1
    assert exact_inverse(M) == [[1, -1], [-1, 2]]
    with pytest.raises(SingularMatrix):
        exact_inverse([[1, 2], [2, 4]])


def test_ring_mismatch_is_not_silent():
    a = xi_ring(2).gens[0]
    b = MultiPoly(sigma_ring(2), {(1, 0): Fraction(1)})
    with pytest.raises(MissingVariable):
        a + b
