import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from symquad.algebra import exact_inverse, random_rational, xi_ring
from symquad.errors import DimensionMismatch, NotSymmetric, SingularMatrix
from symquad.symfun import elementary_xi, is_symmetric, power_sum_xi
from symquad.systems import (
    Kind,
    QuadraticTensor,
    SymmetricSystem,
    apply_L_xi,
    classify,
    detect_symmetry,
    permutation_matrix,
    quasi_symmetric_check,
    to_tensor,
    transform_tensor,
    vector_field,
)

from conftest import rationals

DH = SymmetricSystem(3, 2, -2, Fraction(1, 2), Fraction(-1, 2))
LV3 = SymmetricSystem(3, -2, 1, 0, 0)
LAX = SymmetricSystem(3, 0, 1, 0, -1)


def systems(n_min=1, n_max=6):
    return st.builds(SymmetricSystem, st.integers(n_min, n_max),
                     rationals(), rationals(), rationals(), rationals())


# --- tensor construction ---------------------------------------------------

def test_tensor_of_single_square():
    A = to_tensor(SymmetricSystem(2, 1, 0, 0, 0)).A
    assert A[0][0][0] == 1
    assert sum(v != 0 for m in A for r in m for v in r) == 2  # A[0][0][0] and A[1][1][1]
    assert A[1][1][1] == 1


def test_tensor_of_p1_squared():
    A = to_tensor(SymmetricSystem(3, 0, 0, 1, 0)).A
    assert all(A[k][i][j] == 1 for k in range(3) for i in range(3) for j in range(3))


def test_darboux_halphen_field_at_123():
    assert to_tensor(DH).contract([1, 2, 3]) == [1, -5, -7]
    assert vector_field(DH, [1, 2, 3]) == [1, -5, -7]


def test_lotka_volterra_field_at_123():
    assert vector_field(LV3, [1, 2, 3]) == [4, 4, 0]


def test_field_vanishes_at_origin():
    assert vector_field(SymmetricSystem(4, 3, -1, 2, 5), [0] * 4) == [0] * 4


def test_upper_index_symmetry_enforced():
    with pytest.raises(ValueError):
        QuadraticTensor(2, [[[0, 1], [0, 0]], [[0, 0], [0, 0]]])


def test_tensor_shape_checked():
    with pytest.raises(DimensionMismatch):
        QuadraticTensor(2, [[[0]]])


# --- symmetry detection ----------------------------------------------------

def test_detects_lax_parameters():
    assert detect_symmetry(to_tensor(LAX)) == LAX


def test_asymmetric_tensor_has_witness():
    A = QuadraticTensor(2, [[[1, 0], [0, 0]], [[0, 0], [0, 2]]])
    with pytest.raises(NotSymmetric) as info:
        detect_symmetry(A)
    assert info.value.witness[0] == (1, 2)


@given(systems())
def test_detect_inverts_to_tensor(sys):
    assert detect_symmetry(to_tensor(sys)) == sys.canonical()


def test_two_dimensional_folding():
    sys = SymmetricSystem(2, 1, 2, 3, 4)
    assert sys.canonical().params == (9, -6, 7, 0)
    assert to_tensor(sys) == to_tensor(sys.canonical())


def test_one_dimensional_folding():
    assert SymmetricSystem(1, 1, 2, 3, 4).canonical().params == (10, 0, 0, 0)


@given(systems(), st.integers(0, 10 ** 6))
def test_field_matches_tensor_contraction(sys, seed):
    rng = random.Random(seed)
    x = [random_rational(rng, 30) for _ in range(sys.n)]
    assert vector_field(sys, x) == to_tensor(sys).contract(x)


# --- classification ----------------------------------------------------------

def test_darboux_halphen_is_generic():
    cls = classify(DH)
    assert cls.kind is Kind.GENERIC and cls.c == (-1, -6)


def test_lax_system_is_almost_generic():
    cls = classify(LAX)
    assert cls.kind is Kind.ALMOST_GENERIC_ONLY
    assert cls.describe() == "almost generic (c2 = 0)"


@pytest.mark.parametrize("alpha", [0, 1, Fraction(-3, 7)])
def test_one_dimensional_always_generic(alpha):
    assert classify(SymmetricSystem(1, alpha)).kind is Kind.GENERIC


@given(systems(2, 6))
def test_classification_criterion(sys):
    a, _, _, d = sys.canonical().params
    n = sys.n
    kind = classify(sys).kind
    if n == 2:
        assert (kind is Kind.GENERIC) == (a != 0)
    else:
        assert (kind is Kind.GENERIC) == (a != 0 and a + n * d != 0)
        if kind is Kind.ALMOST_GENERIC_ONLY:
            assert n == 3 and a == 0


def test_non_generic_when_both_vanish():
    assert classify(SymmetricSystem(3, 0, 1, 1, 0)).kind is Kind.NON_GENERIC


# --- the derivation L --------------------------------------------------------

def test_L_of_coordinate():
    x1 = xi_ring(1).gens[0]
    assert apply_L_xi(SymmetricSystem(1, 1), x1) == x1 * x1


def test_lv3_quadratic_integral():
    x1, x2, x3 = xi_ring(3).gens
    assert apply_L_xi(LV3, (x1 - x2) * x3).is_zero()


def test_lax_conserves_p2():
    assert apply_L_xi(LAX, power_sum_xi(2, 3)).is_zero()


def test_L_checks_dimension():
    with pytest.raises(DimensionMismatch):
        apply_L_xi(LV3, xi_ring(2).gens[0])


def test_L_on_tensor_matches_symmetric_form():
    P = elementary_xi(2, 3) * xi_ring(3).gens[0]
    assert apply_L_xi(to_tensor(DH), P) == apply_L_xi(DH, P)


def _random_poly(n, rng):
    ring = xi_ring(n)
    p = ring.zero()
    for _ in range(4):
        e = [0] * n
        for _ in range(rng.randint(0, 3)):
            e[rng.randrange(n)] += 1
        p = p + ring.monomial(e, random_rational(rng, 9))
    return p


@given(systems(2, 5), st.integers(0, 10 ** 6))
def test_L_is_permutation_equivariant(sys, seed):
    rng = random.Random(seed)
    P = _random_poly(sys.n, rng)
    perm = list(range(sys.n))
    rng.shuffle(perm)
    assert apply_L_xi(sys, P.permute(perm)) == apply_L_xi(sys, P).permute(perm)


@given(systems(2, 4), st.integers(1, 4))
def test_L_preserves_symmetry(sys, k):
    P = power_sum_xi(k, sys.n) * elementary_xi(1, sys.n)
    assert is_symmetric(apply_L_xi(sys, P))


def test_L_lowers_grade_by_four():
    P = elementary_xi(2, 3)
    assert apply_L_xi(DH, P).grade() == P.grade() - 4


# --- quasi-symmetric check ---------------------------------------------------

def test_identity_keeps_parameters():
    eye = permutation_matrix([0, 1, 2])
    assert quasi_symmetric_check(to_tensor(DH), eye) == DH


def test_permutation_keeps_parameters():
    P = permutation_matrix([2, 0, 1])
    assert quasi_symmetric_check(to_tensor(DH), P) == DH


def test_round_trip_through_inverse():
    B = [[1, 2, 0], [0, 1, 0], [1, 0, 1]]
    hidden = transform_tensor(to_tensor(LV3), exact_inverse(B))
    assert quasi_symmetric_check(hidden, B) == LV3
    with pytest.raises(NotSymmetric):
        detect_symmetry(hidden)


def test_singular_matrix_rejected():
    with pytest.raises(SingularMatrix):
        quasi_symmetric_check(to_tensor(LV3), [[1, 1, 0], [1, 1, 0], [0, 0, 1]])
