import json
from fractions import Fraction

import numpy as np
import pytest

from symquad.algebra import matrix_rank, xi_ring
from symquad.errors import BadIndices
from symquad.integrals import (
    QuadraticForm,
    basis_to_json,
    check_polynomial_integral,
    lv_rational_integral,
    quadratic_integral_basis,
)
from symquad.numerics import ToleranceConfig, integrate_direct
from symquad.presets import lotka_volterra_tensor, preset
from symquad.symfun import power_sum_xi
from symquad.systems import SymmetricSystem, to_tensor


def _quad(n, entries):
    Q = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), c in entries.items():
        Q[i - 1][j - 1] = Q[j - 1][i - 1] = Fraction(c)
    return QuadraticForm(n, tuple(tuple(r) for r in Q))


def _span_equal(basis, family):
    vec = lambda q: [q.Q[i][j] for i in range(q.n) for j in range(i, q.n)]  # noqa: E731
    B, Fm = [vec(q) for q in basis], [vec(q) for q in family]
    return matrix_rank(B) == matrix_rank(Fm) == matrix_rank(B + Fm)


@pytest.mark.parametrize("n, dim", [(2, 1), (3, 2), (4, 2), (5, 0), (6, 0)])
def test_lotka_volterra_dimensions(n, dim):
    assert len(quadratic_integral_basis(lotka_volterra_tensor(n))) == dim


@pytest.mark.parametrize("m", [1, 3, Fraction(5, 2)])
def test_other_lotka_volterra_exponents_have_none(m):
    assert quadratic_integral_basis(to_tensor(preset("kp2", m=m))) == []


def test_three_dimensional_family():
    family = [_quad(3, {(1, 2): 1, (1, 3): -1}), _quad(3, {(1, 2): 1, (2, 3): -1})]
    assert _span_equal(quadratic_integral_basis(lotka_volterra_tensor(3)), family)


def test_four_dimensional_family():
    family = [_quad(4, {(1, 2): 1, (3, 4): 1, (1, 3): -1, (2, 4): -1}),
              _quad(4, {(1, 2): 1, (3, 4): 1, (2, 3): -1, (1, 4): -1})]
    assert _span_equal(quadratic_integral_basis(lotka_volterra_tensor(4)), family)


def test_basis_elements_are_integrals():
    A = lotka_volterra_tensor(4)
    for q in quadratic_integral_basis(A):
        assert check_polynomial_integral(A, q.poly())


def test_lax_conserves_sum_of_squares():
    lax = SymmetricSystem(3, 0, 1, 0, -1)
    assert check_polynomial_integral(lax, power_sum_xi(2, 3))
    basis = quadratic_integral_basis(to_tensor(lax))
    assert _span_equal(basis, [_quad(3, {(1, 1): 1, (2, 2): 1, (3, 3): 1})])


def test_non_integrals_detected():
    lv3 = preset("lv", n=3)
    x1, x2, x3 = xi_ring(3).gens
    assert not check_polynomial_integral(lv3, power_sum_xi(2, 3))
    assert check_polynomial_integral(lv3, (x1 - x2) * x3)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_rational_integrals(n):
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            r = lv_rational_integral(n, i, j, points=12, seed=3)
            assert r.passed and r.points_checked == 12 and not r.failures


def test_rational_integral_fails_for_wrong_system():
    r = lv_rational_integral(4, 1, 2, system=lotka_volterra_tensor(4, 3))
    assert not r.passed and r.failures


def test_rational_integral_value():
    r = lv_rational_integral(3, 1, 2)
    assert r([3, 1, 5]) == (3 - 1) * 5


@pytest.mark.parametrize("n, i, j", [(2, 1, 2), (3, 1, 1), (3, 0, 2), (4, 1, 5)])
def test_bad_indices(n, i, j):
    with pytest.raises(BadIndices):
        lv_rational_integral(n, i, j)


def test_basis_json():
    data = json.loads(json.dumps(basis_to_json(quadratic_integral_basis(lotka_volterra_tensor(2)))))
    assert len(data) == 1 and len(data[0]["Q"]) == 2


def test_integrals_conserved_numerically():
    A = lotka_volterra_tensor(4)
    basis = quadratic_integral_basis(A)
    traj = integrate_direct(A, [1, 2, 0.5, -1], (0.0, 0.3), ToleranceConfig(), t_eval=np.linspace(0, 0.3, 7))
    for q in basis:
        values = [q(x) for x in traj.states]
        assert max(abs(v - values[0]) for v in values) < 1e-9
    P = lv_rational_integral(4, 1, 3)
    values = [P(list(x)) for x in traj.states]
    assert max(abs(v - values[0]) for v in values) < 1e-9 * abs(values[0])
