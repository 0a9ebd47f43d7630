"""Exact first integrals of quadratic systems."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import MultiPoly, exact_kernel, random_rational, serialize_scalar, xi_ring
from .errors import BadIndices
from .systems import QuadraticTensor, apply_L_xi


@dataclass(frozen=True)
class QuadraticForm:
    """sum_{i <= j} Q[i][j] x_i x_j, stored as a symmetric matrix."""

    n: int
    Q: tuple

    def poly(self) -> MultiPoly:
        ring = xi_ring(self.n)
        terms = {}
        for i in range(self.n):
            for j in range(i, self.n):
                c = self.Q[i][j]
                if c:
                    e = [0] * self.n
                    e[i] += 1
                    e[j] += 1
                    terms[tuple(e)] = c
        return MultiPoly(ring, terms)

    def __call__(self, x: Sequence):
        return sum(self.Q[i][j] * x[i] * x[j]
                   for i in range(self.n) for j in range(i, self.n))

    def to_json(self) -> dict:
        return {"Q": [[serialize_scalar(v) for v in row] for row in self.Q]}

    def __str__(self):
        return str(self.poly())


def _quadratic_monomials(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def quadratic_integral_basis(A: QuadraticTensor) -> list[QuadraticForm]:
    """Basis of quadratic forms Q with L Q = 0."""
    n = A.n
    ring = xi_ring(n)
    pairs = _quadratic_monomials(n)
    images = []
    for i, j in pairs:
        e = [0] * n
        e[i] += 1
        e[j] += 1
        images.append(apply_L_xi(A, ring.monomial(e)))
    cubic = sorted({m for img in images for m in img.terms}, reverse=True)
    rows = [[img.coeff(m) for img in images] for m in cubic]
    basis = exact_kernel(rows, cols=len(pairs)) if rows else [
        [Fraction(int(k == f)) for k in range(len(pairs))] for f in range(len(pairs))]
    out = []
    for vec in basis:
        Q = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), v in zip(pairs, vec):
            Q[i][j] = Q[j][i] = v
        out.append(QuadraticForm(n, tuple(tuple(r) for r in Q)))
    return out


def check_polynomial_integral(system, P: MultiPoly) -> bool:
    return apply_L_xi(system, P).is_zero()


@dataclass
class RationalIntegral:
    numerator: MultiPoly
    denominator: MultiPoly
    points_checked: int = 0
    passed: bool = False
    failures: list = field(default_factory=list)

    def __call__(self, x):
        return self.numerator.eval(x) / self.denominator.eval(x)


def lv_rational_integral(n: int, i: int, j: int, system=None, points: int = 10,
                         seed: int = 0) -> RationalIntegral:
    """P_ij = ((x_i - x_j) / (x_i x_j))^(n-2) * prod_k x_k for the Lotka-Volterra family.

    Indices are 1-based. After cancelling x_i x_j the integral is
    (x_i - x_j)^(n-2) prod_{k != i,j} x_k / (x_i x_j)^(n-3). It is checked
    by the quotient rule, L(num) * den == num * L(den), at random rational
    points with nonzero coordinates.
    """
    if n < 3:
        raise BadIndices("rational integrals are defined for n >= 3")
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise BadIndices(f"need distinct indices in 1..{n}, got ({i}, {j})")
    if system is None:
        from .presets import lotka_volterra_tensor
        system = lotka_volterra_tensor(n)
    ring = xi_ring(n)
    x = ring.gens
    xi_, xj = x[i - 1], x[j - 1]
    num = (xi_ - xj) ** (n - 2)
    for k in range(n):
        if k not in (i - 1, j - 1):
            num = num * x[k]
    den = (xi_ * xj) ** (n - 3)
    result = RationalIntegral(num, den)
    Lnum = apply_L_xi(system, num)
    Lden = apply_L_xi(system, den)
    rng = random.Random(seed)
    for _ in range(points):
        pt = [random_rational(rng, 1000) for _ in range(n)]
        lhs = Lnum.eval(pt) * den.eval(pt)
        rhs = num.eval(pt) * Lden.eval(pt)
        result.points_checked += 1
        if lhs != rhs:
            result.failures.append(pt)
    result.passed = not result.failures
    return result


def basis_to_json(basis: Sequence[QuadraticForm]) -> list:
    return [q.to_json() for q in basis]
