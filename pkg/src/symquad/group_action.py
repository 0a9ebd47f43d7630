"""The commutative group of matrices lambda*E + q*e*e^T and its action.

These matrices centralize the coordinate permutations, so they map
symmetric systems to symmetric systems and act on the reduced ODE by the
scaling h -> (lambda + n q) h.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .algebra import MultiPoly, Scalar, exact_sqrt, serialize_scalar, sigma_ring, to_scalar
from .errors import DimensionMismatch, IndexOutOfRange, NotGeneric, SingularMatrix
from .reduction import ReducedODE, rescale_ode
from .systems import Kind, SymmetricSystem, classify


@dataclass(frozen=True)
class BMatrix:
    lam: Scalar
    q: Scalar
    n: int

    def __post_init__(self):
        lam, q = to_scalar(self.lam), to_scalar(self.q)
        if isinstance(lam, complex) or isinstance(q, complex):
            lam, q = complex(lam), complex(q)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "q", q)

    @property
    def det(self) -> Scalar:
        return self.lam ** (self.n - 1) * (self.lam + self.n * self.q)

    @property
    def h_scale(self) -> Scalar:
        """Factor lambda + n q relating sigma_1 in the new and old coordinates."""
        return self.lam + self.n * self.q

    def is_invertible(self) -> bool:
        return self.lam != 0 and self.lam + self.n * self.q != 0

    def as_matrix(self) -> list[list[Scalar]]:
        return [[self.lam * (i == j) + self.q for j in range(self.n)] for i in range(self.n)]

    def apply(self, x: Sequence) -> list:
        s = sum(x)
        return [self.lam * v + self.q * s for v in x]

    def to_json(self) -> dict:
        return {"n": self.n, "lambda": serialize_scalar(self.lam), "q": serialize_scalar(self.q)}

    def __str__(self):
        return f"B(lambda={_s(self.lam)}, q={_s(self.q)}; n={self.n})"


def _s(v):
    out = serialize_scalar(v)
    return out if isinstance(out, str) else str(complex(*out))


def identity(n: int) -> BMatrix:
    return BMatrix(1, 0, n)


def b_compose(B1: BMatrix, B2: BMatrix) -> BMatrix:
    if B1.n != B2.n:
        raise DimensionMismatch("matrices of different dimension")
    n = B1.n
    return BMatrix(B1.lam * B2.lam, B1.lam * B2.q + B2.lam * B1.q + n * B1.q * B2.q, n)


def b_inverse(B: BMatrix) -> BMatrix:
    if not B.is_invertible():
        raise SingularMatrix(f"{B} is singular (det = lambda^(n-1) (lambda + n q) = 0)")
    return BMatrix(1 / B.lam, -B.q / (B.lam * (B.lam + B.n * B.q)), B.n)


def transform_system(sys: SymmetricSystem, B: BMatrix) -> SymmetricSystem:
    """System satisfied by eta = B x when x solves ``sys``."""
    if not B.is_invertible():
        raise SingularMatrix(f"{B} is singular")
    if B.n != sys.n:
        raise DimensionMismatch("matrix and system dimensions differ")
    n = sys.n
    lam, q = B.lam, B.q
    if n == 1:
        a = sys.canonical().alpha
        return SymmetricSystem(1, a / (lam + q))
    if n == 2:
        a, b, g, _ = sys.canonical().params
        s = lam + 2 * q
        return SymmetricSystem(
            2,
            s * a / lam ** 2,
            -(4 * q * (lam + q) * a - lam ** 2 * b) / (lam ** 2 * s),
            (q * (lam + q) * a + lam ** 2 * g) / (lam ** 2 * s),
            0,
        )
    a, b, g, d = sys.params
    s = lam + n * q
    return SymmetricSystem(
        n,
        a / lam,
        -(2 * q * a - lam * b) / (lam * s),
        -(q ** 2 * (a + n * d) - lam * (lam * g - 2 * q * d)) / (lam ** 2 * s),
        (q * (a + n * d) + lam * d) / lam ** 2,
    )


@dataclass(frozen=True)
class NormalForm:
    B: BMatrix
    system: SymmetricSystem
    case: str


def _sqrt(value):
    if isinstance(value, Fraction):
        r = exact_sqrt(value)
        if r is not None:
            return r
    return cmath.sqrt(complex(value))


def normal_form(sys: SymmetricSystem) -> NormalForm:
    """Orbit representative under the B-group together with the matrix reaching it.

    n >= 3: (1, beta~, gamma~, 0). n = 2: one of the three two-dimensional
    forms, with square roots taken exactly when rational and otherwise on
    the principal branch. n = 1: B(alpha, 0) reaching x' = x^2 when alpha != 0.
    """
    n = sys.n
    cls = classify(sys)
    if cls.kind is not Kind.GENERIC:
        raise NotGeneric(f"normal forms are defined for generic systems; this one is {cls.describe()}")
    if n == 1:
        a = sys.canonical().alpha
        if a == 0:
            B = identity(1)
            return NormalForm(B, transform_system(sys, B), "alpha=0")
        B = BMatrix(a, 0, 1)
        return NormalForm(B, transform_system(sys, B), "alpha!=0")
    if n == 2:
        a, b, g, _ = sys.canonical().params
        if a != -b:
            lam = _sqrt(a * (a + b))
            case = "n2-gamma"
        elif a != 4 * g:
            lam = _sqrt(a * (a - 4 * g))
            case = "n2-beta"
        else:
            lam = a
            case = "n2-exceptional"
        q = lam * (lam - a) / (2 * a)
        B = BMatrix(lam, q, 2)
        return NormalForm(B, transform_system(sys, B), case)
    a, b, g, d = sys.params
    lam = a
    q = -a * d / (a + n * d)
    B = BMatrix(lam, q, n)
    return NormalForm(B, transform_system(sys, B), "general")


def normal_form_parameters(sys: SymmetricSystem) -> tuple:
    """Closed-form (beta~, gamma~) of the n >= 3 representative."""
    a, b, g, d = sys.params
    n = sys.n
    return ((2 * a * d + b * a + b * n * d) / a ** 2, (d * d + g * a + g * n * d) / a ** 2)


def transform_ode(ode: ReducedODE, lam, q, n: int | None = None) -> ReducedODE:
    """Action of B(lambda, q) on the reduced ODE: h~ = (lambda + n q) h."""
    lam, q = to_scalar(lam), to_scalar(q)
    if n is None:
        n = ode.order
    mu = lam + n * q
    if mu == 0 or lam == 0:
        raise SingularMatrix("B(lambda, q) is singular")
    return rescale_ode(ode, mu)


def sigma_pushforward(k: int, B: BMatrix) -> MultiPoly:
    """sigma_k(B x) in terms of sigma_1(x), ..., sigma_k(x).

    sigma_k(eta) = sum_{m=0}^k C(n-k+m, m) lambda^(k-m) q^m sigma_{k-m} sigma_1^m.
    """
    n = B.n
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"k={k} outside 1..{n}")
    ring = sigma_ring(n)
    s = [ring.const(1)] + list(ring.gens)
    if isinstance(B.lam, complex):
        s = [p.to_numeric() for p in s]
    out = ring.zero()
    for m in range(k + 1):
        coeff = comb(n - k + m, m) * B.lam ** (k - m) * B.q ** m
        if coeff != 0:
            out = out + s[k - m] * s[1] ** m * coeff
    return out
