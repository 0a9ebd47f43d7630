"""Symmetric functions: elementary/power-sum bases, Vieta map, discriminants."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .algebra import (
    MultiPoly,
    Scalar,
    exact_det,
    random_rational,
    sigma_ring,
    to_scalar,
    xi_ring,
)
from .errors import DegenerateInput, DimensionTooLarge, NotSymmetricInput


def _coerce_point(x: Sequence) -> list:
    pts = [to_scalar(v) for v in x]
    if any(isinstance(v, complex) for v in pts):
        pts = [complex(v) for v in pts]
    return pts


def vieta_image(x: Sequence) -> list:
    """(sigma_1(x), ..., sigma_n(x))."""
    pts = _coerce_point(x)
    e = [Fraction(1) if not pts or isinstance(pts[0], Fraction) else 1 + 0j]
    for v in pts:
        e.append(0 * e[0])
        for k in range(len(e) - 1, 0, -1):
            e[k] = e[k] + v * e[k - 1]
    return e[1:]


def monic_coeffs(h: Sequence) -> list:
    """Coefficients (1, -h1, h2, ..., (-1)^n hn) of the polynomial with Vieta image h."""
    h = _coerce_point(h)
    one = Fraction(1) if all(isinstance(v, Fraction) for v in h) else 1 + 0j
    return [one] + [(-1) ** (k + 1) * v for k, v in enumerate(h)]


# --------------------------------------------------------------------------
# bases as polynomials
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def elementary_xi(k: int, n: int) -> MultiPoly:
    """sigma_k as a polynomial in x_1..x_n (sigma_0 = 1)."""
    ring = xi_ring(n)
    if k == 0:
        return ring.const(1)
    terms = {}
    for combo in itertools.combinations(range(n), k):
        e = [0] * n
        for i in combo:
            e[i] = 1
        terms[tuple(e)] = Fraction(1)
    return MultiPoly(ring, terms)


@lru_cache(maxsize=None)
def power_sum_xi(k: int, n: int) -> MultiPoly:
    ring = xi_ring(n)
    if k == 0:
        return ring.const(n)
    terms = {}
    for i in range(n):
        e = [0] * n
        e[i] = k
        terms[tuple(e)] = Fraction(1)
    return MultiPoly(ring, terms)


@lru_cache(maxsize=None)
def newton_in_sigma(k: int, n: int) -> MultiPoly:
    """Power sum p_k written in sigma_1..sigma_n via Newton's identities.

    p_k = sum_{i=1}^{min(k-1,n)} (-1)^(i-1) s_i p_{k-i} + (-1)^(k-1) k s_k  (last term only if k <= n)
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    ring = sigma_ring(n)
    if k == 0:
        return ring.const(n)
    s = ring.gens
    out = ring.zero()
    for i in range(1, min(k - 1, n) + 1):
        out = out + s[i - 1] * newton_in_sigma(k - i, n) * (-1) ** (i - 1)
    if k <= n:
        out = out + s[k - 1] * ((-1) ** (k - 1) * k)
    return out


@lru_cache(maxsize=None)
def elementary_in_power_sums(k: int, n: int) -> MultiPoly:
    """sigma_k as a polynomial in p_1..p_n (ring variables named p1..pn).

    k sigma_k = sum_{i=1}^k (-1)^(i-1) sigma_{k-i} p_i.
    """
    from .algebra import PolyRing

    ring = PolyRing([f"p{i}" for i in range(1, n + 1)], [-4 * i for i in range(1, n + 1)])
    if k == 0:
        return ring.const(1)
    p = ring.gens
    out = ring.zero()
    for i in range(1, k + 1):
        out = out + elementary_in_power_sums(k - i, n) * p[i - 1] * (-1) ** (i - 1)
    return out / k


def newton_determinant_p(k: int, sigma_values: Sequence) -> Scalar:
    """p_k from the k x k determinant in sigma (values; sigma_j = 0 beyond n)."""
    s = list(sigma_values) + [Fraction(0)] * max(0, k - len(sigma_values))
    M = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        M[i][0] = (i + 1) * s[i]
        for j in range(1, i + 1):
            M[i][j] = s[i - j]
        if i + 1 < k:
            M[i][i + 1] = Fraction(1)
    return exact_det(M)


def newton_determinant_sigma(k: int, power_values: Sequence) -> Scalar:
    """k! sigma_k from the k x k determinant in p_1..p_k."""
    p = list(power_values)
    M = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        M[i][0] = p[i]
        for j in range(1, i + 1):
            M[i][j] = p[i - j]
        if i + 1 < k:
            M[i][i + 1] = Fraction(i + 1)
    return exact_det(M)


# --------------------------------------------------------------------------
# symmetry
# --------------------------------------------------------------------------

def transposition_witness(P: MultiPoly):
    """First adjacent transposition (1-based pair) changing P, or None."""
    n = P.ring.nvars
    for m in range(n - 1):
        perm = list(range(n))
        perm[m], perm[m + 1] = perm[m + 1], perm[m]
        if P.permute(perm) != P:
            return (m + 1, m + 2)
    return None


def is_symmetric(P: MultiPoly) -> bool:
    return transposition_witness(P) is None


def symmetrize(P: MultiPoly) -> MultiPoly:
    """Average of P over all coordinate permutations."""
    n = P.ring.nvars
    if n > 8:
        raise DimensionTooLarge(f"symmetrization enumerates n! permutations; n={n} > 8")
    total = P.ring.zero()
    for perm in itertools.permutations(range(n)):
        total = total + P.permute(perm)
    return total / math.factorial(n)


def express_in_sigma(P: MultiPoly, check_points: int = 5, seed: int = 0) -> MultiPoly:
    """Rewrite a symmetric polynomial in x as a polynomial in sigma_1..sigma_n.

    Classical leading-term reduction: the lex-leading monomial x^a of a
    symmetric polynomial has a_1 >= ... >= a_n and is cancelled by
    c * prod sigma_i^(a_i - a_{i+1}). The result is checked by evaluation
    at random rational points.
    """
    witness = transposition_witness(P)
    if witness is not None:
        raise NotSymmetricInput(f"polynomial changes under transposition {witness}", witness)
    n = P.ring.nvars
    sring = sigma_ring(n)
    sig = [MultiPoly(P.ring, elementary_xi(k, n).terms, _trusted=True) for k in range(1, n + 1)]
    if P.mode == "numeric":
        sig = [s.to_numeric() for s in sig]
    cache: dict[tuple, MultiPoly] = {}

    def sigma_monomial(b):
        if b not in cache:
            out = P.ring.const(1) if P.mode != "numeric" else P.ring.const(1).to_numeric()
            for i, k in enumerate(b):
                if k:
                    out = out * sig[i] ** k
            cache[b] = out
        return cache[b]

    remainder = P
    result = {}
    while remainder:
        lead = max(remainder.terms)  # lexicographic on exponent tuples
        c = remainder.terms[lead]
        b = tuple(lead[i] - (lead[i + 1] if i + 1 < n else 0) for i in range(n))
        if any(v < 0 for v in b):
            raise NotSymmetricInput("leading exponent not a partition")
        result[b] = result.get(b, 0) + c
        remainder = remainder - sigma_monomial(b) * c
        if lead in remainder.terms:
            # only reachable through floating-point cancellation error
            remainder = MultiPoly(remainder.ring, {e: v for e, v in remainder.terms.items()
                                                   if e != lead}, _trusted=True)
    Q = MultiPoly(sring, result)
    if P.mode != "numeric" and check_points:
        rng = random.Random(seed)
        for _ in range(check_points):
            x = [random_rational(rng, 50) for _ in range(n)]
            if Q.eval(vieta_image(x)) != P.eval(x):
                raise AssertionError("express_in_sigma self-check failed")
    return Q


def sigma_to_xi(Q: MultiPoly) -> MultiPoly:
    """Pull a sigma-polynomial back to x coordinates."""
    n = Q.ring.nvars
    return Q.subs({k: elementary_xi(k + 1, n) for k in range(n)}, target=xi_ring(n))


# --------------------------------------------------------------------------
# discriminant
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def discriminant_xi(n: int) -> MultiPoly:
    """prod_{i<j} (x_i - x_j)^2, expanded."""
    ring = xi_ring(n)
    x = ring.gens
    out = ring.const(1)
    for i in range(n):
        for j in range(i + 1, n):
            d = x[i] - x[j]
            out = out * d * d
    return out


def sylvester_matrix(f: Sequence, g: Sequence) -> list[list]:
    """Sylvester matrix of coefficient lists (highest degree first)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    zero = 0 * f[0]
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(f) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(g) + [zero] * (size - n - 1 - i))
    return rows


def discriminant_from_sigma(h: Sequence) -> Scalar:
    """Discriminant prod_{i<j}(x_i - x_j)^2 of the monic polynomial with Vieta image h.

    Computed as (-1)^(n(n-1)/2) Res(f, f') / lead(f) with the Sylvester resultant.
    """
    n = len(h)
    if n < 2:
        raise ValueError("discriminant needs n >= 2")
    f = monic_coeffs(h)
    df = [c * (n - k) for k, c in enumerate(f[:-1])]
    res = exact_det(sylvester_matrix(f, df))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * res / f[0]


def discriminant_of_roots(x: Sequence) -> Scalar:
    pts = _coerce_point(x)
    out = Fraction(1) if all(isinstance(v, Fraction) for v in pts) else 1 + 0j
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            out *= (pts[i] - pts[j]) ** 2
    return out


def discriminant_log_derivative_check(sys, x: Sequence) -> bool:
    """Exact test of L(Delta_n) = (n-1)(2 alpha + n beta) sigma_1 Delta_n at a point."""
    from .systems import apply_L_xi

    n = sys.n
    if n < 2:
        raise ValueError("needs n >= 2")
    pts = _coerce_point(x)
    D = discriminant_xi(n)
    dval = D.eval(pts)
    if dval == 0:
        raise DegenerateInput("discriminant vanishes at the given point")
    LD = apply_L_xi(sys, D)
    lhs = LD.eval(pts)
    rhs = (n - 1) * (2 * sys.alpha + n * sys.beta) * sum(pts) * dval
    return lhs == rhs
