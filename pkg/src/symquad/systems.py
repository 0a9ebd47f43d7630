"""Quadratic dynamical systems and their symmetric subclass.

A general quadratic system is ``x_k' = sum_{i,j} A[k][i][j] x_i x_j`` with
``A[k][i][j] == A[k][j][i]`` (full double sum, so an off-diagonal monomial
``x_i x_j`` gets coefficient ``2 * A[k][i][j]``). A symmetric system is

    x_k' = alpha x_k^2 + beta x_k p1 + gamma p1^2 + delta p2,

where ``p1 = sum x`` and ``p2 = sum x^2``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    MultiPoly,
    Scalar,
    exact_inverse,
    parse_scalar,
    serialize_scalar,
    to_scalar,
    xi_ring,
)
from .errors import DimensionMismatch, NotSymmetric, SingularMatrix


@dataclass(frozen=True)
class QuadraticTensor:
    n: int
    A: tuple  # A[k][i][j]

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ValueError("dimension must be at least 1")
        A = tuple(tuple(tuple(to_scalar(v) for v in row) for row in mat) for mat in self.A)
        if any(isinstance(v, complex) for mat in A for row in mat for v in row):
            A = tuple(tuple(tuple(complex(v) for v in row) for row in mat) for mat in A)
        if len(A) != n or any(len(m) != n or any(len(r) != n for r in m) for m in A):
            raise DimensionMismatch(f"tensor shape does not match n={n}")
        for k in range(n):
            for i in range(n):
                for j in range(i + 1, n):
                    if A[k][i][j] != A[k][j][i]:
                        raise ValueError(
                            f"tensor not symmetric in upper indices at k={k}, i={i}, j={j}")
        object.__setattr__(self, "A", A)

    @classmethod
    def from_polys(cls, field_polys: Sequence[MultiPoly]) -> "QuadraticTensor":
        """Build the tensor from the n right-hand-side quadratic polynomials."""
        n = len(field_polys)
        A = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for k, f in enumerate(field_polys):
            for exps, c in f.terms.items():
                if sum(exps) != 2:
                    raise ValueError("right-hand side is not homogeneous quadratic")
                idx = [i for i, e in enumerate(exps) for _ in range(e)]
                i, j = idx
                if i == j:
                    A[k][i][i] = c
                else:
                    A[k][i][j] = A[k][j][i] = c / 2
        return cls(n, A)

    def field_polys(self) -> list[MultiPoly]:
        ring = xi_ring(self.n)
        out = []
        for k in range(self.n):
            terms = {}
            for i in range(self.n):
                for j in range(self.n):
                    c = self.A[k][i][j]
                    if c != 0:
                        e = [0] * self.n
                        e[i] += 1
                        e[j] += 1
                        e = tuple(e)
                        terms[e] = terms.get(e, 0) + c
            out.append(MultiPoly(ring, terms))
        return out

    def contract(self, x: Sequence) -> list:
        """Evaluate the vector field sum_{ij} A[k][i][j] x_i x_j."""
        n = self.n
        return [sum(self.A[k][i][j] * x[i] * x[j] for i in range(n) for j in range(n))
                for k in range(n)]

    def to_json(self) -> dict:
        return {"n": self.n,
                "A": [[[serialize_scalar(v) for v in row] for row in mat] for mat in self.A]}

    @classmethod
    def from_json(cls, obj) -> "QuadraticTensor":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["n"]), [[[parse_scalar(v) for v in row] for row in mat]
                                    for mat in obj["A"]])


@dataclass(frozen=True)
class SymmetricSystem:
    """Parameters of the symmetric form; ``canonical()`` folds redundant ones."""

    n: int
    alpha: Scalar = Fraction(0)
    beta: Scalar = Fraction(0)
    gamma: Scalar = Fraction(0)
    delta: Scalar = Fraction(0)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        values = [to_scalar(getattr(self, name)) for name in ("alpha", "beta", "gamma", "delta")]
        if any(isinstance(v, complex) for v in values):
            values = [complex(v) for v in values]
        for name, v in zip(("alpha", "beta", "gamma", "delta"), values):
            object.__setattr__(self, name, v)

    @property
    def params(self) -> tuple:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def canonical(self) -> "SymmetricSystem":
        """Unique representative: delta folded away for n=2; everything into alpha for n=1."""
        a, b, g, d = self.params
        if self.n == 1:
            return SymmetricSystem(1, a + b + g + d, 0, 0, 0)
        if self.n == 2:
            return SymmetricSystem(2, a + 2 * d, b - 2 * d, g + d, 0)
        return self

    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.params)

    def to_json(self) -> dict:
        return {"n": self.n, "alpha": serialize_scalar(self.alpha),
                "beta": serialize_scalar(self.beta), "gamma": serialize_scalar(self.gamma),
                "delta": serialize_scalar(self.delta)}

    def __str__(self):
        return (f"SymmetricSystem(n={self.n}, alpha={_fmt(self.alpha)}, beta={_fmt(self.beta)}, "
                f"gamma={_fmt(self.gamma)}, delta={_fmt(self.delta)})")


def _fmt(v):
    s = serialize_scalar(v)
    return s if isinstance(s, str) else complex(*s)


class Kind(enum.Enum):
    GENERIC = "generic"
    ALMOST_GENERIC_ONLY = "almost generic"
    NON_GENERIC = "non-generic"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    c: tuple = field(default_factory=tuple)

    def describe(self) -> str:
        if self.kind is Kind.GENERIC:
            return "generic"
        zeros = [f"c{k + 1} = 0" for k, v in enumerate(self.c) if v == 0]
        return f"{self.kind.value} ({', '.join(zeros)})"


# --------------------------------------------------------------------------

def to_tensor(sys: SymmetricSystem) -> QuadraticTensor:
    n = sys.n
    a, b, g, d = sys.params
    A = [[[None] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if i == j == k:
                    v = a + b + g + d
                elif i == j:
                    v = g + d
                elif i == k or j == k:
                    v = (b + 2 * g) / 2
                else:
                    v = g
                A[k][i][j] = v
    return QuadraticTensor(n, A)


def system_field_polys(sys: SymmetricSystem) -> list[MultiPoly]:
    ring = xi_ring(sys.n)
    xs = ring.gens
    if not sys.is_exact():
        xs = tuple(x.to_numeric() for x in xs)
    p1 = sum(xs, ring.zero())
    p2 = sum((x * x for x in xs), ring.zero())
    common = p1 * p1 * sys.gamma + p2 * sys.delta
    return [x * x * sys.alpha + x * p1 * sys.beta + common for x in xs]


def _adjacent_transpositions(n: int):
    for m in range(n - 1):
        perm = list(range(n))
        perm[m], perm[m + 1] = perm[m + 1], perm[m]
        yield m, perm


def _same(a, b, tol: float) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def check_tensor_symmetry(A: QuadraticTensor, tol: float = 1e-12):
    """Return None, or a witness (transposition, k, i, j) of asymmetry.

    Exact entries are compared exactly; numeric ones with relative ``tol``.
    """
    n = A.n
    for m, T in _adjacent_transpositions(n):
        for k in range(n):
            for i in range(n):
                for j in range(i, n):
                    if not _same(A.A[T[k]][T[i]][T[j]], A.A[k][i][j], tol):
                        return ((m + 1, m + 2), k + 1, i + 1, j + 1)
    return None


def detect_symmetry(A: QuadraticTensor, tol: float = 1e-12) -> SymmetricSystem:
    """Extract canonical (alpha, beta, gamma, delta) from a symmetric tensor.

    Raises :class:`NotSymmetric` with a witness ``((m, m+1), k, i, j)``
    (1-based) for the first adjacent transposition that changes the tensor.
    """
    witness = check_tensor_symmetry(A, tol)
    if witness is not None:
        T, k, i, j = witness
        raise NotSymmetric(
            f"tensor changes under transposition {T}: A[{k}][{i}][{j}]", witness)
    n = A.n
    T = A.A
    if n == 1:
        sys = SymmetricSystem(1, T[0][0][0])
    elif n == 2:
        g = T[0][1][1]
        b = 2 * T[0][0][1] - 2 * g
        a = T[0][0][0] - b - g
        sys = SymmetricSystem(2, a, b, g, 0)
    else:
        g = T[2][0][1]
        d = T[0][1][1] - g
        b = 2 * T[0][0][1] - 2 * g
        a = T[0][0][0] - b - g - d
        sys = SymmetricSystem(n, a, b, g, d)
    rebuilt = to_tensor(sys).A
    if not all(_same(x, y, tol) for mx, my in zip(rebuilt, A.A)
               for rx, ry in zip(mx, my) for x, y in zip(rx, ry)):
        # unreachable for tensors invariant under S_n
        raise NotSymmetric("tensor is permutation invariant but not of symmetric form")
    return sys


def vector_field(sys: SymmetricSystem, x: Sequence) -> list:
    xs = [to_scalar(v) if not isinstance(v, (complex, float)) else complex(v) for v in x]
    p1 = sum(xs)
    p2 = sum(v * v for v in xs)
    common = sys.gamma * p1 * p1 + sys.delta * p2
    return [sys.alpha * v * v + sys.beta * v * p1 + common for v in xs]


def field_of(system) -> list[MultiPoly]:
    if isinstance(system, SymmetricSystem):
        return system_field_polys(system)
    if isinstance(system, QuadraticTensor):
        return system.field_polys()
    raise TypeError(f"not a system: {system!r}")


def dimension_of(system) -> int:
    return system.n


def apply_L_xi(system, P: MultiPoly) -> MultiPoly:
    """Apply the derivation L = sum_k F_k d/dx_k to a polynomial in x."""
    n = dimension_of(system)
    if P.ring.nvars != n:
        raise DimensionMismatch(f"polynomial has {P.ring.nvars} variables, system has n={n}")
    F = field_of(system)
    if F[0].ring != P.ring:
        F = [MultiPoly(P.ring, f.terms, _trusted=True) for f in F]
    out = P.ring.zero()
    for k in sorted(P.used_variables()):
        out = out + P.diff(k) * F[k]
    return out


def transform_tensor(A: QuadraticTensor, B: Sequence[Sequence]) -> QuadraticTensor:
    """Tensor of the same system in coordinates eta = B x.

    A~[k][i][j] = sum B[k][p] A[p][q][r] Binv[q][i] Binv[r][j].
    """
    n = A.n
    if len(B) != n or any(len(r) != n for r in B):
        raise DimensionMismatch("matrix size does not match tensor")
    Binv = exact_inverse(B)
    B = [[to_scalar(v) for v in r] for r in B]
    # contract one index at a time
    T1 = [[[sum(B[k][p] * A.A[p][q][r] for p in range(n)) for r in range(n)]
           for q in range(n)] for k in range(n)]
    T2 = [[[sum(T1[k][q][r] * Binv[q][i] for q in range(n)) for r in range(n)]
           for i in range(n)] for k in range(n)]
    T3 = [[[sum(T2[k][i][r] * Binv[r][j] for r in range(n)) for j in range(n)]
           for i in range(n)] for k in range(n)]
    return QuadraticTensor(n, _symmetrize_numeric(T3))


def _symmetrize_numeric(T):
    n = len(T)
    for k in range(n):
        for i in range(n):
            for j in range(i + 1, n):
                a, b = T[k][i][j], T[k][j][i]
                if a != b:
                    # numeric round-off only; exact contractions are symmetric
                    m = (a + b) / 2
                    T[k][i][j] = T[k][j][i] = m
    return T


def quasi_symmetric_check(A: QuadraticTensor, B: Sequence[Sequence]) -> SymmetricSystem:
    """Canonical parameters of the system in coordinates eta = B x.

    Raises :class:`SingularMatrix` for non-invertible B and
    :class:`NotSymmetric` when the transformed system is not symmetric.
    """
    try:
        At = transform_tensor(A, B)
    except SingularMatrix:
        raise
    return detect_symmetry(At)


def permutation_matrix(perm: Sequence[int]) -> list[list[Fraction]]:
    n = len(perm)
    return [[Fraction(int(perm[i] == j)) for j in range(n)] for i in range(n)]


def classify(sys: SymmetricSystem) -> Classification:
    """Generic / almost generic / non-generic from the sigma-basis constants."""
    from .reduction import sigma_system

    c = tuple(sigma_system(sys).c)
    if all(v != 0 for v in c):
        kind = Kind.GENERIC
    elif all(v != 0 for v in c[:-1]):
        kind = Kind.ALMOST_GENERIC_ONLY
    else:
        kind = Kind.NON_GENERIC
    return Classification(kind, c)
