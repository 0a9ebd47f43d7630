"""Exact rationals, graded multivariate polynomials and exact linear algebra.

Scalars come in two modes. *Exact* scalars are :class:`fractions.Fraction`
(Python ints are promoted on entry); *numeric* scalars are Python
``complex``. A polynomial stores coefficients of a single mode. Binary
operations between an exact and a numeric polynomial raise
:class:`MixedScalarMode`; use :meth:`MultiPoly.to_numeric` to convert.

Rings carry an integer weight per variable so that homogeneity with respect
to the grading ``deg t = 4, deg xi = -4`` can be checked structurally.
"""

from __future__ import annotations

import itertools
import math
import numbers
import operator
import random
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import MissingVariable, MixedScalarMode, SingularMatrix

Exponent = tuple[int, ...]
Scalar = Fraction | complex

EXACT = "exact"
NUMERIC = "numeric"


# --------------------------------------------------------------------------
# scalars
# --------------------------------------------------------------------------

def to_scalar(value) -> Scalar:
    """Coerce ``value`` into an exact or numeric scalar.

    Integers, Fractions and ``"p/q"`` strings become Fractions. Floats and
    complex numbers become ``complex``. A two-element ``[re, im]`` list is
    read as a complex number.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, numbers.Complex):
        return complex(value)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


def scalar_mode(value) -> str:
    return EXACT if isinstance(value, (Fraction, numbers.Integral)) else NUMERIC


def is_zero(value) -> bool:
    return value == 0


def serialize_scalar(value):
    """Rationals as ``"p/q"`` (``"p"`` when q == 1); complex as ``[re, im]``."""
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    value = complex(value)
    return [value.real, value.imag]


def parse_scalar(obj) -> Scalar:
    return to_scalar(obj)


def random_rational(rng: random.Random, bound: int = 10**6, nonzero: bool = True) -> Fraction:
    """Random rational with numerator and denominator drawn from [-bound, bound]."""
    while True:
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound) * rng.choice((1, -1))
        value = Fraction(num, den)
        if value != 0 or not nonzero:
            return value


def exact_sqrt(value: Fraction) -> Fraction | None:
    """Rational square root of a non-negative rational, or None."""
    if value < 0:
        return None
    rn, rd = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if rn * rn == value.numerator and rd * rd == value.denominator:
        return Fraction(rn, rd)
    return None


# --------------------------------------------------------------------------
# polynomial rings
# --------------------------------------------------------------------------

class PolyRing:
    """An ordered set of named variables with integer grading weights."""

    __slots__ = ("names", "weights", "_index")

    def __init__(self, names: Sequence[str], weights: Sequence[int]):
        if len(names) != len(weights):
            raise ValueError("names and weights differ in length")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = tuple(names)
        self.weights = tuple(int(w) for w in weights)
        self._index = {name: i for i, name in enumerate(self.names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise MissingVariable(f"variable {name!r} not in ring {self.names}") from None

    def __eq__(self, other):
        return (isinstance(other, PolyRing)
                and self.names == other.names and self.weights == other.weights)

    def __hash__(self):
        return hash((self.names, self.weights))

    def __repr__(self):
        return f"PolyRing({list(self.names)!r})"

    def is_prefix_of(self, other: "PolyRing") -> bool:
        k = self.nvars
        return other.names[:k] == self.names and other.weights[:k] == self.weights

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def const(self, value) -> "MultiPoly":
        value = to_scalar(value)
        return MultiPoly(self, {(0,) * self.nvars: value})

    def gen(self, i: int) -> "MultiPoly":
        exps = [0] * self.nvars
        exps[i] = 1
        return MultiPoly(self, {tuple(exps): Fraction(1)})

    def var(self, name: str) -> "MultiPoly":
        return self.gen(self.index(name))

    @property
    def gens(self) -> tuple["MultiPoly", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exps: Sequence[int], coeff=1) -> "MultiPoly":
        return MultiPoly(self, {tuple(exps): to_scalar(coeff)})

    def weight_of(self, exps: Exponent) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))


def xi_ring(n: int) -> PolyRing:
    """Coordinates xi_1..xi_n, each of weight -4."""
    return PolyRing([f"x{i}" for i in range(1, n + 1)], [-4] * n)


def sigma_ring(n: int) -> PolyRing:
    """Elementary symmetric functions s_1..s_n with weight(s_k) = -4k."""
    return PolyRing([f"s{k}" for k in range(1, n + 1)], [-4 * k for k in range(1, n + 1)])


def jet_name(k: int) -> str:
    if k <= 3:
        return "h" + "'" * k
    return f"h({k})"


def jet_ring(m: int) -> PolyRing:
    """Jet variables h, h', ..., h^(m); weight(h^(k)) = -4(k+1)."""
    return PolyRing([jet_name(k) for k in range(m + 1)], [-4 * (k + 1) for k in range(m + 1)])


def _graded_lex_key(exps: Exponent):
    return (sum(exps), exps)


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------

class MultiPoly:
    """Immutable sparse polynomial over a :class:`PolyRing`.

    ``terms`` maps exponent tuples to nonzero coefficients. Treat instances
    as values; none of the methods mutate ``self``.
    """

    __slots__ = ("ring", "terms", "mode")

    def __init__(self, ring: PolyRing, terms: Mapping[Exponent, object], _trusted: bool = False):
        self.ring = ring
        if _trusted:
            clean = dict(terms)
        else:
            clean = {}
            nv = ring.nvars
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != nv or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent {exps} for ring {ring.names}")
                c = to_scalar(c)
                if c != 0:
                    clean[exps] = clean.get(exps, 0) + c
                    if clean[exps] == 0:
                        del clean[exps]
        modes = {scalar_mode(c) for c in clean.values()}
        if len(modes) > 1:
            raise MixedScalarMode("polynomial mixes exact and numeric coefficients")
        self.terms = clean
        self.mode = modes.pop() if modes else None

    # ---- basic structure -------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[Exponent, Scalar]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: _graded_lex_key(kv[0]), reverse=True)

    def coeff(self, exps: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Scalar:
        return self.coeff((0,) * self.ring.nvars)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def used_variables(self) -> set[int]:
        return {i for exps in self.terms for i, e in enumerate(exps) if e}

    def grade(self) -> int | None:
        """Common weight of all terms, or None if not homogeneous.

        The zero polynomial has no grade.
        """
        weights = {self.ring.weight_of(e) for e in self.terms}
        if len(weights) == 1:
            return weights.pop()
        return None

    def is_homogeneous(self) -> bool:
        return self.is_zero() or self.grade() is not None

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            a, b = _coerce_pair(self, other)
            return a.terms == b.terms
        if isinstance(other, numbers.Number):
            return self.terms == self.ring.const(other).terms if other != 0 else not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # ---- conversions -------------------------------------------------------

    def to_numeric(self) -> "MultiPoly":
        return MultiPoly(self.ring, {e: complex(c) for e, c in self.terms.items()}, _trusted=True)

    def extend(self, ring: PolyRing) -> "MultiPoly":
        """Embed into ``ring`` whose variables start with this ring's variables."""
        if ring == self.ring:
            return self
        if not self.ring.is_prefix_of(ring):
            raise MissingVariable(f"cannot embed {self.ring.names} into {ring.names}")
        pad = (0,) * (ring.nvars - self.ring.nvars)
        return MultiPoly(ring, {e + pad: c for e, c in self.terms.items()}, _trusted=True)

    def restrict(self, ring: PolyRing) -> "MultiPoly":
        """Move into a prefix ring; fails if a dropped variable is used."""
        if ring == self.ring:
            return self
        if not ring.is_prefix_of(self.ring):
            raise MissingVariable(f"cannot restrict {self.ring.names} to {ring.names}")
        k = ring.nvars
        out = {}
        for e, c in self.terms.items():
            if any(e[k:]):
                raise MissingVariable(
                    f"polynomial uses variables outside {ring.names}")
            out[e[:k]] = c
        return MultiPoly(ring, out, _trusted=True)

    # ---- arithmetic -----------------------------------------------------

    def _check_scalar(self, c):
        if self.mode is not None and c != 0 and scalar_mode(c) != self.mode:
            raise MixedScalarMode("scalar mode differs from polynomial coefficients")

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = self.ring.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = _coerce_pair(self, other)
        _check_modes(a, b)
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e, 0) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return MultiPoly(a.ring, out, _trusted=True)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, numbers.Number):
            other = self.ring.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = to_scalar(c)
        self._check_scalar(c)
        if c == 0:
            return self.ring.zero()
        return MultiPoly(self.ring, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = _coerce_pair(self, other)
        _check_modes(a, b)
        out: dict[Exponent, Scalar] = {}
        add = operator.add
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(map(add, ea, eb))
                v = out.get(e, 0) + ca * cb
                if v == 0:
                    out.pop(e, None)
                else:
                    out[e] = v
        return MultiPoly(a.ring, out, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            other = to_scalar(other)
            if other == 0:
                raise ZeroDivisionError("polynomial division by zero")
            if isinstance(other, Fraction):
                return self.scale(1 / other)
            return self.scale(1 / other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, numbers.Integral) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = self.ring.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # ---- calculus and evaluation ---------------------------------------------

    def diff(self, var: int | str) -> "MultiPoly":
        """Partial derivative with respect to a variable (index or name)."""
        i = var if isinstance(var, int) else self.ring.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MultiPoly(self.ring, out, _trusted=True)

    def eval(self, assignment) -> Scalar:
        """Evaluate at a point.

        ``assignment`` is a mapping from variable names (or indices) to
        scalars, or a sequence aligned with the ring's variables. Only
        variables that actually occur must be supplied.
        """
        values = self._resolve_assignment(assignment)
        exact = all(isinstance(v, Fraction) for v in values if v is not None)
        total = Fraction(0) if exact else 0j
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    v = values[i]
                    if v is None:
                        raise MissingVariable(f"no value for {self.ring.names[i]}")
                    term = term * v ** k
            total += term
        if exact:
            return total
        return complex(total)

    def _resolve_assignment(self, assignment) -> list:
        nv = self.ring.nvars
        values: list = [None] * nv
        if isinstance(assignment, Mapping):
            for key, v in assignment.items():
                i = key if isinstance(key, int) else self.ring._index.get(key)
                if i is None or not (0 <= i < nv):
                    continue
                values[i] = v
        else:
            seq = list(assignment)
            for i, v in enumerate(seq[:nv]):
                values[i] = v
        modes = set()
        for i, v in enumerate(values):
            if v is None:
                continue
            v = to_scalar(v)
            values[i] = v
            modes.add(scalar_mode(v))
        if len(modes) > 1:
            raise MixedScalarMode("assignment mixes exact and numeric values")
        return values

    def subs(self, images: Mapping[int | str, "MultiPoly"], target: PolyRing | None = None) -> "MultiPoly":
        """Substitute polynomials for variables.

        Variables absent from ``images`` are kept; in that case the target
        ring must contain them with the same name.
        """
        idx_images = {}
        for key, img in images.items():
            i = key if isinstance(key, int) else self.ring.index(key)
            idx_images[i] = img
        if target is None:
            rings = [img.ring for img in idx_images.values()]
            target = rings[0] if rings else self.ring
            for r in rings[1:]:
                if r.nvars > target.nvars:
                    target = r
        gens = []
        for i in range(self.ring.nvars):
            if i in idx_images:
                gens.append(idx_images[i].extend(target) if idx_images[i].ring != target else idx_images[i])
            elif self.degree_in(i) > 0:
                gens.append(target.var(self.ring.names[i]))
            else:
                gens.append(None)
        power_cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i, k):
            key = (i, k)
            if key not in power_cache:
                power_cache[key] = gens[i] ** k
            return power_cache[key]

        result = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def permute(self, perm: Sequence[int]) -> "MultiPoly":
        """Return P(x_{perm[0]}, ..., x_{perm[n-1]}) i.e. (T P)(x) = P(T x)."""
        # P(Tx) where (Tx)_i = x_{perm[i]}: monomial prod x_{perm[i]}^{e_i}
        out = {}
        n = self.ring.nvars
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                ne[perm[i]] += k
            out[tuple(ne)] = c
        return MultiPoly(self.ring, out, _trusted=True)

    def compile(self) -> Callable[[np.ndarray], complex]:
        """Fast numeric evaluator ``f(values) -> complex`` using numpy."""
        if not self.terms:
            return lambda values: 0j
        exps = np.array(list(self.terms.keys()), dtype=np.int64)
        coeffs = np.array([complex(c) for c in self.terms.values()], dtype=np.complex128)
        used = np.flatnonzero(exps.any(axis=0))
        exps = exps[:, used]

        def f(values):
            vals = np.asarray(values, dtype=np.complex128)[used]
            return complex(coeffs @ np.prod(vals ** exps, axis=1))
        return f

    # ---- display ---------------------------------------------------------

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.ring.names, e) if k)
            parts.append(_term_str(c, mono))
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else ("-" + text[2:] if text.startswith("- ") else text)

    def to_json(self) -> dict:
        return {
            "variables": list(self.ring.names),
            "weights": list(self.ring.weights),
            "terms": [{"exponents": list(e), "coeff": serialize_scalar(c)}
                      for e, c in self.sorted_terms()],
        }


def _term_str(c, mono: str) -> str:
    if isinstance(c, Fraction):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono and a == 1:
            return f"{sign} {mono}"
        cs = str(a)
        return f"{sign} {cs}*{mono}" if mono else f"{sign} {cs}"
    cs = f"({c.real:.12g}{c.imag:+.12g}j)"
    return f"+ {cs}*{mono}" if mono else f"+ {cs}"


def _coerce_pair(a: MultiPoly, b: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    if a.ring == b.ring:
        return a, b
    if a.ring.is_prefix_of(b.ring):
        return a.extend(b.ring), b
    if b.ring.is_prefix_of(a.ring):
        return a, b.extend(a.ring)
    raise MissingVariable(f"incompatible rings {a.ring.names} and {b.ring.names}")


def _check_modes(a: MultiPoly, b: MultiPoly):
    if a.mode is not None and b.mode is not None and a.mode != b.mode:
        raise MixedScalarMode("cannot combine exact and numeric polynomials")


def mpoly_eval(p: MultiPoly, assignment) -> Scalar:
    return p.eval(assignment)


def poly_from_json(obj: Mapping) -> MultiPoly:
    names = obj["variables"]
    weights = obj.get("weights")
    if weights is None:
        weights = [0] * len(names)
    ring = PolyRing(names, weights)
    return MultiPoly(ring, {tuple(t["exponents"]): parse_scalar(t["coeff"]) for t in obj["terms"]})


# --------------------------------------------------------------------------
# jets
# --------------------------------------------------------------------------

def diff_total(p: MultiPoly) -> MultiPoly:
    """Total derivative on jet polynomials: h^(k) -> h^(k+1), Leibniz rule.

    The result lives in a jet ring one order larger when the top jet
    variable occurs.
    """
    m = p.ring.nvars - 1
    uses_top = p.degree_in(m) > 0 if m >= 0 else False
    ring = jet_ring(m + 1) if uses_top else p.ring
    out = ring.zero()
    for k in sorted(p.used_variables()):
        out = out + p.diff(k).extend(ring) * ring.gen(k + 1)
    return out


def trim_jets(p: MultiPoly) -> MultiPoly:
    """Move a jet polynomial into the smallest jet ring holding it."""
    used = p.used_variables()
    top = max(used) if used else 0
    return p.restrict(jet_ring(top))


# --------------------------------------------------------------------------
# exact linear algebra
# --------------------------------------------------------------------------

def _int_row(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for v in row:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in row]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        g = math.gcd(g, v)
    if g > 1:
        return [v // g for v in row]
    return row


def rref_integer(matrix: Sequence[Sequence], cols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Fraction-free reduced row echelon form over the integers.

    Rows are kept primitive (content 1). Pivots are chosen as the first
    nonzero entry scanning columns left to right and rows top to bottom.
    Returns the nonzero echelon rows and the pivot columns.
    """
    rows = [_int_row([to_scalar(v) for v in r]) for r in matrix]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        if pr[c] < 0:
            pr = [-v for v in pr]
            rows[r] = pr
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f, p = rows[i][c], pr[c]
                rows[i] = _primitive([p * a - f * b for a, b in zip(rows[i], pr)])
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def exact_kernel(matrix: Sequence[Sequence], cols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right null space of a rational matrix.

    Each basis vector has coprime integer entries with its first nonzero
    entry positive. One vector per free column, in column order.
    """
    if cols is None:
        cols = len(matrix[0]) if len(matrix) else 0
    if not len(matrix):
        echelon, pivots = [], []
    else:
        echelon, pivots = rref_integer(matrix, cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        lcm = 1
        for row, pc in zip(echelon, pivots):
            lcm = lcm * row[pc] // math.gcd(lcm, row[pc])
        vec = [0] * cols
        vec[f] = lcm
        for row, pc in zip(echelon, pivots):
            vec[pc] = -row[f] * (lcm // row[pc])
        vec = _primitive(vec)
        first = next(v for v in vec if v != 0)
        if first < 0:
            vec = [-v for v in vec]
        basis.append([Fraction(v) for v in vec])
    return basis


def matrix_rank(matrix: Sequence[Sequence]) -> int:
    if not len(matrix):
        return 0
    return len(rref_integer(matrix)[1])


def exact_det(matrix: Sequence[Sequence]) -> Scalar:
    """Determinant by Gaussian elimination; exact for rational input."""
    rows = [[to_scalar(v) for v in r] for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if any(scalar_mode(v) == NUMERIC for r in rows for v in r):
        return complex(np.linalg.det(np.array(rows, dtype=np.complex128))) if n else 1 + 0j
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        p = rows[c][c]
        det *= p
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / p
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def exact_inverse(matrix: Sequence[Sequence]) -> list[list[Scalar]]:
    """Inverse by Gauss-Jordan elimination (exact when input is rational)."""
    rows = [[to_scalar(v) for v in r] for r in matrix]
    n = len(rows)
    if any(scalar_mode(v) == NUMERIC for r in rows for v in r):
        arr = np.array(rows, dtype=np.complex128)
        if abs(np.linalg.det(arr)) < 1e-300:
            raise SingularMatrix("matrix is singular")
        return [[complex(v) for v in r] for r in np.linalg.inv(arr)]
    aug = [r + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [v / p for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [r[n:] for r in aug]


def mat_vec(matrix: Sequence[Sequence], vec: Sequence) -> list:
    return [sum((a * b for a, b in zip(row, vec)), Fraction(0) if all(
        isinstance(a, Fraction) for a in row) else 0j) for row in matrix]


def permutations_of(n: int) -> Iterable[tuple[int, ...]]:
    return itertools.permutations(range(n))
