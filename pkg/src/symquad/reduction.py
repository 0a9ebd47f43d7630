"""Elimination of a symmetric system to a single ODE for h = sigma_1.

In the elementary symmetric basis the system becomes triangular,

    sigma_k' = g_{k+1}(sigma_1, ..., sigma_k) + c_k sigma_{k+1},

so when every c_k is nonzero each sigma_{k+1} is a differential polynomial
in h = sigma_1 and the last equation is a monic ODE of order n for h. When
only the last constant vanishes (almost generic, n = 2 or 3) the ODE has
order n - 1 and sigma_n obeys a linear first-order equation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .algebra import (
    MultiPoly,
    Scalar,
    diff_total,
    jet_name,
    jet_ring,
    parse_scalar,
    poly_from_json,
    serialize_scalar,
    sigma_ring,
    to_scalar,
)
from .errors import (
    DegenerateInitialData,
    GenericityViolated,
    NotAlmostGeneric,
    NotGeneric,
    ZeroScale,
)
from .symfun import (
    elementary_in_power_sums,
    elementary_xi,
    express_in_sigma,
    newton_in_sigma,
    vieta_image,
)
from .systems import Kind, SymmetricSystem, apply_L_xi, classify


@dataclass(frozen=True)
class SigmaSystem:
    n: int
    rhs: tuple  # rhs[k-1] = L sigma_k as a sigma polynomial
    c: tuple    # c_1 .. c_{n-1}
    g: tuple    # g[k-1] = rhs[k-1] - c_k sigma_{k+1}

    def __str__(self):
        return "\n".join(f"s{k + 1}' = {r}" for k, r in enumerate(self.rhs))


def _split_sigma_rhs(n: int, rhs: Sequence[MultiPoly]) -> SigmaSystem:
    ring = sigma_ring(n)
    cs, gs = [], []
    for k in range(1, n + 1):
        r = rhs[k - 1]
        if k < n:
            e = [0] * n
            e[k] = 1
            ck = r.coeff(e)
            cs.append(ck)
            gs.append(r - ring.gen(k) * ck if ck != 0 else r)
        else:
            gs.append(r)
    return SigmaSystem(n, tuple(rhs), tuple(cs), tuple(gs))


@lru_cache(maxsize=256)
def sigma_system(sys: SymmetricSystem) -> SigmaSystem:
    """L sigma_k computed in x coordinates and rewritten in the sigma basis."""
    n = sys.n
    rhs = [express_in_sigma(apply_L_xi(sys, elementary_xi(k, n))) for k in range(1, n + 1)]
    return _split_sigma_rhs(n, rhs)


def sigma_system_newton(sys: SymmetricSystem) -> SigmaSystem:
    """Independent route through power sums.

    Uses (1/k) L p_k = alpha p_{k+1} + beta p_k p_1 + gamma p_{k-1} p_1^2
    + delta p_{k-1} p_2 (p_0 = n), the chain rule through
    sigma_k(p_1, ..., p_k), and Newton's identities for p_j in sigma.
    """
    n = sys.n
    a, b, g, d = sys.params
    P = [newton_in_sigma(j, n) for j in range(n + 2)]
    Lp = [None] + [
        (P[k + 1] * a + P[k] * P[1] * b + P[k - 1] * P[1] * P[1] * g + P[k - 1] * P[2] * d) * k
        for k in range(1, n + 1)]
    rhs = []
    for k in range(1, n + 1):
        sk = elementary_in_power_sums(k, n)
        total = sigma_ring(n).zero()
        for j in range(1, k + 1):
            partial = sk.diff(j - 1)
            if partial:
                pulled = partial.subs({i: P[i + 1] for i in range(n)}, target=sigma_ring(n))
                total = total + pulled * Lp[j]
        rhs.append(total)
    return _split_sigma_rhs(n, rhs)


def apply_L_sigma(S: SigmaSystem, P: MultiPoly) -> MultiPoly:
    """Chain rule: sum_k dP/dsigma_k * (L sigma_k)."""
    out = sigma_ring(S.n).zero()
    for k in sorted(P.used_variables()):
        out = out + P.diff(k) * S.rhs[k]
    return out


# --------------------------------------------------------------------------
# reduced ODE
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ReducedODE:
    """h^(order) + sum_omega lambda_omega * prod_k (h^(k))^(omega_k) = 0."""

    order: int
    terms: Mapping  # omega tuple (length = order) -> coefficient

    def __post_init__(self):
        clean = {}
        for omega, lam in dict(self.terms).items():
            omega = tuple(int(v) for v in omega)
            if len(omega) != self.order:
                raise ValueError(f"multi-index {omega} has wrong length for order {self.order}")
            lam = to_scalar(lam)
            if lam != 0:
                clean[omega] = lam
        object.__setattr__(self, "terms", clean)

    def weight(self, omega: Sequence[int]) -> int:
        return sum(i * (-4 * (k + 1)) for k, i in enumerate(omega))

    def is_homogeneous(self) -> bool:
        target = -4 * (self.order + 1)
        return all(self.weight(w) == target for w in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def as_poly(self) -> MultiPoly:
        """Left-hand side as a jet polynomial in h, ..., h^(order)."""
        ring = jet_ring(self.order)
        terms = {w + (0,): lam for w, lam in self.terms.items()}
        terms[(0,) * self.order + (1,)] = Fraction(1)
        if any(isinstance(v, complex) for v in self.terms.values()):
            terms = {e: complex(v) for e, v in terms.items()}
        return MultiPoly(ring, terms)

    def highest_derivative(self, jets: Sequence):
        """Value of h^(order) implied by lower jets."""
        total = 0
        for omega, lam in self.terms.items():
            term = lam
            for v, e in zip(jets, omega):
                if e:
                    term = term * v ** e
            total = total + term
        return -total

    def residual(self, jets: Sequence):
        """LHS evaluated on jets h, ..., h^(order)."""
        return jets[self.order] - self.highest_derivative(jets[: self.order])

    def __eq__(self, other):
        if not isinstance(other, ReducedODE):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __hash__(self):
        return hash((self.order, frozenset(self.terms.items())))

    def pretty(self) -> str:
        return f"{self.as_poly()} = 0"

    __str__ = pretty

    def to_json(self) -> dict:
        return {"order": self.order,
                "terms": [{"omega": list(w), "lambda": serialize_scalar(lam)}
                          for w, lam in self.sorted_terms()]}

    @classmethod
    def from_json(cls, obj) -> "ReducedODE":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["order"]),
                   {tuple(t["omega"]): parse_scalar(t["lambda"]) for t in obj["terms"]})


@dataclass(frozen=True)
class ReductionData:
    ode: ReducedODE
    sigma_exprs: tuple  # sigma_1..sigma_n as jet polynomials

    def to_json(self) -> dict:
        return {"ode": self.ode.to_json(),
                "sigma_exprs": [p.to_json() for p in self.sigma_exprs]}

    @classmethod
    def from_json(cls, obj) -> "ReductionData":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(ReducedODE.from_json(obj["ode"]),
                   tuple(poly_from_json(p) for p in obj["sigma_exprs"]))


@dataclass(frozen=True)
class AlmostGenericReduction:
    ode: ReducedODE            # order n - 1
    sigma_exprs: tuple         # sigma_1..sigma_{n-1}
    last_c: Scalar             # sigma_n' = last_c * sigma_1 * sigma_n + last_g
    last_g: MultiPoly

    @property
    def last_linear(self):
        return (self.last_c, self.last_g)

    @property
    def n(self) -> int:
        return self.ode.order + 1

    def to_json(self) -> dict:
        return {"ode": self.ode.to_json(),
                "sigma_exprs": [p.to_json() for p in self.sigma_exprs],
                "last_linear": {"c": serialize_scalar(self.last_c), "g": self.last_g.to_json()}}

    @classmethod
    def from_json(cls, obj) -> "AlmostGenericReduction":
        if isinstance(obj, str):
            obj = json.loads(obj)
        last = obj["last_linear"]
        return cls(ReducedODE.from_json(obj["ode"]),
                   tuple(poly_from_json(p) for p in obj["sigma_exprs"]),
                   parse_scalar(last["c"]), poly_from_json(last["g"]))


def _ode_from_equation(eq: MultiPoly, order: int) -> ReducedODE:
    """Normalize a jet equation linear in h^(order) with constant coefficient."""
    top = [0] * eq.ring.nvars
    top[order] = 1
    lead = eq.coeff(top)
    if lead == 0:
        raise NotGeneric("highest derivative dropped out of the eliminated equation")
    for e in eq.terms:
        if e[order] and tuple(e) != tuple(top):
            raise ValueError("eliminated equation is not linear in the top derivative")
        if any(e[order + 1:]):
            raise ValueError("eliminated equation exceeds the expected order")
    monic = eq / lead
    terms = {e[:order]: c for e, c in monic.terms.items() if e[order] == 0}
    return ReducedODE(order, terms)


def _eliminate(S: SigmaSystem, upto: int) -> list[MultiPoly]:
    """sigma_1..sigma_upto as jet polynomials (needs c_1..c_{upto-1} != 0)."""
    n = S.n
    J = jet_ring(n + 1)
    exprs = [J.gen(0)]
    for k in range(1, upto):
        g = S.g[k - 1].subs({i: exprs[i] for i in range(k)}, target=J)
        exprs.append((diff_total(exprs[k - 1]).extend(J) - g) / S.c[k - 1])
    return exprs


def _system_for_reduction(sys: SymmetricSystem) -> SymmetricSystem:
    return sys.canonical()


def reduce_generic(sys: SymmetricSystem) -> ReductionData:
    """Order-n ODE for h = sigma_1 and sigma_k as differential polynomials in h."""
    sys = _system_for_reduction(sys)
    S = sigma_system(sys)
    zeros = [k + 1 for k, v in enumerate(S.c) if v == 0]
    if zeros:
        raise NotGeneric(_genericity_message(sys, zeros))
    n = S.n
    J = jet_ring(n + 1)
    exprs = _eliminate(S, n)
    g_last = S.g[n - 1].subs({i: exprs[i] for i in range(n)}, target=J)
    eq = diff_total(exprs[n - 1]).extend(J) - g_last
    ode = _ode_from_equation(eq, n)
    Jn = jet_ring(n)
    return ReductionData(ode, tuple(e.restrict(Jn) for e in exprs))


def reduce_almost_generic(sys: SymmetricSystem) -> AlmostGenericReduction:
    """Order n-1 ODE, sigma_2..sigma_{n-1}, and the linear equation for sigma_n."""
    sys = _system_for_reduction(sys)
    cls = classify(sys)
    if cls.kind is not Kind.ALMOST_GENERIC_ONLY:
        raise NotAlmostGeneric(
            f"system is {cls.kind.value}; almost-generic reduction needs c_1..c_(n-2) != 0 "
            f"and c_(n-1) = 0")
    S = sigma_system(sys)
    n = S.n
    J = jet_ring(n + 1)
    exprs = _eliminate(S, n - 1)
    g_prev = S.g[n - 2].subs({i: exprs[i] for i in range(n - 1)}, target=J)
    eq = diff_total(exprs[n - 2]).extend(J) - g_prev
    ode = _ode_from_equation(eq, n - 1)
    rhs_n = S.rhs[n - 1]
    mono = [0] * n
    mono[0] = 1
    mono[n - 1] += 1
    c = rhs_n.coeff(mono)
    rest = rhs_n - sigma_ring(n).monomial(mono, c) if c != 0 else rhs_n
    if rest.degree_in(n - 1) > 0:
        raise ValueError("sigma_n enters its own equation non-linearly")
    g = rest.subs({i: exprs[i] for i in range(n - 1)}, target=J)
    Jn = jet_ring(n)
    return AlmostGenericReduction(ode, tuple(e.restrict(Jn) for e in exprs), c, g.restrict(Jn))


def reduce(sys: SymmetricSystem):
    """Generic reduction when possible, else the almost-generic one."""
    cls = classify(sys.canonical())
    if cls.kind is Kind.GENERIC:
        return reduce_generic(sys)
    if cls.kind is Kind.ALMOST_GENERIC_ONLY:
        return reduce_almost_generic(sys)
    from .errors import NotReducible
    raise NotReducible(_genericity_message(sys.canonical(), [
        k + 1 for k, v in enumerate(cls.c) if v == 0]))


def _genericity_message(sys: SymmetricSystem, zeros: Sequence[int]) -> str:
    n = sys.n
    parts = []
    for k in zeros:
        if n >= 3 and k == 1:
            parts.append(f"c1 = 0 (alpha + {n}*delta = 0)")
        else:
            parts.append(f"c{k} = 0 (alpha = 0)")
    return "not generic: " + ", ".join(parts)


# --------------------------------------------------------------------------
# initial data, rescaling, Chazy
# --------------------------------------------------------------------------

def _pairwise_distinct(x: Sequence) -> bool:
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            a, b = x[i], x[j]
            if isinstance(a, Fraction) and isinstance(b, Fraction):
                if a == b:
                    return False
            elif abs(a - b) <= 1e-14 * max(1.0, abs(a), abs(b)):
                return False
    return True


def initial_jets(sys: SymmetricSystem, x0: Sequence, order: int | None = None) -> list:
    """h(t0), h'(t0), ..., h^(order-1)(t0) via iterated L on sigma_1."""
    x = [to_scalar(v) for v in x0]
    if any(isinstance(v, complex) for v in x):
        x = [complex(v) for v in x]
    if len(x) != sys.n:
        raise ValueError("initial point has wrong dimension")
    if not _pairwise_distinct(x):
        raise DegenerateInitialData("initial coordinates must be pairwise distinct (Delta_n != 0)")
    if order is None:
        order = sys.n
    S = sigma_system(sys.canonical())
    point = vieta_image(x)
    P = sigma_ring(sys.n).gen(0)
    jets = []
    for _ in range(order):
        jets.append(P.eval(point))
        P = apply_L_sigma(S, P)
    return jets


def rescale_ode(ode: ReducedODE, mu) -> ReducedODE:
    """Equation satisfied by mu * h: lambda_omega -> mu^(1 - |omega|) lambda_omega."""
    mu = to_scalar(mu)
    if mu == 0:
        raise ZeroScale("scale factor must be nonzero")
    return ReducedODE(ode.order, {w: lam * mu ** (1 - sum(w)) for w, lam in ode.terms.items()})


def chazy_c(a, b) -> Scalar:
    a, b = to_scalar(a), to_scalar(b)
    if (a + 2 * b) * (a - b) == 0:
        raise GenericityViolated("(a + 2b)(a - b) must be nonzero")
    return b * b / (4 * (a + 2 * b) * (a - b))


def gen_darboux_halphen(a, b) -> SymmetricSystem:
    a, b = to_scalar(a), to_scalar(b)
    return SymmetricSystem(3, 2 * a + b, -2 * a, a / 2, -a / 2)


def chazy_ode(c) -> ReducedODE:
    """y''' - 2 y y'' + 3 y'^2 + c (6 y' - y^2)^2 = 0, expanded."""
    c = to_scalar(c)
    return ReducedODE(3, {(1, 0, 1): -2, (0, 2, 0): 3 + 36 * c,
                          (2, 1, 0): -12 * c, (4, 0, 0): c})


def chazy_companion_check(a, b) -> bool:
    c = chazy_c(a, b)
    a, b = to_scalar(a), to_scalar(b)
    red = reduce_generic(gen_darboux_halphen(a, b))
    return rescale_ode(red.ode, -2 * (a - b)) == chazy_ode(c)


def sigma_exprs_to_str(exprs: Sequence[MultiPoly]) -> list[str]:
    return [f"s{k + 1} = {e}" for k, e in enumerate(exprs)]


__all__ = [
    "SigmaSystem", "ReducedODE", "ReductionData", "AlmostGenericReduction",
    "sigma_system", "sigma_system_newton", "apply_L_sigma", "reduce_generic",
    "reduce_almost_generic", "reduce", "initial_jets", "rescale_ode", "chazy_c",
    "chazy_ode", "chazy_companion_check", "gen_darboux_halphen", "jet_name",
]
