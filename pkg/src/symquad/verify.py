"""End-to-end identity checks.

Each check rebuilds a known closed form independently of the elimination
code and compares it with what the library computes. ``run_all`` is what
``symquad verify`` executes and what the acceptance tests call.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .algebra import jet_ring, matrix_rank, random_rational, xi_ring
from .group_action import (
    BMatrix,
    normal_form,
    normal_form_parameters,
    sigma_pushforward,
    transform_ode,
    transform_system,
)
from .integrals import lv_rational_integral, quadratic_integral_basis
from .presets import preset
from .reduction import (
    AlmostGenericReduction,
    ReducedODE,
    chazy_c,
    chazy_companion_check,
    initial_jets,
    reduce,
    reduce_almost_generic,
    reduce_generic,
    sigma_system,
    sigma_system_newton,
)
from .symfun import (
    discriminant_log_derivative_check,
    elementary_in_power_sums,
    elementary_xi,
    newton_determinant_p,
    newton_in_sigma,
    sigma_to_xi,
    vieta_image,
)
from .systems import Kind, SymmetricSystem, apply_L_xi, classify, system_field_polys, to_tensor


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {self.detail} ({self.seconds:.2f} s)"


def _rand_system(rng: random.Random, n: int, bound: int = 20, want=Kind.GENERIC,
                 alpha_zero: bool = False) -> SymmetricSystem:
    while True:
        p = [random_rational(rng, bound) for _ in range(4)]
        if alpha_zero:
            p[0] = Fraction(0)
        sys = SymmetricSystem(n, *p)
        if classify(sys.canonical()).kind is want:
            return sys


def _jets(n: int, count: int | None = None):
    """The first ``count`` jet generators of the ring the engine uses for dimension n."""
    return jet_ring(n).gens[: n if count is None else count]


# --------------------------------------------------------------------------
# reference formulas, transcribed as stated and kept apart from the engine
# --------------------------------------------------------------------------

def reference_n2(a, b, g):
    """Second-order equation and sigma_2 for the two-dimensional generic system."""
    ode = ReducedODE(2, {(1, 1): -(3 * a + 4 * b + 4 * g), (3, 0): (a + b) * (a + 2 * b + 4 * g)})
    h, h1 = _jets(2)
    s2 = h ** 2 * ((a + b + 2 * g) / (2 * a)) - h1 / (2 * a)
    return ode, s2


def reference_n3(a, b, g, d):
    """Third-order equation (as lambda_1..lambda_5) and sigma_2, sigma_3 for n = 3."""
    l1 = a + 3 * d
    l2 = -l1 * (4 * a + 7 * b + 6 * g + 2 * d)
    l3 = -(3 * a ** 2 + 6 * d ** 2) - 2 * (2 * a * b + 3 * a * g + 4 * a * d + 6 * b * d + 9 * g * d)
    l4 = (6 * a ** 3
          + 2 * (11 * a ** 2 * b + 9 * b ** 2 * a + 15 * a ** 2 * g + 13 * a ** 2 * d
                 + 12 * a * d ** 2 + 27 * b ** 2 * d + 18 * b * d ** 2)
          + 36 * (a * b * g + 2 * a * b * d + 2 * a * g * d + 3 * b * g * d))
    l5 = -(a + 3 * b + 9 * g + 3 * d) * (a ** 3 + 3 * a ** 2 * b + 2 * a * b ** 2 + a ** 2 * g
                                         + 3 * a ** 2 * d + 6 * b ** 2 * d + 8 * a * b * d)
    lam = (l1, l2, l3, l4, l5)
    h, h1, h2 = _jets(3)
    s2 = (h1 - h ** 2 * (a + b + 3 * g + 3 * d)) / (-2 * l1)
    s3 = (h2 - h1 * h * (3 * a + 4 * b + 6 * g + 2 * d)
          + h ** 3 * (a ** 2 + 2 * b ** 2 + 3 * a * b + 7 * a * g + 3 * a * d + 6 * b * g + 2 * b * d)
          ) / (6 * a * l1)
    return lam, s2, s3


def reference_almost_n3(b, g, d):
    """alpha = 0, delta != 0: second-order equation, sigma_2 and the sigma_3 equation."""
    ode = ReducedODE(2, {(1, 1): -2 * (2 * b + 3 * g + d), (3, 0): 2 * b * (b + 3 * g + d)})
    h, h1 = _jets(3, 2)
    s2 = (h ** 2 * (b + 3 * g + 3 * d) - h1) / (6 * d)
    # 18 d s3' - 54 b d s3 s1 + h'^2 - (2b+3g+3d) h^2 h' + b (b+3g+3d) h^4 = 0
    last_c = 3 * b
    last_g = -(h1 ** 2 - h ** 2 * h1 * (2 * b + 3 * g + 3 * d) + h ** 4 * (b * (b + 3 * g + 3 * d))) / (18 * d)
    return ode, s2, last_c, last_g


def _ode_from_dict(order, terms):
    return ReducedODE(order, {k: Fraction(v) for k, v in terms.items()})


# --------------------------------------------------------------------------
# checks
# --------------------------------------------------------------------------

def check_reduction_identities(seed: int = 0, points: int = 20) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    for _ in range(points):
        sys = _rand_system(rng, 2)
        a, b, g, _d = sys.canonical().params
        red = reduce_generic(sys)
        ode, s2 = reference_n2(a, b, g)
        if red.ode != ode or red.sigma_exprs[1] != s2:
            bad.append(("n=2", sys.params))
    for _ in range(points):
        sys = _rand_system(rng, 3)
        a, b, g, d = sys.params
        red = reduce_generic(sys)
        lam, s2, s3 = reference_n3(a, b, g, d)
        expected = ReducedODE(3, {(1, 0, 1): lam[1] / lam[0], (0, 2, 0): lam[2] / lam[0],
                                  (2, 1, 0): lam[3] / lam[0], (4, 0, 0): lam[4] / lam[0]})
        if red.ode != expected or red.sigma_exprs[1] != s2 or red.sigma_exprs[2] != s3:
            bad.append(("n=3", sys.params))
    return not bad, (f"{2 * points} random systems (n=2 and n=3) match" if not bad
                     else f"mismatch at {bad[:3]}")


LV3_ODE = {(1, 0, 1): 1, (0, 2, 0): 2, (2, 1, 0): -2}
LV4_ODE = {(1, 0, 0, 1): -1, (0, 1, 1, 0): 5, (2, 0, 1, 0): -4, (1, 2, 0, 0): -8, (3, 1, 0, 0): 4}
DH_ODE = {(1, 0, 1): 4, (0, 2, 0): -6}
LAX_ODE = {(1, 1): -2}


def check_case_studies(seed: int = 0) -> tuple[bool, str]:
    failures = []

    red = reduce_generic(preset("lv", n=3))
    h, h1, h2 = _jets(3)
    if red.ode != _ode_from_dict(3, LV3_ODE):
        failures.append("LV3 equation")
    if red.sigma_exprs[1] != (h1 + h ** 2) / 4 or red.sigma_exprs[2] != (h2 + h1 * h * 2) / 24:
        failures.append("LV3 sigma expressions")

    red = reduce_generic(preset("lv", n=4))
    h, h1, h2, h3 = _jets(4)
    if red.ode != _ode_from_dict(4, LV4_ODE):
        failures.append("LV4 equation")
    expected = [(h1 + h ** 2) / 4, (h2 + h1 * h * 2) / 24,
                (h3 + h2 * h + h1 ** 2 * 2 - h1 * h ** 2 * 2) / 192]
    if list(red.sigma_exprs[1:]) != expected:
        failures.append("LV4 sigma expressions")

    red = reduce_generic(preset("darboux-halphen"))
    h, h1, h2 = _jets(3)
    if red.ode != _ode_from_dict(3, DH_ODE):
        failures.append("Darboux-Halphen equation")
    if red.sigma_exprs[1] != -h1 or red.sigma_exprs[2] != h2 / 6:
        failures.append("Darboux-Halphen sigma expressions")

    red = reduce(preset("lax"))
    h, h1 = _jets(3, 2)
    if not isinstance(red, AlmostGenericReduction) or red.ode != _ode_from_dict(2, LAX_ODE):
        failures.append("Lax equation")
    elif (red.sigma_exprs[1] != (h1 + h ** 2 * 2) / 6 or red.last_c != 3
          or red.last_g != (h1 - h ** 2) * (h1 + h ** 2 * 2) / 18):
        failures.append("Lax sigma_2 / sigma_3 equation")

    rng = random.Random(seed)
    for _ in range(10):
        sys = _rand_system(rng, 3, want=Kind.ALMOST_GENERIC_ONLY, alpha_zero=True)
        _, b, g, d = sys.params
        red = reduce_almost_generic(sys)
        ode, s2, c, gl = reference_almost_n3(b, g, d)
        if red.ode != ode or red.sigma_exprs[1] != s2 or red.last_c != c or red.last_g != gl:
            failures.append(f"almost generic n=3 at {sys.params}")
            break
    return not failures, ("LV3, LV4, Darboux-Halphen, Lax and 10 almost-generic systems match"
                          if not failures else "; ".join(failures))


def check_chazy(seed: int = 0, points: int = 10) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    done = 0
    while done < points:
        a, b = random_rational(rng, 50), random_rational(rng, 50)
        if (a + 2 * b) * (a - b) == 0:
            continue
        done += 1
        if not chazy_companion_check(a, b):
            bad.append((a, b))
    chazy3 = chazy_c(1, 0) == 0 and chazy_companion_check(1, 0)
    ok = not bad and chazy3
    return ok, (f"{points} random (a, b) and Chazy-3 at (1, 0) match" if ok
                else f"mismatch at {bad[:3]}, chazy3={chazy3}")


def check_discriminant(seed: int = 0, points: int = 10) -> tuple[bool, str]:
    rng = random.Random(seed)
    for n in (2, 3, 4, 5):
        sys = SymmetricSystem(n, *(random_rational(rng, 20) for _ in range(4)))
        count = 0
        while count < points:
            x = [random_rational(rng, 30) for _ in range(n)]
            if len(set(x)) < n:
                continue
            count += 1
            if not discriminant_log_derivative_check(sys, x):
                return False, f"fails for n={n} at {x}"
    return True, f"L(Delta_n) = (n-1)(2 alpha + n beta) sigma_1 Delta_n at {points} points, n = 2..5"


def _lv_family_rank_ok(basis, family) -> bool:
    """Spans agree: rank(basis) == rank(family) == rank(basis + family)."""
    def vec(q):
        n = q.n
        return [q.Q[i][j] for i in range(n) for j in range(i, n)]
    B = [vec(q) for q in basis]
    F = [vec(q) for q in family]
    return matrix_rank(B) == matrix_rank(F) == matrix_rank(B + F) == len(F)


def _quad(n, pairs_coeffs):
    from .integrals import QuadraticForm
    Q = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), c in pairs_coeffs.items():
        Q[i - 1][j - 1] = Q[j - 1][i - 1] = Fraction(c)
    return QuadraticForm(n, tuple(tuple(r) for r in Q))


def check_integrals(seed: int = 0) -> tuple[bool, str]:
    failures = []
    dims = {n: len(quadratic_integral_basis(to_tensor(preset("lv", n=n)))) for n in range(2, 7)}
    if dims != {2: 1, 3: 2, 4: 2, 5: 0, 6: 0}:
        failures.append(f"LV dimensions {dims}")
    for m in (1, 3):
        d = len(quadratic_integral_basis(to_tensor(preset("kp2", m=m))))
        if d != 0:
            failures.append(f"kp2 m={m} has dimension {d}")
    # a + b + c = 0 families, spanned by (a, b, c) = (1, -1, 0), (1, 0, -1)
    fam3 = [_quad(3, {(1, 2): 1, (1, 3): -1}), _quad(3, {(1, 2): 1, (2, 3): -1})]
    fam4 = [_quad(4, {(1, 2): 1, (3, 4): 1, (1, 3): -1, (2, 4): -1}),
            _quad(4, {(1, 2): 1, (3, 4): 1, (2, 3): -1, (1, 4): -1})]
    for n, fam in ((3, fam3), (4, fam4)):
        if not _lv_family_rank_ok(quadratic_integral_basis(to_tensor(preset("lv", n=n))), fam):
            failures.append(f"LV{n} basis does not span the a+b+c=0 family")
    for n in (3, 4, 5):
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                r = lv_rational_integral(n, i, j, seed=seed)
                if not r.passed or r.points_checked < 10:
                    failures.append(f"P_{i}{j} for n={n}")
    return not failures, ("LV dims 1,2,2,0,0; kp2 m=1,3 -> 0; families and rational integrals verified"
                          if not failures else "; ".join(failures))


def _field_at(sys, x):
    return [p.eval(x) for p in system_field_polys(sys)]


def check_group_action(seed: int = 0, points: int = 10) -> tuple[bool, str]:
    rng = random.Random(seed)
    failures = []
    for n in (2, 3, 4):
        for _ in range(points):
            sys = _rand_system(rng, n)
            lam, q = random_rational(rng, 10), random_rational(rng, 10)
            B = BMatrix(lam, q, n)
            if not B.is_invertible():
                continue
            new = transform_system(sys, B)
            x = [random_rational(rng, 20) for _ in range(n)]
            if _field_at(new, B.apply(x)) != B.apply(_field_at(sys, x)):
                failures.append(f"pushforward n={n}")
                break
            if reduce_generic(new).ode != transform_ode(reduce_generic(sys).ode, lam, q, n):
                failures.append(f"reduce/transform n={n}")
                break
            for k in range(1, n + 1):
                lhs = sigma_pushforward(k, B).eval(vieta_image(x))
                if lhs != elementary_xi(k, n).eval(B.apply(x)):
                    failures.append(f"sigma_{k} pushforward n={n}")
                    break
    # n >= 3: the representative is (1, beta~, gamma~, 0)
    for n in (3, 4, 5):
        for _ in range(points):
            sys = _rand_system(rng, n)
            nf = normal_form(sys)
            bt, gt = normal_form_parameters(sys)
            if nf.system.params != (1, bt, gt, 0) or nf.case != "general":
                failures.append(f"normal form n={n} at {sys.params}")
                break
    # n = 2: three representatives, possibly through square roots
    tol = 1e-10
    for case in ("n2-gamma", "n2-beta", "n2-exceptional"):
        for _ in range(points):
            if case == "n2-exceptional":
                a = random_rational(rng, 20)
                sys = SymmetricSystem(2, a, -a, a / 4, 0)
            else:
                sys = _rand_system(rng, 2)
                a, b, g, _ = sys.canonical().params
                if case == "n2-beta":
                    sys = SymmetricSystem(2, a, -a, g, 0)
                    if a == 4 * g:
                        continue
            a, b, g, _ = sys.canonical().params
            nf = normal_form(sys)
            if case == "n2-gamma":
                target = (1, 0, (b + 4 * g) / (4 * (a + b)), 0)
            elif case == "n2-beta":
                target = (1, (b + 4 * g) / (a - 4 * g), 0, 0)
            else:
                target = (1, -1, Fraction(1, 4), 0)
            got = nf.system.canonical().params
            if nf.case != case or any(abs(complex(u) - complex(v)) > tol for u, v in zip(got, target)):
                failures.append(f"{case} at {sys.params}: {got}")
                break
    return not failures, ("pushforward, reduce/transform, sigma_k pushforward and all normal forms hold"
                          if not failures else "; ".join(failures))


def _round_trip_points(sys, count, rng, span, cfg):
    from .numerics import integrate_direct, uniform_grid
    from .numerics.roots import min_separation

    pts = []
    while len(pts) < count:
        x = rng.uniform(-2, 2, sys.n) + 1j * rng.uniform(-2, 2, sys.n)
        if min_separation(x) < 0.5:
            continue
        d = integrate_direct(sys, x, span, cfg, t_eval=uniform_grid(span, 101))
        # skip starts whose path nearly crosses the discriminant locus
        if min(min_separation(z) / max(1.0, np.abs(z).max()) for z in d.states) < 1e-3:
            continue
        pts.append(list(x))
    return pts


ROUND_TRIP_PRESETS = (("darboux-halphen", {}), ("lv", {"n": 3}), ("lv", {"n": 4}), ("lax", {}))
ROUND_TRIP_SPAN = (0.0, 0.5)
ROUND_TRIP_BLOWUP = 1e2


def round_trips(seed: int = 0, random_points: int = 5):
    """(preset, x0, report, seconds) for each preset from (1, 2, ...) and random complex starts."""
    from .numerics import ToleranceConfig, algebraic_integrate

    cfg = ToleranceConfig(blowup_norm=ROUND_TRIP_BLOWUP)
    out = []
    for name, params in ROUND_TRIP_PRESETS:
        sys = preset(name, **params)
        rng = np.random.default_rng(seed)
        starts = [list(range(1, sys.n + 1))]
        starts += _round_trip_points(sys, random_points, rng, ROUND_TRIP_SPAN, cfg)
        for x0 in starts:
            t = time.perf_counter()
            rep = algebraic_integrate(sys, x0, ROUND_TRIP_SPAN, cfg)
            out.append((name if not params else f"{name}{params.get('n', '')}", x0, rep,
                        time.perf_counter() - t))
    return out


def check_round_trips(seed: int = 0) -> tuple[bool, str]:
    from .numerics import Status

    failures = []
    worst = 0.0
    slowest = 0.0
    for name, x0, rep, secs in round_trips(seed):
        worst = max(worst, rep.max_rel_error)
        slowest = max(slowest, secs)
        if rep.status is Status.DISCRIMINANT_DEGENERATE or rep.max_rel_error > 1e-6 or secs >= 5:
            failures.append(f"{name} x0={np.round(x0, 3).tolist()}: {rep.status.value}, "
                            f"rel {rep.max_rel_error:.2e}, {secs:.2f} s")
    jets_dh = initial_jets(preset("darboux-halphen"), [1, 2, 3])
    jets_lv = initial_jets(preset("lv", n=3), [1, 2, 3])
    if jets_dh != [6, -11, 36]:
        failures.append(f"DH jets {jets_dh}")
    if jets_lv != [6, 8, 48]:
        failures.append(f"LV3 jets {jets_lv}")
    return not failures, (f"24 round trips, worst rel error {worst:.2e}, slowest {slowest:.2f} s; "
                          "initial jets match" if not failures else "; ".join(failures))


def check_closed_forms(seed: int = 0) -> tuple[bool, str]:
    from .numerics import residual_check

    grid = np.linspace(-0.9, 0.9, 37)
    exact_grid = [Fraction(i, 10) for i in range(-20, 21)]
    results = {
        "tanh": residual_check("tanh", {"lambda1": 2, "k1": 1, "k2": 0}, grid),
        "tanh2": residual_check("tanh", {"lambda1": "7/3", "k1": "1/2", "k2": "1/5"}, grid),
        "rational": residual_check("rational", {"lambda1": 3, "k1": 1, "k2": 0}, exact_grid),
        "rational2": residual_check("rational", {"lambda1": "-5/2", "k1": 3, "k2": "2/7"}, exact_grid),
        "nongeneric": residual_check("nongeneric_n2", {"beta": 1, "gamma": 2, "k1": 3, "k2": "1/2"},
                                     np.linspace(0, 1, 21)),
        "nongeneric_d0": residual_check("nongeneric_n2", {"beta": 2, "gamma": -1, "k1": 3, "k2": "1/2"},
                                        np.linspace(0, 1, 21)),
        "lax": residual_check("lax_closed", {"c": 1.3, "b": 0.2, "k": 0.7}, np.linspace(-0.9, 0.9, 37)),
    }
    energy = residual_check("lv_sn_energy", {"lambda2": 2, "h0": 1, "h1": "1/2"}, np.linspace(0, 10, 201))
    ok = all(v < 1e-9 for v in results.values()) and energy < 1e-8
    worst = max(results.values())
    return ok, f"max residual {worst:.2e} (< 1e-9), energy drift {energy:.2e} (< 1e-8)"


def _random_poly(rng: random.Random, n: int, terms: int = 4, degree: int = 3):
    ring = xi_ring(n)
    out = ring.zero()
    for _ in range(terms):
        e = [0] * n
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(n)] += 1
        out = out + ring.monomial(e, random_rational(rng, 9))
    return out


def check_properties(seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    failures = []
    for n in range(1, 6):
        for _ in range(3):
            sys = _rand_system(rng, n)
            if not reduce_generic(sys).ode.is_homogeneous():
                failures.append(f"inhomogeneous ODE n={n}")
    for n in range(1, 7):
        x = [random_rational(rng, 9) for _ in range(n)]
        sig = vieta_image(x)
        for k in range(1, 13):
            pk = sum(v ** k for v in x)
            if newton_in_sigma(k, n).eval(sig) != pk or newton_determinant_p(k, sig) != pk:
                failures.append(f"Newton p_{k}, n={n}")
        power = [sum(v ** k for v in x) for k in range(1, n + 1)]
        for k in range(1, n + 1):
            if elementary_in_power_sums(k, n).eval(power) != sig[k - 1]:
                failures.append(f"sigma_{k} from power sums, n={n}")
    for n in (2, 3, 4):
        sys = SymmetricSystem(n, *(random_rational(rng, 9) for _ in range(4)))
        P, Q = _random_poly(rng, n), _random_poly(rng, n)
        if apply_L_xi(sys, P * Q) != apply_L_xi(sys, P) * Q + P * apply_L_xi(sys, Q):
            failures.append(f"Leibniz rule n={n}")
        perm = list(range(n))
        rng.shuffle(perm)
        if apply_L_xi(sys, P.permute(perm)) != apply_L_xi(sys, P).permute(perm):
            failures.append(f"permutation equivariance n={n}")
    for n in range(1, 7):
        sys = SymmetricSystem(n, *(random_rational(rng, 9) for _ in range(4)))
        if sigma_system(sys).rhs != sigma_system_newton(sys).rhs:
            failures.append(f"sigma system oracle n={n}")
        if sigma_to_xi(sigma_system(sys).rhs[0]) != apply_L_xi(sys, elementary_xi(1, n)):
            failures.append(f"sigma_1 pull-back n={n}")
    return not failures, ("homogeneity, Newton round trips, Leibniz/equivariance, sigma-system oracle"
                          if not failures else "; ".join(failures[:5]))


def tolerance_scaling(seed: int = 0) -> tuple[float, float]:
    """DH round-trip error at rel_tol 1e-8 and 1e-10 on an 11-point grid over (0, 1)."""
    from .numerics import ToleranceConfig, algebraic_integrate

    sys = preset("darboux-halphen")
    errs = []
    for rt in (1e-8, 1e-10):
        rep = algebraic_integrate(sys, [1, 2, 3], (0.0, 1.0), ToleranceConfig(rel_tol=rt), samples=11)
        errs.append(rep.max_rel_error)
    return errs[0], errs[1]


def check_tolerance_scaling(seed: int = 0) -> tuple[bool, str]:
    loose, tight = tolerance_scaling(seed)
    ratio = loose / tight if tight > 0 else float("inf")
    return ratio >= 10, f"error {loose:.2e} -> {tight:.2e}, ratio {ratio:.1f} (>= 10)"


CHECKS: list[tuple[str, Callable[[int], tuple[bool, str]]]] = [
    ("1 reduction identities", check_reduction_identities),
    ("2 case-study equations", check_case_studies),
    ("3 Chazy mapping", check_chazy),
    ("4 discriminant law", check_discriminant),
    ("5 quadratic and rational integrals", check_integrals),
    ("6 group action", check_group_action),
    ("7 numeric round trips", check_round_trips),
    ("8 closed-form residuals", check_closed_forms),
    ("9 property suites", check_properties),
    ("10 tolerance scaling", check_tolerance_scaling),
]


def run_check(name: str, fn, seed: int = 0) -> CheckResult:
    t = time.perf_counter()
    try:
        ok, detail = fn(seed)
    except Exception as exc:  # a crash is a failed check, reported with its cause
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, ok, detail, time.perf_counter() - t)


def run_all(seed: int = 0, only: list[str] | None = None) -> list[CheckResult]:
    return [run_check(name, fn, seed) for name, fn in CHECKS
            if only is None or name.split()[0] in only]
