"""Residuals of known closed-form solutions of small reduced equations.

Each case evaluates a closed-form solution and its derivatives
analytically on a time grid and returns the largest residual of the
equation it should satisfy.
"""

from __future__ import annotations

import cmath
from typing import Callable, Mapping, Sequence

import numpy as np

from ..algebra import to_scalar
from ..errors import SingularGridPoint, UnknownCase, ValidationError
from .integrator import dopri5
from .trajectory import ToleranceConfig

SINGULAR_EPS = 1e-12


def _param(params: Mapping, key: str, default=None):
    if key in params:
        return to_scalar(params[key])
    if default is None:
        raise ValidationError(f"missing parameter '{key}'")
    return to_scalar(default)


def _tanh(params, grid) -> float:
    """h'' + l1 h h' = 0 solved by sqrt(2 k1 / l1) tanh(sqrt(k1 l1 / 2) (t + k2))."""
    l1 = complex(_param(params, "lambda1"))
    k1 = complex(_param(params, "k1"))
    k2 = complex(_param(params, "k2", 0))
    amp = cmath.sqrt(2 * k1 / l1)
    w = cmath.sqrt(k1 * l1 / 2)
    worst = 0.0
    for t in grid:
        u = w * (t + k2)
        if abs(cmath.cosh(u)) < SINGULAR_EPS:
            raise SingularGridPoint(f"tanh has a pole at t={t}")
        T = cmath.tanh(u)
        sech2 = 1 - T * T
        h = amp * T
        dh = amp * w * sech2
        d2h = -2 * amp * w * w * T * sech2
        worst = max(worst, abs(d2h + l1 * h * dh))
    return worst


def _rational(params, grid) -> float:
    """h'' + l1 h h' + (l1^2 / 9) h^3 = 0 solved by 6 (k1 t + k2) / (l1 (k1 t^2 + 2 k2 t + 2)).

    With rational parameters and grid points the residual is computed exactly.
    """
    l1 = _param(params, "lambda1")
    k1 = _param(params, "k1")
    k2 = _param(params, "k2", 0)
    l2 = l1 * l1 / 9
    worst = 0.0
    for t in grid:
        t = to_scalar(t)
        N, dN, d2N = 6 * (k1 * t + k2), 6 * k1, 0
        D = l1 * (k1 * t * t + 2 * k2 * t + 2)
        dD = l1 * (2 * k1 * t + 2 * k2)
        d2D = l1 * 2 * k1
        if D == 0 or abs(D) < SINGULAR_EPS:
            raise SingularGridPoint(f"denominator vanishes at t={t}")
        h = N / D
        dh = (dN * D - N * dD) / D ** 2
        d2h = ((d2N * D - N * d2D) * D - 2 * dD * (dN * D - N * dD)) / D ** 3
        res = d2h + l1 * h * dh + l2 * h ** 3
        worst = max(worst, abs(res))
    return float(worst)


def _nongeneric_n2(params, grid) -> float:
    """sigma' = ((beta + 2 gamma) s1^2, 2 beta s1 s2 + gamma s1^3) for alpha = 0, n = 2."""
    from ..reduction import sigma_system
    from ..systems import SymmetricSystem

    beta, gamma = _param(params, "beta"), _param(params, "gamma")
    k1, k2 = _param(params, "k1"), _param(params, "k2", 0)
    S = sigma_system(SymmetricSystem(2, 0, beta, gamma, 0))
    rhs = [p.compile() for p in S.rhs]
    d = beta + 2 * gamma
    beta_c, d_c, k1_c, k2_c = complex(beta), complex(d), complex(k1), complex(k2)
    worst = 0.0
    for t in grid:
        if d != 0:
            u = d_c * t + k1_c
            if abs(u) < SINGULAR_EPS:
                raise SingularGridPoint(f"d t + k1 vanishes at t={t}")
            e = -2 * beta_c / d_c
            s1 = -1 / u
            s2 = 0.25 / u ** 2 + k2_c * u ** e
            ds1 = d_c / u ** 2
            ds2 = -0.5 * d_c / u ** 3 + k2_c * e * d_c * u ** (e - 1)
        else:
            ex = cmath.exp(2 * beta_c * k1_c * t)
            s1 = k1_c
            s2 = k2_c * ex + k1_c ** 2 / 4
            ds1 = 0j
            ds2 = 2 * beta_c * k1_c * k2_c * ex
        f = [g(np.array([s1, s2])) for g in rhs]
        worst = max(worst, abs(ds1 - f[0]), abs(ds2 - f[1]))
    return worst


def _lax_closed(params, grid) -> float:
    """s1 = c tan(c t + b) and the matching s2, s3 of the almost-generic Lax system.

    Checks h'' = 2 h h', s2 = (s1' + 2 s1^2) / 6, and
    s3' = 3 s1 s3 + (s1' - s1^2)(s1' + 2 s1^2) / 18.
    """
    c = complex(_param(params, "c"))
    b = complex(_param(params, "b", 0))
    k = complex(_param(params, "k", 0))
    worst = 0.0
    for t in grid:
        th = c * t + b
        C, S = cmath.cos(th), cmath.sin(th)
        if abs(C) < SINGULAR_EPS:
            raise SingularGridPoint(f"cos(c t + b) vanishes at t={t}")
        sec2 = 1 / (C * C)
        s1 = c * S / C
        ds1 = c * c * sec2
        d2s1 = 2 * c ** 3 * sec2 * S / C
        s2 = -(c * c / 6) * (2 - 3 * sec2)
        num = c ** 3 * S * (2 * C * C - 5) + k
        dnum = c ** 4 * (C * (2 * C * C - 5) - 4 * C * S * S)
        den = 54 * C ** 3
        dden = -162 * C * C * S * c
        s3 = -num / den
        ds3 = -(dnum * den - num * dden) / den ** 2
        worst = max(worst,
                    abs(d2s1 - 2 * s1 * ds1),
                    abs(s2 - (ds1 + 2 * s1 * s1) / 6),
                    abs(ds3 - 3 * s1 * s3 - (ds1 - s1 * s1) * (ds1 + 2 * s1 * s1) / 18))
    return worst


def _lv_sn_energy(params, grid) -> float:
    """Largest drift of E = h'^2 + l2 h^4 / 2 along a numerical solution of h'' + l2 h^3 = 0."""
    l2 = complex(_param(params, "lambda2"))
    h0 = complex(_param(params, "h0", 1))
    h1 = complex(_param(params, "h1", 0))
    grid = [float(t) for t in grid]
    cfg = ToleranceConfig(rel_tol=1e-12, abs_tol=1e-14)
    traj = dopri5(lambda t, y: np.array([y[1], -l2 * y[0] ** 3]), [h0, h1],
                  (grid[0], grid[-1]), cfg, t_eval=grid)
    E = traj.states[:, 1] ** 2 + l2 * traj.states[:, 0] ** 4 / 2
    return float(np.max(np.abs(E - E[0])) / max(1.0, abs(E[0])))


CASES: dict[str, Callable] = {
    "tanh": _tanh,
    "rational": _rational,
    "nongeneric_n2": _nongeneric_n2,
    "lax_closed": _lax_closed,
    "lv_sn_energy": _lv_sn_energy,
}


def residual_check(case: str, params: Mapping, grid: Sequence) -> float:
    """Max absolute residual of a closed-form case on ``grid``.

    For ``lv_sn_energy`` the value is the relative drift of the energy
    along a numerical solution instead.
    """
    if case not in CASES:
        raise UnknownCase(f"unknown closed-form case '{case}'; known: {', '.join(CASES)}")
    if len(grid) == 0:
        raise ValidationError("empty grid")
    return CASES[case](params, grid)


__all__ = ["residual_check", "CASES"]
