"""Simultaneous polynomial root finding and continuous root tracking."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..errors import DiscriminantDegenerate, RootSolverDiverged
from .trajectory import ToleranceConfig, Trajectory

MAX_ITER = 500
MAX_REFINE_DEPTH = 40
REFINE_BUDGET = 2000  # bisections allowed per sample interval


def monic_from_sigma(sigma: Sequence) -> np.ndarray:
    """Coefficients, highest degree first, of prod (z - x_k) given sigma_k(x)."""
    s = np.asarray(sigma, dtype=complex)
    signs = (-1.0) ** np.arange(1, len(s) + 1)
    return np.concatenate([[1.0 + 0j], signs * s])


def _circle_start(coeffs: np.ndarray) -> np.ndarray:
    n = len(coeffs) - 1
    radius = 1.0 + float(np.max(np.abs(coeffs[1:])))
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return radius * np.exp(1j * angles)


def aberth(coeffs: np.ndarray, start: np.ndarray | None = None, tol: float = 1e-12,
           max_iter: int = MAX_ITER) -> np.ndarray:
    """Aberth-Ehrlich iteration for all roots of a monic polynomial."""
    coeffs = np.asarray(coeffs, dtype=complex)
    n = len(coeffs) - 1
    if n == 1:
        return np.array([-coeffs[1]])
    z = np.array(start if start is not None else _circle_start(coeffs), dtype=complex)
    dcoeffs = np.polyder(coeffs)
    abs_coeffs = np.abs(coeffs)
    for _ in range(max_iter):
        p = np.polyval(coeffs, z)
        # |p(z)| at the level of Horner rounding error: no further progress possible
        floor = 8 * n * np.finfo(float).eps * np.polyval(abs_coeffs, np.abs(z))
        if np.all(np.abs(p) <= floor):
            return polish(coeffs, z, tol)
        dp = np.polyval(dcoeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            corr = ratio / (1.0 - ratio * inv.sum(axis=1))
        corr = np.where(p == 0, 0, corr)
        if not np.all(np.isfinite(corr)):
            # coincident iterates or vanishing derivative: nudge and retry
            z = z + tol * (1 + np.abs(z)) * np.exp(1j * np.arange(n))
            continue
        z = z - corr
        if np.all((np.abs(corr) <= tol * np.maximum(1.0, np.abs(z))) | (np.abs(p) <= floor)):
            return polish(coeffs, z, tol)
    raise RootSolverDiverged(f"Aberth iteration did not converge in {max_iter} steps")


def polish(coeffs: np.ndarray, z: np.ndarray, tol: float, steps: int = 3) -> np.ndarray:
    """A few Newton steps per root."""
    dcoeffs = np.polyder(coeffs)
    z = z.copy()
    for _ in range(steps):
        dp = np.polyval(dcoeffs, z)
        safe = dp != 0
        step = np.zeros_like(z)
        step[safe] = np.polyval(coeffs, z[safe]) / dp[safe]
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(z))):
            break
    return z


def match_to(previous: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """Reorder ``roots`` to minimize total displacement from ``previous``."""
    cost = np.abs(previous[:, None] - roots[None, :])
    _, cols = linear_sum_assignment(cost)
    return roots[cols]


def min_separation(z: np.ndarray) -> float:
    if len(z) < 2:
        return np.inf
    d = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())


def discriminant_abs(z: np.ndarray) -> float:
    n = len(z)
    out = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            out *= abs(z[i] - z[j]) ** 2
    return out


Refiner = Callable[[int, float], np.ndarray]


class _Tracker:
    def __init__(self, cfg: ToleranceConfig, refine: Refiner | None):
        self.cfg = cfg
        self.refine = refine
        self.refinements = 0
        self.interval_refinements = 0
        self.min_disc = np.inf

    def solve(self, sigma, start):
        roots = aberth(monic_from_sigma(sigma), start, self.cfg.root_tol)
        return match_to(start, roots)

    def check_separation(self, z, t):
        sep = min_separation(z)
        scale = max(1.0, float(np.max(np.abs(z))))
        if sep <= self.cfg.root_tol * scale:
            raise DiscriminantDegenerate(
                f"roots collide near t={t:.12g} (min separation {sep:.3g})")
        self.min_disc = min(self.min_disc, discriminant_abs(z))
        return sep

    def advance(self, prev, s0, s1, i, ta, tb, depth=0):
        """Continue ``prev`` (roots at sigma s0, time ta) to sigma s1 at time tb."""
        sep = self.check_separation(prev, ta)
        try:
            new = self.solve(s1, prev)
        except RootSolverDiverged:
            # warm start too far from the target: shorten the step
            if depth >= MAX_REFINE_DEPTH:
                raise
            new = None
        if new is not None and np.max(np.abs(new - prev)) <= self.cfg.collision_factor * sep:
            return new
        if depth >= MAX_REFINE_DEPTH or self.interval_refinements >= REFINE_BUDGET:
            raise DiscriminantDegenerate(
                f"root tracking could not resolve the path near t={tb:.12g}")
        self.refinements += 1
        self.interval_refinements += 1
        tm = 0.5 * (ta + tb)
        if self.refine is not None:
            sm = np.asarray(self.refine(i, tm), dtype=complex)
        else:
            sm = 0.5 * (np.asarray(s0) + np.asarray(s1))
        mid = self.advance(prev, s0, sm, i, ta, tm, depth + 1)
        return self.advance(mid, sm, s1, i, tm, tb, depth + 1)


def track_roots(sigma_traj: Trajectory, cfg: ToleranceConfig | None = None,
                initial_roots: Sequence | None = None,
                refine: Refiner | None = None) -> Trajectory:
    """Lift a sigma path to a continuously labelled path of roots.

    ``refine(i, t)`` must return sigma at a time t between samples i-1 and
    i; without it the path is refined by linear interpolation in sigma.
    ``info`` records the smallest |discriminant| seen and the refinement count.
    """
    cfg = cfg or ToleranceConfig()
    S = sigma_traj.states
    times = sigma_traj.times
    if len(times) == 0:
        raise ValueError("empty sigma trajectory")
    tracker = _Tracker(cfg, refine)
    coeffs = monic_from_sigma(S[0])
    first = aberth(coeffs, None, cfg.root_tol)
    if initial_roots is not None:
        first = match_to(np.asarray(initial_roots, dtype=complex), first)
    roots = [first]

    def result():
        out = Trajectory(times[: len(roots)].copy(), np.array(roots), sigma_traj.truncated,
                         sigma_traj.truncation_time, prefix="x")
        out.info.update(min_discriminant=tracker.min_disc, refinements=tracker.refinements)
        return out

    try:
        for i in range(1, len(times)):
            tracker.interval_refinements = 0
            roots.append(tracker.advance(roots[-1], S[i - 1], S[i], i, times[i - 1], times[i]))
        tracker.check_separation(roots[-1], times[-1])
    except (DiscriminantDegenerate, RootSolverDiverged) as exc:
        raise DiscriminantDegenerate(str(exc), partial=result()) from exc
    return result()
