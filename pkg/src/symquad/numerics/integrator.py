"""Dormand-Prince 5(4) with PI step control, complex state and real time."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from ..errors import DimensionMismatch, MissingAuxiliaryInitialValue, StepSizeUnderflow
from ..reduction import AlmostGenericReduction, ReductionData
from ..systems import QuadraticTensor, SymmetricSystem
from .trajectory import ToleranceConfig, Trajectory

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

# PI controller gains (Gustafsson); exponents are relative to order 5
_ALPHA = 0.7 / 5
_BETA = 0.4 / 5
_SAFETY = 0.9
_MIN_FACTOR, _MAX_FACTOR = 0.2, 10.0

RHS = Callable[[float, np.ndarray], np.ndarray]


def _initial_step(f: RHS, t0, y0, f0, direction, cfg: ToleranceConfig) -> float:
    scale = cfg.abs_tol + np.abs(y0) * cfg.rel_tol
    d0 = np.sqrt(np.mean(np.abs(y0 / scale) ** 2))
    d1 = np.sqrt(np.mean(np.abs(f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, cfg.max_step)
    y1 = y0 + direction * h0 * f0
    f1 = f(t0 + direction * h0, y1)
    d2 = np.sqrt(np.mean(np.abs((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, cfg.max_step)


def dopri5(f: RHS, y0: Sequence, span: tuple[float, float], cfg: ToleranceConfig,
           t_eval: Sequence[float] | None = None,
           norm: Callable[[np.ndarray], float] | None = None,
           keep_state: bool = False, prefix: str = "x",
           emit: Callable[[np.ndarray], np.ndarray] | None = None) -> Trajectory:
    """Integrate y' = f(t, y) over ``span``.

    Steps are clipped to land exactly on ``t_eval`` (every accepted step is
    recorded when it is None). Integration stops, flagging truncation, as
    soon as ``norm(y)`` exceeds ``cfg.blowup_norm``. ``emit`` maps the raw
    state to the recorded one; the raw state is kept in ``aux`` on request.
    """
    t0, t1 = float(span[0]), float(span[1])
    y = np.array(y0, dtype=complex)
    norm = norm or (lambda v: float(np.max(np.abs(v))) if v.size else 0.0)
    emit = emit or (lambda v: v)
    direction = 1.0 if t1 >= t0 else -1.0
    if t_eval is None:
        grid = None
    else:
        grid = [float(t) for t in t_eval]
        if any((g - t0) * direction < -1e-15 or (g - t1) * direction > 1e-15 for g in grid):
            raise ValueError("evaluation times must lie inside the span")
    times, states, raw = [t0], [emit(y)], [y.copy()]
    if grid and abs(grid[0] - t0) <= 1e-15 * max(1.0, abs(t0)):
        grid = grid[1:]
    elif grid is not None:
        times, states, raw = [], [], []
    result = lambda trunc, tt: Trajectory(
        times if direction > 0 else times[::-1],
        np.array(states if direction > 0 else states[::-1], dtype=complex).reshape(len(times), -1),
        truncated=trunc, truncation_time=tt, prefix=prefix,
        aux=(np.array(raw if direction > 0 else raw[::-1]) if keep_state else None))
    if t0 == t1:
        return result(False, None)
    if norm(y) > cfg.blowup_norm:
        return result(True, t0)

    t = t0
    k1 = f(t, y)
    h = _initial_step(f, t, y, k1, direction, cfg)
    err_prev = 1.0
    gi = 0
    stages = [None] * 7
    while (t1 - t) * direction > 0:
        if grid is not None and gi >= len(grid):
            break
        target = t1 if grid is None or gi >= len(grid) else grid[gi]
        h = min(h, cfg.max_step)
        min_h = 16 * np.finfo(float).eps * max(1.0, abs(t))
        if h < min_h:
            raise StepSizeUnderflow(f"step size {h:.3g} below {min_h:.3g} at t={t:.17g}")
        remaining = (target - t) * direction
        clipped = h >= remaining
        step = remaining if clipped else h
        dt = direction * step

        stages[0] = k1
        for s in range(1, 7):
            acc = y.copy()
            for j, a in enumerate(_A[s]):
                if a:
                    acc = acc + dt * a * stages[j]
            stages[s] = f(t + _C[s] * dt, acc)
            if s == 6:
                y_new = acc
        err_vec = dt * sum(e * k for e, k in zip(_E, stages) if e)
        scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean(np.abs(err_vec / scale) ** 2))) if y.size else 0.0
        if not np.isfinite(err) or not np.all(np.isfinite(y_new)):
            h = step * _MIN_FACTOR
            continue
        if err <= 1.0:
            if norm(y_new) > cfg.blowup_norm:
                return result(True, t)
            t = target if clipped else t + dt
            y = y_new
            k1 = stages[6]
            if clipped and grid is not None and gi < len(grid):
                gi += 1
                times.append(t)
                states.append(emit(y))
                raw.append(y.copy())
            elif grid is None:
                times.append(t)
                states.append(emit(y))
                raw.append(y.copy())
            factor = _SAFETY * max(err, 1e-10) ** -_ALPHA * err_prev ** _BETA
            factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            new_h = step * factor
            # a step shortened to hit a grid point should not shrink the next one
            h = max(new_h, h) if clipped and factor >= 1 else new_h
            err_prev = max(err, 1e-4)
        else:
            factor = max(_MIN_FACTOR, _SAFETY * err ** -_ALPHA)
            h = step * min(1.0, factor)
    return result(False, None)


# --------------------------------------------------------------------------
# direct integration of the quadratic system
# --------------------------------------------------------------------------

def quadratic_rhs(system) -> RHS:
    if isinstance(system, SymmetricSystem):
        a, b, g, d = (complex(v) for v in system.params)

        def f(t, x):
            p1 = x.sum()
            p2 = (x * x).sum()
            return a * x * x + b * x * p1 + (g * p1 * p1 + d * p2)
        return f
    if isinstance(system, QuadraticTensor):
        T = np.array(system.A, dtype=complex)
        return lambda t, x: np.einsum("kij,i,j->k", T, x, x)
    raise TypeError(f"expected a symmetric system or tensor, got {type(system).__name__}")


def integrate_direct(system, x0: Sequence, span: tuple[float, float],
                     cfg: ToleranceConfig | None = None,
                     t_eval: Sequence[float] | None = None) -> Trajectory:
    cfg = cfg or ToleranceConfig()
    if len(x0) != system.n:
        raise DimensionMismatch(f"initial point has {len(x0)} entries, system has n={system.n}")
    return dopri5(quadratic_rhs(system), [complex(v) for v in x0], span, cfg, t_eval)


# --------------------------------------------------------------------------
# reduced ODE in companion form
# --------------------------------------------------------------------------

def _compiled_terms(ode):
    exps = np.array(list(ode.terms.keys()), dtype=np.int64).reshape(-1, ode.order)
    coeffs = np.array([complex(c) for c in ode.terms.values()], dtype=complex)
    return exps, coeffs


class ReducedSystem:
    """First-order form of a reduction: jets h..h^(m-1), plus sigma_n when almost generic."""

    def __init__(self, red: ReductionData | AlmostGenericReduction):
        self.red = red
        self.order = red.ode.order
        self.almost = isinstance(red, AlmostGenericReduction)
        self.n = red.n if self.almost else self.order
        self._exps, self._coeffs = _compiled_terms(red.ode)
        self._sigma = [p.compile() for p in red.sigma_exprs]
        width = red.sigma_exprs[0].ring.nvars
        self._pad = max(0, width - self.order)
        if self.almost:
            self._c = complex(red.last_c)
            self._g = red.last_g.compile()
            self._pad = max(self._pad, red.last_g.ring.nvars - self.order)

    @property
    def state_size(self) -> int:
        return self.order + (1 if self.almost else 0)

    def _jets(self, y):
        jets = y[: self.order]
        return np.concatenate([jets, np.zeros(self._pad, dtype=complex)]) if self._pad else jets

    def rhs(self, t, y):
        jets = y[: self.order]
        top = -(self._coeffs @ np.prod(jets[None, :] ** self._exps, axis=1)) if len(self._coeffs) else 0j
        out = np.empty_like(y)
        out[: self.order - 1] = jets[1:]
        out[self.order - 1] = top
        if self.almost:
            out[self.order] = self._c * jets[0] * y[self.order] + self._g(self._jets(y))
        return out

    def emit(self, y) -> np.ndarray:
        jets = self._jets(y)
        sig = [f(jets) for f in self._sigma]
        if self.almost:
            sig.append(y[self.order])
        return np.array(sig, dtype=complex)

    def graded_norm(self, y) -> float:
        """max_k |h^(k)|^(1/(k+1)): comparable to |x| under the grading."""
        vals = [abs(v) ** (1.0 / (k + 1)) for k, v in enumerate(y[: self.order])]
        if self.almost:
            vals.append(abs(y[self.order]) ** (1.0 / self.n))
        return max(vals) if vals else 0.0

    def initial_state(self, jets0: Sequence, sigma_n0=None) -> np.ndarray:
        if len(jets0) != self.order:
            raise DimensionMismatch(f"need {self.order} initial jets, got {len(jets0)}")
        state = [complex(v) for v in jets0]
        if self.almost:
            if sigma_n0 is None:
                raise MissingAuxiliaryInitialValue(
                    f"almost-generic reduction needs sigma_{self.n}(t0)")
            state.append(complex(sigma_n0))
        return np.array(state, dtype=complex)

    def integrate_from(self, state, span, cfg, t_eval=None) -> Trajectory:
        return dopri5(self.rhs, state, span, cfg, t_eval, norm=self.graded_norm,
                      keep_state=True, prefix="s", emit=self.emit)


def integrate_reduced(red: ReductionData | AlmostGenericReduction, jets0: Sequence,
                      span: tuple[float, float], cfg: ToleranceConfig | None = None,
                      sigma_n0=None, t_eval: Sequence[float] | None = None) -> Trajectory:
    """sigma_1..sigma_n along the solution of the reduced ODE.

    Truncation uses the graded norm of the jet state, so ``blowup_norm``
    means the same thing here as for the direct integration.
    """
    cfg = cfg or ToleranceConfig()
    rs = ReducedSystem(red)
    return rs.integrate_from(rs.initial_state(jets0, sigma_n0), span, cfg, t_eval)


def uniform_grid(span: tuple[float, float], samples: int) -> np.ndarray:
    return np.linspace(float(span[0]), float(span[1]), max(2, int(samples)))


__all__ = ["dopri5", "integrate_direct", "integrate_reduced", "quadratic_rhs",
           "ReducedSystem", "uniform_grid"]
