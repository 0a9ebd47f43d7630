"""Solve a symmetric system through its reduced ODE and compare with direct integration."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DegenerateInitialData, DiscriminantDegenerate
from ..reduction import AlmostGenericReduction, initial_jets, reduce
from ..symfun import vieta_image
from ..systems import SymmetricSystem
from .integrator import ReducedSystem, integrate_direct, uniform_grid
from .roots import track_roots
from .trajectory import ToleranceConfig, Trajectory


class Status(enum.Enum):
    OK = "OK"
    POLE_TRUNCATED = "PoleTruncated"
    DISCRIMINANT_DEGENERATE = "DiscriminantDegenerate"


@dataclass
class IntegrationReport:
    direct: Trajectory
    reconstructed: Trajectory
    max_abs_error: float
    max_rel_error: float
    discriminant_min_abs: float
    status: Status
    sigma: Trajectory | None = None
    message: str = ""

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "max_abs_error": self.max_abs_error,
            "max_rel_error": self.max_rel_error,
            "discriminant_min_abs": self.discriminant_min_abs,
            "direct": self.direct.meta(),
            "reconstructed": self.reconstructed.meta(),
            "message": self.message,
        }


def _compare(direct: Trajectory, recon: Trajectory) -> tuple[float, float]:
    m = min(len(direct), len(recon))
    if m == 0:
        return 0.0, 0.0
    if not np.allclose(direct.times[:m], recon.times[:m], rtol=0, atol=1e-12):
        raise ValueError("trajectories are not on a common grid")
    diff = np.abs(direct.states[:m] - recon.states[:m])
    abs_err = float(diff.max())
    scale = np.maximum(np.abs(direct.states[:m]).max(axis=1), 1e-300)
    rel_err = float((diff.max(axis=1) / scale).max())
    return abs_err, rel_err


def algebraic_integrate(sys: SymmetricSystem, x0: Sequence, span: tuple[float, float],
                        cfg: ToleranceConfig | None = None, samples: int = 101,
                        t_eval: Sequence[float] | None = None) -> IntegrationReport:
    """Integrate the reduced ODE, lift sigma to roots, and check against the direct solution.

    Both integrations share the sample grid. When either stops at the
    blow-up threshold, errors are taken over the samples both produced.
    """
    cfg = cfg or ToleranceConfig()
    x0 = [complex(v) for v in x0]
    red = reduce(sys)
    rs = ReducedSystem(red)
    jets0 = initial_jets(sys, x0, order=rs.order)
    sigma_n0 = vieta_image(x0)[-1] if isinstance(red, AlmostGenericReduction) else None
    if abs(np.prod([x0[i] - x0[j] for i in range(len(x0)) for j in range(i + 1, len(x0))])) == 0:
        raise DegenerateInitialData("initial point lies on the discriminant locus")
    grid = np.asarray(t_eval, dtype=float) if t_eval is not None else uniform_grid(span, samples)

    direct = integrate_direct(sys, x0, span, cfg, t_eval=grid)
    sig = rs.integrate_from(rs.initial_state(jets0, sigma_n0), span, cfg, t_eval=grid)

    known: dict[int, list] = {}

    def refine(i: int, t: float) -> np.ndarray:
        # restart from the latest state already computed before t in this interval
        pts = known.setdefault(i, [(sig.times[i - 1], sig.aux[i - 1])])
        t_start, y_start = max((p for p in pts if p[0] <= t), key=lambda p: p[0])
        seg = rs.integrate_from(y_start, (t_start, t), cfg, t_eval=[t])
        pts.append((t, seg.aux[-1]))
        return seg.states[-1]

    status = Status.POLE_TRUNCATED if (direct.truncated or sig.truncated) else Status.OK
    message = ""
    try:
        recon = track_roots(sig, cfg, initial_roots=x0, refine=refine)
        disc_min = recon.info["min_discriminant"]
    except DiscriminantDegenerate as exc:
        status = Status.DISCRIMINANT_DEGENERATE
        message = str(exc)
        recon = exc.partial
        disc_min = recon.info["min_discriminant"]
    abs_err, rel_err = _compare(direct, recon)
    return IntegrationReport(direct, recon, abs_err, rel_err, disc_min, status, sig, message)
