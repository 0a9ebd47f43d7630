from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class ToleranceConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    blowup_norm: float = 1e8
    root_tol: float = 1e-12
    collision_factor: float = 0.5

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step", "blowup_norm", "root_tol"):
            v = getattr(self, name)
            if not v > 0:
                raise ValidationError(f"{name} must be positive, got {v}")
        if not 0 < self.collision_factor < 1:
            raise ValidationError("collision_factor must lie in (0, 1)")

    def replace(self, **changes) -> "ToleranceConfig":
        return ToleranceConfig(**{**self.__dict__, **changes})


@dataclass
class Trajectory:
    """Samples of a complex state along a real time axis.

    ``aux`` optionally holds the raw integrator state behind each sample
    (the jet vector for reduced integrations) so a segment can be re-run.
    """

    times: np.ndarray
    states: np.ndarray
    truncated: bool = False
    truncation_time: float | None = None
    prefix: str = "x"
    aux: np.ndarray | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=complex)
        if self.states.ndim == 1:
            self.states = self.states.reshape(len(self.times), -1)
        if len(self.times) != len(self.states):
            raise ValueError("times and states have different lengths")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    @property
    def dimension(self) -> int:
        return self.states.shape[1]

    def __len__(self):
        return len(self.times)

    def header(self) -> list[str]:
        cols = ["t"]
        for k in range(1, self.dimension + 1):
            cols += [f"re({self.prefix}{k})", f"im({self.prefix}{k})"]
        return cols

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        for t, row in zip(self.times, self.states):
            line = [repr(float(t))]
            for v in row:
                line += [repr(float(v.real)), repr(float(v.imag))]
            w.writerow(line)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Trajectory":
        rows = list(csv.reader(io.StringIO(text)))
        head, body = rows[0], rows[1:]
        prefix = head[1][3:-1].rstrip("0123456789") if len(head) > 1 else "x"
        times = [float(r[0]) for r in body]
        states = [[complex(float(r[i]), float(r[i + 1])) for i in range(1, len(r), 2)]
                  for r in body]
        return cls(times, np.array(states, dtype=complex).reshape(len(times), -1), prefix=prefix)

    def meta(self) -> dict:
        return {"dimension": self.dimension, "samples": len(self),
                "truncated": self.truncated, "truncation_time": self.truncation_time}

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.states))) if len(self) else 0.0
