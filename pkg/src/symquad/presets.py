"""Named systems that can be selected from the command line."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

from .algebra import to_scalar
from .errors import ValidationError
from .systems import QuadraticTensor, SymmetricSystem, detect_symmetry


def lotka_volterra_tensor(n: int, m=2) -> QuadraticTensor:
    """x_k' = x_k (sum_l x_l - m x_k), assembled entry by entry."""
    m = to_scalar(m)
    half = Fraction(1, 2)
    A = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        A[k][k][k] = 1 - m
        for l in range(n):
            if l != k:
                A[k][k][l] = A[k][l][k] = half
    return QuadraticTensor(n, A)


def _int(params, key, default=None) -> int:
    raw = params.get(key, default)
    if raw is None:
        raise ValidationError(f"missing parameter '{key}'")
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise ValidationError(f"parameter '{key}' must be an integer, got {raw!r}") from None


def _num(params, key, default=None):
    raw = params.get(key, default)
    if raw is None:
        raise ValidationError(f"missing parameter '{key}'")
    try:
        return to_scalar(raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"parameter '{key}': {exc}") from None


def _n1(p):
    return SymmetricSystem(1, _num(p, "alpha", 1))


def _symmetric(p):
    return SymmetricSystem(_int(p, "n"), _num(p, "alpha"), _num(p, "beta"),
                           _num(p, "gamma"), _num(p, "delta"))


def _lv(p):
    n = _int(p, "n", 3)
    if n < 2:
        raise ValidationError("lv needs n >= 2")
    return detect_symmetry(lotka_volterra_tensor(n))


def _kp2(p):
    return detect_symmetry(lotka_volterra_tensor(3, _num(p, "m")))


def _darboux_halphen(p):
    return SymmetricSystem(3, 2, -2, Fraction(1, 2), Fraction(-1, 2))


def _gen_dh(p):
    a, b = _num(p, "a", 1), _num(p, "b", 0)
    return SymmetricSystem(3, 2 * a + b, -2 * a, a / 2, -a / 2)


def _lax(p):
    return SymmetricSystem(3, 0, 1, 0, -1)


PRESETS: dict[str, Callable[[Mapping], SymmetricSystem]] = {
    "n1": _n1,
    "symmetric": _symmetric,
    "lv": _lv,
    "kovalevskaya-lv3": lambda p: _lv({"n": 3}),
    "kp2": _kp2,
    "darboux-halphen": _darboux_halphen,
    "gen-dh": _gen_dh,
    "lax": _lax,
}

PRESET_PARAMS = {
    "n1": {"alpha"},
    "symmetric": {"n", "alpha", "beta", "gamma", "delta"},
    "lv": {"n"},
    "kovalevskaya-lv3": set(),
    "kp2": {"m"},
    "darboux-halphen": set(),
    "gen-dh": {"a", "b"},
    "lax": set(),
}


def preset(name: str, **params) -> SymmetricSystem:
    if name not in PRESETS:
        raise ValidationError(f"unknown preset '{name}'; choose from {', '.join(sorted(PRESETS))}")
    unknown = set(params) - PRESET_PARAMS[name]
    if unknown:
        raise ValidationError(f"preset '{name}' does not take {', '.join(sorted(unknown))}")
    return PRESETS[name](params)
