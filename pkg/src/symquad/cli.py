"""Command-line front end: ``symquad <command> [system] [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .algebra import serialize_scalar, to_scalar
from .errors import ConfigError, ParseError, SymQuadError, ValidationError
from .presets import PRESETS, preset
from .systems import QuadraticTensor, SymmetricSystem, classify, detect_symmetry, to_tensor

COMMANDS = ("classify", "reduce", "normalize", "integrate", "integrals", "verify")
FORMATS = ("text", "json", "csv")
CONFIG_KEYS = {"command", "system", "preset", "params", "x0", "span", "rel_tol", "abs_tol",
               "blowup_norm", "samples", "seed", "out", "format", "only", "jobs"}


@dataclass
class RunConfig:
    command: str
    system: SymmetricSystem | None = None
    tensor: QuadraticTensor | None = None
    source: str = ""
    x0: list | None = None
    span: tuple[float, float] = (0.0, 1.0)
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    blowup_norm: float = 1e8
    samples: int = 101
    seed: int = 0
    out: str | None = None
    format: str = "text"
    only: list[str] | None = None
    jobs: int = 1
    params: dict = field(default_factory=dict)

    def symmetric(self) -> SymmetricSystem:
        if self.system is not None:
            return self.system
        return detect_symmetry(self.tensor)

    def quadratic_tensor(self) -> QuadraticTensor:
        return self.tensor if self.tensor is not None else to_tensor(self.system)


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

def parse_value(text: str):
    """A rational when it reads as one, otherwise a Python complex literal."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ValidationError(f"cannot read {text!r} as a number") from None


def parse_x0(raw) -> list:
    if isinstance(raw, str):
        return [parse_value(t) for t in raw.split(",") if t.strip()]
    out = []
    for v in raw:
        out.append(parse_value(v) if isinstance(v, str) else to_scalar(v))
    return out


def parse_span(raw) -> tuple[float, float]:
    parts = raw.split(",") if isinstance(raw, str) else list(raw)
    if len(parts) != 2:
        raise ValidationError(f"span needs two endpoints, got {raw!r}")
    try:
        t0, t1 = float(parts[0]), float(parts[1])
    except (TypeError, ValueError):
        raise ValidationError(f"span endpoints must be numbers, got {raw!r}") from None
    if not t1 > t0:
        raise ValidationError("span must run forward in time (t1 > t0)")
    return t0, t1


def load_json(path: str | Path):
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"file not found: {path}")
    text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def system_from_json(obj) -> tuple[SymmetricSystem | None, QuadraticTensor | None]:
    if not isinstance(obj, dict):
        raise ValidationError("system JSON must be an object")
    if "A" in obj:
        extra = set(obj) - {"n", "A"}
        if extra:
            raise ValidationError(f"unknown tensor keys: {', '.join(sorted(extra))}")
        A = obj["A"]
        try:
            return None, QuadraticTensor.from_json({"n": obj.get("n", len(A)), "A": A})
        except (TypeError, ValueError, KeyError) as exc:
            raise ValidationError(f"bad tensor: {exc}") from None
    keys = {"n", "alpha", "beta", "gamma", "delta"}
    extra = set(obj) - keys
    if extra:
        raise ValidationError(f"unknown system keys: {', '.join(sorted(extra))}")
    if "n" not in obj:
        raise ValidationError("system JSON needs 'n'")
    try:
        return SymmetricSystem(int(obj["n"]), *(to_scalar(obj.get(k, 0))
                                               for k in ("alpha", "beta", "gamma", "delta"))), None
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad system parameters: {exc}") from None


def parse_system_arg(text: str) -> tuple[SymmetricSystem | None, QuadraticTensor | None]:
    """Inline ``n,alpha,beta,gamma,delta`` or the path of a JSON file."""
    if Path(text).is_file() or text.endswith(".json"):
        return system_from_json(load_json(text))
    parts = [t.strip() for t in text.split(",")]
    if len(parts) != 5:
        raise ValidationError(f"--system expects n,alpha,beta,gamma,delta or a JSON file, got {text!r}")
    try:
        n = int(parts[0])
    except ValueError:
        raise ValidationError(f"dimension must be an integer, got {parts[0]!r}") from None
    try:
        return SymmetricSystem(n, *(Fraction(p) for p in parts[1:])), None
    except ValueError as exc:
        raise ValidationError(f"bad system parameters: {exc}") from None


def parse_params(items: Sequence[str]) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ValidationError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symquad",
        description="Classify, reduce, normalize and integrate symmetric quadratic systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("system")
    src.add_argument("--system", help="n,alpha,beta,gamma,delta inline, or a JSON file "
                                      "with those keys or with a tensor 'A'")
    src.add_argument("--preset", choices=sorted(PRESETS))
    src.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="preset parameter (repeatable)")
    common.add_argument("--config", help="JSON run configuration; flags override it")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output file (directory for integrate)")
    common.add_argument("--format", choices=FORMATS)

    sub.add_parser("classify", parents=[common], help="generic / almost generic / non-generic")
    sub.add_parser("reduce", parents=[common], help="single ODE for sigma_1 and sigma_k formulas")
    sub.add_parser("normalize", parents=[common], help="orbit representative under B(lambda, q)")
    sub.add_parser("integrals", parents=[common], help="basis of quadratic first integrals")
    integ = sub.add_parser("integrate", parents=[common],
                           help="solve through the reduced ODE and compare with direct integration")
    integ.add_argument("--x0", help="comma-separated initial point; entries like 1/2 or 1+2j")
    integ.add_argument("--span", help="t0,t1")
    integ.add_argument("--rel-tol", type=float, dest="rel_tol")
    integ.add_argument("--abs-tol", type=float, dest="abs_tol")
    integ.add_argument("--blowup-norm", type=float, dest="blowup_norm")
    integ.add_argument("--samples", type=int)
    ver = sub.add_parser("verify", parents=[common], help="run the identity suite")
    ver.add_argument("--only", help="comma-separated check numbers, e.g. 1,2,7")
    ver.add_argument("--jobs", type=int, help="run checks in this many processes")
    return parser


def parse_config(args: argparse.Namespace) -> RunConfig:
    """Merge a JSON config file with command-line flags (flags win)."""
    file_cfg: dict = {}
    if args.config:
        file_cfg = load_json(args.config)
        if not isinstance(file_cfg, dict):
            raise ValidationError("config file must hold a JSON object")
        unknown = set(file_cfg) - CONFIG_KEYS
        if unknown:
            raise ValidationError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if file_cfg.get("command", args.command) != args.command:
            raise ValidationError(f"config is for '{file_cfg['command']}', not '{args.command}'")

    def pick(name):
        v = getattr(args, name, None)
        return v if v is not None else file_cfg.get(name)

    cfg = RunConfig(command=args.command)

    # system source: the command line replaces the file's source entirely
    flag_sources = [s for s in ("system", "preset") if getattr(args, s, None)]
    file_sources = [s for s in ("system", "preset") if s in file_cfg]
    sources = flag_sources or file_sources
    if args.param and "preset" not in sources:
        raise ValidationError("--param only applies to --preset")
    if cfg.command != "verify":
        if len(sources) != 1:
            raise ValidationError("give exactly one system source: --system or --preset"
                                  if sources else "no system given: use --system or --preset")
        kind = sources[0]
        if kind == "preset":
            name = args.preset if flag_sources else file_cfg["preset"]
            params = dict(file_cfg.get("params", {}) if not flag_sources else {})
            params.update(parse_params(args.param))
            cfg.system = preset(name, **params)
            cfg.params = params
            cfg.source = f"preset {name}"
        else:
            raw = args.system if flag_sources else file_cfg["system"]
            cfg.system, cfg.tensor = (parse_system_arg(raw) if isinstance(raw, str)
                                      else system_from_json(raw))
            cfg.source = "tensor" if cfg.tensor is not None else "parameters"
    elif sources:
        raise ValidationError("verify does not take a system")

    if (seed := pick("seed")) is not None:
        cfg.seed = int(seed)
    if (fmt := pick("format")) is not None:
        if fmt not in FORMATS:
            raise ValidationError(f"format must be one of {', '.join(FORMATS)}")
        cfg.format = fmt
    cfg.out = pick("out")
    if (x0 := pick("x0")) is not None:
        cfg.x0 = parse_x0(x0)
    if (span := pick("span")) is not None:
        cfg.span = parse_span(span)
    for name in ("rel_tol", "abs_tol", "blowup_norm"):
        if (v := pick(name)) is not None:
            setattr(cfg, name, float(v))
    if (v := pick("samples")) is not None:
        cfg.samples = int(v)
        if cfg.samples < 2:
            raise ValidationError("samples must be at least 2")
    if (v := pick("only")) is not None:
        cfg.only = [s.strip() for s in (v.split(",") if isinstance(v, str) else map(str, v))]
    if (v := pick("jobs")) is not None:
        cfg.jobs = max(1, int(v))

    if cfg.format == "csv" and cfg.command not in ("integrate", "integrals"):
        raise ValidationError(f"--format csv is not available for '{cfg.command}'")
    if cfg.command == "integrate" and cfg.x0 is None:
        raise ValidationError("integrate needs --x0")
    return cfg


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def write_atomic(path: str | Path, text: str) -> None:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg: RunConfig, text: str, stdout) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out:
        write_atomic(cfg.out, text)
    else:
        stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2)


def _system_json(cfg: RunConfig) -> dict:
    if cfg.tensor is not None and cfg.system is None:
        return {"source": cfg.source, **cfg.tensor.to_json()}
    return {"source": cfg.source, **cfg.system.to_json()}


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_classify(cfg: RunConfig, stdout) -> int:
    sys_ = cfg.symmetric()
    cls = classify(sys_)
    canon = sys_.canonical()
    if cfg.format == "json":
        _emit(cfg, _json({"seed": cfg.seed, "system": _system_json(cfg), "kind": cls.kind.value,
                          "description": cls.describe(),
                          "c": [serialize_scalar(v) for v in cls.c],
                          "canonical": canon.to_json()}), stdout)
    else:
        _emit(cfg, f"{cls.describe()}\ncanonical: {canon}\nseed: {cfg.seed}", stdout)
    return 0


def cmd_reduce(cfg: RunConfig, stdout) -> int:
    from .reduction import AlmostGenericReduction, reduce, sigma_exprs_to_str

    red = reduce(cfg.symmetric())
    if cfg.format == "json":
        _emit(cfg, _json({"seed": cfg.seed, "system": _system_json(cfg),
                          "kind": "almost generic" if isinstance(red, AlmostGenericReduction)
                          else "generic", **red.to_json()}), stdout)
        return 0
    lines = [str(red.ode)] + sigma_exprs_to_str(red.sigma_exprs)
    if isinstance(red, AlmostGenericReduction):
        c = serialize_scalar(red.last_c)
        lines.append(f"s{red.n}' = {c}*s1*s{red.n} + ({red.last_g})")
    lines.append(f"seed: {cfg.seed}")
    _emit(cfg, "\n".join(lines), stdout)
    return 0


def cmd_normalize(cfg: RunConfig, stdout) -> int:
    from .group_action import normal_form

    nf = normal_form(cfg.symmetric())
    if cfg.format == "json":
        _emit(cfg, _json({"seed": cfg.seed, "system": _system_json(cfg), "case": nf.case,
                          "B": nf.B.to_json(), "normal_form": nf.system.to_json()}), stdout)
    else:
        _emit(cfg, f"{nf.B}\nnormal form ({nf.case}): {nf.system}\nseed: {cfg.seed}", stdout)
    return 0


def cmd_integrals(cfg: RunConfig, stdout) -> int:
    from .integrals import basis_to_json, quadratic_integral_basis

    basis = quadratic_integral_basis(cfg.quadratic_tensor())
    if cfg.format == "json":
        _emit(cfg, _json({"seed": cfg.seed, "system": _system_json(cfg),
                          "dimension": len(basis), "basis": basis_to_json(basis)}), stdout)
    elif cfg.format == "csv":
        rows = ["index,i,j,coefficient"]
        for k, q in enumerate(basis):
            for i in range(q.n):
                for j in range(i, q.n):
                    if q.Q[i][j] != 0:
                        rows.append(f"{k},{i + 1},{j + 1},{serialize_scalar(q.Q[i][j])}")
        _emit(cfg, "\n".join(rows), stdout)
    else:
        lines = [f"dimension: {len(basis)}"] + [f"I{k + 1} = {q}" for k, q in enumerate(basis)]
        lines.append(f"seed: {cfg.seed}")
        _emit(cfg, "\n".join(lines), stdout)
    return 0


def cmd_integrate(cfg: RunConfig, stdout) -> int:
    from .numerics import Status, ToleranceConfig, algebraic_integrate

    tol = ToleranceConfig(rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol, blowup_norm=cfg.blowup_norm)
    sys_ = cfg.symmetric()
    rep = algebraic_integrate(sys_, cfg.x0, cfg.span, tol, samples=cfg.samples)
    report = {"seed": cfg.seed, "system": _system_json(cfg),
              "x0": [serialize_scalar(v) for v in cfg.x0], "span": list(cfg.span),
              "tolerances": {"rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol,
                             "blowup_norm": cfg.blowup_norm},
              "samples": cfg.samples, **rep.to_json()}
    if cfg.out:
        out = Path(cfg.out)
        write_atomic(out / "report.json", _json(report) + "\n")
        write_atomic(out / "direct.csv", rep.direct.to_csv())
        write_atomic(out / "reconstructed.csv", rep.reconstructed.to_csv())
        if rep.sigma is not None:
            write_atomic(out / "sigma.csv", rep.sigma.to_csv())
        stdout.write(f"{rep.status.value}: wrote {out}\n")
    elif cfg.format == "csv":
        stdout.write(rep.reconstructed.to_csv())
    elif cfg.format == "json":
        stdout.write(_json(report) + "\n")
    else:
        stdout.write(f"status: {rep.status.value}\n"
                     f"max abs error: {rep.max_abs_error:.3e}\n"
                     f"max rel error: {rep.max_rel_error:.3e}\n"
                     f"min |discriminant|: {rep.discriminant_min_abs:.3e}\n"
                     f"seed: {cfg.seed}\n")
        if rep.message:
            stdout.write(f"note: {rep.message}\n")
    return 0 if rep.status is not Status.DISCRIMINANT_DEGENERATE else 1


def _run_one(args):
    from .verify import CHECKS, run_check

    name, seed = args
    fn = dict(CHECKS)[name]
    return run_check(name, fn, seed)


def cmd_verify(cfg: RunConfig, stdout) -> int:
    from .verify import CHECKS

    names = [n for n, _ in CHECKS if cfg.only is None or n.split()[0] in cfg.only]
    if not names:
        raise ValidationError(f"no checks match {cfg.only}")
    if cfg.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_one, [(n, cfg.seed) for n in names]))
    else:
        results = [_run_one((n, cfg.seed)) for n in names]
    if cfg.format == "json":
        _emit(cfg, _json({"seed": cfg.seed, "passed": all(r.passed for r in results),
                          "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail,
                                      "seconds": round(r.seconds, 3)} for r in results]}), stdout)
    else:
        lines = [r.line() for r in results]
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} passed (seed {cfg.seed})")
        _emit(cfg, "\n".join(lines), stdout)
    return 0 if all(r.passed for r in results) else 1


HANDLERS = {
    "classify": cmd_classify,
    "reduce": cmd_reduce,
    "normalize": cmd_normalize,
    "integrals": cmd_integrals,
    "integrate": cmd_integrate,
    "verify": cmd_verify,
}


def run_command(cfg: RunConfig, stdout=None) -> int:
    return HANDLERS[cfg.command](cfg, stdout or sys.stdout)


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    """Exit status: 0 success, 1 domain error, 2 usage or configuration error."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = parse_config(args)
    except ConfigError as exc:
        stderr.write(f"symquad: error: {exc}\n")
        return 2
    except SymQuadError as exc:
        stderr.write(f"symquad: {type(exc).__name__}: {exc}\n")
        return 1
    try:
        return run_command(cfg, stdout)
    except ConfigError as exc:
        stderr.write(f"symquad: error: {exc}\n")
        return 2
    except SymQuadError as exc:
        stderr.write(f"symquad: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
