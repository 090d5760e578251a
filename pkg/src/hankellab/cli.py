"""Batch command-line front end.

Subcommands: ``symbol`` tabulates the Mellin multiplier against its
quadrature oracle, ``spectrum`` runs the eigenvalue/prediction pipeline over
a grid ladder, ``verify`` runs the identity suite.  Configuration comes from
an optional JSON file plus flag overrides (flags win).  Output files are
written atomically and byte-deterministically.

Exit codes: 0 ran / suite passed, 1 verification failure, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .discretize import assemble_wHa
from .errors import ConfigError, DomainError, GridError
from .kernels import (
    KernelSpec,
    WeightSpec,
    hypothesis_check,
    power_family,
    rational_test_family,
)
from .linalg import sym_eigen
from .quadrature import make_grid
from .spectra import analyze, predict
from .specfun import check_alpha, mellin_symbol, symbol_by_quadrature
from .verify import CHECK_NAMES, run_suite

DEFAULT_LADDER: Tuple[Tuple[float, int], ...] = ((6.0, 200), (8.0, 400), (10.0, 800))


@dataclass
class RunConfig:
    alpha: float = 0.0
    kernel: str = "power"
    weight: Optional[str] = None
    ladder: Tuple[Tuple[float, int], ...] = DEFAULT_LADDER
    delta: Optional[float] = None
    interior_margin: Optional[float] = None
    output_dir: Path = Path(".")
    checks: Optional[Tuple[str, ...]] = None

    def validate(self) -> "RunConfig":
        try:
            check_alpha(self.alpha)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
        if not self.ladder:
            raise ConfigError("ladder must contain at least one (R, N) step")
        for R, N in self.ladder:
            if not (R > 0 and int(N) == N and N >= 2 and N % 2 == 0):
                raise ConfigError(f"invalid ladder step (R={R}, N={N})")
        for name, value in (("delta", self.delta), ("interior_margin", self.interior_margin)):
            if value is not None and not value > 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.checks:
            bad = [c for c in self.checks if c.upper() not in CHECK_NAMES]
            if bad:
                raise ConfigError(f"unknown checks {bad}; valid: {list(CHECK_NAMES)}")
        return self


def _parse_call(text: str, name: str, n_args: int) -> List[float]:
    inner = text[len(name) + 1 : -1]
    parts = [p.strip() for p in inner.split(",")]
    if len(parts) != n_args:
        raise ConfigError(f"{name}(...) expects {n_args} parameters, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"could not parse parameters in {text!r}") from exc


def resolve_family(config: RunConfig) -> Tuple[KernelSpec, WeightSpec]:
    """Kernel/weight selection by built-in name; no user code is executed."""
    alpha = config.alpha
    text = config.kernel.strip()
    if text == "power":
        spec_a, spec_w = power_family(alpha)
    elif text == "carleman":
        if alpha != 0.0:
            raise ConfigError("the carleman kernel requires alpha = 0")
        spec_a, spec_w = power_family(0.0)
    elif text.startswith("rational(") and text.endswith(")"):
        a0, a_inf, b0, b_inf = _parse_call(text, "rational", 4)
        spec_a, spec_w = rational_test_family(alpha, a0, a_inf, b0, b_inf)
    else:
        raise ConfigError(
            f"unknown kernel {text!r}; built-ins: power, carleman, rational(a0,ainf,b0,binf)"
        )
    if config.weight is not None:
        wtext = config.weight.strip()
        if wtext == "power":
            spec_w = power_family(alpha)[1]
        elif wtext.startswith("rational(") and wtext.endswith(")"):
            b0, b_inf = _parse_call(wtext, "rational", 2)
            spec_w = rational_test_family(alpha, 1.0, 1.0, b0, b_inf)[1]
        else:
            raise ConfigError(
                f"unknown weight {wtext!r}; built-ins: power, rational(b0,binf)"
            )
    return spec_a, spec_w


def _fmt(value: float) -> str:
    return "%.17g" % float(value)


def _normalize(obj):
    """Round-trip floats through %.17g so reports are byte-deterministic."""
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, (float, np.floating)):
        return float(_fmt(float(obj)))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path: Path, payload) -> None:
    _write_atomic(path, json.dumps(_normalize(payload), indent=2, sort_keys=True) + "\n")


def cmd_symbol(config: RunConfig) -> int:
    out = config.output_dir
    xi_grid = np.arange(-50, 51) / 10.0
    lines = ["xi,sigma_gamma,sigma_quadrature,abs_diff"]
    for xi in xi_grid:
        s_gamma = mellin_symbol(config.alpha, float(xi))
        s_quad = symbol_by_quadrature(config.alpha, float(xi))
        lines.append(
            ",".join([_fmt(xi), _fmt(s_gamma), _fmt(s_quad), _fmt(abs(s_gamma - s_quad))])
        )
    _write_atomic(out / "symbol.csv", "\n".join(lines) + "\n")
    return 0


def cmd_spectrum(config: RunConfig) -> int:
    out = config.output_dir
    spec_a, spec_w = resolve_family(config)
    predicted = predict(config.alpha, spec_a.a0, spec_a.a_inf, spec_w.b0, spec_w.b_inf)
    hyp_ok = hypothesis_check(spec_a, spec_w).ok
    if not hyp_ok:
        print(
            "warning: kernel/weight fail the asymptotic hypotheses; "
            "the predicted intervals may not apply",
            file=sys.stderr,
        )
    steps = []
    for R, N in config.ladder:
        grid = make_grid(R, N)
        eigs = sym_eigen(assemble_wHa(spec_a, spec_w, grid)).eigenvalues
        _write_atomic(
            out / f"eigs_R{R:g}_N{N}.csv",
            "\n".join(_fmt(e) for e in eigs) + "\n",
        )
        report = analyze(eigs, predicted, config.delta, config.interior_margin)
        steps.append(
            {
                "R": R,
                "N": N,
                "max_gap": report.fill_max_gap,
                "outliers": list(report.outliers),
                "hausdorff": report.hausdorff,
                "hypothesis_ok": hyp_ok,
            }
        )
    payload = {
        "alpha": config.alpha,
        "family": {
            "kernel": config.kernel,
            "weight": config.weight,
            "a0": spec_a.a0,
            "a_inf": spec_a.a_inf,
            "b0": spec_w.b0,
            "b_inf": spec_w.b_inf,
        },
        "predicted": predicted.as_dict(),
        "steps": steps,
    }
    _write_json(out / "spectral_report.json", payload)
    return 0


def cmd_verify(config: RunConfig) -> int:
    spec_a, spec_w = resolve_family(config)
    family = (spec_a.a0, spec_a.a_inf, spec_w.b0, spec_w.b_inf)
    report = run_suite(config.alpha, config.ladder, checks=config.checks, family=family)
    _write_json(config.output_dir / "verification_report.json", report.as_dict())
    return 0 if report.verdict == "pass" else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hankellab",
        description="Spectral laboratory for weighted integral Hankel operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("symbol", cmd_symbol), ("spectrum", cmd_spectrum), ("verify", cmd_verify)):
        p = sub.add_parser(name)
        p.set_defaults(func=fn)
        p.add_argument("--config", type=Path, default=None, help="JSON config file")
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--R", type=float, default=None, help="single-step ladder override")
        p.add_argument("--N", type=int, default=None, help="single-step ladder override")
        p.add_argument("--kernel", type=str, default=None)
        p.add_argument("--weight", type=str, default=None)
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--margin", type=float, default=None)
        p.add_argument("--checks", type=str, default=None, help="comma-separated C1..C8")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if args.config is not None:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"could not read config {args.config}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        known = {
            "alpha",
            "kernel",
            "weight",
            "ladder",
            "delta",
            "interior_margin",
            "output_dir",
            "checks",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "alpha" in raw:
            config.alpha = float(raw["alpha"])
        if "kernel" in raw:
            config.kernel = str(raw["kernel"])
        if "weight" in raw:
            config.weight = None if raw["weight"] is None else str(raw["weight"])
        if "ladder" in raw:
            config.ladder = tuple((float(R), int(N)) for R, N in raw["ladder"])
        if "delta" in raw and raw["delta"] is not None:
            config.delta = float(raw["delta"])
        if "interior_margin" in raw and raw["interior_margin"] is not None:
            config.interior_margin = float(raw["interior_margin"])
        if "output_dir" in raw:
            config.output_dir = Path(raw["output_dir"])
        if "checks" in raw and raw["checks"] is not None:
            config.checks = tuple(str(c) for c in raw["checks"])
    # flags win over the file
    if args.alpha is not None:
        config.alpha = args.alpha
    if args.kernel is not None:
        config.kernel = args.kernel
    if args.weight is not None:
        config.weight = args.weight
    if (args.R is None) != (args.N is None):
        raise ConfigError("--R and --N must be given together")
    if args.R is not None:
        config.ladder = ((args.R, args.N),)
    if args.out is not None:
        config.output_dir = args.out
    if args.delta is not None:
        config.delta = args.delta
    if args.margin is not None:
        config.interior_margin = args.margin
    if args.checks is not None:
        config.checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    return config.validate()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args)
        config.output_dir.mkdir(parents=True, exist_ok=True)
        probe = config.output_dir / ".write_probe"
        try:
            probe.touch()
            probe.unlink()
        except OSError as exc:
            raise ConfigError(f"output directory not writable: {exc}") from exc
        return args.func(config)
    except (ConfigError, DomainError, GridError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
