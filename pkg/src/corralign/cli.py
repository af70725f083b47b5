"""Command-line front end: simulations, bound curves, and verification.

Four subcommands share a config model: ``simulate-detection``,
``simulate-recovery``, ``curve``, and ``verify``.  Options may come from a
JSON config file (``--config``) with command-line flags taking precedence;
every run emits its fully resolved configuration on the diagnostic stream so
experiments can be reproduced from their logs alone.

Exit codes: 0 success, 1 usage error, 2 verification/assertion failure,
3 I/O error.  Data goes to ``--out`` (or stdout); diagnostics go to stderr
so CSV output stays pipe-clean.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import bounds, oracle
from .align import recovery_error_mc
from .core import ProblemParams, SeedSpec
from .detect import monte_carlo_risk, nominal_threshold, optimal_gamma
from .errors import CorralignError

CURVE_HEADER = "axis,rho2_det_ach,rho2_det_conv,rho2_rec_ach,rho2_rec_conv"

COMMANDS = ("simulate-detection", "simulate-recovery", "curve", "verify")


class UsageError(Exception):
    """Bad flags or config fields; maps to exit code 1."""


class OutputError(Exception):
    """Failed read/write of a user-supplied path; maps to exit code 3."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved options for one CLI run.

    ``parse(render(config))`` reproduces the config exactly; unknown fields
    are rejected by name so config files cannot silently drift.
    """

    command: str
    n: int | None = None
    d: float | None = None
    rho: float | None = None
    trials: int = 1000
    seed: int = 0
    out: str | None = None
    format: str | None = None
    threads: int = 1
    threshold: float | None = None
    axis: str | None = None
    grid: tuple[float, float, int] | None = None
    risk: float = 0.1
    kstar: int | None = None
    margin: float = 0.1
    epsilon_d: float = 0.0

    def render(self) -> str:
        """Canonical JSON form (stable key order = field order)."""
        out: dict[str, object] = {}
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            out[field.name] = list(value) if isinstance(value, tuple) else value
        return json.dumps(out)

    def resolved_format(self) -> str:
        if self.format is not None:
            return self.format
        return "csv" if self.command == "curve" else "json"


_FIELD_NAMES = tuple(f.name for f in dataclasses.fields(ExperimentConfig))


def parse_config(text: str) -> ExperimentConfig:
    """Inverse of ``ExperimentConfig.render``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    command = data.get("command")
    if command is None:
        raise UsageError("config missing required field 'command'")
    rest = {k: v for k, v in data.items() if k != "command"}
    return _build_config(str(command), rest)


def _parse_grid(value) -> tuple[float, float, int]:
    if isinstance(value, str):
        parts = value.split(":")
        if len(parts) != 3:
            raise UsageError("field 'grid' must have the form start:stop:count")
        value = parts
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise UsageError("field 'grid' must have the form start:stop:count")
    try:
        start, stop, count = float(value[0]), float(value[1]), int(value[2])
    except (TypeError, ValueError):
        raise UsageError("field 'grid' must contain two reals and a count") from None
    if count < 1:
        raise UsageError("field 'grid' needs a positive point count")
    if not (math.isfinite(start) and math.isfinite(stop)) or start <= 0 or stop <= 0:
        raise UsageError("field 'grid' endpoints must be positive and finite")
    return (start, stop, count)


def _build_config(command: str, values: dict) -> ExperimentConfig:
    if command not in COMMANDS:
        raise UsageError(
            f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}"
        )
    for key in values:
        if key not in _FIELD_NAMES or key == "command":
            raise UsageError(f"unknown config field {key!r}")
    kwargs: dict[str, object] = {"command": command}
    for key, value in values.items():
        if value is None:
            continue
        if key == "grid":
            kwargs[key] = _parse_grid(value)
        else:
            kwargs[key] = value
    config = ExperimentConfig(**kwargs)

    def fail(field: str, why: str):
        raise UsageError(f"invalid field {field!r}: {why}")

    if config.trials < 1:
        fail("trials", "must be a positive integer")
    if not 0 <= int(config.seed) < 2**64:
        fail("seed", "must fit in an unsigned 64-bit integer")
    if config.threads < 1:
        fail("threads", "must be >= 1")
    if config.format is not None and config.format not in ("csv", "json"):
        fail("format", "must be 'csv' or 'json'")
    if config.axis is not None and config.axis not in ("d", "n"):
        fail("axis", "must be 'd' or 'n'")
    if not 0.0 < config.risk < 1.0:
        fail("risk", "must lie in (0, 1)")
    if config.margin <= 0.0:
        fail("margin", "must be > 0")
    if config.epsilon_d < 0.0:
        fail("epsilon_d", "must be >= 0")
    if config.kstar is not None and config.kstar < 1:
        fail("kstar", "must be >= 1")
    if config.n is not None and config.n < 1:
        fail("n", "must be >= 1")
    if config.d is not None and config.d < 1:
        fail("d", "must be >= 1")
    if config.rho is not None and not -1.0 < config.rho < 1.0:
        fail("rho", "must lie in (-1, 1)")

    if command in ("simulate-detection", "simulate-recovery"):
        for field in ("n", "d", "rho"):
            if getattr(config, field) is None:
                fail(field, f"required by {command}")
    if command == "curve":
        if config.axis is None:
            fail("axis", "required by curve")
        if config.grid is None:
            fail("grid", "required by curve")
        if config.axis == "d" and config.n is None:
            fail("n", "required when sweeping d")
        if config.axis == "n" and config.d is None:
            fail("d", "required when sweeping n")
    return config


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse hook
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="corralign", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add_common(p: _Parser) -> None:
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--seed", type=int, help="master seed (u64)")
        p.add_argument("--trials", type=int, help="Monte-Carlo trials per arm")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--threads", type=int, help="worker processes")

    def add_params(p: _Parser) -> None:
        p.add_argument("--n", type=int, help="number of rows")
        p.add_argument("--d", type=int, help="feature dimension")
        p.add_argument("--rho", type=float, help="correlation coefficient")

    p_det = sub.add_parser("simulate-detection", help="Monte-Carlo risk of the threshold test")
    add_common(p_det)
    add_params(p_det)
    p_det.add_argument("--threshold", type=float, help="test threshold (default |rho|dn/2)")

    p_rec = sub.add_parser("simulate-recovery", help="Monte-Carlo exact-alignment error")
    add_common(p_rec)
    add_params(p_rec)

    p_curve = sub.add_parser("curve", help="invert all bounds along a grid of d or n")
    add_common(p_curve)
    p_curve.add_argument("--n", type=int, help="fixed n (axis=d sweeps)")
    p_curve.add_argument("--d", type=float, help="fixed d (axis=n sweeps)")
    p_curve.add_argument("--axis", choices=("d", "n"), help="sweep variable")
    p_curve.add_argument("--grid", help="start:stop:count (linear spacing)")
    p_curve.add_argument("--risk", type=float, help="target risk level")
    p_curve.add_argument("--kstar", type=int, help="truncation depth override")
    p_curve.add_argument("--margin", type=float, help="truncation schedule margin")
    p_curve.add_argument("--epsilon-d", dest="epsilon_d", type=float,
                         help="recovery-converse exponent correction")

    p_verify = sub.add_parser("verify", help="run the oracle verification suite")
    add_common(p_verify)
    return parser


def resolve_config(argv) -> ExperimentConfig:
    """Parse flags, merge the optional config file (flags win), validate."""
    parser = _build_parser()
    namespace = parser.parse_args(argv)
    if namespace.command is None:
        raise UsageError("a command is required (see --help)")
    values: dict[str, object] = {}
    if getattr(namespace, "config", None):
        path = namespace.config
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise OutputError(f"cannot read config file '{path}': {exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file '{path}' is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError(f"config file '{path}' must hold a JSON object")
        file_command = data.pop("command", None)
        if file_command is not None and file_command != namespace.command:
            raise UsageError(
                f"config file command {file_command!r} conflicts with "
                f"{namespace.command!r}"
            )
        values.update(data)
    for key, value in vars(namespace).items():
        if key in ("command", "config") or value is None:
            continue
        values[key] = value
    return _build_config(namespace.command, values)


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_output(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write output file '{out}': {exc}") from None


def _emit_resolved(config: ExperimentConfig) -> None:
    print(f"config: {config.render()}", file=sys.stderr)


def _json_report(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def run_simulate_detection(config: ExperimentConfig) -> int:
    """Estimate both error rates of the threshold test and report bounds."""
    _emit_resolved(config)
    params = ProblemParams(n=int(config.n), d=int(config.d), rho=float(config.rho))
    threshold = (
        float(config.threshold)
        if config.threshold is not None
        else nominal_threshold(params)
    )
    seed = SeedSpec(master_seed=config.seed, stream_label="cli/simulate-detection")
    estimate = monte_carlo_risk(
        params, threshold, config.trials, seed, workers=config.threads
    )
    gamma_star, bound = optimal_gamma(params)
    simple_bound = 2.0 * math.exp(-params.d * params.rho2 / 60.0)
    results = {
        "threshold": threshold,
        "fa_rate": estimate.fa_rate,
        "md_rate": estimate.md_rate,
        "risk": estimate.risk(),
        "ci_radius": estimate.ci_radius,
        "trials": estimate.trials,
        "gamma_star": gamma_star,
        "risk_bound": bound,
        "risk_bound_simple": simple_bound,
    }
    if config.resolved_format() == "json":
        payload = {
            "schema": 1,
            "command": config.command,
            "config": json.loads(config.render()),
            "results": results,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }
        _write_output(config.out, _json_report(payload))
    else:
        header = ",".join(results)
        row = ",".join(
            _fmt(v) if isinstance(v, float) else str(v) for v in results.values()
        )
        _write_output(config.out, f"{header}\n{row}\n")
    return 0


def run_simulate_recovery(config: ExperimentConfig) -> int:
    """Estimate the exact-alignment error of ML decoding and report bounds."""
    _emit_resolved(config)
    params = ProblemParams(n=int(config.n), d=int(config.d), rho=float(config.rho))
    seed = SeedSpec(master_seed=config.seed, stream_label="cli/simulate-recovery")
    estimate = recovery_error_mc(params, config.trials, seed, workers=config.threads)
    results = {
        "error_rate": estimate.value,
        "ci_radius": estimate.ci_radius,
        "trials": estimate.trials,
        "error_bound": bounds.recovery_ach_perr(params.n, params.d, params.rho2),
        "error_floor": bounds.recovery_conv_perr(
            params.n, params.d, params.rho2, epsilon_d=config.epsilon_d
        ),
    }
    if config.resolved_format() == "json":
        payload = {
            "schema": 1,
            "command": config.command,
            "config": json.loads(config.render()),
            "results": results,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }
        _write_output(config.out, _json_report(payload))
    else:
        header = ",".join(results)
        row = ",".join(
            _fmt(v) if isinstance(v, float) else str(v) for v in results.values()
        )
        _write_output(config.out, f"{header}\n{row}\n")
    return 0


def _curve_rows(points) -> str:
    lines = [CURVE_HEADER]
    for p in points:
        cells = [_fmt(p.axis)]
        for value in (p.rho2_det_ach, p.rho2_det_conv, p.rho2_rec_ach, p.rho2_rec_conv):
            cells.append("" if value is None else _fmt(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def run_curve(config: ExperimentConfig) -> int:
    """Invert all four bound families along the grid and write the curve."""
    _emit_resolved(config)
    start, stop, count = config.grid
    values = np.linspace(start, stop, count)
    points, notes = bounds.curve_points(
        config.axis,
        values,
        n=None if config.n is None else float(config.n),
        d=None if config.d is None else float(config.d),
        target_risk=config.risk,
        k_star=config.kstar,
        margin=config.margin,
        epsilon_d=config.epsilon_d,
        workers=config.threads,
    )
    for note in notes:
        print(f"warning: {note}", file=sys.stderr)
    if config.resolved_format() == "csv":
        _write_output(config.out, _curve_rows(points))
    else:
        payload = {
            "schema": 1,
            "command": config.command,
            "config": json.loads(config.render()),
            "rows": [
                {
                    "axis": p.axis,
                    "rho2_det_ach": p.rho2_det_ach,
                    "rho2_det_conv": p.rho2_det_conv,
                    "rho2_rec_ach": p.rho2_rec_ach,
                    "rho2_rec_conv": p.rho2_rec_conv,
                }
                for p in points
            ],
        }
        _write_output(config.out, _json_report(payload))
    for p in points:
        if (
            p.rho2_det_ach is not None
            and p.rho2_det_conv is not None
            and p.rho2_det_conv > p.rho2_det_ach
        ):
            print(
                f"error: detection converse exceeds achievable at axis={p.axis!r}",
                file=sys.stderr,
            )
            return 2
    return 0


def run_verify(config: ExperimentConfig) -> int:
    """Run the oracle suite; exit 0 only if every check passes."""
    _emit_resolved(config)
    report = oracle.verify(seed=config.seed, workers=config.threads)
    if config.resolved_format() == "json":
        payload = {
            "schema": 1,
            "command": "verify",
            "seed": config.seed,
            "passed": report.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "statistic": c.statistic,
                    "reference": c.reference,
                    "detail": c.detail,
                }
                for c in report.checks
            ],
        }
        _write_output(config.out, _json_report(payload))
    else:
        lines = ["name,passed,statistic,reference"]
        for c in report.checks:
            lines.append(
                f"{c.name},{int(c.passed)},{_fmt(c.statistic)},{_fmt(c.reference)}"
            )
        _write_output(config.out, "\n".join(lines) + "\n")
    if not report.passed:
        names = ", ".join(c.name for c in report.failures)
        print(f"verification failed: {names}", file=sys.stderr)
        return 2
    return 0


_RUNNERS = {
    "simulate-detection": run_simulate_detection,
    "simulate-recovery": run_simulate_recovery,
    "curve": run_curve,
    "verify": run_verify,
}


def main(argv=None) -> int:
    try:
        config = resolve_config(argv)
        return _RUNNERS[config.command](config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CorralignError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
