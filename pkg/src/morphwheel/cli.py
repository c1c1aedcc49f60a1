"""Command-line interface.

Verbs: ``validate``, ``report``, ``profile``, ``sweep``. Exit codes follow a
fixed contract: 0 success, 1 validation failure, 2 I/O or parse failure.
All output is deterministic: identical config and flags produce identical
bytes. Set MORPHWHEEL_LOG=debug|info|warning to control log verbosity.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import enum
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import bending, quasistatics, telescopic, wheelgeom
from .errors import ConfigError, InfeasibleError, InvalidDesignError
from .params import DesignParams, LoadedDesign, load_path
from .report import (
    DEFAULT_TOTAL_BEND,
    RunReport,
    config_digest,
    consistency_warnings,
    design_card,
)

__all__ = ["Objective", "SweepSpec", "set_field", "main"]

log = logging.getLogger("morphwheel")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

PROFILE_COLUMNS = (
    "step", "module_length_mm", "h_mm", "wheel_radius_mm",
    "trigger_mode", "axial_force_N", "per_motor_torque_Nmm",
)


class Objective(enum.Enum):
    MIN_REDUCED_LENGTH = "min-reduced-length"
    MAX_WHEEL_RADIUS = "max-wheel-radius"
    MIN_PEAK_TORQUE = "min-peak-torque"


@dataclass(frozen=True)
class SweepSpec:
    parameter_path: str  # dotted field name, e.g. "screw.screw_level_length"
    start: float
    stop: float
    steps: int
    objective: Objective

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("sweep needs at least 2 grid points")
        if self.start == self.stop:
            raise ValueError("sweep start and stop must differ")

    def grid(self) -> list[float]:
        span = self.stop - self.start
        return [self.start + span * i / (self.steps - 1) for i in range(self.steps)]


def set_field(p: DesignParams, path: str, value: float) -> DesignParams:
    """Return a copy of the design with one dotted numeric field replaced."""
    parts = path.split(".")

    def descend(obj, parts):
        name = parts[0]
        if not dataclasses.is_dataclass(obj) or name not in {
            f.name for f in dataclasses.fields(obj)
        }:
            raise ConfigError("unresolvable parameter path", field=path)
        current = getattr(obj, name)
        if len(parts) == 1:
            if not isinstance(current, (int, float)) or isinstance(current, bool):
                raise ConfigError("parameter path is not a numeric field", field=path)
            new = int(value) if isinstance(current, int) else float(value)
            return dataclasses.replace(obj, **{name: new})
        return dataclasses.replace(obj, **{name: descend(current, parts[1:])})

    return descend(p, parts)


# ---------------------------------------------------------------------------
# rendering

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "PASS" if value else "FAIL"
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, tuple):
        return ", ".join(_fmt(v) for v in value)
    return str(value)


def _print_report(rr: RunReport, out=None) -> None:
    if out is None:
        out = sys.stdout
    print(f"digest: {rr.digest}", file=out)
    if rr.validation.valid:
        print("validation: OK", file=out)
    else:
        print(f"validation: {len(rr.validation.violations)} violation(s)", file=out)
    for v in rr.validation.violations:
        print(f"VIOLATION {v.field}: {v.constraint}", file=out)
    for key, value in rr.outputs.items():
        print(f"{key} = {_fmt(value)}", file=out)
    for w in rr.warnings:
        print(
            f"WARNING {w.code}: computed={_fmt(w.computed)} "
            f"reported={_fmt(w.reported)} ({w.detail})",
            file=out,
        )


def _load_or_exit(config: str) -> tuple[LoadedDesign, str]:
    try:
        text = Path(config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    try:
        loaded = load_path(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    return loaded, text


def _force_table_or_exit(args) -> quasistatics.SiliconeForceTable | None:
    if getattr(args, "force_table", None) is None:
        return None
    try:
        return quasistatics.load_force_table_path(args.force_table)
    except (OSError, ConfigError) as exc:
        print(f"error: cannot load force table: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args) -> int:
    loaded, text = _load_or_exit(args.config)
    warnings = ()
    if loaded.report.valid:
        warnings = consistency_warnings(loaded.params)
    rr = RunReport(
        digest=config_digest(text),
        validation=loaded.report,
        outputs={},
        warnings=warnings,
    )
    _print_report(rr)
    return EXIT_OK if loaded.report.valid else EXIT_VALIDATION


def cmd_report(args) -> int:
    loaded, text = _load_or_exit(args.config)
    if not loaded.report.valid:
        print("refusing to report on an invalid design:", file=sys.stderr)
        for v in loaded.report.violations:
            print(f"VIOLATION {v.field}: {v.constraint}", file=sys.stderr)
        return EXIT_VALIDATION
    table = _force_table_or_exit(args)
    try:
        rr = design_card(
            loaded.params,
            target_ratio=args.target_ratio,
            total_bend=args.total_bend,
            steps=args.steps,
            table=table,
            digest=config_digest(text),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    _print_report(rr)
    return EXIT_OK


def cmd_profile(args) -> int:
    loaded, _ = _load_or_exit(args.config)
    if not loaded.report.valid:
        print("refusing to profile an invalid design", file=sys.stderr)
        return EXIT_VALIDATION
    table = _force_table_or_exit(args)
    try:
        states = wheelgeom.transform_profile(loaded.params, args.steps)
        torques = quasistatics.torque_profile(loaded.params, table, steps=args.steps)
    except (InvalidDesignError, InfeasibleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    out = Path(args.out)
    keyframe_path = out.with_name(out.stem + "_keyframes.json")
    try:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(PROFILE_COLUMNS)
            for i, (state, entry) in enumerate(zip(states, torques.entries)):
                writer.writerow([
                    i,
                    repr(state.module_length),
                    repr(state.axial_half_separation),
                    repr(state.wheel_radius),
                    state.trigger_mode.value,
                    repr(entry.axial_force),
                    repr(entry.per_motor_torque),
                ])
        wheelgeom.write_keyframes(states, loaded.params, keyframe_path)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    log.info("wrote %s and %s", out, keyframe_path)
    print(f"wrote {out} ({len(states)} rows) and {keyframe_path}")
    return EXIT_OK


_SWEEP_METRICS = (
    "elongated_length_mm", "reduced_length_mm", "reduction_ratio",
    "chassis_diameter_mm", "wheel_radius_mm", "peak_torque_Nmm",
)


def _sweep_point(p: DesignParams, steps: int) -> dict[str, float]:
    """Standalone evaluation of the sweep metrics; no state leaks between points."""
    lengths = telescopic.module_lengths(p)
    theta = DEFAULT_TOTAL_BEND / p.platform.plate_count
    chassis = bending.chassis_diameter(p, theta)
    states = wheelgeom.transform_profile(p, steps)
    torques = quasistatics.torque_profile(p, steps=steps)
    return {
        "elongated_length_mm": lengths.elongated,
        "reduced_length_mm": lengths.reduced,
        "reduction_ratio": lengths.reduction_ratio,
        "chassis_diameter_mm": chassis.chassis_diameter,
        "wheel_radius_mm": states[-1].wheel_radius,
        "peak_torque_Nmm": torques.peak_torque,
    }


_OBJECTIVE_METRIC = {
    Objective.MIN_REDUCED_LENGTH: ("reduced_length_mm", min),
    Objective.MAX_WHEEL_RADIUS: ("wheel_radius_mm", max),
    Objective.MIN_PEAK_TORQUE: ("peak_torque_Nmm", min),
}


def cmd_sweep(args) -> int:
    loaded, _ = _load_or_exit(args.config)
    if not loaded.report.valid:
        print("refusing to sweep an invalid design", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        start, stop, steps = _parse_range(args.sweep_range)
        spec = SweepSpec(
            parameter_path=args.sweep_param,
            start=start,
            stop=stop,
            steps=steps,
            objective=Objective(args.objective),
        )
        # Resolve the path once up front so a typo fails before any work.
        set_field(loaded.params, spec.parameter_path, spec.start)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    metric, best_fn = _OBJECTIVE_METRIC[spec.objective]
    rows = []
    for i, value in enumerate(spec.grid()):
        point = set_field(loaded.params, spec.parameter_path, value)
        row: dict[str, object] = {"index": i, spec.parameter_path: value}
        try:
            row.update(_sweep_point(point, args.steps))
            row["objective"] = row[metric]
        except (InvalidDesignError, InfeasibleError, ValueError) as exc:
            log.debug("grid point %s=%s infeasible: %s", spec.parameter_path, value, exc)
            row["objective"] = ""
        rows.append(row)

    columns = ["index", spec.parameter_path, *_SWEEP_METRICS, "objective"]
    try:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([
                    repr(row[c]) if isinstance(row.get(c), float) else row.get(c, "")
                    for c in columns
                ])
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    feasible = [r for r in rows if r["objective"] != ""]
    if feasible:
        best = best_fn(feasible, key=lambda r: r["objective"])
        label = "argmax" if best_fn is max else "argmin"
        print(
            f"{label} {spec.objective.value}: {spec.parameter_path}="
            f"{_fmt(best[spec.parameter_path])} -> {metric}={_fmt(best['objective'])} "
            f"(row {best['index']})"
        )
    else:
        print("no feasible grid points")
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("sweep range must look like START:STOP:STEPS")
    return float(parts[0]), float(parts[1]), int(parts[2])


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morphwheel",
        description="Design toolkit for the crawler-to-wheel transforming module",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a design config against all invariants")
    p_validate.add_argument("--config", required=True, help="design config path (YAML)")
    p_validate.set_defaults(func=cmd_validate)

    p_report = sub.add_parser("report", help="print the complete design card")
    p_report.add_argument("--config", required=True)
    p_report.add_argument("--target-ratio", type=float, default=0.5,
                          help="reduction ratio target (default 0.5)")
    p_report.add_argument("--total-bend", type=float, default=DEFAULT_TOTAL_BEND,
                          help="total platform bend in radians (default pi/4)")
    p_report.add_argument("--steps", type=int, default=50,
                          help="transformation steps for the torque peak (default 50)")
    p_report.add_argument("--force-table", default=None,
                          help="YAML file of (cm, N) pairs overriding the builtin table")
    p_report.set_defaults(func=cmd_report)

    p_profile = sub.add_parser("profile", help="emit the transformation profile CSV and keyframes")
    p_profile.add_argument("--config", required=True)
    p_profile.add_argument("--steps", type=int, default=50)
    p_profile.add_argument("--out", required=True, help="CSV output path; keyframes go next to it")
    p_profile.add_argument("--force-table", default=None,
                           help="YAML file of (cm, N) pairs overriding the builtin table")
    p_profile.set_defaults(func=cmd_profile)

    p_sweep = sub.add_parser("sweep", help="evaluate the design card over a parameter grid")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--sweep-param", required=True,
                         help="dotted field name, e.g. screw.screw_level_length")
    p_sweep.add_argument("--sweep-range", required=True, help="START:STOP:STEPS")
    p_sweep.add_argument("--objective", required=True,
                         choices=[o.value for o in Objective])
    p_sweep.add_argument("--steps", type=int, default=50,
                         help="transformation steps per grid point (default 50)")
    p_sweep.add_argument("--out", required=True)
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def _configure_logging() -> None:
    level = os.environ.get("MORPHWHEEL_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
