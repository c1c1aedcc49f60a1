"""Design card assembly and cross-checks against reported target values.

Everything here is read-only aggregation over the computation modules; the
CLI renders these structures but owns no logic of its own.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from . import bending, quasistatics, telescopic, wheelgeom
from .errors import InfeasibleError
from .params import DesignParams, Inconsistency, ValidationReport, serialize, validate

__all__ = [
    "RunReport",
    "DEFAULT_TOTAL_BEND",
    "consistency_warnings",
    "design_card",
    "config_digest",
]

# Design bend envelope: 45 degrees per platform, shared over its plates.
DEFAULT_TOTAL_BEND = math.pi / 4.0

_REL_TOL = 1e-6


def config_digest(config_text: str) -> str:
    return "sha256:" + hashlib.sha256(config_text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class RunReport:
    """Deterministic record of one command run."""

    digest: str                 # hash of the canonical config text
    validation: ValidationReport
    outputs: dict[str, object]  # computed quantities, insertion-ordered
    warnings: tuple[Inconsistency, ...]


def _mismatch(code: str, computed: float, reported: float | None,
              detail: str) -> Inconsistency | None:
    if reported is None:
        return None
    if abs(computed - reported) <= _REL_TOL * max(1.0, abs(reported)):
        return None
    return Inconsistency(code=code, detail=detail, computed=computed, reported=reported)


def consistency_warnings(p: DesignParams,
                         total_bend: float = DEFAULT_TOTAL_BEND
                         ) -> tuple[Inconsistency, ...]:
    """Compare computed quantities against any supplied reported values.

    Disagreements are reported as machine-readable records and left
    standing; nothing is patched to make the numbers meet.
    """
    rep = p.reported
    out = list(validate(p).warnings)
    lengths = telescopic.module_lengths(p)
    theta = total_bend / p.platform.plate_count
    chassis = bending.chassis_diameter(p, theta)

    checks = [
        _mismatch("elongated_length_mismatch", lengths.elongated,
                  rep.elongated_length,
                  "computed elongated module length differs from the reported value"),
        _mismatch("reduced_length_mismatch", lengths.reduced, rep.reduced_length,
                  "computed reduced module length differs from the reported value"),
        _mismatch("chassis_diameter_mismatch", chassis.chassis_diameter,
                  rep.chassis_diameter,
                  "computed chassis diameter differs from the reported value"),
    ]

    if rep.rod_half_expansion is not None:
        pf = p.platform
        reach = pf.joint_mount_width + pf.universal_joint_diameter / 2.0 \
            + pf.max_screw_extension
        checks.append(_mismatch(
            "rod_half_expansion_mismatch", reach * math.sin(theta),
            rep.rod_half_expansion,
            "computed rod half expansion differs from the reported value"))

    if rep.wheel_diameter is not None:
        try:
            final = transform_endpoint_radius(p)
        except InfeasibleError:
            final = None
        if final is not None:
            checks.append(_mismatch(
                "wheel_diameter_mismatch", 2.0 * final, rep.wheel_diameter,
                "computed full-compression wheel diameter differs from the reported value"))

    out.extend(c for c in checks if c is not None)
    return tuple(out)


def transform_endpoint_radius(p: DesignParams) -> float:
    """Wheel radius at full compression without sweeping the whole profile."""
    w = p.wheel
    h_min = w.min_half_separation
    if h_min is None:
        h_min = wheelgeom.default_min_half_separation(p)
    if h_min >= w.rod_half_length:
        raise InfeasibleError(
            "infeasible wheel geometry: compressed half-separation must stay "
            "below the rod half-length"
        )
    return wheelgeom.bulge_radius(w.rod_half_length, h_min, w.hub_offset)


def design_card(p: DesignParams, *, target_ratio: float = 0.5,
                total_bend: float = DEFAULT_TOTAL_BEND,
                steps: int = 50,
                table: quasistatics.SiliconeForceTable | None = None,
                margin: float = 1.0,
                digest: str | None = None) -> RunReport:
    """One complete design card: every top-level quantity plus pass/fail flags.

    Geometric infeasibilities (for example a rod pair that cannot close) are
    surfaced as string flags in the affected outputs instead of aborting the
    card; structural invariant violations abort earlier via the modules.
    """
    validation = validate(p)
    outputs: dict[str, object] = {}

    lengths = telescopic.module_lengths(p)
    outputs["elongated_length_mm"] = lengths.elongated
    outputs["reduced_length_mm"] = lengths.reduced
    outputs["reduction_ratio"] = lengths.reduction_ratio
    outputs["reduction_target"] = target_ratio
    outputs["reduction_ok"] = telescopic.reduction_ok(
        lengths.reduced, lengths.elongated, target_ratio)
    outputs["shaft_levels"] = telescopic.shaft_levels(p)
    outputs["screw_diameters_mm"] = telescopic.diameter_ladder(p).diameters

    theta = total_bend / p.platform.plate_count
    outputs["total_bend_rad"] = total_bend
    outputs["per_plate_bend_rad"] = theta
    chassis = bending.chassis_diameter(p, theta)
    outputs["chassis_offset_mm"] = chassis.screw_offset_component
    outputs["chassis_triangle_base_mm"] = chassis.triangle_base
    outputs["chassis_diameter_mm"] = chassis.chassis_diameter
    try:
        rods = bending.rod_sizing(p, theta, chassis.chassis_diameter)
        outputs["rod_half_expansion_mm"] = rods.half_expansion
        outputs["rod_length_max_mm"] = rods.rod_max
        outputs["rod_length_min_mm"] = rods.rod_min
        outputs["rod_outer_segment_mm"] = rods.outer_segment
        outputs["rod_inner_segment_mm"] = rods.inner_segment
    except InfeasibleError as exc:
        outputs["rod_sizing"] = f"INFEASIBLE: {exc}"

    try:
        radius = transform_endpoint_radius(p)
        outputs["wheel_radius_mm"] = radius
        outputs["wheel_diameter_mm"] = 2.0 * radius
        plan = wheelgeom.curved_rod_plan(radius, p)
        outputs["rim_arc_per_sector_mm"] = plan.arc_per_sector
        outputs["curved_rod_levels"] = plan.levels
        outputs["curved_rod_curvature_mm"] = plan.matched_curvature

        profile = quasistatics.torque_profile(p, table, steps)
        outputs["peak_axial_force_N"] = max(e.axial_force for e in profile.entries)
        outputs["peak_torque_Nmm"] = profile.peak_torque
        check = quasistatics.motor_check(profile, p.motor_stall_torque, margin)
        outputs["motor_check_ok"] = check.passed
        outputs["motor_check_note"] = check.note
    except InfeasibleError as exc:
        outputs["wheel_geometry"] = f"INFEASIBLE: {exc}"

    rep = p.reported
    if rep.elongated_length is not None:
        outputs["target_elongated_ok"] = _meets(lengths.elongated, rep.elongated_length)
    if rep.reduced_length is not None:
        outputs["target_reduced_ok"] = _meets(lengths.reduced, rep.reduced_length)
    if rep.wheel_diameter is not None and "wheel_diameter_mm" in outputs:
        outputs["target_wheel_diameter_ok"] = _meets(
            outputs["wheel_diameter_mm"], rep.wheel_diameter)  # type: ignore[arg-type]

    return RunReport(
        digest=digest if digest is not None else config_digest(serialize(p)),
        validation=validation,
        outputs=outputs,
        warnings=consistency_warnings(p, total_bend),
    )


def _meets(computed: float, reported: float) -> bool:
    return abs(computed - reported) <= _REL_TOL * max(1.0, abs(reported))
