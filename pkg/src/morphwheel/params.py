"""Design parameter model: every geometric symbol of the transforming module,
config loading/serialization, and structural validation.

Unit convention, fixed across the whole package:
lengths in mm, angles in radians, forces in N, torques in N*mm.
The force lookup table is the single exception (centimetre abscissa, see
``quasistatics``).

Config files are YAML with one section per parameter group (``screw``,
``layout``, ``platform``, ``wheel``, ``drive`` and the optional ``reported``
block of published target values used for cross-checking). See
``configs/reference.yaml`` for an annotated example of every key.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from .errors import ConfigError, InvalidDesignError

__all__ = [
    "TelescopicScrewSpec",
    "ModuleLayout",
    "PlatformSpec",
    "WheelSpec",
    "ReportedTargets",
    "DesignParams",
    "Violation",
    "Inconsistency",
    "ValidationReport",
    "LoadedDesign",
    "validate",
    "require_valid",
    "load",
    "load_path",
    "serialize",
    "reference_design",
]


@dataclass(frozen=True)
class TelescopicScrewSpec:
    """Nested screw stack driving one platform actuator."""

    n_levels: int                    # telescoping levels per screw
    screw_level_length: float        # mm, one level incl. its stopper
    stopper_width: float             # mm, radial stopper between levels
    thread_width: float              # mm
    thread_clearance: float          # mm, radial play between nested threads
    base_screw_diameter: float = 2.3  # mm, innermost (master) screw
    shaft_levels: int | None = None  # telescoping levels of the internal shaft

    def __post_init__(self):
        if self.shaft_levels is None:
            object.__setattr__(self, "shaft_levels", self.n_levels - 1)


@dataclass(frozen=True)
class ModuleLayout:
    """Axial length budget of one module."""

    joint_arm_height: float          # mm, one universal-joint arm
    drive_assembly_length: float     # mm, chain drive section
    tensioner_length: float          # mm, chain tensioner section
    plate_clearance: float           # mm, gap between adjacent plates
    joint_height: float | None = None  # mm, full universal joint (= 2 * arm)

    def __post_init__(self):
        if self.joint_height is None:
            object.__setattr__(self, "joint_height", 2.0 * self.joint_arm_height)


@dataclass(frozen=True)
class PlatformSpec:
    """One 3-screw tilting platform of the cascaded pair."""

    screw_circle_spacing: float      # mm, distance between adjacent screw centres
    max_screw_extension: float       # mm, full stroke of one telescopic screw
    joint_mount_width: float         # mm, mount footprint at the universal joint
    universal_joint_diameter: float  # mm
    plate_count: int = 4             # cascaded tilt interfaces


@dataclass(frozen=True)
class WheelSpec:
    """Chassis rod pair and rim geometry for the wheel mode."""

    rod_half_length: float           # mm, one rod of the hinged pair
    hub_offset: float                # mm, rod attachment radius at the hub
    curved_rod_length: float         # mm, one curved rim rod level
    hinge_allowance: float           # mm, rim rod length consumed by hinges
    spoke_pairs: int = 6             # rod pairs around the circumference
    min_half_separation: float | None = None  # mm, residual h at full compression
    # None falls back to the stopper stack height, 2 mm per screw level.


@dataclass(frozen=True)
class ReportedTargets:
    """Published target values, kept for cross-checking computed results.

    All optional; a supplied value is compared against the corresponding
    computed quantity and any disagreement is emitted as a machine-readable
    warning, never silently patched.
    """

    elongated_length: float | None = None   # mm
    reduced_length: float | None = None     # mm
    chassis_diameter: float | None = None   # mm
    wheel_diameter: float | None = None     # mm
    rod_half_expansion: float | None = None  # mm


@dataclass(frozen=True)
class DesignParams:
    """Single source of truth for every computation in the package."""

    screw: TelescopicScrewSpec
    layout: ModuleLayout
    platform: PlatformSpec
    wheel: WheelSpec
    motor_stall_torque: float = 1470.0   # N*mm (15 kg*cm class gearmotor)
    screw_lead: float = 2.0              # mm per revolution
    screw_friction: float = 0.2          # thread friction coefficient
    screw_mean_diameter: float = 8.0     # mm, effective thread contact diameter
    reported: ReportedTargets = field(default_factory=ReportedTargets)


@dataclass(frozen=True)
class Violation:
    """One violated structural invariant."""

    field: str       # dotted path, e.g. "screw.n_levels"
    constraint: str  # the rule that failed, e.g. "n_levels >= 1"


@dataclass(frozen=True)
class Inconsistency:
    """A computed quantity disagrees with a supplied reported value.

    Machine-readable on purpose: downstream tooling asserts on ``code``.
    """

    code: str
    detail: str
    computed: float | None = None
    reported: float | None = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()
    warnings: tuple[Inconsistency, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)


@dataclass(frozen=True)
class LoadedDesign:
    """Result of ``load``: parsed parameters with their validation attached."""

    params: DesignParams
    report: ValidationReport


# ---------------------------------------------------------------------------
# validation

def _positive(out: list[Violation], path: str, value: float) -> None:
    if not value > 0:
        out.append(Violation(path, f"{path.rsplit('.', 1)[-1]} > 0"))


def validate(p: DesignParams) -> ValidationReport:
    """Check every structural invariant of a design.

    Pure: identical input gives an identical report. Every violated
    invariant is listed (no short-circuiting); an empty violations tuple
    means the design is structurally sound. Warnings carry cross-checks
    against any supplied reported values and never invalidate a design.
    """
    v: list[Violation] = []
    s, lay, pf, w = p.screw, p.layout, p.platform, p.wheel

    if s.n_levels < 1:
        v.append(Violation("screw.n_levels", "n_levels >= 1"))
    for name in ("screw_level_length", "stopper_width", "thread_width", "base_screw_diameter"):
        _positive(v, f"screw.{name}", getattr(s, name))
    if s.thread_clearance < 0:
        v.append(Violation("screw.thread_clearance", "thread_clearance >= 0"))
    if s.shaft_levels != s.n_levels - 1:
        v.append(Violation("screw.shaft_levels", "shaft_levels == n_levels - 1"))

    for name in ("joint_arm_height", "joint_height", "drive_assembly_length",
                 "tensioner_length", "plate_clearance"):
        _positive(v, f"layout.{name}", getattr(lay, name))
    if abs(lay.joint_height - 2.0 * lay.joint_arm_height) > 1e-9:
        v.append(Violation("layout.joint_height", "joint_height == 2 * joint_arm_height"))

    for name in ("screw_circle_spacing", "max_screw_extension", "joint_mount_width",
                 "universal_joint_diameter"):
        _positive(v, f"platform.{name}", getattr(pf, name))
    if pf.plate_count < 1:
        v.append(Violation("platform.plate_count", "plate_count >= 1"))

    _positive(v, "wheel.rod_half_length", w.rod_half_length)
    _positive(v, "wheel.curved_rod_length", w.curved_rod_length)
    if w.hub_offset < 0:
        v.append(Violation("wheel.hub_offset", "hub_offset >= 0"))
    if w.hinge_allowance < 0:
        v.append(Violation("wheel.hinge_allowance", "hinge_allowance >= 0"))
    if not w.hinge_allowance < w.curved_rod_length:
        v.append(Violation("wheel.hinge_allowance", "hinge_allowance < curved_rod_length"))
    if w.spoke_pairs < 3:
        v.append(Violation("wheel.spoke_pairs", "spoke_pairs >= 3"))
    if w.min_half_separation is not None and w.min_half_separation < 0:
        v.append(Violation("wheel.min_half_separation", "min_half_separation >= 0"))

    _positive(v, "drive.motor_stall_torque", p.motor_stall_torque)
    _positive(v, "drive.screw_lead", p.screw_lead)
    _positive(v, "drive.screw_mean_diameter", p.screw_mean_diameter)
    if not 0 <= p.screw_friction < 1:
        v.append(Violation("drive.screw_friction", "0 <= screw_friction < 1"))

    return ValidationReport(violations=tuple(v), warnings=_length_identity_warnings(p))


def _length_identity_warnings(p: DesignParams) -> tuple[Inconsistency, ...]:
    # Elongated and reduced module lengths differ by 2 * S_L * (N - 1) by
    # construction, so any pair of reported lengths must honour the same
    # identity. Flagged, never patched.
    rep = p.reported
    if rep.elongated_length is None or rep.reduced_length is None:
        return ()
    implied = rep.elongated_length - rep.reduced_length
    derived = 2.0 * p.screw.screw_level_length * (p.screw.n_levels - 1)
    if abs(implied - derived) <= 1e-6 * max(1.0, abs(derived)):
        return ()
    return (
        Inconsistency(
            code="reported_length_identity",
            detail=(
                "reported elongated - reduced length gap does not match "
                "2 * screw_level_length * (n_levels - 1)"
            ),
            computed=derived,
            reported=implied,
        ),
    )


def require_valid(p: DesignParams) -> None:
    """Raise ``InvalidDesignError`` (with the report) for invalid designs."""
    report = validate(p)
    if not report.valid:
        raise InvalidDesignError(report)


# ---------------------------------------------------------------------------
# config parsing

_SECTIONS = ("screw", "layout", "platform", "wheel", "drive", "reported")

# (key, required, kind) per section; kind is "float", "count" or "opt_float"
_SCHEMA: dict[str, tuple[tuple[str, bool, str], ...]] = {
    "screw": (
        ("n_levels", True, "count"),
        ("screw_level_length", True, "float"),
        ("stopper_width", True, "float"),
        ("thread_width", True, "float"),
        ("thread_clearance", True, "float"),
        ("base_screw_diameter", False, "float"),
        ("shaft_levels", False, "count"),
    ),
    "layout": (
        ("joint_arm_height", True, "float"),
        ("drive_assembly_length", True, "float"),
        ("tensioner_length", True, "float"),
        ("plate_clearance", True, "float"),
        ("joint_height", False, "float"),
    ),
    "platform": (
        ("screw_circle_spacing", True, "float"),
        ("max_screw_extension", True, "float"),
        ("joint_mount_width", True, "float"),
        ("universal_joint_diameter", True, "float"),
        ("plate_count", False, "count"),
    ),
    "wheel": (
        ("rod_half_length", True, "float"),
        ("hub_offset", True, "float"),
        ("curved_rod_length", True, "float"),
        ("hinge_allowance", True, "float"),
        ("spoke_pairs", False, "count"),
        ("min_half_separation", False, "float"),
    ),
    "drive": (
        ("motor_stall_torque", False, "float"),
        ("screw_lead", False, "float"),
        ("screw_friction", False, "float"),
        ("screw_mean_diameter", False, "float"),
    ),
    "reported": (
        ("elongated_length", False, "float"),
        ("reduced_length", False, "float"),
        ("chassis_diameter", False, "float"),
        ("wheel_diameter", False, "float"),
        ("rod_half_expansion", False, "float"),
    ),
}


def _coerce(path: str, value, kind: str):
    if kind == "count":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError("expected an integer count", field=path)
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError("expected a number", field=path)
    return float(value)


def _read_section(doc: dict, name: str) -> dict:
    section = doc.get(name)
    if section is None:
        required = any(req for _, req, _ in _SCHEMA[name])
        if required:
            raise ConfigError(f"missing required section '{name}'", field=name)
        return {}
    if not isinstance(section, dict):
        raise ConfigError(f"section '{name}' must be a mapping", field=name)
    out = {}
    known = {key for key, _, _ in _SCHEMA[name]}
    for key in section:
        if key not in known:
            raise ConfigError("unknown key", field=f"{name}.{key}")
    for key, required, kind in _SCHEMA[name]:
        if key in section:
            out[key] = _coerce(f"{name}.{key}", section[key], kind)
        elif required:
            raise ConfigError("missing required field", field=f"{name}.{key}")
    return out


def load(config_text: str) -> LoadedDesign:
    """Parse config text into ``DesignParams`` and attach its validation.

    Structural problems (bad YAML, missing sections or fields, wrong types,
    unknown keys) raise ``ConfigError`` naming the field and, for YAML syntax
    errors, the source line. Invariant violations do NOT raise; they are
    reported in the attached ``ValidationReport`` so callers can decide.
    """
    try:
        doc = yaml.safe_load(io.StringIO(config_text))
    except yaml.YAMLError as exc:
        line = None
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            line = mark.line + 1
        raise ConfigError(f"config is not valid YAML: {exc}", line=line) from exc
    if doc is None:
        raise ConfigError("config is empty")
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a mapping of sections")
    for key in doc:
        if key not in _SECTIONS:
            raise ConfigError("unknown section", field=str(key))

    params = DesignParams(
        screw=TelescopicScrewSpec(**_read_section(doc, "screw")),
        layout=ModuleLayout(**_read_section(doc, "layout")),
        platform=PlatformSpec(**_read_section(doc, "platform")),
        wheel=WheelSpec(**_read_section(doc, "wheel")),
        **_read_section(doc, "drive"),
        reported=ReportedTargets(**_read_section(doc, "reported")),
    )
    return LoadedDesign(params=params, report=validate(params))


def load_path(path: str | Path) -> LoadedDesign:
    return load(Path(path).read_text(encoding="utf-8"))


def _section_dict(obj) -> dict:
    out = {}
    for f in fields(obj):
        value = getattr(obj, f.name)
        if value is not None:
            out[f.name] = value
    return out


def serialize(p: DesignParams) -> str:
    """Emit config text that ``load`` parses back to an equal ``DesignParams``."""
    doc = {
        "screw": _section_dict(p.screw),
        "layout": _section_dict(p.layout),
        "platform": _section_dict(p.platform),
        "wheel": _section_dict(p.wheel),
        "drive": {
            "motor_stall_torque": p.motor_stall_torque,
            "screw_lead": p.screw_lead,
            "screw_friction": p.screw_friction,
            "screw_mean_diameter": p.screw_mean_diameter,
        },
    }
    reported = _section_dict(p.reported)
    if reported:
        doc["reported"] = reported
    return yaml.safe_dump(doc, sort_keys=True, default_flow_style=False)


def reference_design() -> DesignParams:
    """Builtin module-scale design used by the test fixtures and docs.

    The axial length budget (joint_height 10, plate_clearance 10,
    drive_assembly_length 90, tensioner_length 60) is a documented fill-in
    chosen so the elongated length lands on the published 340 mm; the
    published values themselves live in ``reported`` and are cross-checked,
    not assumed. ``min_half_separation`` is pinned to 0 so the fully
    compressed wheel closes the published 400 mm diameter exactly.
    """
    return DesignParams(
        screw=TelescopicScrewSpec(
            n_levels=4,
            screw_level_length=20.0,
            stopper_width=1.0,
            thread_width=0.5,
            thread_clearance=0.5,
            base_screw_diameter=2.3,
        ),
        layout=ModuleLayout(
            joint_arm_height=5.0,
            drive_assembly_length=90.0,
            tensioner_length=60.0,
            plate_clearance=10.0,
        ),
        platform=PlatformSpec(
            screw_circle_spacing=24.0,
            max_screw_extension=80.0,
            joint_mount_width=5.0,
            universal_joint_diameter=2.5,
            plate_count=4,
        ),
        wheel=WheelSpec(
            rod_half_length=140.0,
            hub_offset=60.0,
            curved_rod_length=120.0,
            hinge_allowance=15.0,
            spoke_pairs=6,
            min_half_separation=0.0,
        ),
        motor_stall_torque=1470.0,
        screw_lead=2.0,
        screw_friction=0.2,
        screw_mean_diameter=8.0,
        reported=ReportedTargets(
            elongated_length=340.0,
            reduced_length=165.0,
            chassis_diameter=94.0,
            wheel_diameter=400.0,
            rod_half_expansion=80.0,
        ),
    )
