"""Quasi-static torque estimation for the transformation.

The silicone skin opposes the shape change with a restoring force that was
measured at whole-centimetre compressions; lookups interpolate linearly and
clamp outside the sampled range. Motor torque follows the raising-load
power-screw formula with the axial load shared equally by the three screws,
which holds for the symmetric straight-line transformation (bent-state
transformations would load the screws unevenly and are not modelled).
"""

from __future__ import annotations

import io
from bisect import bisect_left
from dataclasses import dataclass
from math import pi
from pathlib import Path

import yaml

from .errors import ConfigError
from .params import DesignParams
from .wheelgeom import transform_profile

__all__ = [
    "SiliconeForceTable",
    "TorqueEntry",
    "TorqueProfile",
    "MotorCheck",
    "SELECTION_THRESHOLD",
    "default_force_table",
    "load_force_table",
    "load_force_table_path",
    "silicone_force",
    "screw_torque",
    "torque_profile",
    "motor_check",
]

# Reference motor-selection threshold, N*mm. Printed alongside the computed
# peak for context; the quasi-static model is not expected to reproduce it.
SELECTION_THRESHOLD = 500.0


@dataclass(frozen=True)
class SiliconeForceTable:
    """Restoring force vs. module length change. Abscissa in cm, force in N."""

    samples: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.samples:
            raise ValueError("force table must not be empty")
        xs = [x for x, _ in self.samples]
        fs = [f for _, f in self.samples]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("length changes must be strictly increasing")
        if any(b > a for a, b in zip(fs, fs[1:])):
            raise ValueError("forces must be nonincreasing")

    def __len__(self) -> int:
        return len(self.samples)


def default_force_table() -> SiliconeForceTable:
    """Default skin restoring-force samples, one per centimetre of compression."""
    return SiliconeForceTable(samples=(
        (1.0, 3.4),
        (2.0, 3.2),
        (3.0, 2.5),
        (4.0, 2.1),
        (5.0, 1.5),
        (6.0, 1.0),
        (7.0, 0.6),
        (8.0, 0.1),
    ))


def load_force_table(text: str) -> SiliconeForceTable:
    """Parse a force-table override: YAML list of (length change cm, force N) pairs.

    Accepts either a bare list or a mapping with a single ``force_table`` key.
    """
    try:
        doc = yaml.safe_load(io.StringIO(text))
    except yaml.YAMLError as exc:
        raise ConfigError(f"force table is not valid YAML: {exc}") from exc
    if isinstance(doc, dict):
        doc = doc.get("force_table")
    if not isinstance(doc, list) or not doc:
        raise ConfigError("force table must be a nonempty list of (cm, N) pairs",
                          field="force_table")
    samples = []
    for i, entry in enumerate(doc):
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ConfigError("expected a (length_change, force) pair",
                              field=f"force_table[{i}]")
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in entry):
            raise ConfigError("expected numbers", field=f"force_table[{i}]")
        samples.append((float(entry[0]), float(entry[1])))
    try:
        return SiliconeForceTable(samples=tuple(samples))
    except ValueError as exc:
        raise ConfigError(f"invalid force table: {exc}", field="force_table") from exc


def load_force_table_path(path: str | Path) -> SiliconeForceTable:
    return load_force_table(Path(path).read_text(encoding="utf-8"))


def silicone_force(table: SiliconeForceTable, length_change: float) -> float:
    """Restoring force at a given length change (cm).

    Piecewise-linear between samples, clamped to the end forces outside the
    sampled range; lookups exactly at a sample return the stored force.
    """
    if length_change < 0:
        raise ValueError("length change must be nonnegative")
    xs = [x for x, _ in table.samples]
    if length_change <= xs[0]:
        return table.samples[0][1]
    if length_change >= xs[-1]:
        return table.samples[-1][1]
    i = bisect_left(xs, length_change)
    x0, f0 = table.samples[i - 1]
    x1, f1 = table.samples[i]
    if length_change == x1:
        return f1
    t = (length_change - x0) / (x1 - x0)
    return f0 + t * (f1 - f0)


def screw_torque(axial_force: float, lead: float, mean_diameter: float,
                 friction: float) -> float:
    """Torque to raise an axial load with a square-thread power screw.

        T = F * (d/2) * (lead + pi * mu * d) / (pi * d - mu * lead)

    Frictionless screws reduce to the energy balance T = F * lead / (2*pi).
    """
    if axial_force < 0:
        raise ValueError("axial force must be nonnegative")
    if lead <= 0 or mean_diameter <= 0:
        raise ValueError("lead and mean diameter must be positive")
    if not 0 <= friction < 1:
        raise ValueError("friction must be in [0, 1)")
    denom = pi * mean_diameter - friction * lead
    if denom <= 0:
        raise ValueError("non-physical screw geometry: pi * d must exceed mu * lead")
    return axial_force * (mean_diameter / 2.0) \
        * (lead + pi * friction * mean_diameter) / denom


@dataclass(frozen=True)
class TorqueEntry:
    module_length: float    # mm
    axial_force: float      # N
    per_motor_torque: float  # N*mm


@dataclass(frozen=True)
class TorqueProfile:
    entries: tuple[TorqueEntry, ...]

    @property
    def peak_index(self) -> int:
        return max(range(len(self.entries)),
                   key=lambda i: self.entries[i].per_motor_torque)

    @property
    def peak_torque(self) -> float:
        return self.entries[self.peak_index].per_motor_torque


def torque_profile(p: DesignParams, table: SiliconeForceTable | None = None,
                   steps: int = 50) -> TorqueProfile:
    """Per-motor torque over the whole transformation.

    One entry per transformation state. The axial load is the skin
    restoring force at that compression (the single mm-to-cm conversion in
    the package happens here) and is shared equally by the three screws.
    """
    if table is None:
        table = default_force_table()
    states = transform_profile(p, steps)
    elongated = states[0].module_length
    entries = []
    for state in states:
        compression_cm = (elongated - state.module_length) / 10.0
        force = silicone_force(table, compression_cm)
        torque = screw_torque(force / 3.0, p.screw_lead,
                              p.screw_mean_diameter, p.screw_friction)
        entries.append(TorqueEntry(
            module_length=state.module_length,
            axial_force=force,
            per_motor_torque=torque,
        ))
    return TorqueProfile(entries=tuple(entries))


@dataclass(frozen=True)
class MotorCheck:
    passed: bool
    peak_torque: float         # N*mm
    stall_torque: float        # N*mm
    margin: float
    ratio: float               # peak / stall
    selection_threshold: float  # N*mm, reference context only
    note: str


def motor_check(profile: TorqueProfile, stall_torque: float,
                margin: float = 1.0) -> MotorCheck:
    """Compare the peak required torque against the motor's stall torque.

    Passes when peak <= margin * stall. The reference selection threshold is
    reported side by side for context, never as an equality target.
    """
    if not 0 < margin <= 1:
        raise ValueError("margin must be in (0, 1]")
    if stall_torque <= 0:
        raise ValueError("stall torque must be positive")
    peak = profile.peak_torque
    ratio = peak / stall_torque
    note = (
        f"peak {peak:.3f} N*mm vs selection threshold "
        f"{SELECTION_THRESHOLD:.0f} N*mm (side-by-side reference, not an "
        f"equality target); stall {stall_torque:.0f} N*mm, margin {margin:g}"
    )
    return MotorCheck(
        passed=peak <= margin * stall_torque,
        peak_torque=peak,
        stall_torque=stall_torque,
        margin=margin,
        ratio=ratio,
        selection_threshold=SELECTION_THRESHOLD,
        note=note,
    )
