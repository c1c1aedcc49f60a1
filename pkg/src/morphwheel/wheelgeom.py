"""Crawler-to-wheel transformation geometry.

Axial compression folds each hinged chassis rod pair outward; the hinge
midpoint of a pair with half-length ``l`` at axial half-separation ``h``
bulges to radius ``sqrt(l^2 - h^2)``, and the wheel radius adds the hub
attachment offset on top. The trigger model is a pure length threshold:
rods telescope only at the fully elongated crawler length and lock rigid
the moment the module compresses.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import InfeasibleError
from .params import DesignParams
from .telescopic import module_lengths

__all__ = [
    "TriggerMode",
    "TransformState",
    "CurvedRodPlan",
    "KEYFRAME_SCHEMA_VERSION",
    "bulge_radius",
    "default_min_half_separation",
    "trigger_state",
    "transform_profile",
    "curved_rod_plan",
    "keyframe_record",
    "keyframes_document",
    "write_keyframes",
]

KEYFRAME_SCHEMA_VERSION = 1

# Residual stopper height per telescoping level; keeps the collapsed rod
# pair from closing completely unless the design overrides it.
_STOPPER_HEIGHT = 2.0  # mm


class TriggerMode(enum.Enum):
    TELESCOPIC = "telescopic"
    RIGID = "rigid"


@dataclass(frozen=True)
class TransformState:
    """One instant of the crawler-to-wheel transformation."""

    module_length: float          # mm
    axial_half_separation: float  # mm, h of the rod pair
    wheel_radius: float           # mm
    trigger_mode: TriggerMode


@dataclass(frozen=True)
class CurvedRodPlan:
    """Telescoping plan for the curved rim rods tiling the wheel circumference."""

    arc_per_sector: float     # mm, rim arc between adjacent spoke joints
    levels: int               # telescoping levels per curved rod
    matched_curvature: float  # mm, rod bend radius (equals the wheel radius)


def bulge_radius(l: float, h: float, br: float) -> float:
    """Radial reach of a hinged rod pair: sqrt(l^2 - h^2) plus the hub offset."""
    if l <= 0:
        raise ValueError("rod half-length must be positive")
    if br < 0:
        raise ValueError("hub offset must be nonnegative")
    if h < 0 or h > l:
        raise ValueError("half-separation must satisfy 0 <= h <= l: rod cannot stretch")
    return math.sqrt(l * l - h * h) + br


def default_min_half_separation(p: DesignParams) -> float:
    """Residual half-separation at full compression: the stopper stack height."""
    return _STOPPER_HEIGHT * p.screw.n_levels


def trigger_state(module_length: float, elongated: float,
                  tolerance: float = 0.0) -> TriggerMode:
    """Trigger mode from the current module length.

    Telescopic exactly at the fully elongated length (within ``tolerance``),
    rigid for any compression. Lengths beyond elongated are impossible.
    """
    if module_length <= 0 or elongated <= 0:
        raise ValueError("lengths must be positive")
    if tolerance < 0:
        raise ValueError("tolerance must be nonnegative")
    if module_length > elongated + tolerance:
        raise ValueError("module length exceeds the elongated length: over-extension is impossible")
    if abs(module_length - elongated) <= tolerance:
        return TriggerMode.TELESCOPIC
    return TriggerMode.RIGID


def transform_profile(p: DesignParams, steps: int) -> list[TransformState]:
    """Sweep the transformation from flat crawler to fully formed wheel.

    The rod-pair half-separation is the driver: it runs from the rod
    half-length (rods flat along the axis, radius equals the hub offset)
    down to the compressed residual. Each unit of half-separation lost
    shortens the module by two (both end plates advance symmetrically), so
    the length column starts exactly at the elongated crawler length and
    decreases strictly while the radius increases strictly.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    lengths = module_lengths(p)
    w = p.wheel
    l = w.rod_half_length
    h_min = w.min_half_separation
    if h_min is None:
        h_min = default_min_half_separation(p)
    if h_min >= l:
        raise InfeasibleError(
            "infeasible wheel geometry: compressed half-separation must stay "
            "below the rod half-length"
        )

    states = []
    for i in range(steps):
        if i == 0:
            h = l
        elif i == steps - 1:
            h = h_min
        else:
            h = l + (h_min - l) * (i / (steps - 1))
        length = lengths.elongated - 2.0 * (l - h)
        states.append(TransformState(
            module_length=length,
            axial_half_separation=h,
            wheel_radius=bulge_radius(l, h, w.hub_offset),
            trigger_mode=trigger_state(length, lengths.elongated),
        ))
    return states


def curved_rod_plan(radius: float, p: DesignParams) -> CurvedRodPlan:
    """Levels needed for the curved rim rods to cover one wheel sector.

    The deployed rods must tile the circumference, one sector per spoke
    pair; the level count rounds up because an under-covered sector leaves
    a gap in the rim. The rod curvature simply matches the wheel radius.
    """
    if radius <= 0:
        raise ValueError("wheel radius must be positive")
    w = p.wheel
    usable = w.curved_rod_length - w.hinge_allowance
    if usable <= 0:
        raise ValueError("curved rod length must exceed the hinge allowance")
    arc = 2.0 * math.pi * radius / w.spoke_pairs
    levels = max(1, math.ceil(arc / usable))
    # Scan around the ceiling so float rounding can never break minimal cover.
    while levels * usable < arc:
        levels += 1
    while levels > 1 and (levels - 1) * usable >= arc:
        levels -= 1
    return CurvedRodPlan(arc_per_sector=arc, levels=levels, matched_curvature=radius)


# ---------------------------------------------------------------------------
# keyframe export

def keyframe_record(state: TransformState, p: DesignParams, step: int = 0,
                    arc_points_per_sector: int = 8) -> dict:
    """Plottable geometry snapshot of one transformation state.

    Coordinates are mm, z along the module axis centred between the end
    plates. Each spoke entry gives the rod pair as a three-point polyline
    (top plate attachment, bulged hinge, bottom plate attachment); the rim
    is one closed polyline at the hinge radius.
    """
    w = p.wheel
    h = state.axial_half_separation
    r = state.wheel_radius
    spokes = []
    for k in range(w.spoke_pairs):
        psi = 2.0 * math.pi * k / w.spoke_pairs
        c, s = math.cos(psi), math.sin(psi)
        spokes.append({
            "azimuth": psi,
            "attachment_top": [w.hub_offset * c, w.hub_offset * s, h],
            "hinge": [r * c, r * s, 0.0],
            "attachment_bottom": [w.hub_offset * c, w.hub_offset * s, -h],
        })
    n_rim = w.spoke_pairs * arc_points_per_sector
    rim = []
    for k in range(n_rim + 1):  # closing point repeats the first
        psi = 2.0 * math.pi * (k % n_rim) / n_rim
        rim.append([r * math.cos(psi), r * math.sin(psi), 0.0])
    return {
        "step": step,
        "module_length": state.module_length,
        "axial_half_separation": h,
        "wheel_radius": r,
        "trigger_mode": state.trigger_mode.value,
        "plate_positions": [-h, 0.0, h],
        "spokes": spokes,
        "rim": rim,
    }


def keyframes_document(states: list[TransformState], p: DesignParams,
                       arc_points_per_sector: int = 8) -> dict:
    return {
        "schema_version": KEYFRAME_SCHEMA_VERSION,
        "spoke_pairs": p.wheel.spoke_pairs,
        "frames": [
            keyframe_record(s, p, step=i, arc_points_per_sector=arc_points_per_sector)
            for i, s in enumerate(states)
        ],
    }


def write_keyframes(states: list[TransformState], p: DesignParams,
                    path: str | Path) -> None:
    """Write the keyframe document as deterministic JSON (sorted keys)."""
    doc = keyframes_document(states, p)
    Path(path).write_text(
        json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
