"""Telescopic screw stack model: module lengths, reduction ratio, inverse
sizing of screw length and level count, and the nested diameter ladder.

All functions are pure; inverse solvers cross-check their closed forms
against brute-force scans so an algebra slip cannot go unnoticed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InfeasibleError
from .params import DesignParams, require_valid

__all__ = [
    "ModuleLengths",
    "ScrewDiameterLadder",
    "ScrewLengthSolution",
    "residual_length",
    "module_lengths",
    "reduction_ok",
    "check_reduction",
    "min_screw_length",
    "scan_min_screw_length",
    "solve_min_screw_length",
    "min_levels",
    "scan_min_levels",
    "solve_min_levels",
    "diameter_ladder",
    "shaft_levels",
]


@dataclass(frozen=True)
class ModuleLengths:
    elongated: float  # mm, all screw levels extended
    reduced: float    # mm, stack collapsed to one level

    @property
    def reduction_ratio(self) -> float:
        return self.reduced / self.elongated


@dataclass(frozen=True)
class ScrewDiameterLadder:
    """Outer diameters per level, innermost (master screw) first."""

    diameters: tuple[float, ...]  # mm

    def __len__(self) -> int:
        return len(self.diameters)


@dataclass(frozen=True)
class ScrewLengthSolution:
    length: float          # mm, minimum level length meeting the target
    degenerate: bool = False  # target ratio of 1 needs no telescoping at all


def residual_length(p: DesignParams) -> float:
    """Axial length that does not telescope: joints, clearance, drive, tensioner."""
    lay = p.layout
    return 2.0 * lay.joint_height + lay.plate_clearance \
        + lay.drive_assembly_length + lay.tensioner_length


def module_lengths(p: DesignParams) -> ModuleLengths:
    """Elongated and fully reduced module lengths.

    Elongated stacks all ``n_levels`` screw levels twice (one per cascaded
    platform) on top of the residual; reduced keeps a single collapsed level
    per platform. Refuses invalid designs with their validation report.
    """
    require_valid(p)
    k = residual_length(p)
    s_l = p.screw.screw_level_length
    n = p.screw.n_levels
    return ModuleLengths(
        elongated=2.0 * n * s_l + k,
        reduced=2.0 * s_l + k,
    )


def reduction_ok(reduced: float, elongated: float, target_ratio: float = 0.5) -> bool:
    """True when reduced/elongated meets the target (boundary included)."""
    if elongated <= 0:
        raise ValueError("elongated length must be positive")
    return reduced / elongated <= target_ratio


def check_reduction(p: DesignParams, target_ratio: float = 0.5) -> bool:
    """Reduction check on the computed module lengths."""
    lengths = module_lengths(p)
    return reduction_ok(lengths.reduced, lengths.elongated, target_ratio)


def _ratio(screw_length: float, n_levels: int, residual: float) -> float:
    return (2.0 * screw_length + residual) / (2.0 * n_levels * screw_length + residual)


def min_screw_length(n_levels: int, residual: float,
                     target_ratio: float) -> ScrewLengthSolution:
    """Smallest per-level screw length reaching the reduction target.

    Closed form from setting the reduction ratio equal to the target:

        S = residual * (1 - target) / (2 * (n_levels * target - 1))

    valid when ``n_levels * target > 1``; fewer levels can never reach the
    target because the ratio tends to ``1/n_levels`` as the screws grow.
    The result is cross-checked against ``scan_min_screw_length`` at 0.1 mm
    granularity before it is returned.
    """
    if not 0 < target_ratio <= 1:
        raise ValueError("target_ratio must be in (0, 1]")
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    if residual <= 0:
        raise ValueError("residual length must be positive")
    if target_ratio == 1.0:
        # Any positive length already satisfies ratio <= 1.
        return ScrewLengthSolution(length=0.0, degenerate=True)
    if n_levels * target_ratio <= 1.0:
        raise InfeasibleError("infeasible: not enough levels for this ratio")

    closed = residual * (1.0 - target_ratio) / (2.0 * (n_levels * target_ratio - 1.0))
    step = 0.1
    scanned = scan_min_screw_length(n_levels, residual, target_ratio,
                                    step=step, limit=closed + 3.0 * step)
    if not (-1e-6 <= scanned - closed <= step + 1e-6):
        raise RuntimeError(
            f"internal: closed form {closed} disagrees with scan oracle {scanned}"
        )
    return ScrewLengthSolution(length=closed)


def scan_min_screw_length(n_levels: int, residual: float, target_ratio: float,
                          step: float = 0.1, limit: float = 1e4) -> float:
    """Brute-force oracle: first multiple of ``step`` meeting the target."""
    k = 1
    while k * step <= limit:
        s = k * step
        if _ratio(s, n_levels, residual) <= target_ratio:
            return s
        k += 1
    raise InfeasibleError("infeasible: not enough levels for this ratio")


def solve_min_screw_length(p: DesignParams, target_ratio: float) -> ScrewLengthSolution:
    require_valid(p)
    return min_screw_length(p.screw.n_levels, residual_length(p), target_ratio)


def min_levels(screw_length: float, residual: float, target_ratio: float) -> int:
    """Smallest level count whose reduction ratio meets the target.

    A finite answer always exists because the ratio tends to 0 as levels are
    added. Starts from the ceiling of the closed form and nudges by scanning
    so float rounding can never return a non-minimal or failing count.
    """
    if not 0 < target_ratio <= 1:
        raise ValueError("target_ratio must be in (0, 1]")
    if screw_length <= 0 or residual <= 0:
        raise ValueError("screw_length and residual must be positive")
    if target_ratio == 1.0:
        return 1
    raw = (2.0 * screw_length + residual * (1.0 - target_ratio)) \
        / (2.0 * screw_length * target_ratio)
    n = max(1, math.ceil(raw - 1e-12))
    while _ratio(screw_length, n, residual) > target_ratio:
        n += 1
    while n > 1 and _ratio(screw_length, n - 1, residual) <= target_ratio:
        n -= 1
    return n


def scan_min_levels(screw_length: float, residual: float, target_ratio: float) -> int:
    """Brute-force oracle: increment the level count until the check passes."""
    n = 1
    while _ratio(screw_length, n, residual) > target_ratio:
        n += 1
    return n


def solve_min_levels(p: DesignParams, target_ratio: float) -> int:
    require_valid(p)
    return min_levels(p.screw.screw_level_length, residual_length(p), target_ratio)


def diameter_ladder(p: DesignParams) -> ScrewDiameterLadder:
    """Outer diameter per nesting level.

    Each level adds one thread width, the inter-thread clearance and one
    stopper width on top of the previous diameter. A zero increment is
    computed as-is (all levels equal); the validator flags the underlying
    zero widths as violations.
    """
    s = p.screw
    increment = s.thread_width + s.thread_clearance + s.stopper_width
    d = s.base_screw_diameter
    out = [d]
    for _ in range(s.n_levels - 1):
        d += increment
        out.append(d)
    return ScrewDiameterLadder(diameters=tuple(out))


def shaft_levels(p: DesignParams) -> int:
    """Telescoping levels of the internal common shaft: one fewer than the screw."""
    if p.screw.n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    return p.screw.n_levels - 1
