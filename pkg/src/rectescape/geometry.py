"""Exact integer geometry for rectangle escape instances.

Rectangles are axis-aligned with half-open bodies ``[x_min, x_max) x
[y_min, y_max)``.  Density at a point is the number of bodies containing it;
with half-open semantics two rectangles that merely share an edge do not
overlap.  All coordinates are integers, so every density question is decided
exactly by coordinate compression, with one representative cell per compressed
rectangle of the arrangement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional

from .errors import DomainMismatchError, ValidationError


class Direction(Enum):
    UP = "up"
    DOWN = "down"
    LEFT = "left"
    RIGHT = "right"


class Axis(Enum):
    VERTICAL = "vertical"      # extensions up/down
    HORIZONTAL = "horizontal"  # extensions left/right


AXIS_DIRECTIONS = {
    Axis.VERTICAL: (Direction.UP, Direction.DOWN),
    Axis.HORIZONTAL: (Direction.LEFT, Direction.RIGHT),
}

# Fixed iteration order used by every deterministic enumeration.
DIRECTION_ORDER = (Direction.UP, Direction.DOWN, Direction.LEFT, Direction.RIGHT)

# Assignment maps every rect id to a Direction or to None (not extended).
Assignment = dict


@dataclass(frozen=True)
class Rect:
    """Half-open axis-aligned rectangle with an identity."""

    id: int
    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValidationError(f"degenerate rect {self!r}")

    def contains_rect(self, other: "Rect") -> bool:
        return (self.x_min <= other.x_min and other.x_max <= self.x_max
                and self.y_min <= other.y_min and other.y_max <= self.y_max)

    def contains_point(self, x: int, y: int) -> bool:
        return self.x_min <= x < self.x_max and self.y_min <= y < self.y_max


@dataclass(frozen=True)
class Region:
    """The bounding region whose four borders rectangles escape to."""

    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValidationError(f"degenerate region {self!r}")

    def contains(self, rect: Rect) -> bool:
        return (self.x_min <= rect.x_min and rect.x_max <= self.x_max
                and self.y_min <= rect.y_min and rect.y_max <= self.y_max)


@dataclass(frozen=True)
class Instance:
    """A set of rectangles in a region plus the density budget ``d``.

    ``k`` is the optional decision target (how many rectangles must escape).
    """

    region: Region
    rects: tuple
    d: int
    k: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "rects", tuple(self.rects))
        if self.d < 1:
            raise ValidationError(f"density budget must be >= 1, got {self.d}")
        if self.k is not None and self.k < 0:
            raise ValidationError(f"target k must be >= 0, got {self.k}")
        seen = set()
        for r in self.rects:
            if r.id in seen:
                raise ValidationError(f"duplicate rect id {r.id}")
            seen.add(r.id)
            if not self.region.contains(r):
                raise ValidationError(f"rect {r.id} lies outside the region")

    @property
    def ids(self) -> tuple:
        return tuple(r.id for r in self.rects)

    def rect_by_id(self, rect_id: int) -> Rect:
        for r in self.rects:
            if r.id == rect_id:
                return r
        raise DomainMismatchError(f"unknown rect id {rect_id}")


@dataclass(frozen=True)
class DensityReport:
    """Maximum density of a configuration and a cell where it is attained.

    ``witness`` is the lower-left corner of the lexicographically smallest
    maximizing compressed cell, or None for an empty configuration.
    """

    max_density: int
    witness: Optional[tuple] = None


def extend(rect: Rect, region: Region, direction: Direction) -> Rect:
    """Stretch one side of ``rect`` to the matching border of ``region``."""
    if direction is Direction.UP:
        return Rect(rect.id, rect.x_min, rect.y_min, rect.x_max, region.y_max)
    if direction is Direction.DOWN:
        return Rect(rect.id, rect.x_min, region.y_min, rect.x_max, rect.y_max)
    if direction is Direction.LEFT:
        return Rect(rect.id, region.x_min, rect.y_min, rect.x_max, rect.y_max)
    if direction is Direction.RIGHT:
        return Rect(rect.id, rect.x_min, rect.y_min, region.x_max, rect.y_max)
    raise ValidationError(f"unknown direction {direction!r}")


def full_assignment(instance: Instance, partial: Optional[Mapping] = None) -> Assignment:
    """Complete a partial id->Direction mapping with None for missing ids."""
    partial = dict(partial or {})
    unknown = set(partial) - set(instance.ids)
    if unknown:
        raise DomainMismatchError(f"assignment mentions unknown rect ids {sorted(unknown)}")
    return {rect_id: partial.get(rect_id) for rect_id in instance.ids}


def apply_assignment(instance: Instance, assignment: Mapping) -> list:
    """Replace each assigned rect by its extension, preserving input order.

    Ids missing from ``assignment`` are treated as unextended; unknown ids
    raise :class:`DomainMismatchError`.
    """
    unknown = set(assignment) - set(instance.ids)
    if unknown:
        raise DomainMismatchError(f"assignment mentions unknown rect ids {sorted(unknown)}")
    out = []
    for rect in instance.rects:
        direction = assignment.get(rect.id)
        out.append(extend(rect, instance.region, direction) if direction else rect)
    return out


def _compress(values: Iterable[int]) -> list:
    return sorted(set(values))


def max_density(rects) -> DensityReport:
    """Exact maximum density of a list of rects, by coordinate compression.

    Every compressed cell is homogeneous, so evaluating one representative per
    cell (its lower-left corner) is exact.  Runs a 1D sweep per x-slab.
    """
    rects = list(rects)
    if not rects:
        return DensityReport(0, None)
    xs = _compress([v for r in rects for v in (r.x_min, r.x_max)])
    ys = _compress([v for r in rects for v in (r.y_min, r.y_max)])
    y_index = {y: i for i, y in enumerate(ys)}
    best = -1
    witness = None
    depth = [0] * len(ys)
    for ix in range(len(xs) - 1):
        x = xs[ix]
        for i in range(len(depth)):
            depth[i] = 0
        for r in rects:
            if r.x_min <= x < r.x_max:
                depth[y_index[r.y_min]] += 1
                depth[y_index[r.y_max]] -= 1
        running = 0
        for iy in range(len(ys) - 1):
            running += depth[iy]
            if running > best:
                best = running
                witness = (x, ys[iy])
    return DensityReport(best, witness)


def is_feasible(instance: Instance, assignment: Mapping) -> bool:
    """True iff the extended configuration has density at most ``instance.d``."""
    return max_density(apply_assignment(instance, assignment)).max_density <= instance.d


def extension_strip(rect: Rect, region: Region, direction: Direction) -> Optional[tuple]:
    """The half-open area newly covered by extending ``rect`` in ``direction``.

    Returns ``(x_min, y_min, x_max, y_max)`` or None when the rect already
    touches that border (the extension is a no-op).
    """
    if direction is Direction.UP:
        strip = (rect.x_min, rect.y_max, rect.x_max, region.y_max)
    elif direction is Direction.DOWN:
        strip = (rect.x_min, region.y_min, rect.x_max, rect.y_min)
    elif direction is Direction.LEFT:
        strip = (region.x_min, rect.y_min, rect.x_min, rect.y_max)
    elif direction is Direction.RIGHT:
        strip = (rect.x_max, rect.y_min, region.x_max, rect.y_max)
    else:
        raise ValidationError(f"unknown direction {direction!r}")
    x0, y0, x1, y1 = strip
    if x0 >= x1 or y0 >= y1:
        return None
    return strip


def _max_input_density_in(rects, area) -> int:
    """Max input density over the half-open area, 0 when area is empty."""
    if area is None:
        return 0
    ax0, ay0, ax1, ay1 = area
    clipped = []
    for r in rects:
        x0, y0 = max(r.x_min, ax0), max(r.y_min, ay0)
        x1, y1 = min(r.x_max, ax1), min(r.y_max, ay1)
        if x0 < x1 and y0 < y1:
            clipped.append(Rect(r.id, x0, y0, x1, y1))
    return max_density(clipped).max_density


def directional_block(instance: Instance, rect: Rect, direction: Direction) -> bool:
    """True iff extending ``rect`` alone in ``direction`` would breach ``d``.

    The strip the extension would newly cover must stay below density ``d`` in
    the input configuration; a point of density >= d there makes the solo
    extension infeasible.
    """
    strip = extension_strip(rect, instance.region, direction)
    others = [r for r in instance.rects if r.id != rect.id]
    # The rect's own body never intersects the strip, but other bodies may.
    return _max_input_density_in(others + [rect], strip) >= instance.d


def stuck_rectangles(instance: Instance, axis: Axis) -> set:
    """Ids of rects blocked in both directions along ``axis``.

    A stuck rect cannot escape along that axis in any solution, so the
    axis-restricted solvers drop them up front.
    """
    first, second = AXIS_DIRECTIONS[axis]
    stuck = set()
    for rect in instance.rects:
        if directional_block(instance, rect, first) and directional_block(instance, rect, second):
            stuck.add(rect.id)
    return stuck


def is_internal(rect: Rect, region: Region) -> bool:
    """A rect sharing no side with the region border."""
    return (rect.x_min > region.x_min and rect.x_max < region.x_max
            and rect.y_min > region.y_min and rect.y_max < region.y_max)


def input_density(instance: Instance) -> DensityReport:
    """Density of the configuration before any extension."""
    return max_density(instance.rects)
