"""Three-dimensional pipelines: axis-restricted escape for boxes.

Boxes escape along one of six directions to a face of the bounding region.
The solvers mirror the planar ones: per axis, drop stuck boxes and run a
planar maximum-independent-set plugin on the footprints; for disjoint boxes,
extract the plugin iteratively to build a (d-1)-fold packing of footprints.
Plugins carry a ``guarantee`` label ("exact" or "heuristic") which the
returned solution reports, since the pipeline's ratio is only as good as the
plugin's.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import DisjointnessError, SizeCapError, ValidationError
from .geometry import DensityReport, Rect
from .solution import Solution

AXES3 = ("x", "y", "z")
# (axis, positive side); escape direction names are e.g. "z+"
DIRECTIONS3 = tuple(f"{axis}{sign}" for axis in AXES3 for sign in "+-")


@dataclass(frozen=True)
class Box3:
    id: int
    x_min: int
    y_min: int
    z_min: int
    x_max: int
    y_max: int
    z_max: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max
                and self.z_min < self.z_max):
            raise ValidationError(f"degenerate box {self!r}")

    def bounds(self, axis: str) -> tuple:
        return {"x": (self.x_min, self.x_max),
                "y": (self.y_min, self.y_max),
                "z": (self.z_min, self.z_max)}[axis]


@dataclass(frozen=True)
class Region3:
    x_min: int
    y_min: int
    z_min: int
    x_max: int
    y_max: int
    z_max: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max
                and self.z_min < self.z_max):
            raise ValidationError(f"degenerate region {self!r}")

    def bounds(self, axis: str) -> tuple:
        return {"x": (self.x_min, self.x_max),
                "y": (self.y_min, self.y_max),
                "z": (self.z_min, self.z_max)}[axis]

    def contains(self, box: Box3) -> bool:
        return all(self.bounds(a)[0] <= box.bounds(a)[0]
                   and box.bounds(a)[1] <= self.bounds(a)[1] for a in AXES3)


@dataclass(frozen=True)
class Instance3:
    region: Region3
    boxes: tuple
    d: int
    k: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        if self.d < 1:
            raise ValidationError(f"density budget must be >= 1, got {self.d}")
        seen = set()
        for b in self.boxes:
            if b.id in seen:
                raise ValidationError(f"duplicate box id {b.id}")
            seen.add(b.id)
            if not self.region.contains(b):
                raise ValidationError(f"box {b.id} lies outside the region")

    @property
    def ids(self) -> tuple:
        return tuple(b.id for b in self.boxes)


def extend_box(box: Box3, region: Region3, direction: str) -> Box3:
    axis, sign = direction[0], direction[1]
    lo, hi = box.bounds(axis)
    rlo, rhi = region.bounds(axis)
    new = {"x": [box.x_min, box.x_max], "y": [box.y_min, box.y_max],
           "z": [box.z_min, box.z_max]}
    if sign == "+":
        new[axis][1] = rhi
    else:
        new[axis][0] = rlo
    return Box3(box.id, new["x"][0], new["y"][0], new["z"][0],
                new["x"][1], new["y"][1], new["z"][1])


def apply_assignment3(instance: Instance3, assignment) -> list:
    out = []
    for box in instance.boxes:
        direction = assignment.get(box.id)
        out.append(extend_box(box, instance.region, direction) if direction else box)
    return out


def max_density3(boxes) -> DensityReport:
    """Exact maximum density by 3-way compression, one voxel representative."""
    boxes = list(boxes)
    if not boxes:
        return DensityReport(0, None)
    xs = sorted({v for b in boxes for v in (b.x_min, b.x_max)})
    ys = sorted({v for b in boxes for v in (b.y_min, b.y_max)})
    zs = sorted({v for b in boxes for v in (b.z_min, b.z_max)})
    best = -1
    witness = None
    for ix in range(len(xs) - 1):
        x = xs[ix]
        slab = [b for b in boxes if b.x_min <= x < b.x_max]
        if len(slab) <= best:
            continue
        for iy in range(len(ys) - 1):
            y = ys[iy]
            column = [b for b in slab if b.y_min <= y < b.y_max]
            if len(column) <= best:
                continue
            for iz in range(len(zs) - 1):
                z = zs[iz]
                count = sum(1 for b in column if b.z_min <= z < b.z_max)
                if count > best:
                    best = count
                    witness = (x, y, z)
    return DensityReport(best, witness)


_PLANES = {"z": ("x", "y"), "y": ("x", "z"), "x": ("y", "z")}


def project_boxes(boxes, axis: str) -> list:
    """Footprints on the plane perpendicular to ``axis``, id-preserving."""
    if axis not in AXES3:
        raise ValidationError(f"axis must be one of {AXES3}, got {axis!r}")
    u, v = _PLANES[axis]
    return [Rect(b.id, b.bounds(u)[0], b.bounds(v)[0],
                 b.bounds(u)[1], b.bounds(v)[1]) for b in boxes]


def _strip3(box: Box3, region: Region3, direction: str) -> Optional[Box3]:
    """The volume newly covered by escaping in ``direction``; None if a no-op."""
    axis, sign = direction[0], direction[1]
    lo, hi = box.bounds(axis)
    rlo, rhi = region.bounds(axis)
    new = {"x": [box.x_min, box.x_max], "y": [box.y_min, box.y_max],
           "z": [box.z_min, box.z_max]}
    if sign == "+":
        if hi == rhi:
            return None
        new[axis] = [hi, rhi]
    else:
        if lo == rlo:
            return None
        new[axis] = [rlo, lo]
    return Box3(box.id, new["x"][0], new["y"][0], new["z"][0],
                new["x"][1], new["y"][1], new["z"][1])


def _overlap3(a: Box3, b: Box3) -> bool:
    return all(a.bounds(ax)[0] < b.bounds(ax)[1]
               and b.bounds(ax)[0] < a.bounds(ax)[1] for ax in AXES3)


def directional_block3(instance: Instance3, box: Box3, direction: str) -> bool:
    """True iff the solo escape of ``box`` in ``direction`` breaches d."""
    strip = _strip3(box, instance.region, direction)
    if strip is None:
        return False
    clipped = []
    for other in instance.boxes:
        if other.id == box.id:
            continue
        if _overlap3(other, strip):
            coords = []
            for ax in AXES3:
                lo = max(other.bounds(ax)[0], strip.bounds(ax)[0])
                hi = min(other.bounds(ax)[1], strip.bounds(ax)[1])
                coords.append((lo, hi))
            clipped.append(Box3(other.id, coords[0][0], coords[1][0], coords[2][0],
                                coords[0][1], coords[1][1], coords[2][1]))
    return max_density3(clipped).max_density >= instance.d


def stuck_boxes(instance: Instance3, axis: str) -> set:
    """Boxes blocked in both directions along ``axis``."""
    out = set()
    for box in instance.boxes:
        if (directional_block3(instance, box, f"{axis}+")
                and directional_block3(instance, box, f"{axis}-")):
            out.add(box.id)
    return out


def rect_mis_exact(rects, cap: int = 16) -> set:
    """Maximum independent set of rects by branch and bound."""
    rects = list(rects)
    if len(rects) > cap:
        raise SizeCapError(f"exact MIS capped at {cap} rects, got {len(rects)}")

    def overlaps(a, b):
        return a.x_min < b.x_max and b.x_min < a.x_max \
            and a.y_min < b.y_max and b.y_min < a.y_max

    order = sorted(rects, key=lambda r: r.id)
    best = set()

    def walk(index, chosen):
        nonlocal best
        if len(chosen) + len(order) - index <= len(best):
            return
        if index == len(order):
            if len(chosen) > len(best):
                best = set(chosen)
            return
        rect = order[index]
        if not any(overlaps(rect, c) for c in chosen):
            chosen.append(rect)
            walk(index + 1, chosen)
            chosen.pop()
        walk(index + 1, chosen)

    walk(0, [])
    return {r.id for r in best}


rect_mis_exact.guarantee = "exact"


def rect_mis_greedy(rects) -> set:
    """First-fit by lexicographic upper-right corner; no guarantee."""
    chosen = []
    for r in sorted(rects, key=lambda r: (r.x_max, r.y_max, r.id)):
        if all(not (r.x_min < c.x_max and c.x_min < r.x_max
                    and r.y_min < c.y_max and c.y_min < r.y_max)
               for c in chosen):
            chosen.append(r)
    return {r.id for r in chosen}


rect_mis_greedy.guarantee = "heuristic"


def _plugin_ratio(instance: Instance3, mis_plugin) -> str:
    if getattr(mis_plugin, "guarantee", "heuristic") == "exact":
        return str(6 * instance.d)
    return "heuristic"


def solve_boxes_general(instance: Instance3, mis_plugin=rect_mis_exact) -> Solution:
    """Per axis: drop stuck boxes, take a footprint MIS, escape each winner on
    an unblocked side; best of the three axes.  Disjoint footprints give
    disjoint escape prisms, so the result is always feasible."""
    best = None
    for axis in AXES3:
        stuck = stuck_boxes(instance, axis)
        good = [b for b in instance.boxes if b.id not in stuck]
        chosen = mis_plugin(project_boxes(good, axis))
        assignment = {}
        for box in good:
            if box.id in chosen:
                direction = f"{axis}+"
                if directional_block3(instance, box, direction):
                    direction = f"{axis}-"
                assignment[box.id] = direction
        if best is None or len(assignment) > best[1]:
            best = (assignment, len(assignment))
    full = {box_id: best[0].get(box_id) for box_id in instance.ids}
    return Solution(full, best[1], "boxes-general", _plugin_ratio(instance, mis_plugin))


def solve_boxes_disjoint(instance: Instance3, mis_plugin=rect_mis_exact) -> Solution:
    """Per direction: a (d-1)-fold packing of footprints by iterative MIS
    extraction, all escaping that way; best of the six directions."""
    if max_density3(instance.boxes).max_density > 1:
        raise DisjointnessError("input boxes must be pairwise disjoint")
    best = None
    for direction in DIRECTIONS3:
        axis = direction[0]
        pool = {r.id: r for r in project_boxes(instance.boxes, axis)}
        selected = set()
        for _ in range(instance.d - 1):
            if not pool:
                break
            extracted = mis_plugin(list(pool.values()))
            selected |= extracted
            for rect_id in extracted:
                pool.pop(rect_id)
        assignment = {box_id: direction for box_id in selected}
        if best is None or len(selected) > best[1]:
            best = (assignment, len(selected))
    full = {box_id: best[0].get(box_id) for box_id in instance.ids}
    return Solution(full, best[1], "boxes-disjoint", _plugin_ratio(instance, mis_plugin))
