"""One-dimensional substrate: interval MIS, piercing, and k-fold packing.

Intervals are half-open ``[lo, hi)`` and inherit the id of the rect they were
projected from.  Everything here is greedy with deterministic tie-breaking by
``(right endpoint, id)``; optimality of the k-fold greedy is machine-checked
against an exhaustive oracle in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError, ValidationError


@dataclass(frozen=True)
class Interval:
    id: int
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo >= self.hi:
            raise ValidationError(f"degenerate interval {self!r}")

    def overlaps(self, other: "Interval") -> bool:
        return self.lo < other.hi and other.lo < self.hi

    def contains(self, point: int) -> bool:
        return self.lo <= point < self.hi


@dataclass(frozen=True)
class PackingResult:
    """Selected ids plus a partition of them into pairwise-disjoint classes."""

    selected: frozenset
    color_classes: tuple


def project(rects, axis: str):
    """Half-open projection of each rect onto the x- or y-axis."""
    if axis == "x":
        return [Interval(r.id, r.x_min, r.x_max) for r in rects]
    if axis == "y":
        return [Interval(r.id, r.y_min, r.y_max) for r in rects]
    raise ValidationError(f"axis must be 'x' or 'y', got {axis!r}")


def _greedy_order(intervals):
    return sorted(intervals, key=lambda iv: (iv.hi, iv.id))


def max_independent_set(intervals) -> set:
    """Earliest-right-endpoint greedy MIS; ties broken by smaller id."""
    chosen = set()
    frontier = None
    for iv in _greedy_order(intervals):
        if frontier is None or iv.lo >= frontier:
            chosen.add(iv.id)
            frontier = iv.hi
    return chosen


def piercing_points(intervals) -> list:
    """A minimum piercing set: right endpoint minus one of each greedy pick.

    The point ``hi - 1`` lies inside the half-open pick, and every interval
    the greedy skipped reaches at least as far right as the pick it overlaps,
    so it is pierced too.  The count equals the greedy MIS size, which is the
    minimum by interval duality.
    """
    points = []
    frontier = None
    for iv in _greedy_order(intervals):
        if frontier is None or iv.lo >= frontier:
            points.append(iv.hi - 1)
            frontier = iv.hi
    return points


def _depth_within(accepted, lo: int, hi: int) -> int:
    """Max overlap depth of ``accepted`` inside [lo, hi)."""
    events = []
    for iv in accepted:
        a, b = max(iv.lo, lo), min(iv.hi, hi)
        if a < b:
            events.append((a, 1))
            events.append((b, -1))
    if not events:
        return 0
    events.sort()
    depth = best = 0
    for _, delta in events:
        depth += delta
        best = max(best, depth)
    return best


def k_fold_packing(intervals, k: int) -> PackingResult:
    """Maximum subset with overlap depth at most ``k`` everywhere.

    Earliest-right-endpoint greedy, accepting an interval iff acceptance
    keeps the depth within ``k`` over its span.  Color classes come from
    first-fit over the accepted set in left-endpoint order, which never needs
    more than ``k`` classes because depth bounds the clique number.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    accepted = []
    for iv in _greedy_order(intervals):
        if _depth_within(accepted, iv.lo, iv.hi) + 1 <= k:
            accepted.append(iv)

    classes = []
    class_ends = []
    for iv in sorted(accepted, key=lambda iv: (iv.lo, iv.id)):
        for idx, end in enumerate(class_ends):
            if end <= iv.lo:
                classes[idx].add(iv.id)
                class_ends[idx] = iv.hi
                break
        else:
            classes.append({iv.id})
            class_ends.append(iv.hi)
    return PackingResult(frozenset(iv.id for iv in accepted),
                         tuple(frozenset(c) for c in classes))
