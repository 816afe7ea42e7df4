"""Approximation solvers for rectangles in the plane.

Two families:

* general inputs: per axis, drop stuck rects, take the interval MIS of the
  survivors' perpendicular projections, and escape each winner on an
  unblocked side.  Best of the two axes is a 4d-approximation.
* pairwise-disjoint inputs: per direction, take a (d-1)-fold packing of the
  perpendicular projections and escape the whole packing that way.  Best of
  the four directions is a 4(1+1/(d-1))-approximation.

Feasibility never relies on the guarantee: chosen strips are pairwise
disjoint (or depth-bounded) and individually clean, so the output always
respects the budget when the input does.
"""

from __future__ import annotations

from fractions import Fraction

from .cellgrid import CellGrid
from .errors import DisjointnessError, ParameterError
from .geometry import (AXIS_DIRECTIONS, Axis, Direction, Instance,
                       directional_block, full_assignment, input_density,
                       stuck_rectangles)
from .intervals import k_fold_packing, max_independent_set, project
from .solution import Solution

_PERPENDICULAR = {Axis.VERTICAL: "x", Axis.HORIZONTAL: "y"}
_DIR_TO_PROJECTION = {Direction.UP: "x", Direction.DOWN: "x",
                      Direction.LEFT: "y", Direction.RIGHT: "y"}


def _empty_infeasible(instance: Instance, tag: str, ratio) -> Solution:
    return Solution(full_assignment(instance), 0, tag, ratio, infeasible_input=True)


def solve_axis_restricted(instance: Instance, axis: Axis) -> Solution:
    """Escape along one axis only: MIS of the good rects' projections.

    Stuck rects can never move on this axis; the remaining ("good") rects
    with pairwise-disjoint perpendicular projections have pairwise-disjoint
    escape strips, each strip free of density-d points, so extending them all
    is feasible.
    """
    tag = f"axis-restricted-{axis.value}"
    ratio = Fraction(2 * instance.d)
    if input_density(instance).max_density > instance.d:
        return _empty_infeasible(instance, tag, ratio)

    stuck = stuck_rectangles(instance, axis)
    good = [r for r in instance.rects if r.id not in stuck]
    chosen = max_independent_set(project(good, _PERPENDICULAR[axis]))

    preferred, fallback = AXIS_DIRECTIONS[axis]
    if axis is Axis.HORIZONTAL:
        preferred, fallback = Direction.RIGHT, Direction.LEFT
    assignment = {}
    for rect in good:
        if rect.id in chosen:
            direction = preferred
            if directional_block(instance, rect, preferred):
                direction = fallback
            assignment[rect.id] = direction
    return Solution(full_assignment(instance, assignment), len(chosen), tag, ratio)


def solve_general_4d(instance: Instance) -> Solution:
    """Best of the two axis-restricted solutions; 4d-approximate overall."""
    ratio = Fraction(4 * instance.d)
    if input_density(instance).max_density > instance.d:
        return _empty_infeasible(instance, "approx4d", ratio)
    vertical = solve_axis_restricted(instance, Axis.VERTICAL)
    horizontal = solve_axis_restricted(instance, Axis.HORIZONTAL)
    best = vertical if vertical.extended_count >= horizontal.extended_count else horizontal
    return Solution(best.assignment, best.extended_count, "approx4d", ratio)


def _require_disjoint(instance: Instance):
    if input_density(instance).max_density > 1:
        raise DisjointnessError("input rects must be pairwise disjoint")


def solve_direction_restricted_disjoint(instance: Instance, direction: Direction) -> Solution:
    """Escape pairwise-disjoint rects in one fixed direction.

    A (d-1)-fold packing of the perpendicular projections works: any point of
    an escape strip is covered by at most d-1 strips plus at most one input
    body.  For d = 1 this degenerates to a MIS, and rects whose strip already
    touches another body are dropped first so the output stays feasible.
    """
    _require_disjoint(instance)
    tag = f"direction-restricted-{direction.value}"
    d = instance.d
    candidates = [r for r in instance.rects
                  if not directional_block(instance, r, direction)]
    packing = k_fold_packing(project(candidates, _DIR_TO_PROJECTION[direction]),
                             max(d - 1, 1))
    assignment = {rect_id: direction for rect_id in packing.selected}
    ratio = Fraction(d, d - 1) if d >= 2 else Fraction(1)
    return Solution(full_assignment(instance, assignment), len(packing.selected),
                    tag, ratio)


def solve_disjoint(instance: Instance) -> Solution:
    """Best of the four direction-restricted solutions for disjoint inputs."""
    if instance.d < 2:
        raise ParameterError("disjoint solver needs d >= 2; use solve_general_4d for d = 1")
    _require_disjoint(instance)
    best = None
    for direction in (Direction.UP, Direction.DOWN, Direction.LEFT, Direction.RIGHT):
        candidate = solve_direction_restricted_disjoint(instance, direction)
        if best is None or candidate.extended_count > best.extended_count:
            best = candidate
    ratio = Fraction(4 * instance.d, instance.d - 1)
    return Solution(best.assignment, best.extended_count, "disjoint", ratio)
