"""Unit squares on an m x m grid: density, 2-approximation, exact search.

Cells are addressed ``(row, col)`` with row 1 at the bottom.  Extending a
square covers its own cell plus every cell from it to the border along the
chosen direction.  Several squares may share a cell (density counts
multiplicity), which the hardness constructions rely on for their guards.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (DomainMismatchError, InfeasibleInputError,
                     ValidationError)
from .geometry import (DIRECTION_ORDER, DensityReport, Direction, Instance,
                       Rect, Region)
from .solution import Solution


@dataclass(frozen=True)
class GridSquare:
    id: int
    row: int
    col: int


@dataclass(frozen=True)
class GridInstance:
    m: int
    squares: tuple
    d: int
    k: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "squares", tuple(self.squares))
        if self.m < 1:
            raise ValidationError(f"grid side must be >= 1, got {self.m}")
        if self.d < 1:
            raise ValidationError(f"density budget must be >= 1, got {self.d}")
        seen = set()
        for s in self.squares:
            if s.id in seen:
                raise ValidationError(f"duplicate square id {s.id}")
            seen.add(s.id)
            if not (1 <= s.row <= self.m and 1 <= s.col <= self.m):
                raise ValidationError(f"square {s.id} at ({s.row},{s.col}) off the grid")

    @property
    def ids(self) -> tuple:
        return tuple(s.id for s in self.squares)


def coverage(square: GridSquare, direction: Optional[Direction], m: int) -> list:
    """Cells covered by the (possibly extended) square, as (row, col)."""
    r, c = square.row, square.col
    if direction is None:
        return [(r, c)]
    if direction is Direction.UP:
        return [(rr, c) for rr in range(r, m + 1)]
    if direction is Direction.DOWN:
        return [(rr, c) for rr in range(1, r + 1)]
    if direction is Direction.LEFT:
        return [(r, cc) for cc in range(1, c + 1)]
    if direction is Direction.RIGHT:
        return [(r, cc) for cc in range(c, m + 1)]
    raise ValidationError(f"unknown direction {direction!r}")


def _check_domain(instance: GridInstance, assignment) -> None:
    unknown = set(assignment) - set(instance.ids)
    if unknown:
        raise DomainMismatchError(f"assignment mentions unknown square ids {sorted(unknown)}")


def grid_density(instance: GridInstance, assignment) -> DensityReport:
    """Per-cell cover counts of the (partially) extended configuration."""
    _check_domain(instance, assignment)
    counts = {}
    for square in instance.squares:
        for cell in coverage(square, assignment.get(square.id), instance.m):
            counts[cell] = counts.get(cell, 0) + 1
    if not counts:
        return DensityReport(0, None)
    best = max(counts.values())
    witness = min(cell for cell, v in counts.items() if v == best)
    return DensityReport(best, witness)


def cell_multiplicities(instance: GridInstance) -> dict:
    counts = {}
    for s in instance.squares:
        counts[(s.row, s.col)] = counts.get((s.row, s.col), 0) + 1
    return counts


def _axis_sweep(instance: GridInstance, vertical: bool) -> dict:
    d = instance.d
    if vertical:
        major, minor = (lambda s: s.col), (lambda s: s.row)
        toward_high, toward_low = Direction.UP, Direction.DOWN
    else:
        major, minor = (lambda s: s.row), (lambda s: s.col)
        toward_high, toward_low = Direction.RIGHT, Direction.LEFT
    assignment = {}
    groups = {}
    for s in instance.squares:
        groups.setdefault(major(s), []).append(s)
    for _, members in sorted(groups.items()):
        # coincident squares tie-break by lower id first
        order = sorted(members, key=lambda s: (-minor(s), s.id))
        for s in order[:d]:
            assignment[s.id] = toward_high
        rest = sorted(order[d:], key=lambda s: (minor(s), s.id))
        for s in rest[:d]:
            assignment[s.id] = toward_low
    return assignment


def two_approx_axis(instance: GridInstance, vertical: bool) -> Solution:
    """One-axis greedy: per column (row), the d squares closest to each border
    escape toward it.  Columns never interact vertically, so this is exactly
    optimal among assignments restricted to that axis."""
    d = instance.d
    if any(v > d for v in cell_multiplicities(instance).values()):
        raise InfeasibleInputError("some cell holds more squares than the budget")
    partial = _axis_sweep(instance, vertical)
    assignment = {sq_id: partial.get(sq_id) for sq_id in instance.ids}
    tag = "square-vertical" if vertical else "square-horizontal"
    return Solution(assignment, len(partial), tag, "exact-per-axis")


def two_approx(instance: GridInstance) -> Solution:
    """Best of the per-column and per-row greedy solutions; 2-approximate."""
    vertical = two_approx_axis(instance, True)
    horizontal = two_approx_axis(instance, False)
    best = vertical if vertical.extended_count >= horizontal.extended_count else horizontal
    return Solution(best.assignment, best.extended_count, "square2x", Fraction(2))


@dataclass(frozen=True)
class GridSearchResult:
    status: str                     # "ok" | "inconclusive"
    best_count: Optional[int]       # maximize mode
    all_extended: Optional[bool]    # all mode
    witness: Optional[dict]


class _Searcher:
    """Depth-first search over per-square choices with cell-saturation
    propagation: when a cell reaches the budget, every direction whose path
    covers it goes dead, and legality checks become O(1)."""

    def __init__(self, instance: GridInstance, mode: str, fixed, node_budget,
                 value_order):
        self.instance = instance
        self.mode = mode
        self.d = instance.d
        self.budget = node_budget
        self.nodes = 0
        self.counts = {}
        self.watchers = {}
        self.dead = {}
        self.legal_left = {}
        self.options = {}
        self.fixed = dict(fixed or {})
        self.squares = {s.id: s for s in instance.squares}
        self.paths = {}

        for s in instance.squares:
            order = (value_order or {}).get(s.id, DIRECTION_ORDER)
            self.options[s.id] = tuple(order)
            own = (s.row, s.col)
            for direction in DIRECTION_ORDER:
                # the own cell never gains coverage from an extension, so it
                # plays no part in legality
                path = [c for c in coverage(s, direction, instance.m) if c != own]
                self.paths[(s.id, direction)] = path
                self.dead[(s.id, direction)] = 0
                for cell in path:
                    self.watchers.setdefault(cell, []).append((s.id, direction))
            self.legal_left[s.id] = 4

        for s in instance.squares:
            self._bump(self._cell(s), +1)

    def _cell(self, s):
        return (s.row, s.col)

    def _bump(self, cell, delta):
        before = self.counts.get(cell, 0)
        after = before + delta
        self.counts[cell] = after
        if delta > 0 and after == self.d:
            for key in self.watchers.get(cell, ()):
                self.dead[key] += 1
                if self.dead[key] == 1:
                    self.legal_left[key[0]] -= 1
        elif delta < 0 and before == self.d:
            for key in self.watchers.get(cell, ()):
                self.dead[key] -= 1
                if self.dead[key] == 0:
                    self.legal_left[key[0]] += 1

    def _apply(self, square_id, direction):
        for cell in self.paths[(square_id, direction)]:
            self._bump(cell, +1)

    def _undo(self, square_id, direction):
        for cell in self.paths[(square_id, direction)]:
            self._bump(cell, -1)

    def legal(self, square_id, direction) -> bool:
        return self.dead[(square_id, direction)] == 0

    def run(self):
        undecided = sorted(self.squares)
        assignment = {}

        # forced moves first; an illegal forced move settles the question
        for square_id in sorted(self.fixed):
            if square_id not in self.squares:
                raise DomainMismatchError(f"fixed move for unknown square {square_id}")
            direction = self.fixed[square_id]
            if self.mode == "all" and direction is None:
                raise ValidationError("all mode cannot fix a square to None")
            if direction is not None:
                if not self.legal(square_id, direction):
                    if self.mode == "all":
                        return GridSearchResult("ok", None, False, None)
                    return GridSearchResult("ok", -1, None, None)
                self._apply(square_id, direction)
            assignment[square_id] = direction
            undecided.remove(square_id)

        best = {"count": -1, "witness": None}
        found = []

        def pick():
            chosen, chosen_left = None, 5
            for square_id in undecided:
                left = self.legal_left[square_id]
                if chosen is None or left < chosen_left or \
                        (left == chosen_left and square_id < chosen):
                    chosen, chosen_left = square_id, left
            return chosen

        def walk(extended):
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                return "budget"
            if not undecided:
                if self.mode == "all":
                    found.append(dict(assignment))
                    return "done"
                if extended > best["count"]:
                    best["count"] = extended
                    best["witness"] = dict(assignment)
                return None
            if self.mode == "all":
                if any(self.legal_left[s] == 0 for s in undecided):
                    return None
            else:
                if extended + len(undecided) <= best["count"]:
                    return None
            square_id = pick()
            undecided.remove(square_id)
            for direction in self.options[square_id]:
                if not self.legal(square_id, direction):
                    continue
                self._apply(square_id, direction)
                assignment[square_id] = direction
                outcome = walk(extended + 1)
                self._undo(square_id, direction)
                del assignment[square_id]
                if outcome in ("done", "budget"):
                    undecided.append(square_id)
                    return outcome
            if self.mode == "maximize":
                assignment[square_id] = None
                outcome = walk(extended)
                del assignment[square_id]
                if outcome in ("done", "budget"):
                    undecided.append(square_id)
                    return outcome
            undecided.append(square_id)
            return None

        outcome = walk(sum(1 for v in assignment.values() if v is not None))
        if outcome == "budget":
            return GridSearchResult("inconclusive", None, None, None)
        if self.mode == "all":
            if found:
                witness = {sq: found[0].get(sq) for sq in self.squares}
                return GridSearchResult("ok", None, True, witness)
            return GridSearchResult("ok", None, False, None)
        witness = {sq: best["witness"].get(sq) for sq in self.squares}
        return GridSearchResult("ok", best["count"], None, witness)


def exact_backtracking(instance: GridInstance, mode: str = "maximize", *,
                       fixed=None, node_budget: Optional[int] = 5_000_000,
                       value_order=None) -> GridSearchResult:
    """Exact search over per-square choices, most-constrained square first.

    ``mode="all"`` decides whether every square can be extended (pruning any
    branch where some square has no legal direction left); ``"maximize"``
    returns the exact maximum extendable count.  ``fixed`` pins chosen
    squares, ``value_order`` overrides the direction order per square (the
    witness builders use it as a routing hint).
    """
    if mode not in ("all", "maximize"):
        raise ValidationError(f"mode must be 'all' or 'maximize', got {mode!r}")
    searcher = _Searcher(instance, mode, fixed, node_budget, value_order)
    return searcher.run()


def to_rect_instance(instance: GridInstance) -> Instance:
    """Unit-rect embedding: square (row, col) becomes [col, col+1) x [row, row+1)
    inside region (1, 1, m+1, m+1); cell density transfers exactly."""
    rects = tuple(Rect(s.id, s.col, s.row, s.col + 1, s.row + 1)
                  for s in instance.squares)
    region = Region(1, 1, instance.m + 1, instance.m + 1)
    return Instance(region, rects, instance.d, instance.k)
