"""Ground-truth solvers: brute force, the FPT routine, and constrained search.

All three run on the compressed-cell counters from :mod:`rectescape.cellgrid`:
the base state holds every input body, and a candidate extension only ever
adds its strip (the area beyond the body), so density checks during search are
cheap and monotone, which is what makes the pruning below sound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .cellgrid import CellGrid
from .errors import (DensityPreconditionError, InfeasibleInputError,
                     ParameterError, SizeCapError)
from .geometry import (DIRECTION_ORDER, Direction, Instance, full_assignment,
                       input_density, is_internal)
from .intervals import max_independent_set, project


@dataclass(frozen=True)
class BruteForceResult:
    best_count: int
    witness: dict


@dataclass(frozen=True)
class FptTrace:
    mis_sizes: tuple
    piercing_grid: list
    candidate_count: int
    subsets_tried: int
    verdict: bool
    witness: Optional[dict]


@dataclass(frozen=True)
class ConstrainedResult:
    status: str  # "sat" | "unsat" | "inconclusive"
    witness: Optional[dict]


def brute_force(instance: Instance, *, cap: int = 10,
                allowed_directions=None) -> BruteForceResult:
    """Exact maximum number of escapable rects, by pruned depth-first search.

    A branch dies as soon as a strip pushes some cell past ``d`` (density is
    monotone in the set of strips) or when the remaining rects cannot beat the
    incumbent.  ``allowed_directions`` restricts the escape choices, which is
    how the axis- and direction-restricted optima are computed.
    """
    n = len(instance.rects)
    if n > cap:
        raise SizeCapError(f"brute force capped at {cap} rects, got {n}")
    if input_density(instance).max_density > instance.d:
        raise InfeasibleInputError("input density already exceeds the budget")
    directions = tuple(allowed_directions) if allowed_directions else DIRECTION_ORDER

    grid = CellGrid(instance)
    d = instance.d
    rects = instance.rects
    # Distinct strips only: equal strips are interchangeable for feasibility.
    choices = []
    for r in rects:
        opts, seen = [], set()
        for direction in directions:
            mask = grid.strip_mask(r.id, direction)
            if mask not in seen:
                seen.add(mask)
                opts.append((direction, mask))
        choices.append(opts)

    best_count = -1
    best = {}
    current = {}

    def walk(index: int, state, count: int):
        nonlocal best_count, best
        if count + (n - index) <= best_count:
            return
        if index == n:
            if count > best_count:
                best_count = count
                best = dict(current)
            return
        rect = rects[index]
        for direction, mask in choices[index]:
            new_state = grid.add_if_feasible(state, mask, d)
            if new_state is not None:
                current[rect.id] = direction
                walk(index + 1, new_state, count + 1)
        current[rect.id] = None
        walk(index + 1, state, count)

    walk(0, grid.base_state, 0)
    return BruteForceResult(best_count, full_assignment(instance, best))


def _greedy_mis_rects(instance: Instance, axis: str):
    """Rects whose projections form the earliest-endpoint greedy MIS."""
    chosen = max_independent_set(project(instance.rects, axis))
    return [r for r in instance.rects if r.id in chosen]


def fpt_solve(instance: Instance, k: int) -> FptTrace:
    """Decide whether at least ``k`` rects can escape, for inputs of density
    at most d-1.

    Phase 1/2: if either greedy projection MIS reaches ``k``, extending it
    away from the shared axis is feasible outright (disjoint strips over a
    configuration that everywhere has one unit of slack).  Phase 3 builds the
    piercing grid from the MIS right endpoints, which bounds the instance by
    d*k^2 rects.  Phase 4 enumerates k-subsets lexicographically, then
    direction vectors lexicographically, accepting the first feasible one.
    """
    if k < 0:
        raise ParameterError(f"k must be >= 0, got {k}")
    if input_density(instance).max_density > instance.d - 1:
        raise DensityPreconditionError("input density must be at most d - 1")
    if k == 0:
        return FptTrace((0, 0), [], len(instance.rects), 0, True,
                        full_assignment(instance))

    x_mis = _greedy_mis_rects(instance, "x")
    p = len(x_mis)
    if p >= k:
        witness = full_assignment(instance, {r.id: Direction.UP for r in x_mis})
        return FptTrace((p, None), [], len(instance.rects), 0, True, witness)

    y_mis = _greedy_mis_rects(instance, "y")
    q = len(y_mis)
    if q >= k:
        witness = full_assignment(instance, {r.id: Direction.RIGHT for r in y_mis})
        return FptTrace((p, q), [], len(instance.rects), 0, True, witness)

    # Points one unit inside the right/top endpoint of each MIS pick pierce
    # every projection, hence their grid pierces every rect.
    xs = sorted(r.x_max - 1 for r in x_mis)
    ys = sorted(r.y_max - 1 for r in y_mis)
    points = [(x, y) for x in xs for y in ys]
    for r in instance.rects:
        if not any(r.contains_point(x, y) for x, y in points):
            raise RuntimeError(f"piercing grid misses rect {r.id}; greedy MIS broken")
    n = len(instance.rects)
    if n > instance.d * k * k:
        raise RuntimeError(f"candidate bound violated: {n} rects > d*k^2")

    grid = CellGrid(instance)
    d = instance.d
    allowed = {r.id: [(direction, grid.strip_mask(r.id, direction))
                      for direction in grid.allowed_directions(r.id)]
               for r in instance.rects}

    subsets_tried = 0
    for subset in itertools.combinations(instance.rects, k):
        subsets_tried += 1
        if any(not allowed[r.id] for r in subset):
            continue

        chosen = {}

        def assign(index: int, state) -> bool:
            if index == len(subset):
                return True
            rect = subset[index]
            for direction, mask in allowed[rect.id]:
                new_state = grid.add_if_feasible(state, mask, d)
                if new_state is not None:
                    chosen[rect.id] = direction
                    if assign(index + 1, new_state):
                        return True
            chosen.pop(rect.id, None)
            return False

        if assign(0, grid.base_state):
            return FptTrace((p, q), points, n, subsets_tried, True,
                            full_assignment(instance, chosen))
    return FptTrace((p, q), points, n, subsets_tried, False, None)


def constrained_solve(instance: Instance, p: int, q: int, *,
                      node_budget: int = 2_000_000) -> ConstrainedResult:
    """Decide whether >= p internal rects can escape horizontally and >= q
    vertically, within the density budget.

    Boundary rects never count toward the targets and dropping their
    extensions never hurts feasibility, so the search fixes them unextended;
    that keeps the decision exact.  Pruning: density breaches, and optimistic
    bounds (each undecided internal rect can serve at most one deficit).
    Returns "inconclusive" when the node budget runs out.
    """
    if p < 0 or q < 0:
        raise ParameterError("targets must be non-negative")
    if input_density(instance).max_density > instance.d:
        return ConstrainedResult("unsat", None)

    internal = [r for r in instance.rects if is_internal(r, instance.region)]
    grid = CellGrid(instance)
    d = instance.d
    allowed = {r.id: [(direction, grid.strip_mask(r.id, direction))
                      for direction in grid.allowed_directions(r.id)]
               for r in internal}

    horizontal = {Direction.LEFT, Direction.RIGHT}
    nodes = 0
    chosen = {}

    def search(index: int, state, need_h: int, need_v: int):
        """Returns 'sat', 'unsat', or 'inconclusive' for this subtree."""
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            return "inconclusive"
        if need_h <= 0 and need_v <= 0:
            return "sat"
        if need_h + need_v > len(internal) - index:
            return "unsat"
        rect = internal[index]
        exhausted = False
        for direction, mask in allowed[rect.id]:
            new_state = grid.add_if_feasible(state, mask, d)
            if new_state is None:
                continue
            delta_h = 1 if direction in horizontal else 0
            chosen[rect.id] = direction
            verdict = search(index + 1, new_state,
                             need_h - delta_h, need_v - (1 - delta_h))
            if verdict == "sat":
                return "sat"
            if verdict == "inconclusive":
                exhausted = True
        chosen.pop(rect.id, None)
        verdict = search(index + 1, state, need_h, need_v)
        if verdict == "sat":
            return "sat"
        return "inconclusive" if exhausted or verdict == "inconclusive" else "unsat"

    verdict = search(0, grid.base_state, p, q)
    if verdict == "sat":
        return ConstrainedResult("sat", full_assignment(instance, chosen))
    return ConstrainedResult(verdict, None)
