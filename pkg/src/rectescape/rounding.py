"""Scaled randomized rounding of the fractional escape plan.

Each rect independently escapes in direction ``dir`` with probability
``(1 - epsilon) * r[dir]`` and stays put with the leftover probability (at
least epsilon, and exactly epsilon when the rect's choice constraint is
tight).  Rounding trials draw from independent Philox streams keyed by
(seed, trial), so results reproduce regardless of scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .errors import ParameterError
from .geometry import (DIRECTION_ORDER, Instance, apply_assignment,
                       full_assignment, max_density)
from .lp import FractionalSolution, LPModel, build_lp, solve_lp
from .rng import stream
from .solution import Solution


@dataclass(frozen=True)
class RoundingParams:
    epsilon: float
    trials: int = 32
    rng_seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.epsilon < 0.5):
            raise ParameterError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if self.trials < 1:
            raise ParameterError("trials must be positive")


@dataclass(frozen=True)
class RoundingFailure:
    """No trial produced a feasible assignment; densities kept for the log."""

    lp_objective: float
    trial_max_densities: tuple


@dataclass(frozen=True)
class PreconditionReport:
    """Slack analysis for the high-probability guarantee.

    ``alpha`` is the minimum relative slack 1 - d_p/d over grid cells, and
    ``d_threshold`` evaluates 9 ln(n) (1 - eps*alpha) / (eps*alpha)^2 with n
    clamped to at least 2.  ``ratio`` = d / d_threshold logs how far the
    instance is from the printed constant.  ``mu_worst``/``delta_worst`` are
    the analysis quantities at the slack-minimizing cell; they drive nothing.
    """

    alpha: float
    d_threshold: float
    satisfied: bool
    ratio: float
    worst_cell: Optional[tuple]
    worst_input_density: int
    mu_worst: float
    delta_worst: float


def randomized_round(frac: FractionalSolution, epsilon: float, rng) -> dict:
    """One independent rounding of every rect; returns id -> direction/None."""
    if not (0.0 < epsilon < 0.5):
        raise ParameterError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    by_rect = {}
    for (rect_id, direction), value in frac.values.items():
        by_rect.setdefault(rect_id, {})[direction] = value
    assignment = {}
    for rect_id in sorted(by_rect):
        u = rng.random()
        cumulative = 0.0
        assignment[rect_id] = None
        for direction in DIRECTION_ORDER:
            cumulative += (1.0 - epsilon) * by_rect[rect_id].get(direction, 0.0)
            if u < cumulative:
                assignment[rect_id] = direction
                break
    return assignment


def randomized_solve(instance: Instance,
                     params: RoundingParams) -> Union[Solution, RoundingFailure]:
    """Solve the LP once, round up to ``trials`` times, return the best
    feasible assignment (exact density check gates every candidate)."""
    model = build_lp(instance)
    frac = solve_lp(model)
    best = None
    best_count = -1
    densities = []
    for trial in range(params.trials):
        rng = stream(params.rng_seed, trial)
        assignment = full_assignment(instance, randomized_round(frac, params.epsilon, rng))
        density = max_density(apply_assignment(instance, assignment)).max_density
        densities.append(density)
        if density <= instance.d:
            count = sum(1 for v in assignment.values() if v is not None)
            if count > best_count:
                best, best_count = assignment, count
    if best is None:
        return RoundingFailure(frac.objective_value, tuple(densities))
    return Solution(best, best_count, "lp-round", "randomized", False)


def check_preconditions(instance: Instance, epsilon: float) -> PreconditionReport:
    """Evaluate the density-slack preconditions of the rounding guarantee."""
    if not (0.0 < epsilon < 0.5):
        raise ParameterError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    from .cellgrid import CellGrid

    d = instance.d
    grid = CellGrid(instance)
    worst_cell = None
    worst = 0
    if instance.rects:
        counts = grid.input_counts
        # lexicographically smallest cell attaining the max input density
        for ix in range(grid.nx):
            column = counts[ix]
            m = int(column.max()) if column.size else 0
            if m > worst:
                worst = m
                iy = int(column.argmax())
                worst_cell = (grid.xs[ix], grid.ys[iy])
    alpha = 1.0 - worst / d
    n_effective = max(len(instance.rects), 2)
    if alpha <= 0.0:
        threshold = math.inf
    else:
        threshold = 9.0 * math.log(n_effective) * (1.0 - epsilon * alpha) / (
            (epsilon * alpha) ** 2)
    mu = (1.0 - epsilon) * d + epsilon * worst
    return PreconditionReport(
        alpha=alpha,
        d_threshold=threshold,
        satisfied=alpha > 0.0 and d >= threshold,
        ratio=(d / threshold) if threshold not in (0.0, math.inf) else 0.0,
        worst_cell=worst_cell,
        worst_input_density=worst,
        mu_worst=mu,
        delta_worst=d / mu - 1.0,
    )
