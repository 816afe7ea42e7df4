"""Linear program for the escape problem, with a self-contained solver.

One variable per (rect, direction) pair.  A grid point ``p`` constrains the
pairs whose escape strip covers it: their total fractional extension plus the
input density at ``p`` must stay within the budget.  Each rect additionally
extends in at most one direction overall.

The solver is a dense primal simplex (the standard-form model always starts
feasible from the slack basis).  Optimality is certified, not assumed: primal
feasibility, dual feasibility, and the duality gap are all checked to 1e-7,
and a rational-arithmetic re-solve is available for cross-checking small
models in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cellgrid import CellGrid
from .errors import InfeasibleInputError, NumericalFailure
from .geometry import DIRECTION_ORDER, Instance

_FEAS_TOL = 1e-7


@dataclass(frozen=True)
class PointConstraint:
    point: tuple     # representative cell corner
    pairs: tuple     # ((rect_id, Direction), ...)
    capacity: int    # d minus the input density at the point


@dataclass(frozen=True)
class LPModel:
    instance: Instance
    variables: tuple            # ordered (rect_id, Direction) pairs
    point_constraints: tuple    # PointConstraint rows


@dataclass(frozen=True)
class FractionalSolution:
    values: dict                # (rect_id, Direction) -> float in [0, 1]
    objective_value: float


def build_grid(instance: Instance) -> list:
    """One representative point per compressed cell (lower-left corners)."""
    return CellGrid(instance).cell_corners()


def build_lp(instance: Instance) -> LPModel:
    """Assemble the model; rejects inputs whose density already exceeds d."""
    grid = CellGrid(instance)
    if grid.max_input_density() > instance.d:
        raise InfeasibleInputError("input density already exceeds the budget")

    variables = tuple((r.id, direction)
                      for r in instance.rects for direction in DIRECTION_ORDER)

    cell_pairs = {}
    for r in instance.rects:
        for direction in DIRECTION_ORDER:
            mask = grid.strip_mask(r.id, direction)
            if not mask:
                continue
            cell = 0
            while mask:
                low = mask & -mask
                cell = low.bit_length() - 1
                cell_pairs.setdefault(cell, []).append((r.id, direction))
                mask ^= low
    # Identical rows are redundant; keep one representative per distinct row.
    rows = {}
    for cell, pairs in sorted(cell_pairs.items()):
        ix, iy = divmod(cell, grid.ny)
        capacity = instance.d - grid.cell_input_density(ix, iy)
        key = (tuple(sorted(pairs, key=lambda p: (p[0], p[1].value))), capacity)
        if key not in rows:
            rows[key] = (grid.xs[ix], grid.ys[iy])
    constraints = tuple(PointConstraint(point, pairs, capacity)
                        for (pairs, capacity), point in rows.items())
    return LPModel(instance, variables, constraints)


def _assemble(model: LPModel):
    var_index = {pair: i for i, pair in enumerate(model.variables)}
    n = len(model.variables)
    rows = []
    rhs = []
    for pc in model.point_constraints:
        row = [0] * n
        for pair in pc.pairs:
            row[var_index[pair]] = 1
        rows.append(row)
        rhs.append(pc.capacity)
    for rect in model.instance.rects:
        row = [0] * n
        for direction in DIRECTION_ORDER:
            row[var_index[(rect.id, direction)]] = 1
        rows.append(row)
        rhs.append(1)
    return rows, rhs


def _simplex_max_float(c, A, b, *, max_iters=None):
    """maximize c.x s.t. Ax <= b, x >= 0 with b >= 0; returns (x, y, value)."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    if max_iters is None:
        max_iters = 200 * (m + n) + 1000
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = A
    tableau[:m, n:n + m] = np.eye(m)
    tableau[:m, -1] = b
    tableau[-1, :n] = -c
    basis = list(range(n, n + m))

    tol = 1e-9
    stall = 0
    last_value = 0.0
    for _ in range(max_iters):
        costs = tableau[-1, :n + m]
        if stall > 2 * (m + n):
            negatives = np.nonzero(costs < -tol)[0]  # Bland: anti-cycling
            if negatives.size == 0:
                break
            col = int(negatives[0])
        else:
            col = int(np.argmin(costs))
            if costs[col] >= -tol:
                break
        column = tableau[:m, col]
        positive = np.nonzero(column > tol)[0]
        if positive.size == 0:
            raise NumericalFailure("LP unbounded (cannot happen for this model)")
        ratios = tableau[positive, -1] / column[positive]
        best = ratios.min()
        ties = positive[np.nonzero(ratios <= best + 1e-12)[0]]
        row = int(min(ties, key=lambda i: basis[i]))
        pivot = tableau[row, col]
        tableau[row, :] /= pivot
        for i in range(m + 1):
            if i != row and abs(tableau[i, col]) > 0:
                tableau[i, :] -= tableau[i, col] * tableau[row, :]
        basis[row] = col
        value = tableau[-1, -1]
        if value > last_value + 1e-12:
            stall = 0
            last_value = value
        else:
            stall += 1
    else:
        raise NumericalFailure("simplex pivot limit exceeded")

    x = np.zeros(n + m)
    x[basis] = tableau[:m, -1]
    y = tableau[-1, n:n + m].copy()
    return x[:n], y, float(tableau[-1, -1])


def _certify(c, A, b, x, y, value):
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    scale = max(1.0, float(np.abs(b).max(initial=1.0)))
    if (A @ x - b).max(initial=0.0) > _FEAS_TOL * scale or x.min(initial=0.0) < -_FEAS_TOL:
        raise NumericalFailure("primal infeasible at termination")
    if y.min(initial=0.0) < -_FEAS_TOL:
        raise NumericalFailure("dual variables negative at termination")
    if (c - y @ A).max(initial=0.0) > _FEAS_TOL:
        raise NumericalFailure("dual infeasible at termination")
    gap = abs(float(c @ x) - float(y @ b))
    if gap > _FEAS_TOL * max(1.0, abs(value)):
        raise NumericalFailure(f"duality gap {gap} exceeds tolerance")


def solve_lp(model: LPModel) -> FractionalSolution:
    """Optimal fractional extension plan, certified by duality."""
    rows, rhs = _assemble(model)
    n = len(model.variables)
    c = [1.0] * n
    x, y, value = _simplex_max_float(c, rows, rhs)
    _certify(c, rows, rhs, x, y, value)
    values = {pair: float(np.clip(x[i], 0.0, 1.0))
              for i, pair in enumerate(model.variables)}
    return FractionalSolution(values, value)


def _simplex_max_exact(c, A, b):
    """Fraction-arithmetic simplex with Bland's rule; exact optimum."""
    m, n = len(A), len(A[0]) if A else len(c)
    tableau = [[Fraction(v) for v in row] + [Fraction(0)] * m + [Fraction(b[i])]
               for i, row in enumerate(A)]
    for i in range(m):
        tableau[i][n + i] = Fraction(1)
    objective = [Fraction(-v) for v in c] + [Fraction(0)] * (m + 1)
    basis = list(range(n, n + m))

    while True:
        col = next((j for j in range(n + m) if objective[j] < 0), None)
        if col is None:
            break
        candidates = [(tableau[i][-1] / tableau[i][col], basis[i], i)
                      for i in range(m) if tableau[i][col] > 0]
        if not candidates:
            raise NumericalFailure("exact LP unbounded")
        _, _, row = min(candidates)
        pivot_row = tableau[row]
        pivot = pivot_row[col]
        tableau[row] = [v / pivot for v in pivot_row]
        for i in range(m):
            if i != row and tableau[i][col] != 0:
                factor = tableau[i][col]
                tableau[i] = [a - factor * b_ for a, b_ in zip(tableau[i], tableau[row])]
        if objective[col] != 0:
            factor = objective[col]
            objective = [a - factor * b_ for a, b_ in zip(objective, tableau[row] + [])]
        basis[row] = col

    x = [Fraction(0)] * (n + m)
    for i in range(m):
        x[basis[i]] = tableau[i][-1]
    return x[:n], objective[-1]


def solve_lp_exact(model: LPModel):
    """Rational-arithmetic optimum; the cross-check oracle for solve_lp."""
    rows, rhs = _assemble(model)
    n = len(model.variables)
    x, value = _simplex_max_exact([1] * n, rows, rhs)
    values = {pair: x[i] for i, pair in enumerate(model.variables)}
    return values, value
