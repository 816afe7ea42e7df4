"""Instance generators for the two hardness constructions, with witnesses.

``reduce_naesat`` builds the grid-square instance whose full extension at
density 2 encodes not-all-equal satisfiability; ``reduce_mcc`` builds the
rectangle instance whose constrained escape targets encode a multicolored
clique.  Both generators are deterministic and emit a role map (square/rect
id -> human-readable role label) so instances can be inspected, rendered,
and verified structurally.

Placement tuples follow the source construction read as Cartesian pairs
(first coordinate = column, second = row, row 1 at the bottom); the grid
types store (row, col).  Guards hug the borders: blocking a square in a
direction puts two coincident guard squares on the border cell it would
sweep into; a partial block puts one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .errors import ValidationError, WitnessError
from .geometry import Direction, Instance, Rect, Region
from .squares import GridInstance, GridSquare, exact_backtracking, grid_density

# ---------------------------------------------------------------------------
# Formula / graph inputs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NaeFormula:
    """Positive clauses of size 2 or 3; every variable in at most 3 clauses."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise ValidationError("num_vars must be non-negative")
        occurrences = {}
        for clause in self.clauses:
            if len(clause) not in (2, 3):
                raise ValidationError(f"clause {clause} must have 2 or 3 variables")
            if len(set(clause)) != len(clause):
                raise ValidationError(f"clause {clause} repeats a variable")
            for v in clause:
                if not (1 <= v <= self.num_vars):
                    raise ValidationError(f"variable {v} out of range")
                occurrences[v] = occurrences.get(v, 0) + 1
        for v, count in occurrences.items():
            if count > 3:
                raise ValidationError(f"variable {v} appears in {count} > 3 clauses")


def nae_satisfies(phi: NaeFormula, tau) -> bool:
    """tau maps variable id -> bool; every clause needs a True and a False."""
    for clause in phi.clauses:
        values = [bool(tau[v]) for v in clause]
        if all(values) or not any(values):
            return False
    return True


def nae_brute(phi: NaeFormula) -> bool:
    """Exhaustive satisfiability check (capped at 20 variables)."""
    if phi.num_vars > 20:
        raise ValidationError("nae_brute capped at 20 variables")
    for bits in itertools.product((False, True), repeat=phi.num_vars):
        tau = {v + 1: bits[v] for v in range(phi.num_vars)}
        if nae_satisfies(phi, tau):
            return True
    return False


@dataclass(frozen=True)
class MccGraph:
    """k equal parts of t vertices; edges only between parts."""

    k: int
    t: int
    parts: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(tuple(p) for p in self.parts))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if self.k < 1 or self.t < 1:
            raise ValidationError("need k >= 1 parts of t >= 1 vertices")
        if len(self.parts) != self.k or any(len(p) != self.t for p in self.parts):
            raise ValidationError("all parts must have exactly t vertices")
        all_ids = [v for p in self.parts for v in p]
        if len(set(all_ids)) != len(all_ids):
            raise ValidationError("vertex ids must be distinct")
        where = {v: i for i, p in enumerate(self.parts) for v in p}
        seen = set()
        for u, v in self.edges:
            if u not in where or v not in where:
                raise ValidationError(f"edge ({u},{v}) uses unknown vertices")
            if where[u] == where[v]:
                raise ValidationError(f"edge ({u},{v}) lies inside a part")
            key = frozenset((u, v))
            if key in seen:
                raise ValidationError(f"duplicate edge ({u},{v})")
            seen.add(key)

    def part_and_index(self, vertex) -> tuple:
        for i, part in enumerate(self.parts):
            if vertex in part:
                return i + 1, part.index(vertex) + 1
        raise ValidationError(f"unknown vertex {vertex}")


def has_multicolored_clique(g: MccGraph) -> bool:
    """Exhaustive check: one vertex per part, pairwise adjacent."""
    edge_set = {frozenset(e) for e in g.edges}
    for combo in itertools.product(*g.parts):
        if all(frozenset((u, v)) in edge_set
               for u, v in itertools.combinations(combo, 2)):
            return True
    return False


@dataclass(frozen=True)
class ReductionArtifact:
    instance: object        # Instance or GridInstance
    role_map: dict          # id -> role label
    params: dict
    metadata: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# NAE-SAT -> grid squares at density 2
# ---------------------------------------------------------------------------

_ORIGIN = 3          # shift so the whole layout sits strictly inside the grid
_ENVELOPE = 25       # variable gadget envelope side
_SPARE_OFFSETS = (21, 22, 23, 24)  # always-empty lanes inside an envelope


class _GridBuilder:
    def __init__(self):
        self.squares = []          # (id, row, col)
        self.roles = {}
        self.cells = {}            # (row, col) -> ids
        self.block_requests = {}   # border cell -> "block" | "partial"
        self.next_id = 1

    def place(self, col: int, row: int, role: str) -> int:
        sq_id = self.next_id
        self.next_id += 1
        self.squares.append((sq_id, row, col))
        self.roles[sq_id] = role
        self.cells.setdefault((row, col), []).append(sq_id)
        return sq_id

    def request(self, cell: tuple, kind: str):
        existing = self.block_requests.get(cell)
        if existing is None:
            self.block_requests[cell] = kind
        elif existing != kind:
            raise ValidationError(
                f"cell {cell} needs both a full and a partial block")

    def column_empty(self, col: int) -> bool:
        return all(c != col for _, c in self.cells)

    def row_empty(self, row: int) -> bool:
        return all(r != row for r, _ in self.cells)


def _gadget_origin(i: int) -> tuple:
    base = _ORIGIN + _ENVELOPE * (i - 1)
    return base, base  # (col, row)


def _variable_square_pos(i: int, occurrence: int) -> tuple:
    """(col, row) of the occurrence-th square of variable i (1-based)."""
    x, y = _gadget_origin(i)
    return {1: (x, y + 4), 2: (x + 2, y + 2), 3: (x + 4, y)}[occurrence]


def reduce_naesat(phi: NaeFormula) -> ReductionArtifact:
    """Grid instance asking whether all squares escape at density 2.

    Per variable: three cascading squares, a copy gadget (two detector arms,
    four blockers, eight anchors) forcing all three to share a direction in
    {up, right}, plus border guards.  Per clause: one square per occurrence in
    the occurrence's column (top zone) and row (right zone); length-2 clauses
    get the dummies P (in the clause row) and Q (in the clause column).
    """
    b = _GridBuilder()
    n = phi.num_vars

    occurrence_of = {}   # (var, occurrence#) for each clause position
    seen = {}
    for j, clause in enumerate(phi.clauses, start=1):
        for v in sorted(clause):
            seen[v] = seen.get(v, 0) + 1
            occurrence_of[(j, v)] = seen[v]

    blocks = []          # deferred (cell, kind) requests, applied after sizing
    var_square_ids = {}

    for i in range(1, n + 1):
        x, y = _gadget_origin(i)
        for occurrence in (1, 2, 3):
            col, row = _variable_square_pos(i, occurrence)
            sq = b.place(col, row, f"var[{i}][{occurrence}]")
            var_square_ids[(i, occurrence)] = sq
            blocks.append((("down", col), "block"))
            blocks.append((("left", row), "block"))
            blocks.append((("up", col), "partial"))
            blocks.append((("right", row), "partial"))
        for a, (dx, dy) in enumerate(((0, 8), (2, 12), (2, 16), (4, 20)), start=1):
            b.place(x + dx, y + dy, f"copy_col[{i}][{a}]")
        for a, (dx, dy) in enumerate(((8, 2), (12, 4), (16, 0), (20, 2)), start=1):
            b.place(x + dx, y + dy, f"copy_row[{i}][{a}]")
        for a, off in enumerate((8, 12, 16, 20), start=1):
            p, q = x + off, y + off
            b.place(p, q, f"blocker[{i}][{a}]")
            b.place(p - 2, q, f"anchor_side[{i}][{a}]")
            blocks.append((("up", p - 2), "block"))
            blocks.append((("down", p - 2), "block"))
            b.place(p, q - 2, f"anchor_below[{i}][{a}]")
            blocks.append((("left", q - 2), "block"))
            blocks.append((("right", q - 2), "block"))

    clause_zone = _ORIGIN + _ENVELOPE * n
    dummy_cols = {}
    dummy_rows = {}
    spare_cols_used = {}
    spare_rows_used = {}

    for j, clause in enumerate(phi.clauses, start=1):
        ordered = sorted(clause)
        lane = clause_zone + 2 * j + 10
        for x_pos, v in enumerate(ordered, start=1):
            occ = occurrence_of[(j, v)]
            col, row = _variable_square_pos(v, occ)
            b.place(col, lane, f"clause_up[{j}][{x_pos}]")
            b.place(lane, row, f"clause_right[{j}][{x_pos}]")
        if len(ordered) == 2:
            i1 = ordered[0]
            base_col, base_row = _gadget_origin(i1)
            used = spare_cols_used.setdefault(i1, set())
            col_p = next(base_col + off for off in _SPARE_OFFSETS
                         if base_col + off not in used)
            used.add(col_p)
            if not b.column_empty(col_p):
                raise ValidationError(f"no empty column for dummy P of clause {j}")
            b.place(col_p, lane, f"dummy_P[{j}]")
            dummy_cols[j] = col_p
            blocks.append((("up", col_p), "block"))
            blocks.append((("down", col_p), "block"))

            used_r = spare_rows_used.setdefault(i1, set())
            row_q = next(base_row + off for off in _SPARE_OFFSETS
                         if base_row + off not in used_r)
            used_r.add(row_q)
            if not b.row_empty(row_q):
                raise ValidationError(f"no empty row for dummy Q of clause {j}")
            b.place(lane, row_q, f"dummy_Q[{j}]")
            dummy_rows[j] = row_q
            blocks.append((("left", row_q), "block"))
            blocks.append((("right", row_q), "block"))

    max_coord = 0
    for _, row, col in b.squares:
        max_coord = max(max_coord, row, col)
    m = max(max_coord + 2, 2)

    border_cell = {"up": lambda c: (m, c), "down": lambda c: (1, c),
                   "left": lambda r: (r, 1), "right": lambda r: (r, m)}
    for (side, coord), kind in blocks:
        b.request(border_cell[side](coord), kind)
    for cell in sorted(b.block_requests):
        kind = b.block_requests[cell]
        copies = 2 if kind == "block" else 1
        for copy_no in range(1, copies + 1):
            b.place(cell[1], cell[0], f"guard[{cell[0]},{cell[1]}]#{copy_no}")

    squares = tuple(GridSquare(sq_id, row, col) for sq_id, row, col in b.squares)
    instance = GridInstance(m=m, squares=squares, d=2, k=len(squares))
    multiplicity = {}
    for s in squares:
        multiplicity[(s.row, s.col)] = multiplicity.get((s.row, s.col), 0) + 1
        if multiplicity[(s.row, s.col)] > 2:
            raise ValidationError(f"cell {(s.row, s.col)} got multiplicity > 2")
    return ReductionArtifact(
        instance=instance,
        role_map=dict(b.roles),
        params={"d": 2, "k": len(squares)},
        metadata={"grid_side": m,
                  "dummy_columns": dummy_cols,
                  "dummy_rows": dummy_rows,
                  "variable_squares": {f"{i},{occ}": sq
                                       for (i, occ), sq in var_square_ids.items()}},
    )


def _nearest_border(square: GridSquare, m: int) -> Direction:
    if square.row == m:
        return Direction.UP
    if square.row == 1:
        return Direction.DOWN
    if square.col == 1:
        return Direction.LEFT
    if square.col == m:
        return Direction.RIGHT
    raise ValidationError(f"square {square.id} is not on the border")


_HINTS_FALSE = {   # variable extended upward
    "copy_col": (Direction.LEFT, Direction.RIGHT, Direction.UP, Direction.DOWN),
    "copy_row": (Direction.RIGHT, Direction.DOWN, Direction.UP, Direction.LEFT),
    "blocker": (Direction.UP, Direction.DOWN, Direction.RIGHT, Direction.LEFT),
    "anchor_side": (Direction.RIGHT, Direction.LEFT, Direction.UP, Direction.DOWN),
    "anchor_below": (Direction.DOWN, Direction.UP, Direction.LEFT, Direction.RIGHT),
}
_HINTS_TRUE = {    # variable extended to the right
    "copy_col": (Direction.UP, Direction.LEFT, Direction.RIGHT, Direction.DOWN),
    "copy_row": (Direction.DOWN, Direction.RIGHT, Direction.UP, Direction.LEFT),
    "blocker": (Direction.RIGHT, Direction.DOWN, Direction.UP, Direction.LEFT),
    "anchor_side": (Direction.LEFT, Direction.RIGHT, Direction.UP, Direction.DOWN),
    "anchor_below": (Direction.UP, Direction.DOWN, Direction.LEFT, Direction.RIGHT),
}


def naesat_witness(phi: NaeFormula, tau,
                   artifact: Optional[ReductionArtifact] = None) -> dict:
    """Full extension realizing a not-all-equal satisfying assignment.

    Variable squares follow tau (true -> right, false -> up) and guards step
    onto their own border; the remaining squares are routed by the exact
    searcher with role-derived direction preferences.  The result extends
    every square at density <= 2 or a WitnessError explains why not.
    """
    if artifact is None:
        artifact = reduce_naesat(phi)
    if set(tau) != set(range(1, phi.num_vars + 1)):
        raise WitnessError("tau must assign every variable")
    if not nae_satisfies(phi, tau):
        raise WitnessError("tau is not a not-all-equal satisfying assignment")

    instance = artifact.instance
    roles = artifact.role_map
    by_id = {s.id: s for s in instance.squares}

    fixed = {}
    hints = {}
    for sq_id, role in roles.items():
        kind = role.split("[", 1)[0]
        if kind == "var":
            i = int(role.split("[")[1].rstrip("]"))
            fixed[sq_id] = Direction.RIGHT if tau[i] else Direction.UP
        elif kind == "guard":
            fixed[sq_id] = _nearest_border(by_id[sq_id], instance.m)
        elif kind in ("copy_col", "copy_row", "blocker", "anchor_side", "anchor_below"):
            i = int(role.split("[")[1].rstrip("]"))
            table = _HINTS_TRUE if tau[i] else _HINTS_FALSE
            hints[sq_id] = table[kind]
        elif kind == "clause_up":
            j, x_pos = (int(part.rstrip("]")) for part in role.split("[")[1:])
            v = sorted(phi.clauses[j - 1])[x_pos - 1]
            if tau[v]:
                hints[sq_id] = (Direction.UP, Direction.RIGHT,
                                Direction.LEFT, Direction.DOWN)
            else:
                hints[sq_id] = (Direction.LEFT, Direction.RIGHT,
                                Direction.UP, Direction.DOWN)
        elif kind == "clause_right":
            j, x_pos = (int(part.rstrip("]")) for part in role.split("[")[1:])
            v = sorted(phi.clauses[j - 1])[x_pos - 1]
            if not tau[v]:
                hints[sq_id] = (Direction.RIGHT, Direction.UP,
                                Direction.DOWN, Direction.LEFT)
            else:
                hints[sq_id] = (Direction.DOWN, Direction.UP,
                                Direction.RIGHT, Direction.LEFT)
        elif kind == "dummy_P":
            hints[sq_id] = (Direction.LEFT, Direction.RIGHT,
                            Direction.UP, Direction.DOWN)
        elif kind == "dummy_Q":
            hints[sq_id] = (Direction.DOWN, Direction.UP,
                            Direction.LEFT, Direction.RIGHT)

    result = exact_backtracking(instance, "all", fixed=fixed,
                                value_order=hints, node_budget=20_000_000)
    if result.status != "ok":
        raise WitnessError("witness search exhausted its budget")
    if not result.all_extended:
        raise WitnessError("construction admits no full extension for this tau")
    report = grid_density(instance, result.witness)
    if report.max_density > instance.d:
        raise WitnessError(f"witness breaches density: {report}")
    return result.witness


# ---------------------------------------------------------------------------
# Multicolored clique -> constrained rectangle escape at density 2
# ---------------------------------------------------------------------------


def _selection_rect(i: int, j: int, t: int, rect_id: int) -> Rect:
    x = 2 + 2 * j
    y = 3 + j + (2 * t + 5) * (i - 1)
    return Rect(rect_id, x, y, x + 1, y + t + 1)


def reduce_mcc(g: MccGraph) -> ReductionArtifact:
    """Rectangle instance for the constrained problem at (p, q) = (k, kC2).

    Selection rects (one per vertex) can only escape rightward, at most one
    per part; edge squares can only escape downward, and only when the
    escaped selection rects match the edge's endpoints (the incidence rects
    create a density-3 point otherwise).  Guards pin every other direction;
    the guards are exactly the non-internal rects.
    """
    k, t = g.k, g.t
    if k >= 2 * t + 5:
        raise ValidationError("construction requires k < 2t+5")
    band = 2 * t + 5
    L = len(g.edges)
    X = 3 * t + 12 * max(L, 1) + 6
    Y = band * band + 4
    region = Region(0, 0, X, Y)

    rects = []
    roles = {}
    next_id = [1]

    def add(x0, y0, x1, y1, role):
        rect = Rect(next_id[0], x0, y0, x1, y1)
        next_id[0] += 1
        rects.append(rect)
        roles[rect.id] = role
        return rect

    selection = {}
    for i in range(1, k + 1):
        for j in range(1, t + 1):
            r = _selection_rect(i, j, t, next_id[0])
            next_id[0] += 1
            rects.append(r)
            roles[r.id] = f"select[{i}][{j}]"
            selection[(i, j)] = r

    edge_squares = {}
    for ell, (u, v) in enumerate(g.edges, start=1):
        x = 3 * t + 12 * ell
        r = add(x, band * band, x + 1, band * band + 1, f"edge[{ell}]")
        edge_squares[ell] = r
        for vertex in (u, v):
            part, idx = g.part_and_index(vertex)
            top_of = lambda jj: 3 + jj + t + 1 + band * (part - 1)
            bottom_of = lambda jj: 3 + jj + band * (part - 1)
            wx0 = x - 3
            add(wx0, top_of(idx), wx0 + 7, band * (part - 1) + 2 * t + 6,
                f"inc_upper[{ell}][{part}]")
            add(wx0, band * (part - 1) + 2, wx0 + 7, bottom_of(idx),
                f"inc_lower[{ell}][{part}]")

    # guards: double walls left/top, selection floor, right wall H and stops
    add(0, 0, 1, Y, "guard_left#1")
    add(0, 0, 1, Y, "guard_left#2")
    add(1, Y - 1, X - 1, Y, "guard_top#1")
    add(1, Y - 1, X - 1, Y, "guard_top#2")
    add(3, 0, 2 * t + 4, 1, "guard_select_floor#1")
    add(3, 0, 2 * t + 4, 1, "guard_select_floor#2")
    add(X - 1, 0, X, Y - 1, "guard_right_wall")
    add(X - 1, band * band, X, band * band + 1, "guard_edge_stop")
    for i in range(1, k + 1):
        add(X - 1, band * i, X, band * i + 1, f"guard_upper_stop[{i}]")
        add(X - 1, band * (i - 1) + 2, X, band * (i - 1) + 3, f"guard_lower_stop[{i}]")
    # floors that pin the incidence rects while leaving the edge column open
    for ell in range(1, L + 1):
        x = 3 * t + 12 * ell
        for copy_no in (1, 2):
            add(x - 3, 0, x, 1, f"guard_inc_floor_left[{ell}]#{copy_no}")
            add(x + 1, 0, x + 4, 1, f"guard_inc_floor_right[{ell}]#{copy_no}")

    instance = Instance(region, tuple(rects), d=2)
    return ReductionArtifact(
        instance=instance,
        role_map=roles,
        params={"d": 2, "p": k, "q": k * (k - 1) // 2},
        metadata={"region": (0, 0, X, Y),
                  "incidence_floor_note":
                      "floor guards flank each edge column; widths chosen "
                      "minimal so incidence rects cannot escape downward "
                      "while edge squares still can"},
    )


def mcc_witness(g: MccGraph, clique) -> dict:
    """Assignment realizing a multicolored clique: chosen selection rects go
    right, clique-edge squares go down, everything else stays."""
    chosen = tuple(clique)
    if len(chosen) != g.k:
        raise WitnessError("clique must pick exactly one vertex per part")
    parts = [g.part_and_index(v)[0] for v in chosen]
    if sorted(parts) != list(range(1, g.k + 1)):
        raise WitnessError("clique must pick one vertex from each part")
    edge_set = {frozenset(e) for e in g.edges}
    for u, v in itertools.combinations(chosen, 2):
        if frozenset((u, v)) not in edge_set:
            raise WitnessError(f"({u},{v}) is not an edge")

    artifact = reduce_mcc(g)
    roles = artifact.role_map
    by_role = {role: rect_id for rect_id, role in roles.items()}
    assignment = {rect_id: None for rect_id in artifact.instance.ids}
    for v in chosen:
        part, idx = g.part_and_index(v)
        assignment[by_role[f"select[{part}][{idx}]"]] = Direction.RIGHT
    for ell, (u, v) in enumerate(g.edges, start=1):
        if frozenset((u, v)) <= set(chosen):
            assignment[by_role[f"edge[{ell}]"]] = Direction.DOWN
    return assignment
