"""Compressed-cell engine shared by the exact solvers.

Compresses an instance's coordinates (rect sides plus region borders) into a
grid of homogeneous half-open cells.  Bodies and extension strips become
bitmasks over cells, and configurations are tracked with carry-save counters
(one big integer per binary digit), so a density check during search is a
handful of bitwise operations regardless of how many rects are involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (DIRECTION_ORDER, Direction, Instance, extension_strip)


def _plane_count(d: int) -> int:
    # capacity 2^planes - 1 must reach d + 1 so "count > d" is exact
    return (d + 1).bit_length()


@dataclass
class CounterState:
    """Immutable saturating per-cell counters; planes are cell bitmasks."""

    planes: tuple
    overflow: int


class CellGrid:
    """Compressed-cell view of an instance."""

    def __init__(self, instance: Instance):
        self.instance = instance
        region = instance.region
        xs = {region.x_min, region.x_max}
        ys = {region.y_min, region.y_max}
        for r in instance.rects:
            xs.update((r.x_min, r.x_max))
            ys.update((r.y_min, r.y_max))
        self.xs = sorted(xs)
        self.ys = sorted(ys)
        self.nx = len(self.xs) - 1
        self.ny = len(self.ys) - 1
        self._x_index = {v: i for i, v in enumerate(self.xs)}
        self._y_index = {v: i for i, v in enumerate(self.ys)}
        self._strip_masks = {}
        self._body_masks = {}

        counts = np.zeros((self.nx, self.ny), dtype=np.int64)
        for r in instance.rects:
            ix0, ix1 = self._x_index[r.x_min], self._x_index[r.x_max]
            iy0, iy1 = self._y_index[r.y_min], self._y_index[r.y_max]
            counts[ix0:ix1, iy0:iy1] += 1
        self.input_counts = counts

        planes = _plane_count(instance.d)
        state = CounterState((0,) * planes, 0)
        for r in instance.rects:
            state = self.add(state, self.body_mask(r.id))
        self.base_state = state

    # -- masks ---------------------------------------------------------------

    def area_mask(self, area) -> int:
        """Bitmask of cells inside a half-open (x0, y0, x1, y1) area."""
        if area is None:
            return 0
        x0, y0, x1, y1 = area
        ix0, ix1 = self._x_index[x0], self._x_index[x1]
        iy0, iy1 = self._y_index[y0], self._y_index[y1]
        column = ((1 << (iy1 - iy0)) - 1) << iy0
        mask = 0
        for ix in range(ix0, ix1):
            mask |= column << (ix * self.ny)
        return mask

    def body_mask(self, rect_id: int) -> int:
        if rect_id not in self._body_masks:
            r = self.instance.rect_by_id(rect_id)
            self._body_masks[rect_id] = self.area_mask((r.x_min, r.y_min, r.x_max, r.y_max))
        return self._body_masks[rect_id]

    def strip_mask(self, rect_id: int, direction: Direction) -> int:
        """Cells newly covered when the rect escapes in ``direction``."""
        key = (rect_id, direction)
        if key not in self._strip_masks:
            r = self.instance.rect_by_id(rect_id)
            strip = extension_strip(r, self.instance.region, direction)
            self._strip_masks[key] = self.area_mask(strip)
        return self._strip_masks[key]

    # -- counters ------------------------------------------------------------

    def add(self, state: CounterState, mask: int) -> CounterState:
        carry = mask
        planes = []
        for plane in state.planes:
            planes.append(plane ^ carry)
            carry &= plane
        return CounterState(tuple(planes), state.overflow | carry)

    def exceeds(self, state: CounterState, d: int) -> bool:
        """True iff some cell count is greater than ``d``."""
        if state.overflow:
            return True
        gt = 0
        eq = -1  # all ones
        for i in range(len(state.planes) - 1, -1, -1):
            plane = state.planes[i]
            if (d >> i) & 1:
                eq &= plane
            else:
                gt |= eq & plane
                eq &= ~plane
        return gt != 0

    def add_if_feasible(self, state: CounterState, mask: int, d: int):
        """Add ``mask`` and return the new state, or None on a density breach."""
        new = self.add(state, mask)
        if self.exceeds(new, d):
            return None
        return new

    # -- queries on input density --------------------------------------------

    def max_input_density(self) -> int:
        return int(self.input_counts.max()) if self.input_counts.size else 0

    def max_input_density_in(self, area) -> int:
        if area is None:
            return 0
        x0, y0, x1, y1 = area
        ix0, ix1 = self._x_index[x0], self._x_index[x1]
        iy0, iy1 = self._y_index[y0], self._y_index[y1]
        window = self.input_counts[ix0:ix1, iy0:iy1]
        return int(window.max()) if window.size else 0

    def cell_corners(self) -> list:
        """Lower-left corner of every compressed cell, in (x, y) lex order."""
        return [(self.xs[ix], self.ys[iy])
                for ix in range(self.nx) for iy in range(self.ny)]

    def cell_input_density(self, ix: int, iy: int) -> int:
        return int(self.input_counts[ix, iy])

    def allowed_directions(self, rect_id: int, d=None) -> list:
        """Directions whose solo extension keeps density within ``d``."""
        if d is None:
            d = self.instance.d
        r = self.instance.rect_by_id(rect_id)
        out = []
        for direction in DIRECTION_ORDER:
            strip = extension_strip(r, self.instance.region, direction)
            if self.max_input_density_in(strip) < d:
                out.append(direction)
        return out
