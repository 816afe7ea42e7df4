"""Common result record for every solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union


@dataclass(frozen=True)
class Solution:
    """An assignment together with its provenance.

    ``claimed_ratio`` is the worst-case approximation guarantee of the
    producing algorithm (a Fraction), or a label such as "exact" or
    "heuristic".  ``infeasible_input`` flags inputs whose density already
    exceeds the budget; such solutions are empty and carry no guarantee.
    """

    assignment: dict
    extended_count: int
    algorithm_tag: str
    claimed_ratio: Union[Fraction, str]
    infeasible_input: bool = False


def count_extended(assignment: dict) -> int:
    return sum(1 for v in assignment.values() if v is not None)
