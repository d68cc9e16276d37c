"""Barycentric grids on the unit simplex {theta >= 0, sum theta = 1}."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

from .errors import InputError


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer tuples of length `parts` summing to `total`, lex order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def barycentric_grid(n: int, d: int) -> list[tuple[Fraction, ...]]:
    """All rational points (i_1/d, ..., i_n/d) with i_k >= 0 summing to d.

    Doubling d refines the grid: every point of resolution d reappears at 2d.
    """
    if n < 1:
        raise InputError("grid dimension must be >= 1")
    if d < 1:
        raise InputError("grid resolution must be >= 1")
    return [tuple(Fraction(i, d) for i in comp) for comp in compositions(d, n)]


def grid_size(n: int, d: int) -> int:
    return math.comb(n + d - 1, n - 1)
