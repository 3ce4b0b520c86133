"""Incremental exact row space over the rationals, stored in integers.

Rows are reduced by cross-multiplication only (no division, no floats), with
a gcd content normalisation after every elimination to keep entries small.
Scaling a row by a non-zero rational does not change the row space, so the
rank and membership answers are exact.
"""

from __future__ import annotations

import math
from functools import reduce
from typing import Iterable, Sequence

__all__ = ["IntRowSpace"]


def _normalize(row: list[int]) -> list[int]:
    g = reduce(math.gcd, row, 0)
    if g > 1:
        row = [x // g for x in row]
    for x in row:
        if x:
            return row if x > 0 else [-v for v in row]
    return row


class IntRowSpace:
    """Row space of integer vectors with exact incremental rank."""

    def __init__(self, width: int):
        self.width = width
        self._pivots: list[tuple[int, list[int]]] = []  # (leading col, row)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _residual(self, row: Sequence[int]) -> list[int]:
        r = [int(x) for x in row]
        if len(r) != self.width:
            raise ValueError(f"expected width {self.width}, got {len(r)}")
        for col, prow in self._pivots:
            a = r[col]
            if a:
                b = prow[col]
                r = _normalize([x * b - y * a for x, y in zip(r, prow)])
        return r

    def add(self, row: Sequence[int]) -> bool:
        """Insert the row; returns True when it enlarged the space."""
        r = self._residual(row)
        for col, x in enumerate(r):
            if x:
                self._pivots.append((col, r))
                self._pivots.sort(key=lambda p: p[0])
                return True
        return False

    def contains(self, row: Sequence[int]) -> bool:
        """Is the row a rational linear combination of the inserted rows?"""
        return not any(self._residual(row))

    def extend(self, rows: Iterable[Sequence[int]]) -> int:
        added = 0
        for row in rows:
            if self.add(row):
                added += 1
        return added
