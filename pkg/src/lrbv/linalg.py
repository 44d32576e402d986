"""Exact rank of sparse rational matrices by fraction-free elimination.

Rows are dicts ``column -> Fraction``.  Each row is scaled to a primitive
integer vector; eliminating ``row`` against a pivot row ``p`` uses
``p[c] * row - row[c] * p`` followed by division by the content, so entries
stay integral and small.  Pivots are the smallest live column, which makes the
elimination order deterministic given the column numbering.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping


def _primitive(row: Mapping[int, int | Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items() if v}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
        if g == 1:
            return ints
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


class Echelon:
    """Incremental row echelon form; ``add`` returns True when the row was independent."""

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: Mapping[int, int | Fraction]) -> bool:
        r = _primitive(row)
        while r:
            col = min(r)
            p = self.pivots.get(col)
            if p is None:
                self.pivots[col] = r
                return True
            a, b = p[col], r[col]
            new = {c: a * v for c, v in r.items()}
            for c, v in p.items():
                s = new.get(c, 0) - b * v
                if s:
                    new[c] = s
                else:
                    new.pop(c, None)
            r = _primitive(new)
        return False


def rank(rows: Iterable[Mapping[int, int | Fraction]]) -> int:
    ech = Echelon()
    for row in rows:
        ech.add(row)
    return ech.rank


def matmul_rows(first: list[dict[int, Fraction]], second: list[dict[int, Fraction]]) -> list[dict[int, Fraction]]:
    """Row-vector convention: ``(x A) B``; row ``i`` of the result is ``sum_j first[i][j] * second[j]``."""
    out = []
    for row in first:
        acc: dict[int, Fraction] = {}
        for j, v in row.items():
            for c, w in second[j].items():
                s = acc.get(c, 0) + v * w
                if s:
                    acc[c] = s
                else:
                    acc.pop(c, None)
        out.append(acc)
    return out
