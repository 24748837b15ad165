"""Exact sparse linear algebra over Q.

Rows are dicts ``{column: value}`` with hashable, orderable column keys.
Rank uses fraction-free elimination on integer rows (content removed after
each step); kernels use reduced echelon form over mpq.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence

import gmpy2
from gmpy2 import mpq

from .poly_core import ZERO, QQ

Row = Mapping[Hashable, object]


def _integer_row(row: Row) -> dict:
    vals = [QQ(v) for v in row.values() if v]
    if not vals:
        return {}
    den = 1
    for v in vals:
        den = gmpy2.lcm(den, v.denominator)
    out = {c: int(QQ(v) * den) for c, v in row.items() if v}
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gmpy2.gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


class IntEchelon:
    """Incremental fraction-free echelon basis; ``add`` reports independence."""

    def __init__(self):
        self.pivots: dict = {}  # pivot column -> integer row

    def reduce(self, row: Row) -> dict:
        r = _integer_row(row)
        while r:
            hit = None
            for c in r:
                if c in self.pivots:
                    hit = c
                    break
            if hit is None:
                return r
            prow = self.pivots[hit]
            a, b = prow[hit], r[hit]
            g = gmpy2.gcd(a, b)
            a, b = a // g, b // g
            new = {c: a * v for c, v in r.items()}
            for c, v in prow.items():
                nv = new.get(c, 0) - b * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            r = _primitive(new)
        return r

    def add(self, row: Row) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        self.pivots[max(r)] = r
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(rows: Iterable[Row]) -> int:
    ech = IntEchelon()
    for r in rows:
        ech.add(r)
    return ech.rank


def rref(rows: Iterable[Row], columns: Sequence[Hashable]) -> tuple[list[dict], list]:
    """Reduced row echelon form over Q with pivots chosen in ``columns`` order."""
    pos = {c: i for i, c in enumerate(columns)}
    basis: list[dict] = []
    pivcols: list = []
    for row in rows:
        r = {c: QQ(v) for c, v in row.items() if v}
        for b, pc in zip(basis, pivcols):
            v = r.get(pc)
            if v:
                for c, bv in b.items():
                    nv = r.get(c, ZERO) - v * bv
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
        if not r:
            continue
        pc = min(r, key=pos.__getitem__)
        inv = 1 / r[pc]
        r = {c: v * inv for c, v in r.items()}
        for b in basis:
            v = b.get(pc)
            if v:
                for c, rv in r.items():
                    nv = b.get(c, ZERO) - v * rv
                    if nv:
                        b[c] = nv
                    else:
                        b.pop(c, None)
        basis.append(r)
        pivcols.append(pc)
    return basis, pivcols


def nullspace(rows: Iterable[Row], columns: Sequence[Hashable]) -> list[dict]:
    """Basis of {v : row . v = 0 for all rows}, one vector per free column."""
    basis, pivcols = rref(rows, columns)
    piv = set(pivcols)
    out = []
    for free in columns:
        if free in piv:
            continue
        v = {free: mpq(1)}
        for b, pc in zip(basis, pivcols):
            c = b.get(free)
            if c:
                v[pc] = -c
        out.append(v)
    return out


def kernel_dim(rows: Iterable[Row], ncols: int) -> int:
    return ncols - rank(rows)
