"""Exact linear algebra: a sparse echelon keyed by leading monomial and small
dense helpers (rank, kernel) over Q(i)."""

from __future__ import annotations

import heapq
from typing import Optional, Sequence

from ..exactpoly.scalar import div


class Echelon:
    """Rows with pairwise distinct leading monomials under a monomial order.

    Rows are stored as given (not rescaled).  Reduction subtracts multiples
    of stored rows from the current leading term downwards.
    """

    def __init__(self, order_key):
        self._order_key = order_key
        self._neg: dict = {}
        self.pivots: dict = {}  # lead exponent -> (row id, terms, lead coefficient)

    def _nkey(self, e):
        k = self._neg.get(e)
        if k is None:
            k = tuple(-v for v in self._order_key(e))
            self._neg[e] = k
        return k

    def __len__(self):
        return len(self.pivots)

    def lead(self, terms: dict):
        return min(terms, key=self._nkey) if terms else None

    def reduce(self, terms: dict, full: bool = False, track: bool = False):
        """Return ``(remainder, combination)`` with
        ``terms = remainder + sum(coef * row)``.

        With ``full=False`` the loop stops at the first leading term that is
        not a pivot (enough for membership and insertion).
        """
        rem = dict(terms)
        combo: dict = {}
        heap = [(self._nkey(e), e) for e in rem]
        heapq.heapify(heap)
        kept: dict = {}
        pivots = self.pivots
        while heap:
            _, e = heapq.heappop(heap)
            c = rem.get(e)
            if c is None:
                continue
            piv = pivots.get(e)
            if piv is None:
                if not full:
                    break
                kept[e] = rem.pop(e)
                continue
            rid, row, lc = piv
            f = div(c, lc)
            for e2, c2 in row.items():
                v = rem.get(e2)
                if v is None:
                    rem[e2] = -(f * c2)
                    heapq.heappush(heap, (self._nkey(e2), e2))
                else:
                    v = v - f * c2
                    if v == 0:
                        del rem[e2]
                    else:
                        rem[e2] = v
            if track:
                combo[rid] = combo.get(rid, 0) + f
        if full:
            kept.update(rem)
            rem = kept
        return rem, combo

    def insert(self, row_id, terms: dict):
        """Insert an already reduced, nonzero row."""
        e = self.lead(terms)
        if e in self.pivots:
            raise ValueError("leading monomial already used by another row")
        self.pivots[e] = (row_id, terms, terms[e])
        return e

    def contains(self, terms: dict) -> bool:
        rem, _ = self.reduce(terms)
        return not rem


# -- dense helpers --------------------------------------------------------------


def rref(rows: Sequence[Sequence]):
    """Reduced row echelon form; returns ``(matrix, pivot columns)``."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        lead = m[r][c]
        m[r] = [div(v, lead) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def kernel(rows: Sequence[Sequence], ncols: Optional[int] = None) -> list:
    """Basis of ``{v : M v = 0}``."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis
