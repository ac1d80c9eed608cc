"""Exact sparse row reduction and a fast modular rank engine.

Rows live over a fixed ordered column set.  The eliminator keeps rows in
row-echelon form with the deterministic pivot rule "first nonzero entry
under the column order".  Over plain Q the arithmetic is fraction-free
(integer cross-multiplication with content stripping); over other fields
it divides by the pivot.  Each stored row can carry a trail expressing
it as an exact combination of the rows fed in, which callers replay as
membership certificates.

The modular engine computes matrix rank over F_p with dense float64
BLAS blocks.  A mod-p rank never exceeds the rational rank, so a caller
holding a matching upper bound can certify exactness; otherwise it must
fall back to the exact eliminator.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from fractions import Fraction
from math import comb, gcd

import numpy as np

from .errors import BudgetExceededError

DEFAULT_BUDGET = 2 * 10**7

# below 2**20, so 8192-term float64 dot products stay exact (< 2**53)
MOD_P = 999983

_budget_override = None


@contextmanager
def budget_limit(n):
    """Scoped matrix entry budget; takes precedence over DALG_BUDGET."""
    global _budget_override
    prev = _budget_override
    _budget_override = n
    try:
        yield
    finally:
        _budget_override = prev


def current_budget():
    """Matrix entry budget; the DALG_BUDGET variable overrides the default."""
    if _budget_override is not None:
        return _budget_override
    raw = os.environ.get("DALG_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_BUDGET


def check_budget(rows, cols, budget=None):
    budget = current_budget() if budget is None else budget
    if rows * cols > budget:
        raise BudgetExceededError(rows, cols, budget)


# ---------------------------------------------------------------------------
# monomial layers

def degree_monomials(varkeys, k):
    """Monomials of total degree k, in descending grevlex order.

    varkeys must be sorted ascending; for dense exponent tuples over an
    ascending variable list, ascending tuple order is descending grevlex,
    so the exponent tuples are emitted in plain sorted order.
    """
    v = len(varkeys)
    out = []

    def rec(pos, remaining, acc):
        if pos == v - 1:
            acc.append(remaining)
            out.append(tuple(acc))
            acc.pop()
            return
        for e in range(remaining + 1):
            acc.append(e)
            rec(pos + 1, remaining - e, acc)
            acc.pop()

    if v == 0:
        return [()] if k == 0 else []
    rec(0, k, [])
    return [
        tuple((varkeys[i], e) for i, e in enumerate(exps) if e)
        for exps in out
    ]


def monomial_count(v, k):
    return comb(v - 1 + k, v - 1)


# ---------------------------------------------------------------------------
# exact sparse eliminator

class SparseEliminator:
    """Incremental row echelon form over Q (integer rows) or a Field."""

    def __init__(self, ncols, field=None, track=False):
        self.ncols = ncols
        self.field = field
        self.int_mode = field is None or (
            field.desc.kind == "Q" and not field.desc.params and not field.desc.has_x
        )
        self.track = track
        self.rows = []
        self.trails = []
        self.pivot_of_col = {}
        self.pivot_col_of_row = []

    @property
    def rank(self):
        return len(self.rows)

    # -- integer rows ---------------------------------------------------

    @staticmethod
    def _strip_int(row, trail):
        g = 0
        for v in row.values():
            g = gcd(g, v)
            if g == 1:
                return row, trail
        if g > 1:
            row = {c: v // g for c, v in row.items()}
            if trail is not None:
                trail = {t: v / g for t, v in trail.items()}
        return row, trail

    def _add_int(self, row, trail):
        while row:
            c = min(row)
            p = self.pivot_of_col.get(c)
            if p is None:
                row, trail = self._strip_int(row, trail)
                if row[c] < 0:
                    row = {cc: -v for cc, v in row.items()}
                    if trail is not None:
                        trail = {t: -v for t, v in trail.items()}
                self.pivot_of_col[c] = len(self.rows)
                self.rows.append(row)
                self.pivot_col_of_row.append(c)
                self.trails.append(trail)
                return c
            prow = self.rows[p]
            a, b = prow[c], row[c]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            new = {}
            for cc, v in row.items():
                new[cc] = v * ma
            for cc, v in prow.items():
                w = new.get(cc, 0) - v * mb
                if w:
                    new[cc] = w
                else:
                    new.pop(cc, None)
            row = new
            if trail is not None:
                fa, fb = Fraction(ma), Fraction(mb)
                ptrail = self.trails[p]
                nt = {t: v * fa for t, v in trail.items()}
                for t, v in ptrail.items():
                    w = nt.get(t, 0) - v * fb
                    if w:
                        nt[t] = w
                    else:
                        nt.pop(t, None)
                trail = nt
        return None

    # -- field rows -------------------------------------------------------

    def _add_field(self, row, trail):
        f = self.field
        while row:
            c = min(row)
            p = self.pivot_of_col.get(c)
            if p is None:
                inv = f.one / row[c]
                row = {cc: v * inv for cc, v in row.items()}
                if trail is not None:
                    trail = {t: v * inv for t, v in trail.items()}
                self.pivot_of_col[c] = len(self.rows)
                self.rows.append(row)
                self.pivot_col_of_row.append(c)
                self.trails.append(trail)
                return c
            prow = self.rows[p]
            factor = row[c]
            new = {}
            for cc, v in row.items():
                new[cc] = v
            for cc, v in prow.items():
                w = new.get(cc, f.zero) - v * factor
                if f.is_zero(w):
                    new.pop(cc, None)
                else:
                    new[cc] = w
            row = new
            if trail is not None:
                ptrail = self.trails[p]
                nt = dict(trail)
                for t, v in ptrail.items():
                    w = nt.get(t, f.zero) - v * factor
                    if f.is_zero(w):
                        nt.pop(t, None)
                    else:
                        nt[t] = w
                trail = nt
        return None

    def add_row(self, row, tag=None):
        """Reduce a row and store it if independent; returns its pivot column.

        Integer mode expects integer entries; field mode expects Coeff.
        """
        if not row:
            return None
        trail = {tag: Fraction(1) if self.int_mode else self.field.one} if self.track else None
        if self.int_mode:
            return self._add_int(dict(row), trail)
        return self._add_field(dict(row), trail)

    def row_fractions(self, i):
        """Entries of stored row i over Q as {col: Fraction} (integer mode)."""
        return {c: Fraction(v) for c, v in self.rows[i].items()}

    def trail_of(self, i):
        return self.trails[i]


# ---------------------------------------------------------------------------
# modular rank

def modp_rank(rows, ncols, p=MOD_P, chunk=256):
    """Rank over F_p of integer rows; never exceeds the rank over Q."""
    pivcols = []
    pivmat = np.zeros((0, ncols))
    buf = np.zeros((chunk, ncols))
    nbuf = 0

    def flush(block):
        nonlocal pivcols, pivmat
        if pivcols:
            sel = block[:, pivcols]
            # accumulate in slices so dot products stay below 2**53
            step = 8192
            for s in range(0, len(pivcols), step):
                block = block - sel[:, s:s + step] @ pivmat[s:s + step]
                block %= p
        for i in range(block.shape[0]):
            r = block[i]
            nz = np.nonzero(r)[0]
            if nz.size == 0:
                continue
            c = int(nz[0])
            inv = pow(int(r[c]), p - 2, p)
            r = (r * inv) % p
            if i + 1 < block.shape[0]:
                col = block[i + 1:, c].copy()
                mask = col != 0
                if mask.any():
                    block[i + 1:][mask] = (block[i + 1:][mask] - np.outer(col[mask], r)) % p
            if pivcols:
                col = pivmat[:, c].copy()
                mask = col != 0
                if mask.any():
                    pivmat[mask] = (pivmat[mask] - np.outer(col[mask], r)) % p
            pivmat = np.vstack([pivmat, r[None, :]])
            pivcols.append(c)

    for row in rows:
        for c, v in row.items():
            buf[nbuf, c] = v % p
        nbuf += 1
        if nbuf == chunk:
            flush(buf[:nbuf].copy())
            buf[:] = 0.0
            nbuf = 0
    if nbuf:
        flush(buf[:nbuf].copy())
    return len(pivcols)
