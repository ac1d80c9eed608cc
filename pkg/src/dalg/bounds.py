"""Closed-form degree bounds, order/degree curves, and the random
algebraic-relation experiment.

The main bound states that an annihilator of order r and degree k exists
as soon as k > (r+1) * (d^(1+(r_min-r_l)/(r-r_min+1)) - 1).  The
underlying counting inequality C(r+1+k, r+1) > d^(r-r_l+1) * C(r_min+k, k)
is usually satisfied earlier; sufficiency_k finds its exact onset by
integer scan.  Non-integral exponents are handled without floating-point
rounding: k > (r+1)*(d^(p/q)-1) holds iff (k+r+1)^q > d^p * (r+1)^q,
an exact integer comparison.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, gcd

from .errors import DalgError, HypothesisError
from .linalg import SparseEliminator


def _validate(d, r_min, r_l, r):
    if d < 1:
        raise DalgError("d must be a positive integer")
    if r_min < 0 or r_l < 0 or r_l > r_min:
        raise DalgError("need 0 <= r_l <= r_min")
    if r < r_min:
        raise DalgError(f"r = {r} is below r_min = {r_min}")


@dataclass
class ThresholdBound:
    k_min: int
    exact: bool
    threshold_fraction: Fraction | None
    threshold_float: float

    @property
    def threshold(self):
        return self.threshold_fraction if self.exact else self.threshold_float

    @property
    def display(self):
        if self.exact:
            t = self.threshold_fraction
            return str(t.numerator) if t.denominator == 1 else str(t)
        return f"{self.threshold_float:.6g}"


def _strictly_above(threshold_pred, k_start=1):
    k = max(1, k_start)
    while not threshold_pred(k):
        k += 1
    while k > 1 and threshold_pred(k - 1):
        k -= 1
    return k


def theorem_bound(d, r_min, r_l, r):
    """Smallest integer k strictly above (r+1)*(d^(1+(r_min-r_l)/(r-r_min+1))-1)."""
    _validate(d, r_min, r_l, r)
    p = r - r_l + 1
    q = r - r_min + 1
    g = gcd(p, q)
    p, q = p // g, q // g
    if q == 1:
        t = Fraction((r + 1) * (d ** p - 1))
        return ThresholdBound(k_min=int(t) + 1, exact=True,
                              threshold_fraction=t, threshold_float=float(t))
    tf = (r + 1) * (d ** (p / q) - 1)
    dp = d ** p
    rq = (r + 1) ** q

    def above(k):
        return (k + r + 1) ** q > dp * rq

    k_min = _strictly_above(above, int(tf) - 2)
    return ThresholdBound(k_min=k_min, exact=False,
                          threshold_fraction=None, threshold_float=tf)


def sufficiency_k(d, r_min, r_l, r):
    """Exact onset of the counting inequality behind the main bound."""
    _validate(d, r_min, r_l, r)
    dpow = d ** (r - r_l + 1)
    k = 1
    while comb(r + 1 + k, r + 1) <= dpow * comb(r_min + k, k):
        k += 1
    return k


def plus_times_bound(degQ, d, r_min, r):
    """Degree bound for Q(f_1, ..., f_n): main bound with d -> degQ*d, r_l = 0."""
    if degQ < 1:
        raise DalgError("degQ must be a positive integer")
    return theorem_bound(degQ * d, r_min, 0, r).k_min


def div_bound(degQn, degQd, d, r_min, r):
    """Degree bound for the quotient system: degQ = max(degQn, degQd)."""
    if degQn < 0 or degQd < 1:
        raise DalgError("need degQn >= 0 and degQd >= 1")
    return plus_times_bound(max(degQn, degQd, 1), d, r_min, r)


def composition_bound(r1, r2, d1, d2):
    """Smallest k strictly above (r1+r2+1)*((r1+r2+1)! * d1^r2 * d2^r1 - 1)."""
    if min(r1, r2) < 0 or min(d1, d2) < 1:
        raise DalgError("orders must be >= 0 and degrees >= 1")
    s = r1 + r2 + 1
    return s * (factorial(s) * d1 ** r2 * d2 ** r1 - 1) + 1


# ---------------------------------------------------------------------------
# order/degree curve

@dataclass
class CurvePoint:
    r: int
    k_min: int
    monomial_count: int


def curve(d, r_min, r_l, r_from, r_to):
    points = []
    for r in range(r_from, r_to + 1):
        k = sufficiency_k(d, r_min, r_l, r)
        points.append(CurvePoint(r=r, k_min=k,
                                 monomial_count=comb(k + r + 1, r + 1)))
    return points


def curve_to_csv(points):
    lines = ["r,k_min,monomial_count"]
    lines.extend(f"{p.r},{p.k_min},{p.monomial_count}" for p in points)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# random algebraic-relation experiment

@dataclass
class RelationReport:
    n: int
    d: int
    seed: int
    k_observed: int
    k_counting: int
    k_theorem_bound: int

    def to_json(self):
        return {"n": self.n, "d": self.d, "seed": self.seed,
                "k_observed": self.k_observed,
                "k_counting": self.k_counting,
                "k_theorem_bound": self.k_theorem_bound}


def _monomials_upto(n, d):
    out = []

    def rec(pos, left, acc):
        if pos == n:
            out.append(tuple(acc))
            return
        for e in range(left + 1):
            acc.append(e)
            rec(pos + 1, left - e, acc)
            acc.pop()

    rec(0, d, [])
    return out


def _pmul(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            c = out.get(m, 0) + ca * cb
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def _sample_poly(rng, n, d):
    while True:
        poly = {}
        for m in _monomials_upto(n, d):
            c = rng.randint(-9, 9)
            if c:
                poly[m] = c
        if any(sum(m) == d for m in poly):
            return poly


def _relation_exists(polys, n, d, k):
    """Nonzero F of total degree <= k with F(p_0..p_n) = 0?"""
    cols = {m: i for i, m in enumerate(_monomials_upto(n, k * d))}
    wmonos = sorted(_monomials_upto(n + 1, k), key=lambda m: (sum(m), m))
    products = {}
    nrows = 0
    elim = SparseEliminator(len(cols))
    one = {tuple([0] * n): 1}
    for w in wmonos:
        if sum(w) == 0:
            products[w] = one
        else:
            i = next(j for j, e in enumerate(w) if e)
            parent = tuple(e - (1 if j == i else 0) for j, e in enumerate(w))
            products[w] = _pmul(products[parent], polys[i])
        nrows += 1
        row = {cols[m]: c for m, c in products[w].items()}
        elim.add_row(row)
    return elim.rank < nrows


def relation_experiment(n, d, seed):
    """Seeded search for the first degree k admitting an algebraic relation
    among n+1 random dense degree-d polynomials in n variables."""
    if n > 3 or d > 4 or n < 1 or d < 1:
        raise DalgError("desk scale only: need 1 <= n <= 3 and 1 <= d <= 4")
    k_thm = (n + 1) * (d ** n - 1)
    k_counting = 1
    while comb(n + 1 + k_counting, n + 1) <= comb(n + k_counting * d, n):
        k_counting += 1
    rng = random.Random(seed)
    for _ in range(20):
        polys = [_sample_poly(rng, n, d) for _ in range(n + 1)]
        if _relation_exists(polys, n, d, 1):
            continue
        k = 2
        while not _relation_exists(polys, n, d, k):
            k += 1
        return RelationReport(n=n, d=d, seed=seed, k_observed=k,
                              k_counting=k_counting, k_theorem_bound=k_thm)
    raise HypothesisError("degenerate samples: dependence at degree 1 in "
                          "20 consecutive draws")
