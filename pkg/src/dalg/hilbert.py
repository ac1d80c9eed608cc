"""Degree-truncated Hilbert functions of homogeneous ideals.

The degree-k component of an ideal generated by homogeneous polynomials
is spanned by monomial multiples of the generators (the Macaulay layer);
its rank gives HF_I(k) = C(v-1+k, v-1) - rank.  A regular sequence has
the closed-form series prod(1-t^d_j) / (1-t)^v, and regularity of each
generator modulo its predecessors is tested degree by degree through the
injectivity of the multiplication map.

Over plain Q the per-prefix ranks are first attempted with the modular
engine: rank_i(k) <= rank_{i-1}(k) + HF_{i-1}(k - d_i) always holds, and
a mod-p rank meeting that bound certifies the exact value (which is also
exactly the injectivity condition).  Anything short of the bound falls
back to exact elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .dpoly import DPoly, JetVar, mono_deg, mono_mul, mono_sort_key, var_key
from .errors import DalgError, WindowError
from .linalg import (SparseEliminator, check_budget, degree_monomials,
                     modp_rank, monomial_count)
from .system import prolong


def ring_vars(polys, include_s=True):
    """Ordered ring variables for a set of polynomials: s plus every jet
    family filled from order 0 up to its maximum occurring order."""
    fams = {}
    has_s = False
    for p in polys:
        for m in p.terms:
            for (fam, idx, order), _ in m:
                if fam == 0:
                    has_s = True
                else:
                    fams[(fam, idx)] = max(fams.get((fam, idx), 0), order)
    keys = []
    if include_s or has_s:
        keys.append(JetVar.s().key)
    for (fam, idx), top in sorted(fams.items()):
        keys.extend((fam, idx, j) for j in range(top + 1))
    return sorted(keys)


def _as_keys(vars_):
    return tuple(sorted(var_key(v) for v in vars_))


def _validate_gens(gens, varkeys):
    vset = set(varkeys)
    for g in gens:
        if g.is_zero():
            raise DalgError("zero generator")
        if not g.is_homogeneous():
            raise DalgError(f"non-homogeneous generator: {g}")
        for m in g.terms:
            for k, _ in m:
                if k not in vset:
                    raise DalgError(
                        f"generator uses a variable outside the ring: {g}")


def _int_rows_data(field, gens):
    """Per generator: terms as (monomial, int) with cleared denominators."""
    from math import gcd, lcm
    out = []
    for g in gens:
        pairs = []
        den = 1
        for m, c in g.terms.items():
            n, d = field.plain_rational_parts(c)
            pairs.append((m, n, d))
            den = lcm(den, d)
        out.append([(m, n * (den // d)) for m, n, d in pairs])
    return out


class _LayerContext:
    """Shared column indexing and row generation for one variable set."""

    def __init__(self, field, gens, varkeys):
        self.field = field
        self.gens = gens
        self.varkeys = list(varkeys)
        self.v = len(self.varkeys)
        self.degs = [g.total_degree() for g in gens]
        self.int_mode = (field is None or (
            field.desc.kind == "Q" and not field.desc.params
            and not field.desc.has_x))
        if self.int_mode and field is not None:
            self.int_terms = _int_rows_data(field, gens)
        else:
            self.int_terms = None
        self._cols = {}

    def columns(self, k):
        if k not in self._cols:
            monos = degree_monomials(self.varkeys, k)
            self._cols[k] = (monos, {m: i for i, m in enumerate(monos)})
        return self._cols[k]

    def rows(self, k, upto_gen=None):
        """Row dicts of the degree-k layer for gens[:upto_gen]."""
        _, index = self.columns(k)
        n = len(self.gens) if upto_gen is None else upto_gen
        for gi in range(n):
            d = self.degs[gi]
            if d > k:
                continue
            terms = (self.int_terms[gi] if self.int_terms is not None
                     else list(self.gens[gi].terms.items()))
            for mu in degree_monomials(self.varkeys, k - d):
                yield gi, mu, {index[mono_mul(mu, m)]: c for m, c in terms}

    def nrows(self, k, upto_gen=None):
        n = len(self.gens) if upto_gen is None else upto_gen
        return sum(monomial_count(self.v, k - self.degs[gi])
                   for gi in range(n) if self.degs[gi] <= k)

    def exact_rank(self, k, upto_gen=None):
        ncols = monomial_count(self.v, k)
        check_budget(self.nrows(k, upto_gen), ncols)
        elim = SparseEliminator(ncols, field=None if self.int_mode else self.field)
        for _, _, row in self.rows(k, upto_gen):
            elim.add_row(row)
        return elim.rank


@dataclass
class MacaulayLayer:
    """Degree-k component data: every row is monomial * generator."""
    degree: int
    varkeys: tuple
    columns: list
    row_index: list
    rank: int

    def row_polys(self, gens, field):
        for gi, mu in self.row_index:
            yield DPoly(field, {mono_mul(mu, m): c
                                for m, c in gens[gi].terms.items()}, _raw=True)


def macaulay_layer(gens, vars_, k, field=None):
    if field is None and gens:
        field = gens[0].field
    varkeys = _as_keys(vars_)
    _validate_gens(gens, varkeys)
    ctx = _LayerContext(field, gens, varkeys)
    cols, _ = ctx.columns(k)
    rows = [(gi, mu) for gi, mu, _ in ctx.rows(k)]
    return MacaulayLayer(degree=k, varkeys=varkeys, columns=cols,
                         row_index=rows, rank=ctx.exact_rank(k))


def hf(gens, vars_, k):
    """Hilbert function value dim (R/I)_k, exact."""
    if k < 0:
        return 0
    varkeys = _as_keys(vars_)
    _validate_gens(gens, varkeys)
    if not gens:
        return monomial_count(len(varkeys), k)
    ctx = _LayerContext(gens[0].field, gens, varkeys)
    return monomial_count(len(varkeys), k) - ctx.exact_rank(k)


def hs_regular_closed_form(degrees, v, upto):
    """Coefficients 0..upto of prod(1 - t^d_j) / (1 - t)^v."""
    if v < 1:
        raise DalgError("need at least one variable")
    out = [monomial_count(v, k) for k in range(upto + 1)]
    for d in degrees:
        out = [out[k] - (out[k - d] if k >= d else 0)
               for k in range(upto + 1)]
    return out


# ---------------------------------------------------------------------------
# regular sequences

@dataclass
class PrefixReport:
    """Verdicts for generator i tested modulo its predecessors."""
    index: int
    degree: int
    verdicts: dict
    first_failure: int | None

    @property
    def regular(self):
        return self.first_failure is None


@dataclass
class RegSeqReport:
    cutoff: int
    prefixes: list
    hf_values: dict
    regular: bool

    def failure(self):
        for p in self.prefixes:
            if p.first_failure is not None:
                return (p.index, p.first_failure)
        return None


def check_regular_sequence(gens, vars_, cutoff):
    """Per-prefix, per-degree injectivity test of the multiplication maps.

    For each prefix and each degree j <= cutoff it checks
    HF_i(j) = HF_{i-1}(j) - HF_{i-1}(j - d_i); a failure is conclusive,
    success is bounded by the cutoff.
    """
    varkeys = _as_keys(vars_)
    _validate_gens(gens, varkeys)
    if not gens:
        raise DalgError("empty generator list")
    field = gens[0].field
    ctx = _LayerContext(field, gens, varkeys)
    v = ctx.v
    n = len(gens)

    # ranks[i][k] = rank of the degree-k layer of the first i generators
    ranks = [[0] * (cutoff + 1)]
    for i in range(1, n + 1):
        d_i = ctx.degs[i - 1]
        prev = ranks[i - 1]
        cur = []
        for k in range(cutoff + 1):
            hf_prev_shift = (monomial_count(v, k - d_i) - prev[k - d_i]
                             if k >= d_i else 0)
            upper = prev[k] + hf_prev_shift
            nrows = ctx.nrows(k, i)
            ncols = monomial_count(v, k)
            check_budget(nrows, ncols)
            rank = None
            if ctx.int_mode and nrows and upper:
                rp = modp_rank((row for _, _, row in ctx.rows(k, i)), ncols)
                if rp == upper:
                    rank = upper
            if rank is None:
                rank = ctx.exact_rank(k, i)
            cur.append(rank)
        ranks.append(cur)

    prefixes = []
    hf_values = {}
    for i in range(1, n + 1):
        d_i = ctx.degs[i - 1]
        verdicts = {}
        first_fail = None
        for k in range(cutoff + 1):
            lhs = monomial_count(v, k) - ranks[i][k]
            rhs = (monomial_count(v, k) - ranks[i - 1][k]) - (
                monomial_count(v, k - d_i) - ranks[i - 1][k - d_i]
                if k >= d_i else 0)
            ok = lhs == rhs
            verdicts[k] = "regular" if ok else "failed"
            if not ok and first_fail is None:
                first_fail = k
        prefixes.append(PrefixReport(index=i, degree=d_i,
                                     verdicts=verdicts,
                                     first_failure=first_fail))
        hf_values[i] = {k: monomial_count(v, k) - ranks[i][k]
                        for k in range(cutoff + 1)}
    return RegSeqReport(cutoff=cutoff, prefixes=prefixes,
                        hf_values=hf_values,
                        regular=all(p.regular for p in prefixes))


# ---------------------------------------------------------------------------
# profiles and dimension estimates

@dataclass
class HilbertProfile:
    values: dict
    closed_form: dict | None = None
    verdicts: dict = dc_field(default_factory=dict)

    def to_csv(self):
        lines = ["degree,hf,closed_form,verdict"]
        for k in sorted(self.values):
            cf = "" if self.closed_form is None or k not in self.closed_form \
                else str(self.closed_form[k])
            lines.append(f"{k},{self.values[k]},{cf},"
                         f"{self.verdicts.get(k, 'unchecked')}")
        return "\n".join(lines) + "\n"


@dataclass
class DimEstimate:
    degree: int
    coefficients: tuple
    stable: bool | None

    def evaluate(self, k):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * k + c
        return acc


def hilbert_dim_estimate(profile, window):
    """Fit the interpolating polynomial through HF values on the window.

    Returns its degree and coefficients (ascending).  The fit is flagged
    unstable when a profile value just outside the window disagrees; the
    window must leave at least one vanishing top difference, otherwise
    the degree cannot be certified.
    """
    window = list(window)
    if len(window) < 2:
        raise WindowError("window too short: need at least 2 degrees")
    try:
        vals = [Fraction(profile.values[k]) for k in window]
    except KeyError as e:
        raise WindowError(f"degree {e.args[0]} missing from profile")
    if any(b - a != 1 for a, b in zip(window, window[1:])):
        raise WindowError("window degrees must be consecutive")

    diffs = [vals]
    while len(diffs[-1]) > 1:
        last = diffs[-1]
        diffs.append([b - a for a, b in zip(last, last[1:])])
    deg = 0
    for m in range(len(diffs) - 1, -1, -1):
        if any(x != 0 for x in diffs[m]):
            deg = m
            break
    if deg >= len(window) - 1:
        raise WindowError(
            f"window too short to certify degree {deg}: need length >= {deg + 2}")

    # Newton forward form sum_j diff_j[0] * C(k - k0, j), expanded
    k0 = window[0]
    coeffs = [Fraction(0)] * (deg + 1)
    basis = [Fraction(1)]
    fact = 1
    for j in range(deg + 1):
        cj = diffs[j][0] / fact
        for e, b in enumerate(basis):
            coeffs[e] += cj * b
        # multiply basis by (k - k0 - j) for the next iteration
        nxt = [Fraction(0)] * (len(basis) + 1)
        for e, b in enumerate(basis):
            nxt[e + 1] += b
            nxt[e] += b * (-(k0 + j))
        basis = nxt
        fact *= (j + 1)

    est = DimEstimate(degree=deg, coefficients=tuple(coeffs), stable=None)
    nxt_k = window[-1] + 1
    if nxt_k in profile.values:
        est.stable = est.evaluate(nxt_k) == profile.values[nxt_k]
    return est


# ---------------------------------------------------------------------------
# D-regularity

@dataclass
class DRegReport:
    regular: bool
    rho: int
    cutoff: int
    n_vars: int
    n_gens: int
    expected_dimension: int
    fitted_degree: int | None
    fit_stable: bool | None
    profile: HilbertProfile
    regseq: RegSeqReport


def default_cutoff(gens):
    return max(8, 2 * max(g.total_degree() for g in gens) + 2)


def check_dregular(spec, rho, cutoff=None):
    """Prolong to order rho, homogenize, and test for a regular sequence."""
    gens = [g.homogenize() for g in prolong(spec, rho)]
    if cutoff is None:
        cutoff = default_cutoff(gens)
    varkeys = ring_vars(gens)
    report = check_regular_sequence(gens, varkeys, cutoff)
    v = len(varkeys)
    n = len(gens)
    values = report.hf_values[n]
    closed = hs_regular_closed_form([g.total_degree() for g in gens], v, cutoff)
    verdicts = {}
    for k in range(cutoff + 1):
        vs = {p.verdicts[k] for p in report.prefixes}
        verdicts[k] = "failed" if "failed" in vs else "regular"
    profile = HilbertProfile(values=dict(values),
                             closed_form={k: closed[k] for k in range(cutoff + 1)},
                             verdicts=verdicts)
    fitted = None
    stable = None
    lo = max(0, cutoff - 4)
    try:
        est = hilbert_dim_estimate(profile, range(lo, cutoff + 1))
        fitted = est.degree
        stable = est.stable
    except WindowError:
        pass
    return DRegReport(regular=report.regular, rho=rho, cutoff=cutoff,
                      n_vars=v, n_gens=n,
                      expected_dimension=v - 1 - n,
                      fitted_degree=fitted, fit_stable=stable,
                      profile=profile, regseq=report)
