"""Constructive search for annihilating equations of a designated function.

Given a system of differential polynomials and a target family y_l, the
degree-k component of the homogenized prolonged ideal is row-reduced
with all monomials involving a non-target variable ordered first.  A
reduced row whose leading column lies in the trailing block is then
supported entirely on monomials in {s, y_l, ..., y_l^(r)}; setting s = 1
turns it into an annihilator of order <= r and degree <= k.

This works inside the homogenized ideal: an inhomogeneous element of
degree k whose homogenization has degree k' > k is only found at layer
k'.  NotFoundAtK is therefore relative to the homogenized layer.

Every returned annihilator carries an exact membership certificate: the
reduction trail is replayed as a polynomial identity against the
prolonged generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .dpoly import DPoly, JetVar, mono_mul
from .errors import DalgError
from .hilbert import _int_rows_data
from .linalg import (SparseEliminator, check_budget, degree_monomials,
                     monomial_count)
from .system import SystemSpec, _family_of_label, prolong
from . import bounds as _bounds


@dataclass
class Annihilator:
    """A target-only differential polynomial certified to lie in the ideal."""
    poly: DPoly
    target: str
    order: int
    degree: int
    k_searched: int
    membership_certified: bool
    series_certified: bool | None = None
    residual_valuation: int | None = None
    bounds_checked: dict | None = None
    bounds_comparison: dict | None = None

    def to_json(self):
        out = {
            "target": self.target,
            "order": self.order,
            "degree": self.degree,
            "k_searched": self.k_searched,
            "polynomial": str(self.poly),
            "membership_certified": self.membership_certified,
            "series_certified": self.series_certified,
            "residual_valuation": self.residual_valuation,
        }
        if self.bounds_checked is not None:
            out["bounds_checked"] = self.bounds_checked
        if self.bounds_comparison is not None:
            out["bounds_comparison"] = self.bounds_comparison
        return out


@dataclass
class NotFoundAtK:
    k: int
    rows: int
    cols: int


@dataclass
class NotFoundUpTo:
    k_max: int
    attempts: list = dc_field(default_factory=list)

    def to_json(self):
        return {"found": False, "k_max": self.k_max,
                "attempts": [{"k": a.k, "rows": a.rows, "cols": a.cols}
                             for a in self.attempts]}


def _ring_varkeys(system: SystemSpec, m: int):
    keys = [JetVar.s().key]
    for (fam, idx), top in sorted(system.orders().items()):
        keys.extend((fam, idx, j) for j in range(top + m + 1))
    return sorted(keys)


def find_annihilator(system: SystemSpec, l, r, k, budget=None):
    """Search the degree-k layer of h(I)^(r - r_l) for a target-only row.

    Returns an Annihilator or NotFoundAtK.  l defaults to the system's
    declared target; r is the order budget for the annihilator.
    """
    if k < 1:
        raise DalgError("layer degree k must be >= 1")
    l = l or system.target
    fam = _family_of_label(l)
    orders = system.orders()
    if fam not in orders:
        raise DalgError(f"target {l} does not appear in the system")
    r_l = orders[fam]
    if r < r_l:
        raise DalgError(
            f"r = {r} is below the target's order {r_l} in the system")
    m = r - r_l
    field = system.field
    prolonged = prolong(system, m)
    h_gens = [g.homogenize() for g in prolonged]
    varkeys = _ring_varkeys(system, m)
    v = len(varkeys)

    target_keys = {JetVar.s().key} | {(fam[0], fam[1], j) for j in range(r + 1)}
    monos = degree_monomials(varkeys, k)
    non_target = [mo for mo in monos if any(kk not in target_keys for kk, _ in mo)]
    target_block = [mo for mo in monos if all(kk in target_keys for kk, _ in mo)]
    columns = non_target + target_block
    target_start = len(non_target)
    index = {mo: i for i, mo in enumerate(columns)}

    degs = [g.total_degree() for g in h_gens]
    nrows = sum(monomial_count(v, k - d) for d in degs if d <= k)
    check_budget(nrows, len(columns), budget)

    int_mode = (field.desc.kind == "Q" and not field.desc.params
                and not field.desc.has_x)
    if int_mode:
        gen_terms = _int_rows_data(field, h_gens)
        replay_gens = [
            DPoly(field, {mo: field.q(c) for mo, c in terms}, _raw=True)
            for terms in gen_terms
        ]
    else:
        gen_terms = [list(g.terms.items()) for g in h_gens]
        replay_gens = h_gens

    elim = SparseEliminator(len(columns),
                            field=None if int_mode else field, track=True)
    tags = {}
    for gi, (d, terms) in enumerate(zip(degs, gen_terms)):
        if d > k:
            continue
        for mu in degree_monomials(varkeys, k - d):
            tag = len(tags)
            tags[tag] = (gi, mu)
            elim.add_row({index[mono_mul(mu, mo)]: c for mo, c in terms}, tag)

    hits = [c for c in elim.pivot_of_col if c >= target_start]
    if not hits:
        return NotFoundAtK(k=k, rows=nrows, cols=len(columns))
    best = max(hits)
    ridx = elim.pivot_of_col[best]

    if int_mode:
        entries = elim.rows[ridx]
        row_poly = DPoly(field, {columns[c]: field.q(val)
                                 for c, val in entries.items()}, _raw=True)
    else:
        entries = elim.rows[ridx]
        row_poly = DPoly(field, {columns[c]: val for c, val in entries.items()})
    if any(c < target_start for c in entries):
        raise DalgError("internal error: reduced row leaks non-target columns")

    combo = DPoly.zero(field)
    for tag, coeff in elim.trail_of(ridx).items():
        gi, mu = tags[tag]
        g = replay_gens[gi]
        piece = DPoly(field, {mono_mul(mu, mo): c
                              for mo, c in g.terms.items()}, _raw=True)
        combo = combo + piece * coeff
    certified = combo == row_poly
    if not certified:
        raise DalgError("internal error: membership certificate failed to replay")

    poly = row_poly.dehomogenize().normalize()
    p_orders = poly.orders()
    order = p_orders.get(fam, 0)
    return Annihilator(poly=poly, target=l, order=order,
                       degree=poly.total_degree(), k_searched=k,
                       membership_certified=certified)


def _bounds_comparison(system: SystemSpec, l, r):
    orders = system.orders()
    fam = _family_of_label(l)
    r_l = orders[fam]
    r_min = sum(orders.values())
    d = 1
    for g in system.gens:
        d *= g.total_degree()
    if r < r_min:
        return {"d": d, "r_min": r_min, "r_l": r_l, "r": r,
                "note": "r below r_min: closed-form bound not applicable"}
    tb = _bounds.theorem_bound(d, r_min, r_l, r)
    return {"d": d, "r_min": r_min, "r_l": r_l, "r": r,
            "theorem_k_min": tb.k_min,
            "sufficiency_k": _bounds.sufficiency_k(d, r_min, r_l, r)}


def eliminate_search(system: SystemSpec, l, r, k_max, budget=None):
    """First annihilator over layers k = 1..k_max, with bound context."""
    if k_max < 1:
        raise DalgError("k_max must be >= 1")
    l = l or system.target
    attempts = []
    for k in range(1, k_max + 1):
        res = find_annihilator(system, l, r, k, budget=budget)
        if isinstance(res, Annihilator):
            res.bounds_comparison = _bounds_comparison(system, l, r)
            return res
        attempts.append(res)
    return NotFoundUpTo(k_max=k_max, attempts=attempts)


# ---------------------------------------------------------------------------
# preset system builders

def _check_univariate(p: DPoly, idx: int):
    fams = set(p.orders())
    if fams != {(1, idx)}:
        raise DalgError(
            f"component {idx} must involve exactly the y{idx} family")


def _components_gens(components, field):
    gens = []
    for pos, (p, r_i) in enumerate(components, start=1):
        if p.field.desc != field.desc:
            raise DalgError("component fields do not match")
        _check_univariate(p, pos)
        if p.orders()[(1, pos)] != r_i:
            raise DalgError(
                f"declared order {r_i} does not match ord(P{pos}) = "
                f"{p.orders()[(1, pos)]}")
        gens.append(p)
    return gens


def sum_product_system(components, Q: DPoly) -> SystemSpec:
    """System (P_1, ..., P_n, z - Q(y_1, ..., y_n)) with target z."""
    if not components:
        raise DalgError("need at least one component")
    field = components[0][0].field
    gens = _components_gens(components, field)
    if Q.is_zero():
        raise DalgError("Q must be nonzero")
    qfams = set(Q.orders())
    if any(f[0] != 1 for f in qfams):
        raise DalgError("Q must involve only the y families")
    if any(f not in {(1, i) for i in range(1, len(gens) + 1)} for f in qfams):
        raise DalgError("Q mentions a family without a component equation")
    z = DPoly.var(field, JetVar.z())
    return SystemSpec(field=field, gens=tuple(gens) + (z - Q,), target="z")


def rational_system(components, Qn: DPoly, Qd: DPoly) -> SystemSpec:
    """System (P_1, ..., P_n, Qd*z - Qn) with target z."""
    if not components:
        raise DalgError("need at least one component")
    field = components[0][0].field
    gens = _components_gens(components, field)
    if Qd.is_zero():
        raise DalgError("denominator Qd must be nonzero")
    for q, name in ((Qn, "Qn"), (Qd, "Qd")):
        if any(f[0] != 1 for f in q.orders()):
            raise DalgError(f"{name} must involve only the y families")
    z = DPoly.var(field, JetVar.z())
    return SystemSpec(field=field, gens=tuple(gens) + (Qd * z - Qn,),
                      target="z")


def composition_system(P1: DPoly, P2: DPoly) -> SystemSpec:
    """System for z = f1 o f2 where P1 annihilates f1 and P2 annihilates f2.

    P1 lives in the y1 family (its jets stand for derivatives of f1
    composed with f2) and P2 in the y2 family.  Generators: derivatives
    of P1 up to r2 and of P2 up to r1 (both standard), plus the twisted
    derivatives d^j(z - y1) for j <= r1+r2, where d(y1^(l)) = y2'*y1^(l+1).
    """
    field = P1.field
    if P2.field.desc != field.desc:
        raise DalgError("component fields do not match")
    if set(P1.orders()) != {(1, 1)}:
        raise DalgError("P1 must involve exactly the y1 family")
    if set(P2.orders()) != {(1, 2)}:
        raise DalgError("P2 must involve exactly the y2 family")
    r1 = P1.orders()[(1, 1)]
    r2 = P2.orders()[(1, 2)]
    gens = []
    cur = P1
    gens.append(cur)
    for _ in range(r2):
        cur = cur.derive()
        gens.append(cur)
    cur = P2
    gens.append(cur)
    for _ in range(r1):
        cur = cur.derive()
        gens.append(cur)
    link = DPoly.var(field, JetVar.z()) - DPoly.var(field, JetVar.y(1))
    cur = link
    gens.append(cur)
    for _ in range(r1 + r2):
        cur = cur.derive(mode="chain")
        gens.append(cur)
    return SystemSpec(field=field, gens=tuple(gens), target="z", mode="chain")
