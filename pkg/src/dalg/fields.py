"""Exact coefficient fields for differential polynomials.

A coefficient lives in one of:

    Q                rationals
    Q(i)             Gaussian rationals, i^2 = -1
    Q(c1,...,cm; x)  reduced fractions of polynomials in the constant
                     parameters c_j and the independent variable x

and the three ingredients combine freely: the Gaussian extension, the
parameter list and the presence of x are independent switches.  Elements
are kept in canonical form (fractions fully reduced, denominator
sign-normalized), which we get by storing them as sympy domain elements:
gmpy-backed rationals, GaussianRational, or FracElement over those.

Only x has a nonzero derivative (x' = 1); parameters are constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy
from sympy.polys.domains import QQ, QQ_I

from .errors import FieldError, HypothesisError

_RESERVED = {"s", "x", "i", "z"}


@dataclass(frozen=True)
class FieldDesc:
    """Descriptor of a coefficient field.

    kind is "Q" or "Qi"; params is an ordered tuple of constant-parameter
    names; has_x tells whether the independent variable may appear in
    coefficients.
    """

    kind: str = "Q"
    params: tuple = ()
    has_x: bool = False

    def __post_init__(self):
        if self.kind not in ("Q", "Qi"):
            raise FieldError(f"unknown field kind {self.kind!r}")
        seen = set()
        for p in self.params:
            if not p.isidentifier():
                raise FieldError(f"bad parameter name {p!r}")
            if p in _RESERVED or p[0] in ("y",) or p in seen:
                raise FieldError(f"parameter name {p!r} is reserved or repeated")
            seen.add(p)

    @property
    def label(self):
        if not self.params and not self.has_x:
            return self.kind
        inner = ",".join(self.params) + ";" + ("x" if self.has_x else "")
        return f"{self.kind}({inner})"

    @staticmethod
    def from_label(text):
        text = text.strip()
        if "(" in text:
            head, _, rest = text.partition("(")
            if not rest.endswith(")"):
                raise FieldError(f"malformed field label {text!r}")
            inner = rest[:-1]
            if ";" in inner:
                par, _, xpart = inner.partition(";")
            else:
                par, xpart = inner, ""
            params = tuple(p.strip() for p in par.split(",") if p.strip())
            xpart = xpart.strip()
            if xpart not in ("", "x"):
                raise FieldError(f"malformed field label {text!r}")
            return FieldDesc(head.strip(), params, xpart == "x")
        if text in ("Q", "Qi"):
            return FieldDesc(text)
        raise FieldError(f"unknown field label {text!r}")


class Field:
    """A concrete coefficient field.  Obtain instances via get_field().

    Coefficients are raw sympy domain elements and support +, -, *, /
    directly; this class supplies construction, derivation, x-structure
    queries and canonical printing.
    """

    def __init__(self, desc: FieldDesc):
        self.desc = desc
        base = QQ_I if desc.kind == "Qi" else QQ
        self.base = base
        names = (("x",) if desc.has_x else ()) + desc.params
        self._names = names
        if names:
            syms = tuple(sympy.Symbol(n) for n in names)
            self.domain = base.frac_field(*syms)
            self._gens = dict(zip(names, self.domain.gens))
        else:
            self.domain = base
            self._gens = {}
        self.zero = self.domain.zero
        self.one = self.domain.one

    def __repr__(self):
        return f"Field({self.desc.label})"

    def __eq__(self, other):
        return isinstance(other, Field) and self.desc == other.desc

    def __hash__(self):
        return hash(self.desc)

    # -- construction -------------------------------------------------

    def q(self, num, den=1):
        c = QQ(num, den)
        return self.domain.convert(c, QQ)

    def from_fraction(self, fr):
        return self.q(fr.numerator, fr.denominator)

    def i(self):
        if self.desc.kind != "Qi":
            raise FieldError("i is only available over Q(i)")
        return self.domain.convert(QQ_I.new(QQ(0), QQ(1)), QQ_I)

    def param(self, name):
        if name not in self.desc.params:
            raise FieldError(f"unknown parameter {name!r} in field {self.desc.label}")
        return self._gens[name]

    def x(self):
        if not self.desc.has_x:
            raise FieldError(f"x is not a coefficient of field {self.desc.label}")
        return self._gens["x"]

    # -- predicates ---------------------------------------------------

    def is_zero(self, c):
        return c == self.zero

    def _ground_const(self, poly):
        """Base-domain value of a constant polynomial, else None."""
        terms = list(poly.terms())
        if not terms:
            return self.base.zero
        if len(terms) > 1:
            return None
        mon, coef = terms[0]
        return None if any(mon) else coef

    def is_rational(self, c):
        if not self._names:
            return self.base == QQ or c.y == 0
        den = self._ground_const(c.denom)
        if den is None or not den:
            return False
        num = self._ground_const(c.numer)
        if num is None:
            return False
        return self.base == QQ or (num / den).y == 0

    def as_fraction(self, c):
        """Exact Fraction value of a rational coefficient."""
        if self._names:
            den = self._ground_const(c.denom)
            num = self._ground_const(c.numer)
            if den is None or not den or num is None:
                raise FieldError("coefficient is not rational")
            coef = num / den
        else:
            coef = c
        if self.base == QQ_I:
            if coef.y != 0:
                raise FieldError("coefficient is not rational")
            coef = coef.x
        return Fraction(int(coef.numerator), int(coef.denominator))

    # -- calculus -----------------------------------------------------

    def derive_x(self, c):
        """d/dx on a coefficient; zero unless the field carries x."""
        if not self.desc.has_x:
            return self.zero
        xg = self.domain.field.ring.gens[0]
        n, d = c.numer, c.denom
        return self.domain.field.new(n.diff(xg) * d - n * d.diff(xg), d * d)

    # -- x-structure --------------------------------------------------

    def _xdeg(self, poly):
        if not poly:
            return 0
        idx = 0
        return max(mon[idx] for mon in poly.monoms())

    def x_degree(self, c):
        """Degree in x of a coefficient with x-free denominator."""
        if not self.desc.has_x:
            return 0
        if self._xdeg(c.denom):
            raise HypothesisError("coefficient has x in its denominator")
        return self._xdeg(c.numer)

    def total_degree(self, c):
        """Total degree of the numerator in x and all parameters."""
        if not self._names:
            return 0
        if self._ground_const(c.denom) is None:
            raise HypothesisError("coefficient is not polynomial")
        if not c.numer:
            return 0
        return max(sum(mon) for mon in c.numer.monoms())

    def as_x_poly(self, c):
        """Coefficient list [c_0, ..., c_d] with c = sum c_e * x^e and
        every c_e free of x.  Requires an x-free denominator."""
        if not self.desc.has_x:
            return [c]
        ring = self.domain.field.ring
        if self._xdeg(c.denom):
            raise HypothesisError("coefficient has x in its denominator")
        if self.is_zero(c):
            return [self.zero]
        d = self._xdeg(c.numer)
        buckets = [ring.zero for _ in range(d + 1)]
        for mon, coef in c.numer.terms():
            rest = (0,) + mon[1:]
            buckets[mon[0]] += ring.from_terms([(rest, coef)])
        return [self.domain.field.new(b, c.denom) for b in buckets]

    def eval_x(self, c, point):
        """Substitute a rational value for x; the result stays in the field."""
        if not self.desc.has_x:
            return c
        ring = self.domain.field.ring
        pt = Fraction(point)
        val = self.base.convert(QQ(pt.numerator, pt.denominator), QQ)

        def subst(poly):
            out = ring.zero
            for mon, coef in poly.terms():
                rest = (0,) + mon[1:]
                out += ring.from_terms([(rest, coef * val ** mon[0])])
            return out

        den = subst(c.denom)
        if not den:
            raise HypothesisError("denominator vanishes at the expansion point")
        return self.domain.field.new(subst(c.numer), den)

    # -- fast-path extraction ------------------------------------------

    def plain_rational_parts(self, c):
        """(numerator, denominator) integers for kind Q without x/params."""
        return int(c.numerator), int(c.denominator)

    # -- printing -------------------------------------------------------

    def _gauss_str(self, g):
        """(sign, body) for a Gaussian rational as a grammar factor."""
        re, im = g.x, g.y
        if im == 0:
            return (1 if re >= 0 else -1), _rat_str(abs(re))
        if re == 0:
            mag = abs(im)
            body = "i" if mag == 1 else f"{_rat_str(mag)}*i"
            return (1 if im > 0 else -1), body
        body = _rat_str(re)
        body += "+" if im > 0 else "-"
        mag = abs(im)
        body += "i" if mag == 1 else f"{_rat_str(mag)}*i"
        return 1, f"({body})"

    def _coef_str(self, coef):
        if self.base == QQ_I:
            return self._gauss_str(coef)
        return (1 if coef >= 0 else -1), _rat_str(abs(coef))

    def _poly_terms(self, poly, scale=None):
        """Signed term strings of a polynomial over the base."""
        out = []
        order = sorted(poly.terms(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))
        for mon, coef in order:
            if scale is not None:
                coef = coef * scale
            vars_part = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self._names, mon)
                if e
            )
            sign, cs = self._coef_str(coef)
            if vars_part:
                body = vars_part if cs == "1" else f"{cs}*{vars_part}"
            else:
                body = cs
            out.append((sign, body))
        return out

    def term_strings(self, c):
        """List of (sign, body) with body a grammar factor or factor product."""
        if not self._names:
            return [self._coef_str(c)]
        if not c.numer:
            return [(1, "0")]
        den_terms = list(c.denom.terms())
        if len(den_terms) == 1 and not any(den_terms[0][0]):
            # constant denominator: distribute it over the terms
            return self._poly_terms(c.numer, self.base.one / den_terms[0][1])
        num = _join_terms(self._poly_terms(c.numer))
        den = _join_terms(self._poly_terms(c.denom))
        return [(1, f"({num})/({den})")]

    def to_str(self, c):
        return _join_terms(self.term_strings(c))


def _rat_str(q):
    n, d = q.numerator, q.denominator
    return str(int(n)) if d == 1 else f"{int(n)}/{int(d)}"


def _join_terms(terms):
    if not terms:
        return "0"
    parts = []
    for sign, body in terms:
        if not parts:
            parts.append(("-" if sign < 0 else "") + body)
        else:
            parts.append(("- " if sign < 0 else "+ ") + body)
    return " ".join(parts)


_FIELDS = {}


def get_field(kind="Q", params=(), has_x=False):
    """Shared Field instance for a descriptor."""
    desc = FieldDesc(kind, tuple(params), bool(has_x))
    if desc not in _FIELDS:
        _FIELDS[desc] = Field(desc)
    return _FIELDS[desc]


def field_from_label(text):
    desc = FieldDesc.from_label(text)
    return get_field(desc.kind, desc.params, desc.has_x)
