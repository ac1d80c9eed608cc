"""Exact-arithmetic toolkit for closure properties of differentially
algebraic functions.

The package computes annihilating differential polynomials for sums,
products, quotients, and compositions of solutions of algebraic ODEs,
entirely over exact coefficient fields.  The main entry points:

- :func:`dalg.eliminate.eliminate_search` — Macaulay-layer elimination
  with exact membership certificates;
- :mod:`dalg.resultant` — Sylvester-resultant shortcuts for algebraic
  and hyperexponential inputs and for eliminating the independent
  variable;
- :mod:`dalg.hilbert` — truncated Hilbert-function regularity checks;
- :mod:`dalg.bounds` — closed-form order/degree bounds and curves;
- :mod:`dalg.series` — truncated power-series certification;
- ``dalg`` console script — the command-line frontend (:mod:`dalg.cli`).
"""

from .bounds import (composition_bound, curve, div_bound, plus_times_bound,
                     relation_experiment, sufficiency_k, theorem_bound)
from .dpoly import DPoly, JetVar
from .eliminate import (Annihilator, NotFoundAtK, NotFoundUpTo,
                        composition_system, eliminate_search,
                        find_annihilator, rational_system,
                        sum_product_system)
from .errors import (BudgetExceededError, DalgError, FieldError,
                     HypothesisError, ParseError, WindowError)
from .fields import Field, FieldDesc, field_from_label, get_field
from .grammar import parse_poly, parse_system, poly_to_str, system_to_str
from .hilbert import check_dregular, hf, hs_regular_closed_form
from .resultant import (dp_div_exact, dp_gcd, elim_algebraic, elim_hyperexp,
                        elim_x, prepare_primitive_separable, resultant,
                        sylvester_matrix)
from .series import (SeriesQ, apply_dpoly, newton_algebraic_series,
                     series_arith, solve_ode_series, verify_annihilator,
                     witness, witness_names)
from .system import SystemSpec, family_label, prolong

__version__ = "0.1.0"

__all__ = [
    "Annihilator", "BudgetExceededError", "DPoly", "DalgError", "Field",
    "FieldDesc", "FieldError", "HypothesisError", "JetVar", "NotFoundAtK",
    "NotFoundUpTo", "ParseError", "SeriesQ", "SystemSpec", "WindowError",
    "apply_dpoly", "check_dregular", "composition_bound",
    "composition_system", "curve", "div_bound", "dp_div_exact", "dp_gcd",
    "elim_algebraic", "elim_hyperexp", "elim_x", "eliminate_search",
    "family_label", "field_from_label", "find_annihilator", "get_field",
    "hf", "hs_regular_closed_form", "newton_algebraic_series", "parse_poly",
    "parse_system", "plus_times_bound", "poly_to_str",
    "prepare_primitive_separable", "prolong", "rational_system",
    "relation_experiment", "resultant", "series_arith", "solve_ode_series",
    "sufficiency_k", "sum_product_system", "sylvester_matrix",
    "system_to_str", "theorem_bound", "verify_annihilator", "witness",
    "witness_names",
]
