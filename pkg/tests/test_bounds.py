"""Closed-form degree bounds, the order/degree curve, and the seeded
random-relation experiment."""

import pytest

from dalg.bounds import (composition_bound, curve, curve_to_csv, div_bound,
                         plus_times_bound, relation_experiment, sufficiency_k,
                         theorem_bound)
from dalg.errors import DalgError


def test_hand_valued_bounds():
    tb = theorem_bound(2, 2, 1, 2)
    assert tb.k_min == 10
    assert tb.exact and str(tb.threshold_fraction) == "9"
    assert composition_bound(1, 1, 2, 2) == 70


def test_degenerate_degree_one():
    for r_min in range(1, 4):
        for r in range(r_min, r_min + 3):
            tb = theorem_bound(1, r_min, 0, r)
            assert tb.k_min == 1
            assert sufficiency_k(1, r_min, 0, r) == 1


def test_sufficiency_below_theorem_bound_on_grid():
    for d in range(1, 5):
        for r_min in range(1, 5):
            for r_l in range(0, r_min + 1):
                for r in range(r_min, r_min + 5):
                    assert sufficiency_k(d, r_min, r_l, r) <= \
                        theorem_bound(d, r_min, r_l, r).k_min


def test_fractional_exponent_is_integer_exact():
    # when (r - r_l + 1)/(r - r_min + 1) is not an integer the threshold
    # comparison k > (r+1)(d^(p/q) - 1) must be decided exactly:
    # k > threshold iff (k + r + 1)^q > d^p (r+1)^q
    for d in (2, 3):
        for r_min in (2, 3):
            for r_l in range(r_min):
                for r in range(r_min + 1, r_min + 4):
                    tb = theorem_bound(d, r_min, r_l, r)
                    p = r - r_l + 1
                    q = r - r_min + 1
                    k = tb.k_min
                    assert (k + r + 1) ** q > d ** p * (r + 1) ** q
                    if k > 1:
                        assert (k - 1 + r + 1) ** q <= d ** p * (r + 1) ** q


def test_plus_times_and_div_reduce_to_main_bound():
    assert plus_times_bound(3, 2, 2, 3) == theorem_bound(6, 2, 0, 3).k_min
    assert div_bound(2, 3, 2, 2, 3) == plus_times_bound(3, 2, 2, 3)
    assert div_bound(0, 1, 2, 2, 3) == plus_times_bound(1, 2, 2, 3)


def test_bound_argument_validation():
    with pytest.raises(DalgError):
        theorem_bound(0, 1, 0, 1)
    with pytest.raises(DalgError):
        theorem_bound(2, 1, 2, 1)
    with pytest.raises(DalgError):
        theorem_bound(2, 3, 0, 2)
    with pytest.raises(DalgError):
        plus_times_bound(0, 2, 1, 1)
    with pytest.raises(DalgError):
        div_bound(1, 0, 2, 1, 1)
    with pytest.raises(DalgError):
        composition_bound(-1, 0, 1, 1)


def test_curve_shape_and_csv():
    pts = curve(2, 2, 1, 2, 8)
    assert [p.r for p in pts] == list(range(2, 9))
    assert pts[0].k_min == 10
    from math import comb
    for p in pts:
        assert p.monomial_count == comb(p.k_min + p.r + 1, p.r + 1)
    lines = curve_to_csv(pts).strip().splitlines()
    assert lines[0] == "r,k_min,monomial_count"
    assert lines[1] == "2,10,286"
    assert len(lines) == 8


def test_relation_experiment_frozen_values():
    rep = relation_experiment(1, 3, 42)
    assert (rep.k_observed, rep.k_counting, rep.k_theorem_bound) == (3, 4, 4)
    rep2 = relation_experiment(1, 2, 42)
    assert (rep2.k_observed, rep2.k_counting, rep2.k_theorem_bound) == \
        (2, 2, 2)


def test_relation_experiment_reproducible_and_scaled():
    a = relation_experiment(1, 3, 7)
    b = relation_experiment(1, 3, 7)
    assert a.to_json() == b.to_json()
    with pytest.raises(DalgError):
        relation_experiment(4, 2, 1)
