from __future__ import annotations

import math
import time
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from curveatlas.bounds import (b2_n1_floors, b2_upper_bounds, br_lower_bounds, guarantees_degree,
                               hallouin_perret_check, quadratic_coefficient, quadratic_discriminant, report,
                               rho_log_2g1, rho_log_quartic, rho_quadratic, rho_upper_bound, rho_upper_bounds,
                               weil_interval)
from curveatlas.certified import Surd
from curveatlas.fields import prime_powers

GRID_Q = prime_powers(128)
GRID_G = range(1, 101)


def _rho(q, g, bound_id):
    return report(rho_upper_bounds(q, g), bound_id)


# --- anchored values -------------------------------------------------------------


def test_anchored_rho_bounds():
    assert _rho(2, 3, "rho_uniform_2g1").integer == 7
    assert _rho(3, 3, "rho_log_quartic").integer == 5
    assert _rho(5, 3, "rho_quadratic").integer == 3
    assert _rho(5, 3, "rho_log_quartic").integer == 4
    assert quadratic_discriminant(11, 1).sign() < 0
    assert quadratic_discriminant(9, 1).sign() >= 0


def test_discriminant_sign_selects_the_reports():
    neg = rho_upper_bounds(11, 1)
    assert report(neg, "rho_negative_discriminant").integer == 1
    assert not report(neg, "rho_quadratic").applicable
    pos = rho_upper_bounds(9, 1)
    assert report(pos, "rho_quadratic").applicable
    assert not report(pos, "rho_negative_discriminant").applicable


@pytest.mark.parametrize("q,g,n1,n2,holds", [(2, 1, 2, 8, True), (2, 3, 0, 14, True), (5, 1, 6, 40, False)])
def test_hallouin_perret_examples(q, g, n1, n2, holds):
    assert hallouin_perret_check(q, g, n1, n2) is holds


def test_weil_interval_small_cases():
    assert weil_interval(2, 1, 1) == (1, 5)
    assert weil_interval(4, 1, 1) == (1, 9)  # endpoints reached exactly when q is a square
    assert weil_interval(2, 3, 1) == (-5, 11)  # raw bound, not clamped at 0


# --- the log bounds agree with a plain float evaluation away from ties --------------


@pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13, 17, 31, 64, 127])
@pytest.mark.parametrize("g", [1, 2, 3, 7, 20])
def test_log_bounds_match_their_closed_forms(q, g):
    x = 2 * math.log((2 * g + 1) / (math.sqrt(q) - 1), q) + 1
    if abs(x - round(x)) > 1e-9:
        assert rho_log_2g1(q, g) == math.ceil(x)
    y = 4 * math.log(1 + math.sqrt(2 * g), q)
    if abs(y - round(y)) > 1e-9:
        assert rho_log_quartic(q, g) == max(2, math.ceil(y))
    a = float(quadratic_coefficient(q, g))
    if a >= 4:
        z = 2 * math.log((a + math.sqrt(a * (a - 4))) / 2, q) + 1
        if abs(z - round(z)) > 1e-9:
            assert rho_quadratic(q, g) == math.floor(z)


def test_quadratic_bound_refuses_negative_discriminant():
    with pytest.raises(ValueError):
        rho_quadratic(11, 1)


def test_rho_reports_are_consistent():
    for q in prime_powers(64):
        for g in (1, 2, 3, 5, 10):
            reps = rho_upper_bounds(q, g)
            best = reps[-1]
            assert best.bound_id == "rho_min"
            applicable = [r.integer for r in reps[:-1] if r.applicable]
            assert best.integer == max(1, min(applicable)) <= 4 * g + 3
            for r in reps:
                if not r.applicable:
                    assert r.value is None and r.integer is None
                    assert r.to_json()["lo"] is None


def test_genus_zero():
    assert rho_upper_bound(7, 0) == (1, "rho_genus_zero")


def test_non_prime_power_is_rejected():
    with pytest.raises(ValueError):
        rho_upper_bounds(6, 1)
    with pytest.raises(ValueError):
        br_lower_bounds(12, 1, 2)


# --- B_r lower bounds --------------------------------------------------------------


def test_lower_bounds_are_below_the_true_counts(catalog, transcripts):
    for w in catalog.witnesses:
        tr = transcripts[w.witness_id]
        for r, b in enumerate(tr.closed, 1):
            for rep in br_lower_bounds(tr.q, tr.g, r):
                if not rep.applicable:
                    continue
                v = rep.value.surd if rep.value.surd is not None else rep.value.hi
                b_exact = Surd(b) if rep.value.surd is not None else Fraction(b)
                assert (b_exact > v) if " > " in rep.reason else (b_exact >= v), (w.witness_id, r, rep.bound_id)
                if rep.guarantees_positive:
                    assert b > 0, (w.witness_id, r, rep.bound_id)


def test_lower_bounds_are_positive_beyond_the_log_bound():
    for q in (2, 3, 4, 5, 7, 8, 9):
        for g in (1, 2, 3):
            r0 = rho_log_2g1(q, g)
            for r in range(r0, r0 + 8):
                assert guarantees_degree(q, g, r), (q, g, r)


def test_square_q_gives_exact_values():
    for q in (4, 9, 16, 25, 49, 64, 81, 121):
        for g in (1, 2, 3, 4):
            for r in (1, 2, 3, 5):
                for rep in br_lower_bounds(q, g, r):
                    if not rep.applicable:
                        continue
                    # q^{r/4} for odd r falls outside Q(sqrt q); the value is still an exact surd
                    assert rep.value.surd is not None
                    if rep.value.surd.is_rational():
                        assert rep.value.exact, (q, g, r, rep.bound_id)
                    else:
                        assert rep.bound_id == "br_quartic_root" and r % 2
            for rep in b2_upper_bounds(q, g, n1=q + 1):
                assert rep.value.exact


def test_quartic_root_bound_refines_for_odd_degree_nonsquare_q():
    rep = report(br_lower_bounds(2, 1, 3), "br_quartic_root")
    assert rep.value.surd is None and not rep.value.exact
    # (2^{3/4}+1)^2 ((2^{3/4}-1)^2 - 2)/3 ~ -3.68
    assert rep.value.floor() == -4 and rep.value.sign() == -1


# --- B_2 bounds --------------------------------------------------------------------


def test_b2_bound_dominance_grid():
    t0 = time.perf_counter()
    bad = []
    for q in GRID_Q:
        for g in GRID_G:
            reps = b2_upper_bounds(q, g)
            if report(reps, "b2_hp").integer > report(reps, "b2_weil").integer:
                bad.append(("b2", q, g))
            for n1, weil, hp in b2_n1_floors(q, g):
                if hp > weil:
                    bad.append(("n1", q, g, n1))
    assert bad == []
    assert time.perf_counter() - t0 < 60


@given(st.sampled_from(prime_powers(64)), st.integers(1, 40), st.data())
def test_integer_profile_matches_the_reports(q, g, data):
    rows = b2_n1_floors(q, g)
    n1, weil, hp = rows[data.draw(st.integers(0, len(rows) - 1))]
    reps = b2_upper_bounds(q, g, n1)
    assert report(reps, "b2_weil_n1").integer == weil
    assert report(reps, "b2_hp_n1").integer == hp


def test_b2_bounds_hold_on_the_catalog(catalog, transcripts):
    for w in catalog.witnesses:
        tr = transcripts[w.witness_id]
        reps = b2_upper_bounds(tr.q, tr.g, tr.counts[0], tr.counts[1])
        b2 = tr.closed[1]
        assert report(reps, "b2_exact").integer == b2
        for bid in ("b2_mobius_weil", "b2_weil_n1", "b2_weil", "b2_hp_n1", "b2_hp"):
            assert b2 <= report(reps, bid).integer, (w.witness_id, bid)
        assert hallouin_perret_check(tr.q, tr.g, tr.counts[0], tr.counts[1])


def test_b2_exact_needs_even_difference():
    with pytest.raises(ValueError):
        b2_upper_bounds(2, 1, 3, 8)
    assert not report(b2_upper_bounds(2, 0), "b2_hp").applicable


def test_linear_bound_applies_without_guaranteeing_a_point():
    rep = next(r for r in br_lower_bounds(2, 3, 7) if r.bound_id == "br_linear_6g3")
    assert rep.applicable and rep.guarantees_positive is False
