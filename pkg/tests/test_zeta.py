from __future__ import annotations

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from _helpers import random_hyperelliptic
from curveatlas.bounds import quadratic_coefficient
from curveatlas.certified import Surd, sqrt_power
from curveatlas.counting import count_sequence
from curveatlas.errors import NegativeResult, NonIntegralCoefficient, NonIntegralResult, NotWeil
from curveatlas.zeta import (LPolynomial, closed_points, closed_points_profile, counts_from_l_polynomial,
                             divisor_sum_holds, divisors, l_polynomial_from_counts, mobius)

R_MAX = 12
N_MAX = 6


# --- anchors -------------------------------------------------------------------


def test_genus_one_anchor():
    # N_1 = 2 over F_2: S_1 = 1, so P = 1 - T + 2T^2 and N_2 = 5 - (1 - 4) = 8
    L = l_polynomial_from_counts(2, 1, [2])
    assert L.a == (1, -1, 2)
    assert L.counts(3) == (2, 8, 14)


def test_supersingular_anchor():
    L = l_polynomial_from_counts(2, 1, [3])
    assert L.a == (1, 0, 2)
    assert L.counts(4) == (3, 9, 9, 9)


def test_genus_three_anchor():
    L = l_polynomial_from_counts(2, 3, [0, 14, 24])
    assert L.functional_equation_holds() and L.riemann_hypothesis_holds()
    assert L.counts(6) == (0, 14, 24, 14, 0, 38)
    assert closed_points(L, 6) == 0


def test_errors():
    with pytest.raises(NonIntegralCoefficient):
        l_polynomial_from_counts(2, 2, [3, 6])
    with pytest.raises(NotWeil):
        l_polynomial_from_counts(2, 1, [8])
    with pytest.raises(ValueError):
        l_polynomial_from_counts(3, 2, [4])
    with pytest.raises(NonIntegralResult):
        closed_points([3, 6], 2)
    with pytest.raises(NegativeResult):
        closed_points([5, 3], 2)
    with pytest.raises(ValueError):
        closed_points([5], 2)


def test_text():
    assert LPolynomial(2, 1, (1, -1, 2)).text() == "1 - T + 2*T^2"


# --- Moebius helpers -------------------------------------------------------------


def test_mobius_and_divisors_against_definitions():
    assert [mobius(n) for n in (1, 4, 6)] == [1, 0, 1]
    for n in range(1, 400):
        assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]
        assert sum(mobius(d) for d in divisors(n)) == (1 if n == 1 else 0)


@given(st.lists(st.integers(0, 10**6), min_size=R_MAX, max_size=R_MAX))
def test_inversion_roundtrip_on_divisor_sums(closed):
    counts = [sum(d * closed[d - 1] for d in divisors(r)) for r in range(1, R_MAX + 1)]
    assert [closed_points(counts, r) for r in range(1, R_MAX + 1)] == closed
    assert divisor_sum_holds(counts, closed)


# --- power sums ------------------------------------------------------------------


@settings(max_examples=50)
@given(st.sampled_from([2, 3, 4, 5, 7, 9]), st.integers(1, 3), st.data())
def test_power_sums_match_numerical_roots(q, g, data):
    model = random_hyperelliptic(q, g, data)
    assume(model is not None)
    direct = count_sequence(model, g).counts
    L = l_polynomial_from_counts(q, g, direct)
    assert L.functional_equation_holds()
    with mpmath.workdps(50):
        roots = mpmath.polyroots(list(reversed(L.a)), maxsteps=400, extraprec=200, error=False) \
            if len(set(L.a)) > 1 else []
        # reciprocal roots w are inverses of the roots of P
        ws = [1 / z for z in roots]
        for n, s in enumerate(L.power_sums(8), 1):
            assert abs(sum(w**n for w in ws) - s) < mpmath.mpf(10) ** -20


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 4, 5, 7]), st.integers(1, 2), st.data())
def test_l_polynomial_predicts_further_counts(q, g, data):
    model = random_hyperelliptic(q, g, data)
    assume(model is not None)
    n_max = 2 * g + 1
    direct = count_sequence(model, n_max).counts
    L = l_polynomial_from_counts(q, g, direct[:g])
    assert L.counts(n_max) == direct


# --- catalog-wide oracle checks --------------------------------------------------


def test_l_polynomial_reproduces_direct_counts_on_catalog(catalog_models):
    for wid, model in catalog_models.items():
        prof = closed_points_profile(model, N_MAX, direct_counts=N_MAX)
        assert prof.counts == prof.direct.counts, wid
        assert all(counts_from_l_polynomial(prof.lpoly, n) == prof.direct.N(n) for n in range(1, N_MAX + 1))


def test_divisor_sum_roundtrip_on_catalog(catalog_models):
    for wid, model in catalog_models.items():
        prof = closed_points_profile(model, R_MAX)
        for r in range(1, R_MAX + 1):
            assert sum(d * prof.B(d) for d in divisors(r)) == prof.N(r), (wid, r)


def test_closed_point_counts_sit_inside_the_moebius_weil_window(catalog_models):
    """|r B_r - q^r| <= A (q^{r/2} - 1), decided exactly in Q(sqrt q)."""
    for wid, model in catalog_models.items():
        prof = closed_points_profile(model, R_MAX)
        A = quadratic_coefficient(prof.q, prof.g)
        for r in range(1, R_MAX + 1):
            gap = Surd(abs(r * prof.B(r) - prof.q**r))
            assert gap <= A * (sqrt_power(prof.q, r) - 1), (wid, r)


def test_profile_json_uses_degree_keys(catalog_models):
    prof = closed_points_profile(catalog_models["g2-q2-no-degree3"], 4)
    js = prof.to_json()
    assert js["B"]["3"] == 0 and js["N"]["1"] == 5
