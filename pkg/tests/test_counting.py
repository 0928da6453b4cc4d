from __future__ import annotations

import itertools

import pytest
from hypothesis import assume, given, settings, strategies as st

from _helpers import random_hyperelliptic
from curveatlas.bounds import weil_interval
from curveatlas.counting import CountsProfile, count_points, count_sequence, plane_candidates, plane_chart_points
from curveatlas.curves import _eval_form, completed_square, genus, make_hyperelliptic, make_plane, parse_curve
from curveatlas.errors import BudgetExceeded, DegreeViolation, InvariantViolation, SingularModel
from curveatlas.fields import build_extension, field_of_order

QUARTIC_F2 = "plane q=2 m=9 F=x^4+x^2y^2+x^2yz+x^2z^2+xy^2z+xyz^2+y^4+y^2z^2+z^4"


@pytest.mark.parametrize("text,counts", [
    ("hyperelliptic q=2 g=1 f=x^3 h=1", (3, 9, 9, 9, 33)),
    ("hyperelliptic q=3 g=1 f=x^3+2x+1", (7, 7, 28, 91)),
    ("hyperelliptic q=2 g=2 f=x^5+x^2 h=1", (5, 9, 5, 17)),
    ("plane q=2 m=9 F=x^3y+y^3z+z^3x", (3, 5, 24, 17)),  # L = 1 + 5T^3 + 8T^6
    (QUARTIC_F2, (0, 14, 24, 14, 0, 38)),
])
def test_frozen_counts(text, counts):
    model = parse_curve(text)
    assert count_sequence(model, len(counts)).counts == counts


@settings(max_examples=80)
@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.integers(1, 3), st.data())
def test_hyperelliptic_routes_agree(q, g, data):
    model = random_hyperelliptic(q, g, data)
    assume(model is not None)
    for n in (1, 2):
        kernel = count_points(model, n, "kernel")
        assert kernel == count_points(model, n, "reference")
        if q**n <= 81:
            assert kernel == count_points(model, n, "brute")
        assert kernel == count_points(model, n, "kernel", threads=3)


def _random_plane(q, d, data):
    F = field_of_order(q)
    mons = [(i, j, d - i - j) for i in range(d + 1) for j in range(d + 1 - i)]
    coeffs = {m: F.from_index(data.draw(st.integers(0, q - 1))) for m in mons}
    try:
        return make_plane(F, coeffs, asserted="test-oracle")
    except (SingularModel, DegreeViolation, ValueError):
        return None


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 4, 5]), st.sampled_from([3, 4]), st.data())
def test_plane_routes_agree(q, d, data):
    model = _random_plane(q, d, data)
    assume(model is not None)
    for n in (1, 2):
        line = count_points(model, n, "line")
        assert line == count_points(model, n, "brute")
        if q**n <= 25:
            assert line == count_points(model, n, "reference")


def test_plane_charts_partition_the_points():
    model = parse_curve(QUARTIC_F2)
    for n in (2, 3, 4):
        target, emb = build_extension(model.base, n)
        charts = plane_chart_points(model, n)
        form = model.as_dict()
        seen = set()
        for label, points in charts.items():
            for x, y, z in points:
                assert not _eval_form(form, emb, (x, y, z))
                normal = {"xy1": z == target.one, "x10": (y, z) == (target.one, target.zero),
                          "100": (x, y, z) == (target.one, target.zero, target.zero)}[label]
                assert normal
                seen.add((x.index, y.index, z.index))
        total = sum(len(v) for v in charts.values())
        assert len(seen) == total == count_points(model, n, "brute")


def test_plane_brute_budget():
    model = parse_curve(QUARTIC_F2)
    with pytest.raises(BudgetExceeded):
        count_points(model, 6, "brute", budget=1000)


def test_refuses_bad_arguments():
    model = parse_curve("hyperelliptic q=3 g=1 f=x^3+2x+1")
    with pytest.raises(ValueError):
        count_points(model, 0)
    with pytest.raises(ValueError):
        count_points(model, 1, "magic")


def test_profile_invariants():
    assert CountsProfile(2, 1, (3, 9)).violations() == []
    with pytest.raises(InvariantViolation):
        CountsProfile(2, 1, (6, 9)).validate()  # N_1 above the Weil interval
    with pytest.raises(InvariantViolation):
        CountsProfile(3, 2, (8, 7)).validate()  # N_1 > N_2
    with pytest.raises(ValueError):
        CountsProfile(3, 2, (8, 14), source="Guess")


def test_every_point_of_a_small_elliptic_curve():
    """Affine points by direct search, plus the single point at infinity."""
    F = field_of_order(7)
    model = make_hyperelliptic(F, [3, 2, 0, 1], [], 1)
    elems = list(F.elements())
    affine = sum(1 for x, y in itertools.product(elems, elems) if y * y == x**3 + x * 2 + 3)
    assert count_points(model, 1) == affine + 1


@settings(max_examples=60)
@given(st.sampled_from([3, 5, 7, 9]), st.integers(1, 2), st.data())
def test_completing_the_square_keeps_counts(q, g, data):
    model = random_hyperelliptic(q, g, data)
    assume(model is not None and model.h)
    assert count_sequence(completed_square(model), 4).counts == count_sequence(model, 4).counts


def test_catalog_counts_respect_weil_and_divisibility(catalog_models):
    for wid, model in catalog_models.items():
        profile = count_sequence(model, 4)
        assert profile.violations() == [], wid
        counts = profile.counts
        for r in range(1, len(counts) + 1):
            lo, hi = weil_interval(model.base.q, genus(model), r)
            assert lo <= counts[r - 1] <= hi, (wid, r)
            for d in range(1, r):
                if r % d == 0:
                    assert counts[d - 1] <= counts[r - 1], (wid, d, r)


@pytest.mark.parametrize("q,n", [(2, 1), (2, 3), (3, 2), (4, 2), (7, 1)])
def test_plane_candidate_count(q, n):
    assert plane_candidates(q, n) == q ** (2 * n) + q**n + 1
