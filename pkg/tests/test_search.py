from __future__ import annotations

import io
import json
import time

import pytest

from curveatlas.bounds import b2_upper_bounds, report
from curveatlas.counting import count_sequence
from curveatlas.curves import make_hyperelliptic, parse_curve
from curveatlas.errors import BudgetExceeded, DegreeViolation, SingularModel
from curveatlas.search import SearchSpec, decode, scan
from curveatlas.zeta import closed_points


def _brute_family(spec, n_max):
    """Every smooth member of the family with its counts, by building each model directly."""
    out = {}
    for index in range(spec.family_size):
        f, h = decode(spec, index)
        try:
            model = make_hyperelliptic(spec.base, f, h, spec.g)
        except (DegreeViolation, SingularModel):
            continue
        out[index] = count_sequence(model, n_max).counts
    return out


@pytest.mark.parametrize("spec", [
    SearchSpec(2, 1, "pointless"),
    SearchSpec(2, 1, "B_r=0", r=2),
    SearchSpec(2, 1, "B_r=0", r=4),
    SearchSpec(3, 1, "B_r=0", r=2, h_zero=True),
    SearchSpec(3, 1, "pointless", h_zero=True),
], ids=lambda s: f"q{s.q}-g{s.g}-{s.predicate}-{s.r}")
def test_scan_matches_brute_force(spec):
    n_max = max(spec.degrees_needed)
    members = _brute_family(spec, n_max)
    r = spec.r or 1
    want = sorted(i for i, counts in members.items() if closed_points(counts, r) == 0)
    result = scan(spec)
    assert [h.index for h in result.hits] == want
    assert result.enumerated == spec.family_size
    assert result.predicate_candidates - result.rejected_singular == len(want)


def test_max_b2_matches_brute_force():
    spec = SearchSpec(3, 1, "max-B2", h_zero=True)
    members = _brute_family(spec, 2)
    b2 = {i: (c[1] - c[0]) // 2 for i, c in members.items()}
    best = max(b2.values())
    result = scan(spec)
    assert result.max_b2 == best
    assert [h.index for h in result.hits] == sorted(i for i, v in b2.items() if v == best)


def test_reference_scans():
    t0 = time.perf_counter()
    g2 = scan(SearchSpec(2, 2, "B_r=0", r=3))
    g1 = scan(SearchSpec(2, 1, "max-B2"))
    assert len(g2.hits) >= 1 and g1.max_b2 == 3
    assert time.perf_counter() - t0 < 60
    assert g1.max_b2 <= report(b2_upper_bounds(2, 1), "b2_hp").integer
    for hit in g2.hits:
        model = parse_curve(hit.curve)
        counts = count_sequence(model, 3).counts
        assert closed_points(counts, 3) == 0 and hit.closed["3"] == 0


def test_hits_stream_as_json_lines():
    buf = io.StringIO()
    result = scan(SearchSpec(2, 1, "B_r=0", r=4, max_hits=2), stream=buf)
    lines = [json.loads(x) for x in buf.getvalue().splitlines()]
    assert len(lines) == len(result.hits) == 2
    assert lines[0]["B"]["4"] == 0 and lines[0]["curve"].startswith("hyperelliptic q=2 g=1")
    assert result.summary()["hits"] == 2


def test_decode_walks_low_coefficients_first():
    spec = SearchSpec(3, 1, "pointless", h_zero=True)
    f, h = decode(spec, 1)
    assert [c.index for c in f] == [0, 0, 0, 0, 1] and h == []
    f, h = decode(spec, 3**4)
    assert [c.index for c in f] == [1, 0, 0, 0, 0]


def test_spec_validation_and_budget():
    with pytest.raises(ValueError):
        SearchSpec(2, 1, "sparkly")
    with pytest.raises(ValueError):
        SearchSpec(2, 1, "B_r=0")
    with pytest.raises(ValueError):
        SearchSpec(2, 0, "pointless")
    with pytest.raises(ValueError):
        SearchSpec(4, 1, "pointless", h_zero=True)
    with pytest.raises(BudgetExceeded):
        scan(SearchSpec(5, 3, "pointless"))
    with pytest.raises(BudgetExceeded):
        scan(SearchSpec(2, 2, "pointless", budget=1000))


def test_threads_do_not_change_results():
    spec = SearchSpec(2, 2, "B_r=0", r=3)
    assert [h.index for h in scan(spec, threads=3).hits] == [h.index for h in scan(spec).hits]


@pytest.mark.slow
def test_no_pointless_genus_two_curve_over_f13_with_h_zero():
    result = scan(SearchSpec(13, 2, "pointless", h_zero=True))
    assert result.hits == [] and result.enumerated == 13**7
