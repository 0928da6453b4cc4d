from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from curveatlas import upoly
from curveatlas.curves import (AssertedBySource, HyperellipticModel, SingularAt, SmoothCertified, SmoothUpTo,
                               elliptic_curve, format_curve, genus, is_smooth_hyperelliptic, make_hyperelliptic,
                               parse_curve, revalidate, verify_singular_point)
from curveatlas.errors import CurveAtlasError, DegreeViolation, InhomogeneousForm, SingularModel
from curveatlas.fields import build_extension, field_of_order


def _brute_singular(base, f, h, g):
    """Search both charts over F_{q^m}, m <= g + 1; every singular point of these models lives there."""
    return any(_brute_singular_over(base, f, h, g, m) for m in range(1, g + 2))


def _brute_singular_over(base, f, h, g, m):
    target, emb = build_extension(base, m)
    ev = upoly.evaluate

    def search(ff, hh, xs):
        ff, hh = upoly.push(ff, emb), upoly.push(hh, emb)
        dff, dhh = upoly.derivative(ff), upoly.derivative(hh)
        for x in xs:
            hx, fx = ev(hh, x), ev(ff, x)
            for y in target.elements():
                if y * y + hx * y - fx:
                    continue
                if y * 2 + hx or ev(dhh, x) * y - ev(dff, x):
                    continue
                return True
        return False

    if search(f, h, target.elements()):
        return True
    return search(upoly.reverse(f, 2 * g + 2), upoly.reverse(h, g + 1), [target.zero])


def _model_or_none(base, f, h, g):
    try:
        return make_hyperelliptic(base, f, h, g)
    except SingularModel:
        return "singular"
    except DegreeViolation:
        return None


@pytest.mark.parametrize("q", [2, 3])
def test_genus_one_smoothness_matches_brute_force(q):
    F = field_of_order(q)
    elems = list(F.elements())
    nh = 3 if q == 2 else 1
    seen = 0
    for fc in itertools.product(elems, repeat=5):
        for hc in itertools.product(elems, repeat=nh) if q == 2 else [()]:
            got = _model_or_none(F, list(fc), list(hc), 1)
            if got is None:
                continue
            f, h = upoly.normalize(F, list(fc)), upoly.normalize(F, list(hc))
            assert (got == "singular") == _brute_singular(F, f, h, 1), (fc, hc)
            seen += 1
    assert seen > 100


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 4, 5]), st.data())
def test_genus_two_smoothness_matches_brute_force(q, data):
    F = field_of_order(q)
    pick = st.integers(0, q - 1).map(F.from_index)
    f = [data.draw(pick) for _ in range(7)]
    h = [data.draw(pick) for _ in range(4)] if q % 2 == 0 else []
    got = _model_or_none(F, f, h, 2)
    if got is None:
        return
    f, h = upoly.normalize(F, f), upoly.normalize(F, h)
    assert (got == "singular") == _brute_singular(F, f, h, 2)


def test_singular_witness_points_verify():
    F = field_of_order(3)
    model = HyperellipticModel(F, tuple(upoly.normalize(F, [0, 0, 1, 1])), (), 1)
    status = is_smooth_hyperelliptic(model)
    assert isinstance(status, SingularAt) and verify_singular_point(model, status)
    F2 = field_of_order(2)
    model = HyperellipticModel(F2, tuple(upoly.normalize(F2, [0, 0, 0, 1])), tuple(upoly.normalize(F2, [0, 1])), 1)
    status = is_smooth_hyperelliptic(model)
    assert isinstance(status, SingularAt) and verify_singular_point(model, status)
    assert not verify_singular_point(model, SingularAt(None, None))


def test_characteristic_two_needs_h():
    F = field_of_order(4)
    with pytest.raises(SingularModel):
        make_hyperelliptic(F, [1, 1, 0, 1], [], 1)


def test_degree_rules():
    F = field_of_order(5)
    with pytest.raises(DegreeViolation):
        make_hyperelliptic(F, [1, 1, 1, 1], [], 2)  # deg f = 3 is not 5 or 6
    with pytest.raises(DegreeViolation):
        make_hyperelliptic(F, [1] * 8, [], 2)
    assert make_hyperelliptic(F, [0, 1, 0, 0, 0, 1]).g == 2


def test_elliptic_curve_long_form():
    F = field_of_order(2)
    E = elliptic_curve(F, a1=1, a2=1, a6=1)
    assert E.g == 1 and E.f == (F.one, F.zero, F.one, F.one) and E.h == (F.zero, F.one)


def test_infinity_type():
    F = field_of_order(7)
    assert make_hyperelliptic(F, [1, 0, 0, 0, 0, 0, 1]).infinity_is_split_type()
    assert not make_hyperelliptic(F, [1, 0, 0, 0, 0, 1]).infinity_is_split_type()


def test_plane_smoothness_statuses():
    assert parse_curve("plane q=2 F=x^3y+y^3z+z^3x").smoothness == SmoothUpTo(7)  # default budget
    klein = parse_curve("plane q=2 m=9 F=x^3y+y^3z+z^3x")
    assert isinstance(klein.smoothness, SmoothCertified) and genus(klein) == 3
    cubic = parse_curve("plane q=2 F=y^2z+yz^2+x^3+z^3")
    assert isinstance(cubic.smoothness, SmoothCertified) and genus(cubic) == 1
    nodal = "plane q=3 F=y^2z-x^3-x^2z"
    with pytest.raises(SingularModel):
        parse_curve(nodal)
    fermat = parse_curve("plane q=9 F=x^4+y^4+z^4")
    assert isinstance(fermat.smoothness, SmoothUpTo)
    with pytest.raises(SingularModel):
        genus(fermat)
    vouched = parse_curve("plane q=9 asserted=Lario F=x^4+y^4+z^4")
    assert isinstance(vouched.smoothness, AssertedBySource) and genus(vouched) == 3
    assert isinstance(revalidate(vouched), AssertedBySource)


def test_plane_singular_point_verifies():
    from curveatlas.curves import PlaneCurveModel, _form_from_dict, is_smooth_plane
    from curveatlas.polyexpr import parse_poly

    F = field_of_order(5)
    coeffs = parse_poly("y^2z-x^3", F, homogeneous=True)
    model = PlaneCurveModel(F, 3, _form_from_dict(coeffs))
    status = is_smooth_plane(model)
    assert isinstance(status, SingularAt) and status.m == 1
    assert verify_singular_point(model, status)


def test_explicit_extension_bound_certifies_the_quartic():
    model = parse_curve("plane q=2 m=9 F=x^4+x^2y^2+x^2yz+x^2z^2+xy^2z+xyz^2+y^4+y^2z^2+z^4")
    assert isinstance(model.smoothness, SmoothCertified)


def test_plane_form_errors():
    with pytest.raises(InhomogeneousForm):
        parse_curve("plane q=3 F=x^3+y^2")
    with pytest.raises(CurveAtlasError):
        parse_curve("conic q=3 F=x^2+y^2+z^2")
    with pytest.raises(CurveAtlasError):
        parse_curve("hyperelliptic g=1 f=x^3+1")


@pytest.mark.parametrize("text", [
    "hyperelliptic q=2^2 g=1 f=x^3+a h=x",
    "hyperelliptic q=3^2 g=2 f=2ax^6+ax^5+2ax^4+ax^2+ax+a",
    "hyperelliptic q=5 g=3 f=x^7+x^5+3x^3+x",
    "plane q=2 m=9 F=x^3y+y^3z+z^3x",
])
def test_format_parse_round_trip(text):
    model = parse_curve(text)
    again = parse_curve(format_curve(model))
    assert again == model
    assert format_curve(again) == format_curve(model)


def test_revalidation_is_idempotent_on_the_catalog(catalog_models):
    for wid, model in catalog_models.items():
        first = revalidate(model)
        assert revalidate(model) == first, wid
