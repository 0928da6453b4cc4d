"""Curve models: hyperelliptic ``y^2 + h(x) y = f(x)`` and plane projective ``F(x,y,z) = 0``."""
from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import upoly
from .errors import CurveAtlasError, DegreeViolation, SingularModel
from .fields import FieldDescriptor, FieldElement, build_extension, make_field, prime_power
from .polyexpr import format_form, parse_poly, univariate

DEFAULT_SMOOTHNESS_BUDGET = 1 << 16
_ROOT_SEARCH_LIMIT = 1 << 20


# ---------------------------------------------------------------------------
# smoothness status


@dataclass(frozen=True)
class SmoothCertified:
    def to_json(self):
        return {"status": "SmoothCertified"}


@dataclass(frozen=True)
class SmoothUpTo:
    m: int

    def to_json(self):
        return {"status": "SmoothUpTo", "m": self.m}


@dataclass(frozen=True)
class SingularAt:
    """A singular point over F_{q^m}.

    ``chart`` is ``"affine"``/``"infinity"`` for hyperelliptic models (point is
    (x, y), resp. (u, v) in the chart at infinity) and ``"xy1"``/``"x10"``/``"100"``
    for plane models.  ``point`` is None only when no root could be located
    within the search limit.
    """

    point: tuple | None
    m: int | None
    chart: str = "affine"

    def to_json(self):
        pt = None if self.point is None else [list(c.coeffs) for c in self.point]
        return {"status": "SingularAt", "m": self.m, "chart": self.chart, "point": pt}


@dataclass(frozen=True)
class AssertedBySource:
    tag: str
    checked_up_to: int = 0

    def to_json(self):
        return {"status": "AssertedBySource", "tag": self.tag, "checked_up_to": self.checked_up_to}


SmoothnessStatus = Union[SmoothCertified, SmoothUpTo, SingularAt, AssertedBySource]


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class HyperellipticModel:
    base: FieldDescriptor
    f: tuple
    h: tuple
    g: int
    smoothness: SmoothnessStatus = field(default=SmoothCertified(), compare=False)

    kind = "hyperelliptic"

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def genus(self) -> int:
        return self.g

    def infinity_is_split_type(self) -> bool:
        """True when the model has two (possibly conjugate) places over x = oo."""
        return max(2 * upoly.degree(self.h), upoly.degree(self.f)) == 2 * self.g + 2

    def __str__(self):
        return format_curve(self)


@dataclass(frozen=True)
class PlaneCurveModel:
    base: FieldDescriptor
    degree: int
    coeffs: tuple  # sorted ((i, j, k), FieldElement) pairs
    smoothness: SmoothnessStatus = field(default=SmoothUpTo(0), compare=False)

    kind = "plane"

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def genus(self) -> int:
        return genus(self)

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __str__(self):
        return format_curve(self)


CurveModel = Union[HyperellipticModel, PlaneCurveModel]


def _check_degrees(f, h, g, p):
    df, dh = upoly.degree(f), upoly.degree(h)
    if g < 1:
        raise DegreeViolation("genus must be positive")
    if df > 2 * g + 2 or dh > g + 1:
        raise DegreeViolation(f"deg f = {df}, deg h = {dh} too large for genus {g}")
    if max(2 * dh, df) not in (2 * g + 1, 2 * g + 2):
        raise DegreeViolation(f"max(2 deg h, deg f) = {max(2 * dh, df)} not in {{{2 * g + 1}, {2 * g + 2}}}")
    if p != 2:
        ft = completed_square_rhs(f, h)
        if upoly.degree(ft) not in (2 * g + 1, 2 * g + 2):
            raise DegreeViolation(f"f + h^2/4 has degree {upoly.degree(ft)}, not {2 * g + 1} or {2 * g + 2}")


def make_hyperelliptic(base: FieldDescriptor, f, h=(), g: int | None = None,
                       locate_singularity: bool = True) -> HyperellipticModel:
    f = upoly.normalize(base, f)
    h = upoly.normalize(base, h)
    if g is None:
        g = (max(2 * upoly.degree(h), upoly.degree(f)) - 1) // 2
    _check_degrees(f, h, g, base.p)
    model = HyperellipticModel(base, f, h, g)
    status = is_smooth_hyperelliptic(model, locate_singularity)
    if isinstance(status, SingularAt):
        raise SingularModel(f"singular model: {status}")
    return HyperellipticModel(base, f, h, g, status)


def elliptic_curve(base: FieldDescriptor, a1=0, a2=0, a3=0, a4=0, a6=0) -> HyperellipticModel:
    """Long Weierstrass form y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""
    return make_hyperelliptic(base, [a6, a4, a2, 1], [a3, a1], 1)


def completed_square_rhs(f, h):
    """f + h^2/4 (odd characteristic)."""
    if not f and not h:
        return ()
    F = (f or h)[0].field
    quarter = F(4).inverse()
    return upoly.add(f, upoly.scale(upoly.mul(h, h), quarter))


def completed_square(model: HyperellipticModel) -> HyperellipticModel:
    if model.base.p == 2:
        raise CurveAtlasError("completing the square needs odd characteristic")
    return make_hyperelliptic(model.base, completed_square_rhs(model.f, model.h), (), model.g)


def _find_root(poly, base: FieldDescriptor, max_m: int):
    """Some root of ``poly`` (coefficients in base) in F_{q^m}, smallest m first."""
    for m in range(1, max_m + 1):
        if base.q**m > _ROOT_SEARCH_LIMIT:
            return None, None, None
        target, emb = build_extension(base, m)
        pushed = upoly.push(poly, emb)
        for x in target.elements():
            if not upoly.evaluate(pushed, x):
                return x, m, emb
    return None, None, None


def is_smooth_hyperelliptic(model: HyperellipticModel, locate: bool = True) -> SmoothnessStatus:
    """With ``locate=False`` a singular model yields SingularAt(None, None) without a root search."""
    F, f, h, g = model.base, model.f, model.h, model.g
    if F.p != 2:
        ft = completed_square_rhs(f, h)
        common = upoly.gcd(ft, upoly.derivative(ft))
        if upoly.degree(common) < 1:
            return SmoothCertified()
        if not locate:
            return SingularAt(None, None)
        x, m, emb = _find_root(common, F, upoly.degree(common))
        if x is None:
            return SingularAt(None, None)
        y = -upoly.evaluate(upoly.push(h, emb), x) * x.field(2).inverse()
        return SingularAt((x, y), m)
    if not h:
        fp = upoly.derivative(f)
        if upoly.degree(fp) >= 1:
            if not locate:
                return SingularAt(None, None)
            x, m, emb = _find_root(fp, F, upoly.degree(fp))
            if x is not None:
                y = upoly.evaluate(upoly.push(f, emb), x).sqrt()
                return SingularAt((x, y), m)
            return SingularAt(None, None)
        # no affine singularity: it sits at infinity
        u = F.zero
        v = (f[2 * g + 2] if len(f) > 2 * g + 2 else F.zero).sqrt()
        return SingularAt((u, v), 1, "infinity")
    # affine: singular iff h(x) = 0 and h'(x)^2 f(x) = f'(x)^2 for some x
    hp, fp = upoly.derivative(h), upoly.derivative(f)
    test = upoly.add(upoly.mul(upoly.mul(hp, hp), f), upoly.mul(fp, fp))
    common = upoly.gcd(h, test)
    if upoly.degree(common) >= 1:
        if not locate:
            return SingularAt(None, None)
        x, m, emb = _find_root(common, F, upoly.degree(common))
        if x is None:
            return SingularAt(None, None)
        y = upoly.evaluate(upoly.push(f, emb), x).sqrt()
        return SingularAt((x, y), m)
    # chart at infinity: v^2 + H(u) v = G(u) with H = u^{g+1} h(1/u), G = u^{2g+2} f(1/u)
    coef = lambda poly, i: poly[i] if i < len(poly) else F.zero
    if not coef(h, g + 1):
        s = coef(f, 2 * g + 2).sqrt()
        if coef(h, g) * s == coef(f, 2 * g + 1):
            return SingularAt((F.zero, s), 1, "infinity")
    return SmoothCertified()


def verify_singular_point(model: CurveModel, status: SingularAt) -> bool:
    """Re-evaluate the defining polynomial and partials at a SingularAt witness."""
    if status.point is None:
        return False
    if isinstance(model, PlaneCurveModel):
        target, emb = build_extension(model.base, status.m)
        x, y = status.point
        one, zero = target.one, target.zero
        pt = {"xy1": (x, y, one), "x10": (x, one, zero), "100": (one, zero, zero)}[status.chart]
        return all(not _eval_form(form, emb, pt) for form in plane_partials(model))
    F = model.base
    target, emb = build_extension(F, status.m)
    if status.chart == "infinity":
        n = 2 * model.g + 2
        hh = upoly.reverse(model.h, model.g + 1)
        ff = upoly.reverse(model.f, n)
    else:
        hh, ff = model.h, model.f
    hh, ff = upoly.push(hh, emb), upoly.push(ff, emb)
    x, y = status.point
    ev = upoly.evaluate
    eq = y * y + ev(hh, x) * y - ev(ff, x)
    dy = y * 2 + ev(hh, x)
    dx = ev(upoly.derivative(hh), x) * y - ev(upoly.derivative(ff), x)
    return not eq and not dy and not dx


# ---------------------------------------------------------------------------
# plane curves


def _form_from_dict(coeffs: dict) -> tuple:
    return tuple(sorted((m, c) for m, c in coeffs.items() if c))


def _partial(coeffs: dict, var: int) -> dict:
    out = {}
    for m, c in coeffs.items():
        if m[var]:
            v = c * m[var]
            if v:
                mm = list(m)
                mm[var] -= 1
                out[tuple(mm)] = v
    return out


def plane_partials(model: PlaneCurveModel) -> list[dict]:
    d = model.as_dict()
    return [d, _partial(d, 0), _partial(d, 1), _partial(d, 2)]


def _eval_form(form: dict, emb, point) -> FieldElement:
    x, y, z = point
    acc = x.field.zero
    for (i, j, k), c in form.items():
        acc = acc + emb(c) * x**i * y**j * z**k
    return acc


def make_plane(base: FieldDescriptor, coeffs: dict, asserted: str | None = None,
               budget: int | None = None, m_max: int | None = None) -> PlaneCurveModel:
    coeffs = {m: base(c) for m, c in coeffs.items() if base(c)}
    if not coeffs:
        raise DegreeViolation("plane curve needs a nonzero form")
    degrees = {sum(m) for m in coeffs}
    if len(degrees) != 1:
        from .errors import InhomogeneousForm

        raise InhomogeneousForm(f"form has monomials of degrees {sorted(degrees)}")
    (d,) = degrees
    if d < 1:
        raise DegreeViolation("plane curve needs positive degree")
    model = PlaneCurveModel(base, d, _form_from_dict(coeffs))
    status = is_smooth_plane(model, m_max=m_max, budget=budget)
    if isinstance(status, SingularAt):
        raise SingularModel(f"singular plane curve: {status}")
    if isinstance(status, SmoothUpTo) and asserted:
        status = AssertedBySource(asserted, status.m)
    return PlaneCurveModel(base, d, model.coeffs, status)


def is_smooth_plane(model: PlaneCurveModel, m_max: int | None = None,
                    budget: int | None = None) -> SmoothnessStatus:
    """Scan P^2(F_{q^m}) for common zeros of F and its partials, m = 1, 2, ...

    Any singular point of a degree-d plane curve is defined over an extension
    of degree at most (d-1)^2, so a complete scan up to that degree certifies
    smoothness; a scan cut short by ``m_max`` or ``budget`` reports SmoothUpTo.
    Without an explicit ``budget`` the default budget applies only when
    ``m_max`` is not given.
    """
    if budget is None:
        budget = DEFAULT_SMOOTHNESS_BUDGET if m_max is None else 1 << 62
    from ._kernels import plane_singular_search, zech_tables

    d = model.degree
    full = max((d - 1) ** 2, 1)
    limit = full if m_max is None else min(m_max, full)
    forms = plane_partials(model)
    done = 0
    for m in range(1, limit + 1):
        Q = model.base.q**m
        if Q * Q + Q + 1 > budget:
            break
        target, emb = build_extension(model.base, m)
        tab = zech_tables(target)
        ex, ey, ez, cf, offs = [], [], [], [], [0]
        for form in forms:
            for (i, j, k), c in form.items():
                ex.append(i)
                ey.append(j)
                ez.append(k)
                cf.append(tab.log(emb(c)))
            offs.append(len(cf))
        arr = lambda v: np.array(v, dtype=np.int64)
        chart, xe, ye = plane_singular_search(arr(ex), arr(ey), arr(ez), arr(cf), arr(offs), tab.zech, tab.M)
        if chart >= 0:
            x, y = tab.element(xe), tab.element(ye)
            label = ("xy1", "x10", "100")[chart]
            if chart == 1:
                y = target.one
            if chart == 2:
                x, y = target.one, target.zero
            return SingularAt((x, y), m, label)
        done = m
    if done == full:
        return SmoothCertified()
    return SmoothUpTo(done)


# ---------------------------------------------------------------------------


def genus(model: CurveModel) -> int:
    status = model.smoothness
    if isinstance(status, SingularAt):
        raise SingularModel("singular model has no well-defined genus here")
    if isinstance(model, HyperellipticModel):
        return model.g
    if not isinstance(status, (SmoothCertified, AssertedBySource)):
        raise SingularModel(f"plane smoothness not established ({status}); assert a source to proceed")
    d = model.degree
    return (d - 1) * (d - 2) // 2


def revalidate(model: CurveModel) -> SmoothnessStatus:
    if isinstance(model, HyperellipticModel):
        return is_smooth_hyperelliptic(model)
    status = model.smoothness
    m = status.checked_up_to if isinstance(status, AssertedBySource) else None
    if isinstance(status, SmoothUpTo):
        m = status.m
    fresh = is_smooth_plane(model, m_max=m, budget=1 << 62)
    if isinstance(status, AssertedBySource) and isinstance(fresh, SmoothUpTo):
        return AssertedBySource(status.tag, fresh.m)
    return fresh


# ---------------------------------------------------------------------------
# curve text format


_Q_RE = re.compile(r"^(\d+)(?:\^(\d+))?$")


def parse_field_spec(text: str) -> FieldDescriptor:
    m = _Q_RE.match(text.strip())
    if not m:
        raise CurveAtlasError(f"bad field order {text!r}")
    base, exp = int(m.group(1)), m.group(2)
    if exp is None:
        p, k = prime_power(base)
    else:
        p, k = base, int(exp)
    return make_field(p, k)


def parse_curve_fields(text: str) -> tuple[str, dict]:
    tokens = shlex.split(text)
    if not tokens:
        raise CurveAtlasError("empty curve text")
    kind, kv = tokens[0], {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise CurveAtlasError(f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        kv[key] = val
    return kind, kv


def parse_curve(text: str, a_value: FieldElement | None = None, asserted: str | None = None,
                smoothness_budget: int | None = None) -> CurveModel:
    """Parse ``hyperelliptic q=p^k g=G f=... h=...`` or ``plane q=p^k F=...``."""
    kind, kv = parse_curve_fields(text)
    if "q" not in kv:
        raise CurveAtlasError("curve text needs q=<p>^<k>")
    F = parse_field_spec(kv["q"])
    if kind == "hyperelliptic":
        f = univariate(parse_poly(kv.get("f", "0"), F, ("x",), a_value), "x")
        h = univariate(parse_poly(kv.get("h", "0"), F, ("x",), a_value), "x")
        g = int(kv["g"]) if "g" in kv else None
        return make_hyperelliptic(F, f, h, g)
    if kind == "plane":
        coeffs = parse_poly(kv["F"], F, ("x", "y", "z"), a_value, homogeneous=True)
        m_max = int(kv["m"]) if "m" in kv else None
        return make_plane(F, coeffs, asserted=kv.get("asserted", asserted), budget=smoothness_budget, m_max=m_max)
    raise CurveAtlasError(f"unknown curve kind {kind!r}")


def format_curve(model: CurveModel) -> str:
    F = model.base
    q = str(F.p) if F.k == 1 else f"{F.p}^{F.k}"
    if isinstance(model, HyperellipticModel):
        return f"hyperelliptic q={q} g={model.g} f={upoly.to_text(model.f)} h={upoly.to_text(model.h)}"
    return f"plane q={q} F={format_form(model.as_dict())}"
