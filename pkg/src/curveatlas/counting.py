"""Exact point counts N_n = #X(F_{q^n}) by enumeration.

Three routes are available and cross-checked in the tests:

``kernel``     compiled Zech-log sweep (hyperelliptic: one fibre per x;
               plane: distinct roots in y on every line x = const)
``brute``      compiled scan of all q^{2n} + q^n + 1 projective candidates (plane only)
``reference``  pure-Python loop over FieldElement arithmetic
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import upoly
from ._kernels import hyper_affine_count, plane_bruteforce_count, plane_line_count, zech_tables
from .curves import CurveModel, HyperellipticModel, PlaneCurveModel, genus, _eval_form
from .errors import BudgetExceeded, InvariantViolation
from .fields import build_extension, solve_quadratic

DEFAULT_ENUMERATION_BUDGET = 1 << 26


@dataclass(frozen=True)
class CountsProfile:
    q: int
    g: int
    counts: tuple
    source: str = "DirectEnumeration"

    def __post_init__(self):
        if self.source not in ("DirectEnumeration", "ZetaDerived"):
            raise ValueError(f"unknown source {self.source!r}")
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    def N(self, n: int) -> int:
        return self.counts[n - 1]

    def violations(self) -> list[str]:
        from .bounds import weil_interval

        out = []
        for n, c in enumerate(self.counts, 1):
            lo, hi = weil_interval(self.q, self.g, n)
            if not lo <= c <= hi:
                out.append(f"N_{n} = {c} outside the Weil interval [{lo}, {hi}]")
        for d in range(1, len(self.counts) + 1):
            for r in range(2 * d, len(self.counts) + 1, d):
                if self.N(d) > self.N(r):
                    out.append(f"N_{d} = {self.N(d)} > N_{r} = {self.N(r)}")
        return out

    def validate(self) -> "CountsProfile":
        bad = self.violations()
        if bad:
            raise InvariantViolation("; ".join(bad))
        return self

    def to_json(self) -> dict:
        from .jsonio import big

        return {"q": self.q, "g": self.g, "counts": [big(c) for c in self.counts], "source": self.source}


def _split(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, hi - lo))
    step = -(-(hi - lo) // parts)
    return [(a, min(a + step, hi)) for a in range(lo, hi, step)]


def _parallel_sum(fn, lo, hi, threads):
    chunks = _split(lo, hi, threads)
    if len(chunks) == 1:
        return fn(*chunks[0])
    with ThreadPoolExecutor(len(chunks)) as pool:
        return sum(pool.map(lambda c: fn(*c), chunks))


# ---------------------------------------------------------------------------
# hyperelliptic


def infinity_count(model: HyperellipticModel, n: int) -> int:
    if not model.infinity_is_split_type():
        return 1
    target, emb = build_extension(model.base, n)
    F = model.base
    H = model.h[model.g + 1] if len(model.h) > model.g + 1 else F.zero
    G = model.f[2 * model.g + 2] if len(model.f) > 2 * model.g + 2 else F.zero
    return len(solve_quadratic(target.one, emb(H), -emb(G)))


def _hyper_kernel(model: HyperellipticModel, n: int, threads: int) -> int:
    target, emb = build_extension(model.base, n)
    tab = zech_tables(target)
    f = tab.logs(upoly.push(model.f, emb)) if model.f else np.array([tab.M], np.int64)
    h = tab.logs(upoly.push(model.h, emb)) if model.h else np.array([tab.M], np.int64)
    four = tab.log(target(4)) if target.p != 2 else 0
    M = tab.M

    def run(a, b):
        return int(hyper_affine_count(f, h, tab.zech, tab.trace_log, M, target.p, four, a, b))

    return _parallel_sum(run, 0, M + 1, threads)


def _hyper_reference(model: HyperellipticModel, n: int) -> int:
    target, emb = build_extension(model.base, n)
    f, h = upoly.push(model.f, emb), upoly.push(model.h, emb)
    one = target.one
    total = 0
    for x in target.elements():
        total += len(solve_quadratic(one, upoly.evaluate(h, x), -upoly.evaluate(f, x)))
    return total


def _hyper_brute(model: HyperellipticModel, n: int) -> int:
    target, emb = build_extension(model.base, n)
    f, h = upoly.push(model.f, emb), upoly.push(model.h, emb)
    elems = list(target.elements())
    total = 0
    for x in elems:
        fx, hx = upoly.evaluate(f, x), upoly.evaluate(h, x)
        total += sum(1 for y in elems if y * y + hx * y == fx)
    return total


# ---------------------------------------------------------------------------
# plane


def _plane_arrays(model: PlaneCurveModel, n: int):
    target, emb = build_extension(model.base, n)
    tab = zech_tables(target)
    mons = [m for m, _ in model.coeffs]
    arr = lambda i: np.array([m[i] for m in mons], dtype=np.int64)
    coef = tab.logs([emb(c) for _, c in model.coeffs])
    return target, tab, arr(0), arr(1), arr(2), coef


def plane_candidates(q: int, n: int) -> int:
    Q = q**n
    return Q * Q + Q + 1


def _plane_brute(model: PlaneCurveModel, n: int, threads: int, budget: int) -> int:
    Q = model.q**n
    if plane_candidates(model.q, n) > budget:
        raise BudgetExceeded(f"{plane_candidates(model.q, n)} candidates exceed the budget {budget}")
    target, tab, ex, ey, ez, coef = _plane_arrays(model, n)
    M = tab.M

    def run(a, b):
        return plane_bruteforce_count(ex, ey, ez, coef, tab.zech, M, a, b)

    chunks = _split(0, M + 1, threads)
    if len(chunks) == 1:
        results = [run(*chunks[0])]
    else:
        with ThreadPoolExecutor(len(chunks)) as pool:
            results = list(pool.map(lambda c: run(*c), chunks))
    points = sum(int(r[0]) for r in results)
    scanned = sum(int(r[1]) for r in results)
    if scanned != plane_candidates(model.q, n):
        raise InvariantViolation(f"scanned {scanned} candidates, expected {Q * Q + Q + 1}")
    return points


def _plane_line(model: PlaneCurveModel, n: int, threads: int) -> int:
    target, tab, ex, ey, ez, coef = _plane_arrays(model, n)
    M, Q = tab.M, target.q

    def run(a, b):
        return int(plane_line_count(ex, ey, ez, coef, model.degree, Q, tab.zech, M, target.p, a, b))

    return _parallel_sum(run, 0, M + 1, threads)


def plane_chart_points(model: PlaneCurveModel, n: int) -> dict[str, list]:
    """Rational points split by chart, pure Python: (x,y,1), (x,1,0), (1,0,0)."""
    target, emb = build_extension(model.base, n)
    form = model.as_dict()
    one, zero = target.one, target.zero
    elems = list(target.elements())
    charts = {"xy1": [], "x10": [], "100": []}
    for x in elems:
        for y in elems:
            if not _eval_form(form, emb, (x, y, one)):
                charts["xy1"].append((x, y, one))
    for x in elems:
        if not _eval_form(form, emb, (x, one, zero)):
            charts["x10"].append((x, one, zero))
    if not _eval_form(form, emb, (one, zero, zero)):
        charts["100"].append((one, zero, zero))
    return charts


# ---------------------------------------------------------------------------


def count_points(model: CurveModel, n: int, method: str = "auto", budget: int = DEFAULT_ENUMERATION_BUDGET,
                 threads: int = 1) -> int:
    """N_n for a hyperelliptic or plane model."""
    if n < 1:
        raise ValueError("n must be positive")
    genus(model)  # raises SingularModel for singular or unvalidated models
    if isinstance(model, HyperellipticModel):
        inf = infinity_count(model, n)
        if method in ("auto", "kernel"):
            return _hyper_kernel(model, n, threads) + inf
        if method == "reference":
            return _hyper_reference(model, n) + inf
        if method == "brute":
            return _hyper_brute(model, n) + inf
        raise ValueError(f"unknown method {method!r}")
    if method in ("auto", "kernel", "line"):
        return _plane_line(model, n, threads)
    if method == "brute":
        return _plane_brute(model, n, threads, budget)
    if method == "reference":
        return sum(len(v) for v in plane_chart_points(model, n).values())
    raise ValueError(f"unknown method {method!r}")


def count_sequence(model: CurveModel, n_max: int, method: str = "auto", threads: int = 1,
                   budget: int = DEFAULT_ENUMERATION_BUDGET) -> CountsProfile:
    counts = [count_points(model, n, method, budget, threads) for n in range(1, n_max + 1)]
    return CountsProfile(model.q, genus(model), tuple(counts)).validate()


def profile_from_counts(q: int, g: int, counts: Sequence[int], source: str = "DirectEnumeration") -> CountsProfile:
    return CountsProfile(q, g, tuple(counts), source)
