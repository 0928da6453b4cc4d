"""Certified evaluation of the explicit bounds on N_n, B_r and rho(q, g).

Bound identifiers
-----------------
Lower bounds on B_r (``br_lower_bounds``):

``br_mobius_weil``    (q^r - A (q^{r/2} - 1)) / r, from Moebius inversion plus Weil
``br_linear_6g3``     B_r > (q^r - (6g+3) q^{r/2}) / r
``br_quartic_root``   B_r > (q^{r/4}+1)^2 ((q^{r/4}-1)^2 - 2g) / r, for r >= 2
``br_prime_weil``     (N_r - N_1)/r with both Weil bounds, for r prime
``br_rational_weil``  B_1 = N_1 >= q + 1 - 2g sqrt(q)

Upper bounds on rho (``rho_upper_bounds``):

``rho_log_2g1``               ceil(2 log_q((2g+1)/(sqrt q - 1)) + 1)
``rho_uniform_4g3``           4g + 3
``rho_uniform_2g1``           2g + 1, for g >= 2
``rho_log_quartic``           max(2, ceil(4 log_q(1 + sqrt(2g))))
``rho_quadratic``             floor(2 log_q((A + sqrt(A(A-4)))/2) + 1), when A(A-4) >= 0
``rho_quadratic_criterion``   rho = 1 when g < q / (2 (sqrt q + 1)), when A(A-4) >= 0
``rho_negative_discriminant`` rho = 1 when A(A-4) < 0

Upper bounds on B_2 (``b2_upper_bounds``):

``b2_mobius_weil``  (q^2+1+2gq)/2 + (q-1+2g sqrt q)/2
``b2_weil_n1``      (q^2+1+2gq)/2 - N_1/2
``b2_weil``         piecewise in g versus (q+1)/(2 sqrt q)
``b2_hp_n1``        b2_weil_n1 - (N_1-(q+1))^2/(2g)
``b2_hp``           piecewise in g versus 2q+2
``b2_exact``        (N_2 - N_1)/2 when both counts are known

Here A = q/(q-1) + 2g sqrt(q)/(sqrt(q)-1).  Every integer produced here (a
ceiling of a logarithm, a floor of a bound) is decided by exact comparisons in
Q(sqrt q) or Q(sqrt 2g), never by floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .certified import CertifiedValue, Interval, Surd, root_enclosure, sqrt_power
from .fields import is_prime, is_prime_power


@dataclass
class BoundReport:
    bound_id: str
    inputs: dict
    value: Optional[CertifiedValue]
    applicable: bool
    reason: str = ""
    integer: Optional[int] = None
    guarantees_positive: Optional[bool] = None

    def to_json(self) -> dict:
        out = {"bound_id": self.bound_id, "inputs": dict(self.inputs), "applicable": self.applicable,
               "reason": self.reason}
        if self.applicable and self.value is not None:
            v = self.value.to_json()
            out.update(lo=v["lo"], hi=v["hi"], exact=v["exact"], approx=v["approx"])
            if "closed_form" in v:
                out["closed_form"] = v["closed_form"]
        else:
            out.update(lo=None, hi=None, exact=None)
        if self.integer is not None:
            out["integer"] = self.integer
        if self.guarantees_positive is not None:
            out["guarantees_positive"] = self.guarantees_positive
        return out


def _inapplicable(bound_id, inputs, reason, **extra) -> BoundReport:
    return BoundReport(bound_id, inputs, None, False, reason, **extra)


def _check_q(q):
    if not is_prime_power(q):
        raise ValueError(f"{q} is not a prime power")


# ---------------------------------------------------------------------------
# Weil


def weil_interval(q: int, g: int, n: int) -> tuple[int, int]:
    """Exact integer range [lo, hi] allowed for N_n by the Weil bounds."""
    _check_q(q)
    s = sqrt_power(q, n)
    centre = Surd(q**n + 1)
    return (centre - 2 * g * s).ceil(), (centre + 2 * g * s).floor()


def quadratic_coefficient(q: int, g: int) -> Surd:
    """A = q/(q-1) + 2g sqrt(q)/(sqrt(q)-1), exactly."""
    rq = Surd.sqrt(q)
    return Surd(Fraction(q, q - 1)) + 2 * g * rq / (rq - 1)


def quadratic_discriminant(q: int, g: int) -> Surd:
    a = quadratic_coefficient(q, g)
    return a * (a - 4)


# ---------------------------------------------------------------------------
# lower bounds on B_r


def _quarter_power(q: int, r: int) -> Optional[Surd]:
    """q^{r/4} as an exact Surd when it lies in a quadratic field."""
    if r % 2 == 0:
        return sqrt_power(q, r // 2)
    s = math.isqrt(q)
    if s * s == q:
        return sqrt_power(s, r)
    return None


def _quartic_root_value(q: int, g: int, r: int) -> CertifiedValue:
    t = _quarter_power(q, r)
    if t is not None:
        return CertifiedValue.from_surd((t + 1) ** 2 * ((t - 1) ** 2 - 2 * g) / r)

    def enclosure(bits: int) -> Interval:
        lo, hi = root_enclosure(Fraction(q**r), 4, bits)
        ti = Interval(lo, hi)
        return (ti + 1).square() * ((ti - 1).square() - 2 * g) / r

    return CertifiedValue.from_function(enclosure)


def quartic_root_condition(q: int, g: int, r: int) -> bool:
    """(q^{r/4} - 1)^2 >= 2g, decided as q^r >= (1 + sqrt(2g))^4."""
    return Surd(q**r) >= (Surd(1) + Surd.sqrt(2 * g)) ** 4


def br_lower_bounds(q: int, g: int, r: int) -> list[BoundReport]:
    _check_q(q)
    if r < 1:
        raise ValueError("r must be positive")
    inputs = {"q": q, "g": g, "r": r}
    reports = []
    qr, half = Surd(q**r), sqrt_power(q, r)

    v = (qr - quadratic_coefficient(q, g) * (half - 1)) / r
    reports.append(BoundReport("br_mobius_weil", inputs, CertifiedValue.from_surd(v), True,
                               "B_r >= value", guarantees_positive=v > 0))

    v = (qr - (6 * g + 3) * half) / r
    reports.append(BoundReport("br_linear_6g3", inputs, CertifiedValue.from_surd(v), True,
                               "B_r > value", guarantees_positive=v >= 0))

    if r >= 2:
        value = _quartic_root_value(q, g, r)
        reports.append(BoundReport("br_quartic_root", inputs, value, True, "B_r > value",
                                   guarantees_positive=quartic_root_condition(q, g, r)))
    else:
        reports.append(_inapplicable("br_quartic_root", inputs, "needs r >= 2", guarantees_positive=False))

    if is_prime(r):
        v = (qr - q - 2 * g * (half + Surd.sqrt(q))) / r
        reports.append(BoundReport("br_prime_weil", inputs, CertifiedValue.from_surd(v), True,
                                   "B_r = (N_r - N_1)/r >= value", guarantees_positive=v > 0))
    else:
        reports.append(_inapplicable("br_prime_weil", inputs, "r is not prime", guarantees_positive=False))

    if r == 1:
        v = Surd(q + 1) - 2 * g * Surd.sqrt(q)
        reports.append(BoundReport("br_rational_weil", inputs, CertifiedValue.from_surd(v), True,
                                   "B_1 = N_1 >= value", guarantees_positive=v > 0))
    else:
        reports.append(_inapplicable("br_rational_weil", inputs, "only for r = 1", guarantees_positive=False))
    return reports


def guarantees_degree(q: int, g: int, r: int) -> list[str]:
    """Identifiers of formula bounds proving B_r > 0 for every genus-g curve over F_q."""
    return [rep.bound_id for rep in br_lower_bounds(q, g, r) if rep.applicable and rep.guarantees_positive]


# ---------------------------------------------------------------------------
# upper bounds on rho


def _least(pred: Callable[[int], bool], guess: int) -> int:
    r = guess
    while pred(r - 1):
        r -= 1
    while not pred(r):
        r += 1
    return r


def _greatest(pred: Callable[[int], bool], guess: int) -> int:
    r = guess
    while not pred(r):
        r -= 1
    while pred(r + 1):
        r += 1
    return r


def _guess(x: float) -> int:
    return int(math.floor(x)) if math.isfinite(x) else 1


def rho_log_2g1(q: int, g: int) -> int:
    rq = Surd.sqrt(q)

    def pred(r):
        return sqrt_power(q, r - 1) * (rq - 1) >= 2 * g + 1

    est = 2 * math.log((2 * g + 1) / (math.sqrt(q) - 1), q) + 1
    return _least(pred, _guess(est))


def rho_log_quartic(q: int, g: int) -> int:
    target = (Surd(1) + Surd.sqrt(2 * g)) ** 4

    def pred(r):
        return Surd(Fraction(q) ** r) >= target

    est = 4 * math.log(1 + math.sqrt(2 * g), q)
    return max(2, _least(pred, _guess(est)))


def rho_quadratic(q: int, g: int) -> int:
    """floor(2 log_q Y + 1) with Y the larger root of X^2 - A X + A (requires A >= 4)."""
    A = quadratic_coefficient(q, g)
    if A < 4:
        raise ValueError("negative discriminant")

    def pred(r):
        s = sqrt_power(q, r - 1)
        return s <= A / 2 or s * s - A * s + A <= 0

    a = float(A)
    y = (a + math.sqrt(max(a * (a - 4), 0.0))) / 2
    return _greatest(pred, _guess(2 * math.log(y, q) + 1))


def quadratic_criterion(q: int, g: int) -> bool:
    """g < (sqrt q / 2)(1 - (sqrt q - 1)/(q - 1)), i.e. q - 2g(sqrt q + 1) > 0."""
    return (Surd(q) - 2 * g * (Surd.sqrt(q) + 1)).sign() > 0


def rho_upper_bounds(q: int, g: int) -> list[BoundReport]:
    """Every upper bound on rho(q, g) plus a final ``rho_min`` report."""
    _check_q(q)
    inputs = {"q": q, "g": g}
    if g == 0:
        one = CertifiedValue.from_rational(1)
        reps = [BoundReport("rho_genus_zero", inputs, one, True, "genus 0 curves have points of every degree", 1)]
        reps.append(BoundReport("rho_min", inputs, one, True, "rho_genus_zero", 1))
        return reps
    reps = []

    def exact(bound_id, n, reason):
        reps.append(BoundReport(bound_id, inputs, CertifiedValue.from_rational(n), True, reason, n))

    exact("rho_log_2g1", rho_log_2g1(q, g), "least r with q^{(r-1)/2} (sqrt q - 1) >= 2g + 1")
    exact("rho_uniform_4g3", 4 * g + 3, "uniform")
    if g >= 2:
        exact("rho_uniform_2g1", 2 * g + 1, "uniform for g >= 2")
    else:
        reps.append(_inapplicable("rho_uniform_2g1", inputs, "needs g >= 2"))
    exact("rho_log_quartic", rho_log_quartic(q, g), "max(2, least r with q^r >= (1 + sqrt(2g))^4)")

    A = quadratic_coefficient(q, g)
    disc = A * (A - 4)
    disc_text = f"A(A-4) ~ {float(disc):.6g}"
    if disc.sign() >= 0:
        exact("rho_quadratic", rho_quadratic(q, g), f"{disc_text} >= 0")
        if quadratic_criterion(q, g):
            exact("rho_quadratic_criterion", 1, "g < q / (2 (sqrt q + 1))")
        else:
            reps.append(_inapplicable("rho_quadratic_criterion", inputs, "g >= q / (2 (sqrt q + 1))"))
        reps.append(_inapplicable("rho_negative_discriminant", inputs, f"{disc_text} >= 0"))
    else:
        reps.append(_inapplicable("rho_quadratic", inputs, f"{disc_text} < 0"))
        reps.append(_inapplicable("rho_quadratic_criterion", inputs, f"{disc_text} < 0"))
        exact("rho_negative_discriminant", 1, f"{disc_text} < 0, so r B_r > 0 for every r")

    applicable = [r for r in reps if r.applicable]
    best = min(applicable, key=lambda r: r.integer)
    value = max(1, best.integer)
    reps.append(BoundReport("rho_min", inputs, CertifiedValue.from_rational(value), True, best.bound_id, value))
    return reps


def rho_upper_bound(q: int, g: int) -> tuple[int, str]:
    rep = rho_upper_bounds(q, g)[-1]
    return rep.integer, rep.reason


def report(reports: list[BoundReport], bound_id: str) -> BoundReport:
    for rep in reports:
        if rep.bound_id == bound_id:
            return rep
    raise KeyError(bound_id)


# ---------------------------------------------------------------------------
# upper bounds on B_2


def b2_upper_bounds(q: int, g: int, n1: Optional[int] = None, n2: Optional[int] = None) -> list[BoundReport]:
    _check_q(q)
    inputs = {"q": q, "g": g, "N_1": n1, "N_2": n2}
    head = Fraction(q * q + 1 + 2 * g * q, 2)
    rq = Surd.sqrt(q)
    reps = []

    def add(bound_id, value: Surd, reason):
        cv = CertifiedValue.from_surd(value)
        reps.append(BoundReport(bound_id, inputs, cv, True, reason, value.floor()))

    add("b2_mobius_weil", head + (q - 1 + 2 * g * rq) / 2, "two-sided Moebius/Weil bound at r = 2")
    if n1 is not None:
        add("b2_weil_n1", Surd(head - Fraction(n1, 2)), "Weil upper bound on N_2")
    else:
        reps.append(_inapplicable("b2_weil_n1", inputs, "needs N_1"))
    if 4 * g * g * q >= (q + 1) ** 2:
        add("b2_weil", Surd(head), "g >= (q+1)/(2 sqrt q)")
    else:
        add("b2_weil", (q * q - q + 2 * g * (q + rq)) / 2, "g < (q+1)/(2 sqrt q)")
    if g >= 1 and n1 is not None:
        add("b2_hp_n1", Surd(head - Fraction(n1, 2) - Fraction((n1 - q - 1) ** 2, 2 * g)), "Hallouin-Perret")
    else:
        reps.append(_inapplicable("b2_hp_n1", inputs, "needs N_1 and g >= 1"))
    if g < 1:
        reps.append(_inapplicable("b2_hp", inputs, "needs g >= 1"))
    elif g >= 2 * q + 2:
        add("b2_hp", Surd(head - Fraction((q + 1) ** 2, 2 * g)), "g >= 2q + 2")
    else:
        add("b2_hp", Surd(head - Fraction(4 * (q + 1) - g, 8)), "g < 2q + 2")
    if n1 is not None and n2 is not None:
        if (n2 - n1) % 2:
            raise ValueError("N_2 - N_1 must be even")
        add("b2_exact", Surd((n2 - n1) // 2), "(N_2 - N_1)/2")
    return reps


def hallouin_perret_check(q: int, g: int, n1: int, n2: int) -> bool:
    """N_2 - (q^2 + 1) <= 2gq - (N_1 - (q + 1))^2 / g, exactly."""
    if g < 1:
        raise ValueError("needs g >= 1")
    return n2 - (q * q + 1) <= 2 * g * q - Fraction((n1 - (q + 1)) ** 2, g)


def b2_n1_floors(q: int, g: int) -> list[tuple[int, int, int]]:
    """(N_1, floor b2_weil_n1, floor b2_hp_n1) for every N_1 in [0, Weil upper bound], in integers only."""
    _check_q(q)
    if g < 1:
        raise ValueError("needs g >= 1")
    top = q * q + 1 + 2 * g * q
    out = []
    for n1 in range(weil_interval(q, g, 1)[1] + 1):
        out.append((n1, (top - n1) // 2, (g * (top - n1) - (n1 - q - 1) ** 2) // (2 * g)))
    return out
