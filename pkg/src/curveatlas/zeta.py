"""L-polynomials from point counts, and closed-point counts by Moebius inversion.

P(T) = 1 + a_1 T + ... + a_{2g} T^{2g} = prod (1 - w_j T); the power sums
S_n = sum_j w_j^n satisfy N_n = q^n + 1 - S_n and the Newton identities

    S_n + a_1 S_{n-1} + ... + a_{n-1} S_1 + n a_n = 0      (n <= 2g)
    S_n + a_1 S_{n-1} + ... + a_{2g} S_{n-2g} = 0          (n > 2g)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import mpmath

from .counting import CountsProfile, count_sequence
from .curves import CurveModel, genus
from .errors import InvariantViolation, NegativeResult, NonIntegralCoefficient, NonIntegralResult, NotWeil
from .fields import factorize
from .jsonio import big

RH_TOLERANCE = 1e-6


@dataclass(frozen=True)
class LPolynomial:
    q: int
    g: int
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(c) for c in self.a))

    @property
    def degree(self) -> int:
        return 2 * self.g

    def functional_equation_holds(self) -> bool:
        a, g, q = self.a, self.g, self.q
        return len(a) == 2 * g + 1 and a[0] == 1 and all(a[2 * g - i] == q ** (g - i) * a[i] for i in range(g + 1))

    def reciprocal_roots(self, dps: int = 60) -> list:
        """Distinct reciprocal roots (roots of the squarefree part of T^{2g} P(1/T))."""
        if self.g == 0:
            return []
        monic = squarefree_part([Fraction(c) for c in self.a])
        with mpmath.workdps(dps):
            return mpmath.polyroots([mpmath.mpf(c.numerator) / c.denominator for c in monic],
                                    maxsteps=800, extraprec=4 * dps)

    def riemann_hypothesis_holds(self, tol: float = RH_TOLERANCE) -> bool:
        if self.g == 0:
            return True
        rq = mpmath.sqrt(self.q)
        with mpmath.workdps(60):
            return all(abs(abs(w) - rq) <= tol * rq for w in self.reciprocal_roots())

    def validate(self) -> "LPolynomial":
        if not self.functional_equation_holds():
            raise NotWeil(f"coefficients {self.a} violate the functional equation")
        if not self.riemann_hypothesis_holds():
            raise NotWeil(f"reciprocal roots of {self.a} are not all of absolute value sqrt({self.q})")
        return self

    def power_sums(self, n_max: int) -> list[int]:
        a, two_g = self.a, 2 * self.g
        S = [0] * (n_max + 1)
        for n in range(1, n_max + 1):
            acc = sum(a[i] * S[n - i] for i in range(1, min(n - 1, two_g) + 1))
            if n <= two_g:
                acc += n * a[n]
            S[n] = -acc
        return S[1:]

    def count(self, n: int) -> int:
        return self.q**n + 1 - self.power_sums(n)[-1]

    def counts(self, n_max: int) -> tuple:
        return tuple(self.q**n + 1 - s for n, s in enumerate(self.power_sums(n_max), 1))

    def text(self) -> str:
        out = ""
        for i, c in enumerate(self.a):
            if not c:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            body = mono if abs(c) == 1 and mono else f"{abs(c)}{'*' if mono else ''}{mono}"
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out or "0"

    def to_json(self) -> dict:
        return {"q": self.q, "g": self.g, "a": [big(c) for c in self.a]}


def _rem(a: list, b: list) -> list:
    """Remainder of a by b; coefficient lists, highest degree first."""
    a = list(a)
    while len(a) >= len(b):
        c = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= c * b[i]
        a.pop(0)
        while a and a[0] == 0:
            a.pop(0)
    return a


def _quo(a: list, b: list) -> list:
    a, out = list(a), []
    while len(a) >= len(b):
        c = a[0] / b[0]
        out.append(c)
        for i in range(len(b)):
            a[i] -= c * b[i]
        a.pop(0)
    return out


def squarefree_part(a: list) -> list:
    """a / gcd(a, a') over Q, highest degree first, made monic."""
    n = len(a) - 1
    if n < 1:
        return [Fraction(1)]
    da = [c * (n - i) for i, c in enumerate(a[:-1])]
    x, y = list(a), da
    while y:
        x, y = y, _rem(x, y)
    out = _quo(a, x)
    return [c / out[0] for c in out]


def l_polynomial_from_counts(q: int, g: int, counts: Sequence[int]) -> LPolynomial:
    if len(counts) != g:
        raise ValueError(f"need exactly g = {g} counts, got {len(counts)}")
    S = [q**n + 1 - N for n, N in enumerate(counts, 1)]
    a = [1]
    for n in range(1, g + 1):
        acc = S[n - 1] + sum(a[i] * S[n - i - 1] for i in range(1, n))
        if acc % n:
            raise NonIntegralCoefficient(f"a_{n} = {-acc}/{n} is not an integer")
        a.append(-acc // n)
    a += [q ** (g - i) * a[i] for i in range(g - 1, -1, -1)]
    return LPolynomial(q, g, tuple(a)).validate()


def counts_from_l_polynomial(P: LPolynomial, n: int) -> int:
    return P.count(n)


# ---------------------------------------------------------------------------
# Moebius inversion


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius needs n >= 1")
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError("divisors needs n >= 1")
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


CountSource = Union[CountsProfile, LPolynomial, Sequence[int]]


def _count_getter(source: CountSource):
    if isinstance(source, LPolynomial):
        return source.count
    counts = source.counts if isinstance(source, CountsProfile) else tuple(source)

    def get(d):
        if d > len(counts):
            raise ValueError(f"N_{d} is not available (have N_1..N_{len(counts)})")
        return counts[d - 1]

    return get


def closed_points(source: CountSource, r: int) -> int:
    """B_r = (1/r) sum_{d | r} mu(r/d) N_d."""
    N = _count_getter(source)
    total = sum(mobius(r // d) * N(d) for d in divisors(r))
    if total % r:
        raise NonIntegralResult(f"r B_{r} = {total} is not divisible by {r}")
    if total < 0:
        raise NegativeResult(f"B_{r} = {total // r} < 0")
    return total // r


@dataclass(frozen=True)
class ClosedPointProfile:
    q: int
    g: int
    lpoly: LPolynomial
    counts: tuple
    closed: tuple
    direct: CountsProfile = field(compare=False, default=None)

    def B(self, r: int) -> int:
        return self.closed[r - 1]

    def N(self, n: int) -> int:
        return self.counts[n - 1]

    def to_json(self) -> dict:
        return {"q": self.q, "g": self.g, "L": self.lpoly.to_json(),
                "N": {str(n): big(v) for n, v in enumerate(self.counts, 1)},
                "B": {str(r): big(v) for r, v in enumerate(self.closed, 1)}}


def divisor_sum_holds(counts: Sequence[int], closed: Sequence[int]) -> bool:
    return all(sum(d * closed[d - 1] for d in divisors(r)) == counts[r - 1] for r in range(1, len(counts) + 1))


def closed_points_profile(model: CurveModel, r_max: int, direct_counts: int | None = None,
                          method: str = "auto") -> ClosedPointProfile:
    """B_1..B_{r_max} from g enumerations plus the L-polynomial.

    ``direct_counts`` enumerates more N_n than the g required, and the extra
    ones are checked against the L-polynomial prediction.
    """
    g = genus(model)
    n_direct = max(g, direct_counts or 0)
    direct = count_sequence(model, n_direct, method) if n_direct else CountsProfile(model.q, g, ())
    L = l_polynomial_from_counts(model.q, g, direct.counts[:g])
    counts = L.counts(max(r_max, n_direct))
    if counts[:n_direct] != direct.counts:
        raise InvariantViolation(f"L-polynomial predicts {counts[:n_direct]}, enumeration gave {direct.counts}")
    counts = counts[:r_max]
    CountsProfile(model.q, g, counts, "ZetaDerived").validate()
    closed = tuple(closed_points(counts, r) for r in range(1, r_max + 1))
    if not divisor_sum_holds(counts, closed):
        raise InvariantViolation("divisor-sum roundtrip failed")
    return ClosedPointProfile(model.q, g, L, counts, closed, direct)
