"""Finite fields F_{p^k} realised as F_p[t]/(m(t)).

Elements are dense coefficient tuples ``(c_0, ..., c_{k-1})`` over Z/pZ.
The enumeration index of an element is ``sum(c_i * p**i)``, so the
enumeration order starts 0, 1, 2, ..., p-1, t, t+1, ...

Every extension F_{q^n} is built as an *absolute* field F_{p^{kn}} with its
own canonical modulus, together with an explicit :class:`Embedding` of the
smaller field.
"""
from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import (
    CapExceeded,
    DescriptorMismatch,
    DivisionByZero,
    InvariantViolation,
    NotPrime,
    RootNotFound,
    ZeroLeadingCoefficient,
)

DEFAULT_FIELD_CAP = 1 << 24
LOG_TABLE_LIMIT = 1 << 14  # extension fields up to this order multiply through exp/log tables


def field_cap() -> int:
    """Largest allowed field cardinality (``CURVEATLAS_FIELD_CAP`` overrides)."""
    value = os.environ.get("CURVEATLAS_FIELD_CAP")
    if value:
        return int(value)
    return DEFAULT_FIELD_CAP


# ---------------------------------------------------------------------------
# integers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorisation, ``{prime: exponent}``."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``; raise NotPrime otherwise."""
    fac = factorize(q) if q > 1 else {}
    if len(fac) != 1:
        raise NotPrime(f"{q} is not a prime power")
    ((p, k),) = fac.items()
    return p, k


def is_prime_power(q: int) -> bool:
    return q > 1 and len(factorize(q)) == 1


def prime_powers(upto: int, start: int = 2) -> list[int]:
    return [q for q in range(max(start, 2), upto + 1) if is_prime_power(q)]


# ---------------------------------------------------------------------------
# polynomials over F_p, as low-degree-first lists without trailing zeros


def ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def pdeg(a: Sequence[int]) -> int:
    return len(a) - 1


def psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return ptrim(out)


def pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return ptrim([c % p for c in out])


def pdivmod(a, b, p):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    quo = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            quo[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return ptrim(quo), ptrim(a[:db] if db else [])


def pmod(a, b, p):
    return pdivmod(a, b, p)[1]


def pgcd(a, b, p):
    a, b = ptrim(list(a)), ptrim(list(b))
    while b:
        a, b = b, pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def ppowmod(base, e, mod, p):
    result = [1]
    base = pmod(base, mod, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = pmod(pmul(base, base, p), mod, p)
    return result


def is_irreducible(m: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a polynomial over F_p."""
    m = ptrim(list(m))
    k = len(m) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    t = [0, 1]
    if ppowmod(t, p**k, m, p) != pmod(t, m, p):
        return False
    for ell in factorize(k):
        h = psub(ppowmod(t, p ** (k // ell), m, p), t, p)
        if len(pgcd(m, h, p)) != 1:
            return False
    return True


def has_small_factor(m: Sequence[int], p: int, max_degree: int = 4) -> bool:
    """True if m has an irreducible factor of degree <= max_degree (gcd with t^(p^i) - t)."""
    m = ptrim(list(m))
    x = [0, 1]
    for _ in range(min(max_degree, (len(m) - 1) // 2)):
        x = ppowmod(x, p, m, p)
        if len(pgcd(m, psub(x, [0, 1], p), p)) != 1:
            return True
    return False


@functools.lru_cache(maxsize=None)
def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k (low degree compared first)."""
    for low in itertools.product(range(p), repeat=k):
        cand = list(low) + [1]
        if k > 1 and (low[0] == 0 or has_small_factor(cand, p)):
            continue
        if is_irreducible(cand, p):
            return tuple(cand)
    raise RootNotFound(f"no irreducible polynomial of degree {k} over F_{p}")


# ---------------------------------------------------------------------------
# fields and elements


@dataclass(frozen=True)
class FieldDescriptor:
    p: int
    k: int
    modulus: tuple[int, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    order = q

    @property
    def characteristic(self) -> int:
        return self.p

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __str__(self):
        return f"F_{self.q}"

    def to_json(self):
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    # construction helpers

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise DescriptorMismatch(f"{value!r} does not belong to {self!r}")
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.k - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.k:
            coeffs = pmod(coeffs, list(self.modulus), self.p)
        coeffs = coeffs + [0] * (self.k - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def from_index(self, index: int) -> "FieldElement":
        if not 0 <= index < self.q:
            raise ValueError(f"index {index} outside {self}")
        coeffs = []
        for _ in range(self.k):
            index, c = divmod(index, self.p)
            coeffs.append(c)
        return FieldElement(self, tuple(coeffs))

    @property
    def zero(self) -> "FieldElement":
        return self(0)

    @property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def gen(self) -> "FieldElement":
        """Residue class of t (equals 0 for prime fields, whose modulus is t)."""
        return self([0, 1])

    def elements(self) -> Iterator["FieldElement"]:
        """All q elements in enumeration order: 0, 1, ..., then t, t+1, ..."""
        p, k = self.p, self.k
        for digits in itertools.product(range(p), repeat=k):
            yield FieldElement(self, tuple(reversed(digits)))

    def enumerate_range(self, start: int, stop: int) -> Iterator["FieldElement"]:
        for i in range(start, min(stop, self.q)):
            yield self.from_index(i)

    def primitive_element(self) -> "FieldElement":
        """First generator of the multiplicative group in enumeration order."""
        if "primitive" not in self._cache:
            n = self.q - 1
            exps = [n // ell for ell in factorize(n)] if n > 1 else []
            for i in range(1, self.q):
                x = self.from_index(i)
                if all(x**e != self.one for e in exps):
                    self._cache["primitive"] = x
                    break
        return self._cache["primitive"]

    def generators(self) -> list["FieldElement"]:
        """All generators of the multiplicative group, in enumeration order."""
        n = self.q - 1
        exps = [n // ell for ell in factorize(n)] if n > 1 else []
        return [x for x in itertools.islice(self.elements(), 1, None) if all(x**e != self.one for e in exps)]

    def _log_tables(self):
        """(exp, log) for the primitive element, or None for prime or large fields."""
        tables = self._cache.get("log_tables", False)
        if tables is not False:
            return tables
        self._cache["log_tables"] = None  # polynomial arithmetic while the tables are built
        if self.k == 1 or self.q > LOG_TABLE_LIMIT:
            return None
        gamma = self.primitive_element()
        exp, x = [], self.one
        for _ in range(self.q - 1):
            exp.append(x.coeffs)
            x = x._poly_mul(gamma)
        tables = self._cache["log_tables"] = (exp, {c: i for i, c in enumerate(exp)})
        return tables

    def absolute_trace_basis(self) -> tuple[int, ...]:
        """Absolute traces Tr(t^i) for i < k, as prime-field integers."""
        if "trace_basis" not in self._cache:
            self._cache["trace_basis"] = tuple(self([0] * i + [1])._trace_by_frobenius() for i in range(self.k))
        return self._cache["trace_basis"]


class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDescriptor, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    # identity

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == self.field(other).coeffs
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    @property
    def index(self) -> int:
        p, out = self.field.p, 0
        for c in reversed(self.coeffs):
            out = out * p + c
        return out

    def is_prime_field_element(self) -> bool:
        return not any(self.coeffs[1:])

    def __repr__(self):
        return f"{self.field!r}({self._poly_text()})"

    def _poly_text(self, var="t"):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
                if not mono:
                    terms.append(str(c))
                else:
                    terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    # arithmetic

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise DescriptorMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, int):
            return self.field(other)
        raise DescriptorMismatch(f"cannot combine field element with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        p = self.field.p
        return FieldElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        if F.k == 1:
            return FieldElement(F, (self.coeffs[0] * other.coeffs[0] % F.p,))
        tables = F._cache.get("log_tables", False)
        if tables is False:
            tables = F._log_tables()
        if tables is None:
            return self._poly_mul(other)
        exp, log = tables
        la, lb = log.get(self.coeffs), log.get(other.coeffs)
        if la is None or lb is None:
            return FieldElement(F, (0,) * F.k)
        return FieldElement(F, exp[(la + lb) % (F.q - 1)])

    def _poly_mul(self, other: "FieldElement") -> "FieldElement":
        F = self.field
        p, k, m = F.p, F.k, F.modulus
        a, b = self.coeffs, other.coeffs
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        # m is monic of degree k: t^k = -(m_0 + ... + m_{k-1} t^{k-1})
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(k):
                    prod[i - k + j] -= c * m[j]
        return FieldElement(F, tuple(c % p for c in prod[:k]))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise DivisionByZero("inverse of zero")
        F = self.field
        p = F.p
        if F.k == 1:
            return F(pow(self.coeffs[0], p - 2, p))
        tables = F._cache.get("log_tables") if F.q <= LOG_TABLE_LIMIT else None
        if tables:
            exp, log = tables
            return FieldElement(F, exp[-log[self.coeffs] % (F.q - 1)])
        # extended Euclid in F_p[t]
        r0, r1 = list(F.modulus), ptrim(list(self.coeffs))
        s0, s1 = [], [1]
        while len(r1) > 1:
            quo, rem = pdivmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, psub(s0, pmul(quo, s1, p), p)
        inv_c = pow(r1[0], p - 2, p)
        return F([c * inv_c % p for c in s1])

    inv = inverse

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        F = self.field
        if F.k == 1:
            return FieldElement(F, (pow(self.coeffs[0], e, F.p),))
        tables = F._cache.get("log_tables")
        if tables:
            exp, log = tables
            la = log.get(self.coeffs)
            if la is None:
                return F.one if e == 0 else F.zero
            return FieldElement(F, exp[la * e % (F.q - 1)])
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius(self, times: int = 1) -> "FieldElement":
        return self ** (self.field.p**times)

    def trace(self) -> int:
        """Absolute trace to F_p, as an integer in [0, p)."""
        F = self.field
        basis = F._cache.get("trace_basis") or F.absolute_trace_basis()
        return sum(c * t for c, t in zip(self.coeffs, basis)) % F.p

    def _trace_by_frobenius(self) -> int:
        acc = self
        total = self
        for _ in range(self.field.k - 1):
            acc = acc ** self.field.p
            total = total + acc
        return total.coeffs[0]

    def is_square(self) -> bool:
        F = self.field
        if F.p == 2 or not self:
            return True
        return self ** ((F.q - 1) // 2) == F.one

    def sqrt(self) -> "FieldElement | None":
        """A square root, or None; of the two roots, the one first in enumeration order."""
        F = self.field
        if not self:
            return F.zero
        if F.p == 2:
            return self ** (F.q // 2)
        if not self.is_square():
            return None
        r = self ** ((F.q + 1) // 4) if F.q % 4 == 3 else _tonelli_shanks(self)
        return min(r, -r, key=lambda y: y.index)


def _tonelli_shanks(a: FieldElement) -> FieldElement:
    F = a.field
    q = F.q
    s, odd = 0, q - 1
    while odd % 2 == 0:
        s, odd = s + 1, odd // 2
    z = F._cache.get("non_residue")
    if z is None:
        z = F._cache["non_residue"] = next(x for x in itertools.islice(F.elements(), 1, None) if not x.is_square())
    m, c, t, r = s, z**odd, a**odd, a ** ((odd + 1) // 2)
    while t != F.one:
        i, t2 = 0, t
        while t2 != F.one:
            t2 = t2 * t2
            i += 1
        b = c ** (1 << (m - i - 1))
        m, c = i, b * b
        t, r = t * c, r * b
    return r


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1, cap: int | None = None) -> FieldDescriptor:
    """Canonical field F_{p^k} with the lexicographically smallest monic irreducible modulus."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError("degree must be positive")
    limit = field_cap() if cap is None else cap
    if p**k > limit:
        raise CapExceeded(f"field of size {p}^{k} exceeds the cap {limit}")
    return FieldDescriptor(p, k, smallest_irreducible(p, k))


def field_of_order(q: int) -> FieldDescriptor:
    p, k = prime_power(q)
    return make_field(p, k)


# ---------------------------------------------------------------------------
# embeddings


@dataclass(frozen=True)
class Embedding:
    """Ring map source -> target fixed by the image of the class of t."""

    source: FieldDescriptor
    target: FieldDescriptor
    image_of_gen: FieldElement
    _powers: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        powers, acc = [], self.target.one
        for _ in range(self.source.k):
            powers.append(acc)
            acc = acc * self.image_of_gen
        object.__setattr__(self, "_powers", tuple(powers))

    def __call__(self, x: FieldElement | int) -> FieldElement:
        x = self.source(x)
        out = self.target.zero
        for c, pw in zip(x.coeffs, self._powers):
            if c:
                out = out + pw * c
        return out

    def table(self) -> list[FieldElement]:
        """Images of every source element, indexed by enumeration index."""
        return [self(x) for x in self.source.elements()]


def eval_prime_poly(coeffs: Sequence[int], x: FieldElement) -> FieldElement:
    acc = x.field.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _find_embedding_root(source: FieldDescriptor, target: FieldDescriptor) -> FieldElement:
    """First root, in enumeration order, of source.modulus inside target.

    All such roots lie in the unique subfield of order q = |source|, so only
    those q candidates are tested; the minimum enumeration index among them is
    the first root of an exhaustive scan.
    """
    m = source.modulus
    if source.k == 1:
        cands = [target(c) for c in range(source.p)]
    else:
        gamma = target.primitive_element()
        beta = gamma ** ((target.q - 1) // (source.q - 1))
        cands, acc = [target.zero], target.one
        for _ in range(source.q - 1):
            cands.append(acc)
            acc = acc * beta
    roots = [x for x in cands if not eval_prime_poly(m, x)]
    if not roots:
        raise RootNotFound(f"{source!r} does not embed in {target!r}")
    return min(roots, key=lambda x: x.index)


def find_embedding_root_exhaustive(source: FieldDescriptor, target: FieldDescriptor) -> FieldElement:
    for x in target.elements():
        if not eval_prime_poly(source.modulus, x):
            return x
    raise RootNotFound(f"{source!r} does not embed in {target!r}")


@functools.lru_cache(maxsize=None)
def build_extension(base: FieldDescriptor, n: int) -> tuple[FieldDescriptor, Embedding]:
    """Absolute field F_{q^n} and the embedding of ``base`` into it."""
    if n < 1:
        raise ValueError("extension degree must be positive")
    target = make_field(base.p, base.k * n)
    if n == 1:
        return target, Embedding(base, target, target.gen)
    return target, Embedding(base, target, _find_embedding_root(base, target))


# ---------------------------------------------------------------------------
# quadratics


def solve_quadratic(a: FieldElement, b: FieldElement, c: FieldElement) -> set[FieldElement]:
    """All y with a*y^2 + b*y + c = 0."""
    F = a.field
    b, c = F(b), F(c)
    if not a:
        raise ZeroLeadingCoefficient("leading coefficient is zero")
    if F.p != 2:
        disc = b * b - a * c * 4
        root = disc.sqrt()
        if root is None:
            return set()
        denom = (a * 2).inverse()
        return {(-b + root) * denom, (-b - root) * denom}
    if not b:
        return {(c / a).sqrt()}
    # y = (b/a) z turns the equation into z^2 + z = d
    scale = b / a
    d = c * a / (b * b)
    if d.trace():
        return set()
    z = _artin_schreier_root(d)
    return {scale * z, scale * (z + 1)}


def _artin_schreier_root(d: FieldElement) -> FieldElement:
    F = d.field
    if F.k % 2 == 1:
        # half-trace: sum of d^(4^i) for i <= (k-1)/2
        acc, term = d, d
        for _ in range((F.k - 1) // 2):
            term = term**4
            acc = acc + term
        return acc
    # with Tr(delta) = 1, z(d) = sum_{i=1}^{k-1} (d + d^2 + ... + d^(2^(i-1))) delta^(2^i) is F_2-linear
    # and satisfies z^2 + z = d + Tr(d) delta, so tabulate it on the basis t^i
    images = F._cache.get("as_basis")
    if images is None:
        delta = next(x for x in F.elements() if x.trace())
        images = F._cache["as_basis"] = tuple(_as_formula(F([0] * i + [1]), delta).index for i in range(F.k))
    acc = 0
    for c, img in zip(d.coeffs, images):
        if c:
            acc ^= img
    z = F.from_index(acc)
    if z * z + z != d:
        raise RootNotFound("trace-zero element without Artin-Schreier root")
    return z


def _as_formula(d: FieldElement, delta: FieldElement) -> FieldElement:
    z, partial, d_pow, delta_pow = d.field.zero, d.field.zero, d, delta
    for _ in range(1, d.field.k):
        partial = partial + d_pow
        d_pow = d_pow * d_pow
        delta_pow = delta_pow * delta_pow
        z = z + partial * delta_pow
    return z


def minimal_polynomial(x: FieldElement) -> tuple[int, ...]:
    """Monic minimal polynomial of x over the prime field, low degree first."""
    F = x.field
    conj = [x]
    while True:
        nxt = conj[-1].frobenius()
        if nxt == x:
            break
        conj.append(nxt)
    poly = [F.one]
    for c in conj:
        shifted = [F.zero] + poly
        for i, a in enumerate(poly):
            shifted[i] = shifted[i] - c * a
        poly = shifted
    if not all(a.is_prime_field_element() for a in poly):
        raise InvariantViolation("minimal polynomial has coefficients outside the prime field")
    return tuple(a.coeffs[0] for a in poly)
