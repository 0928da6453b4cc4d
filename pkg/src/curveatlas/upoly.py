"""Univariate polynomials over a FieldDescriptor, as low-degree-first tuples."""
from __future__ import annotations

from typing import Sequence

from .fields import FieldDescriptor, FieldElement

Poly = tuple  # tuple[FieldElement, ...], trimmed


def normalize(F: FieldDescriptor, coeffs: Sequence) -> Poly:
    out = [F(c) for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def degree(a: Poly) -> int:
    return len(a) - 1


def add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    F = a[0].field if a else None
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return normalize(F, out) if F else ()


def neg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def sub(a: Poly, b: Poly) -> Poly:
    return add(a, neg(b))


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    F = a[0].field
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
    return normalize(F, out)


def scale(a: Poly, c: FieldElement) -> Poly:
    if not a:
        return ()
    return normalize(a[0].field, [x * c for x in a])


def divmod_(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    F = b[0].field
    rem = list(a)
    inv = b[-1].inverse()
    db = len(b) - 1
    quo = [F.zero] * max(len(a) - db, 0)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i] * inv
        if c:
            quo[i - db] = c
            for j in range(db + 1):
                rem[i - db + j] = rem[i - db + j] - c * b[j]
    return normalize(F, quo), normalize(F, rem[:db])


def mod(a: Poly, b: Poly) -> Poly:
    return divmod_(a, b)[1]


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (the empty tuple when both inputs are zero)."""
    while b:
        a, b = b, mod(a, b)
    if a:
        a = scale(a, a[-1].inverse())
    return a


def derivative(a: Poly) -> Poly:
    if len(a) <= 1:
        return ()
    F = a[0].field
    return normalize(F, [c * i for i, c in enumerate(a)][1:])


def evaluate(a: Sequence[FieldElement], x: FieldElement) -> FieldElement:
    acc = x.field.zero
    for c in reversed(a):
        acc = acc * x + c
    return acc


def push(a: Poly, emb) -> Poly:
    """Map coefficients through an embedding."""
    return tuple(emb(c) for c in a)


def reverse(a: Poly, n: int) -> Poly:
    """u^n * a(1/u), for n >= deg a."""
    if not a:
        return ()
    F = a[0].field
    out = [F.zero] * (n + 1)
    for i, c in enumerate(a):
        out[n - i] = c
    return normalize(F, out)


def to_text(a: Poly, var: str = "x") -> str:
    from .polyexpr import format_coefficient

    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        coef = format_coefficient(c)
        if not mono:
            terms.append(coef)
        elif coef == "1":
            terms.append(mono)
        else:
            terms.append(f"{coef}*{mono}")
    return "+".join(terms) if terms else "0"
