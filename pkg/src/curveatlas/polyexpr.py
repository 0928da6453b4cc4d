"""Polynomial expression parser.

Grammar::

    expr   = term { ("+" | "-") term } ;
    term   = unary { ["*"] unary } ;          (* juxtaposition multiplies *)
    unary  = ("-" | "+") unary | power ;
    power  = atom [ "^" INT ] ;
    atom   = INT | VAR | "(" expr ")" ;
    VAR    = "x" | "y" | "z" | "a" ;

``^`` binds tighter than ``*`` which binds tighter than ``+``/``-``.  Integer
literals are reduced into the prime field; ``a`` names a fixed field element
(by default the class of t, or the least primitive root of a prime field).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import InhomogeneousForm, PolySyntaxError, UndeclaredVariable
from .fields import FieldDescriptor, FieldElement

VARIABLES = ("x", "y", "z")


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Sub:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Var, Neg, Add, Sub, Mul, Pow]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z])|(\*\*|[-+*^()]))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise PolySyntaxError(f"unexpected character {text[bad]!r}", bad)
        if m.group(1):
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("var", m.group(2), m.start(2)))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(("op", op, m.start(3)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Node:
        if not self.tokens:
            raise PolySyntaxError("empty expression", 0)
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def _starts_atom(self):
        kind, val, _ = self.peek()
        return kind in ("int", "var") or (kind == "op" and val == "(")

    def term(self):
        node = self.unary()
        while True:
            if self.peek()[:2] == ("op", "*"):
                self.take()
                node = Mul(node, self.unary())
            elif self._starts_atom():
                node = Mul(node, self.power())
            else:
                return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise PolySyntaxError("exponent must be a non-negative integer", pos)
            return Pow(base, int(val))
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return Num(int(val))
        if kind == "var":
            return Var(val)
        if kind == "op" and val == "(":
            node = self.expr()
            kind2, val2, pos2 = self.take()
            if (kind2, val2) != ("op", ")"):
                raise PolySyntaxError("expected ')'", pos2)
            return node
        raise PolySyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse_expr(text: str) -> Node:
    return _Parser(text).parse()


_PREC = {Add: 1, Sub: 1, Mul: 2, Neg: 3, Pow: 4, Num: 5, Var: 5}


def format_expr(node: Node) -> str:
    """Canonical text; ``parse_expr(format_expr(n)) == n``."""
    prec = _PREC[type(node)]

    def wrap(child, strict):
        s = format_expr(child)
        cp = _PREC[type(child)]
        return f"({s})" if (cp < prec or (strict and cp <= prec)) else s

    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + wrap(node.operand, False)
    if isinstance(node, Pow):
        return f"{wrap(node.base, True)}^{node.exponent}"
    op = {Add: "+", Sub: "-", Mul: "*"}[type(node)]
    return f"{wrap(node.left, False)}{op}{wrap(node.right, True)}"


# ---------------------------------------------------------------------------
# expansion into coefficient form

Monomial = tuple  # (ex, ey, ez)
Coefficients = dict  # Monomial -> FieldElement (nonzero)


def default_generator(F: FieldDescriptor) -> FieldElement:
    return F.gen if F.k >= 2 else F.primitive_element()


def _padd(a, b):
    out = dict(a)
    for m, c in b.items():
        v = out[m] + c if m in out else c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _pmul(a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            v = out[m] + c1 * c2 if m in out else c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def expand(node: Node, F: FieldDescriptor, variables=VARIABLES, a_value: FieldElement | None = None) -> Coefficients:
    def rec(n):
        if isinstance(n, Num):
            c = F(n.value)
            return {(0, 0, 0): c} if c else {}
        if isinstance(n, Var):
            if n.name == "a":
                c = a_value if a_value is not None else default_generator(F)
                return {(0, 0, 0): c} if c else {}
            if n.name not in variables:
                raise UndeclaredVariable(f"variable {n.name!r} is not declared (allowed: {', '.join(variables)}, a)")
            e = [0, 0, 0]
            e[VARIABLES.index(n.name)] = 1
            return {tuple(e): F.one}
        if isinstance(n, Neg):
            return {m: -c for m, c in rec(n.operand).items()}
        if isinstance(n, Add):
            return _padd(rec(n.left), rec(n.right))
        if isinstance(n, Sub):
            return _padd(rec(n.left), {m: -c for m, c in rec(n.right).items()})
        if isinstance(n, Mul):
            return _pmul(rec(n.left), rec(n.right))
        if isinstance(n, Pow):
            base, result, e = rec(n.base), {(0, 0, 0): F.one}, n.exponent
            while e:
                if e & 1:
                    result = _pmul(result, base)
                e >>= 1
                if e:
                    base = _pmul(base, base)
            return result
        raise TypeError(n)

    return rec(node)


def evaluate(node: Node, env: dict[str, FieldElement], F: FieldDescriptor) -> FieldElement:
    """Direct evaluation of the AST at a point (``env`` maps variable names, incl. ``a``)."""
    if isinstance(node, Num):
        return F(node.value)
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.operand, env, F)
    if isinstance(node, Pow):
        return evaluate(node.base, env, F) ** node.exponent
    left, right = evaluate(node.left, env, F), evaluate(node.right, env, F)
    if isinstance(node, Add):
        return left + right
    if isinstance(node, Sub):
        return left - right
    return left * right


def evaluate_coefficients(coeffs: Coefficients, point) -> FieldElement:
    x, y, z = point
    F = x.field
    acc = F.zero
    for (i, j, k), c in coeffs.items():
        acc = acc + c * x**i * y**j * z**k
    return acc


def parse_poly(text: str, F: FieldDescriptor, variables=VARIABLES, a_value=None, homogeneous=False) -> Coefficients:
    coeffs = expand(parse_expr(text), F, variables, a_value)
    if homogeneous:
        degrees = {sum(m) for m in coeffs}
        if len(degrees) > 1:
            raise InhomogeneousForm(f"form has monomials of degrees {sorted(degrees)}")
    return coeffs


def univariate(coeffs: Coefficients, var: str = "x") -> list[FieldElement]:
    """Coefficient list of a polynomial in one variable."""
    idx = VARIABLES.index(var)
    if not coeffs:
        return []
    if any(e for m in coeffs for i, e in enumerate(m) if i != idx):
        raise UndeclaredVariable(f"expected a polynomial in {var} only")
    top = max(m[idx] for m in coeffs)
    F = next(iter(coeffs.values())).field
    out = [F.zero] * (top + 1)
    for m, c in coeffs.items():
        out[m[idx]] = c
    return out


def format_coefficient(c: FieldElement) -> str:
    """Text for a field element in terms of ``a`` = class of t."""
    if c.is_prime_field_element():
        return str(c.coeffs[0])
    terms = []
    for i, ci in enumerate(c.coeffs):
        if not ci:
            continue
        mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
        if not mono:
            terms.append(str(ci))
        else:
            terms.append(mono if ci == 1 else f"{ci}{mono}")
    text = "+".join(terms)
    return f"({text})" if len(terms) > 1 else text


def format_form(coeffs: Coefficients) -> str:
    """Canonical text of a multivariate coefficient form (graded lex, x > y > z)."""
    if not coeffs:
        return "0"
    terms = []
    for m in sorted(coeffs, key=lambda m: (-sum(m), -m[0], -m[1], -m[2])):
        mono = "".join(
            (v if e == 1 else f"{v}^{e}") for v, e in zip(VARIABLES, m) if e
        )
        coef = format_coefficient(coeffs[m])
        if not mono:
            terms.append(coef)
        elif coef == "1":
            terms.append(mono)
        else:
            terms.append(f"{coef}*{mono}")
    return "+".join(terms)
