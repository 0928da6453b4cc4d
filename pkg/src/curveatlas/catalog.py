"""Witness curves and external facts: a small line-oriented catalog format.

::

    # comment
    witness <id> source=<tag> [generator=any]
        <curve text>
        claim N_1=2
        claim B_3=0
        claim N_1=N_3
        claim b2_hp=3
    fact <id> scope="g=2;q=13.." effect=forbids-pointless cite=<tag> statement="..."

A scope is ``g=<set>;q=<set>`` where a set is a comma list of integers,
ranges ``a..b`` and open ranges ``a..``.  Fact effects and their extra keys:

``forces-existence``   r=R: some curve in scope has B_R = 0
``forbids-B_r-zero``   r=R: no curve in scope has B_R = 0
``forbids-pointless``  no curve in scope has N_1 = 0
``caps-N_1``           value=V: every curve in scope has N_1 <= V
"""
from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import ParseError, SchemaError

EFFECTS = ("forces-existence", "forbids-B_r-zero", "forbids-pointless", "caps-N_1")
B2_BOUND_IDS = ("b2_mobius_weil", "b2_weil_n1", "b2_weil", "b2_hp_n1", "b2_hp", "b2_exact")


@dataclass(frozen=True)
class IntSet:
    """Finite list of integers and closed/open ranges."""

    items: tuple  # (lo, hi) pairs, hi None for open

    def __contains__(self, n: int) -> bool:
        return any(lo <= n and (hi is None or n <= hi) for lo, hi in self.items)

    @classmethod
    def parse(cls, text: str) -> "IntSet":
        items = []
        for part in text.split(","):
            part = part.strip()
            m = re.fullmatch(r"(\d+)(\.\.(\d*))?", part)
            if not m:
                raise ParseError(f"bad integer set element {part!r}")
            lo = int(m.group(1))
            if m.group(2) is None:
                items.append((lo, lo))
            else:
                hi = int(m.group(3)) if m.group(3) else None
                if hi is not None and hi < lo:
                    raise SchemaError(f"empty range {part!r}")
                items.append((lo, hi))
        return cls(tuple(items))

    def text(self) -> str:
        out = []
        for lo, hi in self.items:
            out.append(str(lo) if hi == lo else f"{lo}..{'' if hi is None else hi}")
        return ",".join(out)


@dataclass(frozen=True)
class Scope:
    genera: IntSet
    orders: IntSet

    def contains(self, q: int, g: int) -> bool:
        return g in self.genera and q in self.orders

    @classmethod
    def parse(cls, text: str) -> "Scope":
        parts = dict(p.split("=", 1) for p in text.split(";") if "=" in p)
        if set(parts) != {"g", "q"}:
            raise SchemaError(f"scope needs exactly g=... and q=..., got {text!r}")
        return cls(IntSet.parse(parts["g"]), IntSet.parse(parts["q"]))

    def text(self) -> str:
        return f"g={self.genera.text()};q={self.orders.text()}"


@dataclass(frozen=True)
class ExternalFact:
    fact_id: str
    scope: Scope
    effect: str
    cite: str
    statement: str
    r: Optional[int] = None
    value: Optional[int] = None

    def applies(self, q: int, g: int) -> bool:
        return self.scope.contains(q, g)

    def to_json(self) -> dict:
        out = {"id": self.fact_id, "scope": self.scope.text(), "effect": self.effect, "cite": self.cite,
               "statement": self.statement}
        if self.r is not None:
            out["r"] = self.r
        if self.value is not None:
            out["value"] = self.value
        return out


@dataclass(frozen=True)
class Claim:
    """One checkable assertion: ("N", n, v), ("B", r, v), ("N=N", a, b) or ("bound", id, v)."""

    kind: str
    left: object
    right: int

    @classmethod
    def parse(cls, text: str) -> "Claim":
        text = text.replace(" ", "")
        m = re.fullmatch(r"N_(\d+)=N_(\d+)", text)
        if m:
            return cls("N=N", int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"([NB])_(\d+)=(\d+)", text)
        if m:
            return cls(m.group(1), int(m.group(2)), int(m.group(3)))
        m = re.fullmatch(r"([a-z0-9_]+)=(-?\d+)", text)
        if m and m.group(1) in B2_BOUND_IDS:
            return cls("bound", m.group(1), int(m.group(2)))
        raise ParseError(f"unrecognised claim {text!r}")

    def degrees(self) -> list[int]:
        if self.kind in ("N", "B"):
            return [self.left]
        if self.kind == "N=N":
            return [self.left, self.right]
        return [1, 2]

    def text(self) -> str:
        if self.kind == "N=N":
            return f"N_{self.left}=N_{self.right}"
        if self.kind == "bound":
            return f"{self.left}={self.right}"
        return f"{self.kind}_{self.left}={self.right}"


@dataclass(frozen=True)
class WitnessRecord:
    witness_id: str
    source: str
    curve: str
    claims: tuple
    generator_any: bool = False
    line: int = 0

    def max_degree(self) -> int:
        return max((d for c in self.claims for d in c.degrees()), default=1)

    def q(self) -> int:
        from .curves import parse_curve_fields, parse_field_spec

        return parse_field_spec(parse_curve_fields(self.curve)[1]["q"]).q

    def to_json(self) -> dict:
        return {"id": self.witness_id, "source": self.source, "curve": self.curve,
                "claims": [c.text() for c in self.claims], "generator": "any" if self.generator_any else "canonical"}


@dataclass(frozen=True)
class Catalog:
    witnesses: tuple = ()
    facts: tuple = ()
    path: Optional[str] = field(default=None, compare=False)

    def facts_for(self, q: int, g: int, effect: str | None = None) -> list[ExternalFact]:
        return [f for f in self.facts if f.applies(q, g) and (effect is None or f.effect == effect)]

    def witness(self, witness_id: str) -> WitnessRecord:
        for w in self.witnesses:
            if w.witness_id == witness_id:
                return w
        raise KeyError(witness_id)


def _keyvals(tokens: list[str], lineno: int) -> dict:
    kv = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"line {lineno}: expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        if k in kv:
            raise SchemaError(f"line {lineno}: duplicate key {k!r}")
        kv[k] = v
    return kv


def _parse_fact(tokens: list[str], lineno: int) -> ExternalFact:
    if len(tokens) < 2:
        raise ParseError(f"line {lineno}: fact needs an id")
    kv = _keyvals(tokens[2:], lineno)
    for key in ("scope", "effect", "cite", "statement"):
        if key not in kv:
            raise SchemaError(f"line {lineno}: fact {tokens[1]} lacks {key}=")
    effect = kv["effect"]
    if effect not in EFFECTS:
        raise SchemaError(f"line {lineno}: unknown effect {effect!r}")
    r = int(kv["r"]) if "r" in kv else None
    value = int(kv["value"]) if "value" in kv else None
    if effect in ("forces-existence", "forbids-B_r-zero") and (r is None or r < 1):
        raise SchemaError(f"line {lineno}: effect {effect} needs r=<positive int>")
    if effect == "caps-N_1" and value is None:
        raise SchemaError(f"line {lineno}: effect caps-N_1 needs value=")
    extra = set(kv) - {"scope", "effect", "cite", "statement", "r", "value"}
    if extra:
        raise SchemaError(f"line {lineno}: unknown keys {sorted(extra)}")
    try:
        scope = Scope.parse(kv["scope"])
    except (ParseError, ValueError) as exc:
        raise SchemaError(f"line {lineno}: {exc}") from exc
    return ExternalFact(tokens[1], scope, effect, kv["cite"], kv["statement"], r, value)


def parse_catalog(text: str, path: str | None = None) -> Catalog:
    witnesses, facts = [], []
    current = None  # [header tokens, lineno, curve, claims]

    def close():
        if current is None:
            return
        tokens, lineno, curve, claims = current
        if curve is None:
            raise SchemaError(f"line {lineno}: witness {tokens[1]} has no curve line")
        kv = _keyvals(tokens[2:], lineno)
        if "source" not in kv:
            raise SchemaError(f"line {lineno}: witness {tokens[1]} lacks source=")
        extra = set(kv) - {"source", "generator"}
        if extra:
            raise SchemaError(f"line {lineno}: unknown keys {sorted(extra)}")
        gen = kv.get("generator", "canonical")
        if gen not in ("any", "canonical"):
            raise SchemaError(f"line {lineno}: generator must be 'any' or 'canonical'")
        witnesses.append(WitnessRecord(tokens[1], kv["source"], curve, tuple(claims), gen == "any", lineno))

    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        indented = raw[0] in " \t"
        if not indented:
            close()
            current = None
            try:
                tokens = shlex.split(stripped)
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
            if tokens[0] == "witness":
                if len(tokens) < 2:
                    raise ParseError(f"line {lineno}: witness needs an id")
                current = [tokens, lineno, None, []]
            elif tokens[0] == "fact":
                facts.append(_parse_fact(tokens, lineno))
            else:
                raise ParseError(f"line {lineno}: expected 'witness' or 'fact', got {tokens[0]!r}")
            continue
        if current is None:
            raise ParseError(f"line {lineno}: indented line outside a witness block")
        if stripped.startswith("claim "):
            current[3].append(Claim.parse(stripped[len("claim "):]))
        elif current[2] is None:
            current[2] = stripped
        else:
            raise ParseError(f"line {lineno}: second curve line in witness {current[0][1]}")
    close()
    ids = [w.witness_id for w in witnesses] + [f.fact_id for f in facts]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise SchemaError(f"duplicate ids: {dupes}")
    return Catalog(tuple(witnesses), tuple(facts), path)


def load_catalog(path: str | Path | None = None) -> Catalog:
    """Load a catalog file; ``None`` loads the shipped default catalog."""
    if path is None:
        text = resources.files("curveatlas").joinpath("data/default_catalog.txt").read_text()
        return parse_catalog(text, "<default>")
    return parse_catalog(Path(path).read_text(), str(path))


def default_catalog() -> Catalog:
    return load_catalog(None)
