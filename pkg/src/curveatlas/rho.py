"""Certificates for rho(q, g), the least r0 with B_r > 0 for every curve and every r >= r0.

Upper bound U: start from the best closed-form bound, then walk down while
the next degree r = U - 1 is proven to carry a closed point on every curve
(a positive formula lower bound on B_r, an external fact, or an integer
chain N_r >= Weil floor > max N_1).  Lower bound L: a verified witness with
B_r = 0 forces rho >= r + 1, as does a fact asserting such a curve exists.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional

from . import bounds
from .catalog import Catalog, Claim, WitnessRecord
from .counting import count_sequence
from .curves import CurveModel, format_curve, genus, parse_curve
from .errors import InvariantViolation, PropertyFailed
from .fields import is_prime, minimal_polynomial
from .polyexpr import parse_poly
from .zeta import closed_points, l_polynomial_from_counts


# ---------------------------------------------------------------------------
# witnesses


@dataclass
class WitnessTranscript:
    witness_id: str
    source: str
    curve: str
    q: int
    g: int
    counts: tuple
    closed: tuple
    checks: list
    generator: Optional[dict] = None
    lpoly: tuple = ()

    @property
    def zero_degrees(self) -> list[int]:
        return [r for r, b in enumerate(self.closed, 1) if b == 0]

    @property
    def rho_lower(self) -> int:
        return max(self.zero_degrees, default=0) + 1

    def to_json(self) -> dict:
        return {"id": self.witness_id, "source": self.source, "curve": self.curve, "q": self.q, "g": self.g,
                "N": list(self.counts), "B": list(self.closed), "L": list(self.lpoly), "checks": self.checks,
                "generator": self.generator, "rho_lower": self.rho_lower}


def _evaluate_claim(claim: Claim, q: int, g: int, counts: tuple, closed: tuple):
    if claim.kind == "N":
        return counts[claim.left - 1], claim.right
    if claim.kind == "B":
        return closed[claim.left - 1], claim.right
    if claim.kind == "N=N":
        a, b = counts[claim.left - 1], counts[claim.right - 1]
        return (a, b), (a, a)
    rep = bounds.report(bounds.b2_upper_bounds(q, g, counts[0], counts[1]), claim.left)
    return rep.integer, claim.right


def _measure(model: CurveModel, n_max: int, method: str) -> tuple:
    g = genus(model)
    n = max(n_max, g, 2)
    direct = count_sequence(model, n, method)
    L = l_polynomial_from_counts(model.q, g, direct.counts[:g])
    if L.counts(n) != direct.counts:
        raise InvariantViolation(f"L-polynomial predicts {L.counts(n)}, enumeration gave {direct.counts}")
    closed = tuple(closed_points(direct.counts, r) for r in range(1, n + 1))
    return g, direct.counts, closed, L.a


def _check(record: WitnessRecord, model: CurveModel, method: str):
    g, counts, closed, lpoly = _measure(model, record.max_degree(), method)
    checks, failures = [], []
    for claim in record.claims:
        computed, expected = _evaluate_claim(claim, model.q, g, counts, closed)
        ok = computed == expected
        checks.append({"claim": claim.text(), "computed": computed if not isinstance(computed, tuple) else list(computed),
                       "ok": ok})
        if not ok:
            failures.append((claim.text(), computed))
    return g, counts, closed, lpoly, checks, failures


def verify_witness(record: WitnessRecord, method: str = "auto") -> WitnessTranscript:
    """Recount the witness and check every claim; raises PropertyFailed on a mismatch.

    Records with ``generator=any`` that fail with ``a`` bound to the class of t
    are retried with every generator of the multiplicative group.
    """
    model = parse_curve(record.curve)
    g, counts, closed, lpoly, checks, failures = _check(record, model, method)
    generator = None
    if failures and record.generator_any:
        F = model.base
        for gamma in F.generators():
            if gamma == F.gen:
                continue
            cand = parse_curve(record.curve, a_value=gamma)
            res = _check(record, cand, method)
            if not res[5]:
                model = cand
                g, counts, closed, lpoly, checks, failures = res
                generator = {"element": list(gamma.coeffs), "minimal_polynomial": list(minimal_polynomial(gamma)),
                             "canonical": False}
                break
    if failures:
        prop, computed = failures[0]
        raise PropertyFailed(prop, computed)
    if model.base.k > 1 and generator is None and "a" in record.curve:
        gamma = model.base.gen
        generator = {"element": list(gamma.coeffs), "minimal_polynomial": list(minimal_polynomial(gamma)),
                     "canonical": True}
    return WitnessTranscript(record.witness_id, record.source, format_curve(model), model.q, g, counts, closed,
                             checks, generator, lpoly)


class TranscriptCache:
    """Thread-safe memo of witness transcripts keyed by record."""

    def __init__(self):
        self._lock = threading.Lock()
        self._store: dict = {}

    def get(self, record: WitnessRecord, method: str = "auto") -> WitnessTranscript:
        key = (record, method)
        with self._lock:
            hit = self._store.get(key)
        if hit is None:
            hit = verify_witness(record, method)
            with self._lock:
                self._store[key] = hit
        return hit

    def clear(self):
        with self._lock:
            self._store.clear()


_DEFAULT_CACHE = TranscriptCache()


# ---------------------------------------------------------------------------
# degree guarantees


# catalog facts are cited results; a recheck confirms scope and arithmetic, never the result itself
EXTERNAL = "external, not re-derived"


def positive_degree_step(q: int, g: int, r: int, catalog: Catalog | None = None) -> Optional[dict]:
    """A re-checkable reason why every genus-g curve over F_q has a closed point of degree r."""
    ids = bounds.guarantees_degree(q, g, r)
    if ids:
        return {"r": r, "kind": "bound", "via": ids[0], "all": ids}
    facts = catalog.facts_for(q, g) if catalog else []
    for fact in facts:
        if fact.effect == "forbids-B_r-zero" and fact.r == r:
            return {"r": r, "kind": "fact", "via": fact.fact_id, "cite": fact.cite, "trust": EXTERNAL}
        if fact.effect == "forbids-pointless" and r == 1:
            return {"r": r, "kind": "fact", "via": fact.fact_id, "cite": fact.cite, "trust": EXTERNAL}
    if r >= 2 and is_prime(r):
        # B_r = (N_r - N_1)/r, so N_r's Weil floor above every admissible N_1 forces B_r > 0
        lo_r = bounds.weil_interval(q, g, r)[0]
        hi_1 = bounds.weil_interval(q, g, 1)[1]
        cap, cap_fact = hi_1, None
        for fact in facts:
            if fact.effect == "caps-N_1" and fact.value < cap:
                cap, cap_fact = fact.value, fact
        if lo_r > cap:
            step = {"r": r, "kind": "chain", "via": "weil_chain", "N_r_min": lo_r, "N_1_max_weil": hi_1,
                    "N_1_max": cap}
            if cap_fact is not None:
                step["fact"] = cap_fact.fact_id
                step["cite"] = cap_fact.cite
                step["trust"] = EXTERNAL
            return step
    return None


def recheck_step(step: dict, q: int, g: int, catalog: Catalog | None) -> bool:
    fresh = positive_degree_step(q, g, step["r"], catalog)
    return fresh is not None and fresh == step


# ---------------------------------------------------------------------------
# certificates


@dataclass
class RhoCertificate:
    q: int
    g: int
    lower: int
    upper: int
    lower_evidence: list = field(default_factory=list)
    upper_chain: list = field(default_factory=list)
    formula_bound: Optional[str] = None

    @property
    def status(self) -> str:
        return "Exact" if self.lower == self.upper else "Interval"

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.lower == self.upper else None

    def to_json(self) -> dict:
        out = {"q": self.q, "g": self.g, "status": self.status}
        if self.status == "Exact":
            out["value"] = self.lower
        out.update(lower=self.lower, upper=self.upper, formula_bound=self.formula_bound,
                   upper_chain=self.upper_chain, lower_evidence=self.lower_evidence)
        return out


def _witnesses_for(catalog: Catalog, q: int, g: int) -> list[WitnessRecord]:
    from .curves import parse_curve_fields, parse_field_spec

    out = []
    for w in catalog.witnesses:
        kind, kv = parse_curve_fields(w.curve)
        if parse_field_spec(kv["q"]).q != q:
            continue
        if kind == "hyperelliptic" and "g" in kv and int(kv["g"]) != g:
            continue
        if kind == "plane":
            F = parse_field_spec(kv["q"])
            d = sum(next(iter(parse_poly(kv["F"], F, homogeneous=True))))
            if (d - 1) * (d - 2) // 2 != g:
                continue
        out.append(w)
    return out


def certify_rho(q: int, g: int, catalog: Catalog | None = None, cache: TranscriptCache | None = None,
                method: str = "auto") -> RhoCertificate:
    if g < 0:
        raise ValueError("genus must be non-negative")
    if g == 0:
        return RhoCertificate(q, 0, 1, 1, [{"kind": "trivial", "detail": "rho >= 1 by definition"}],
                              [{"r": 1, "kind": "genus_zero", "via": "rho_genus_zero"}], "rho_genus_zero")
    cache = cache or _DEFAULT_CACHE
    U, best = bounds.rho_upper_bound(q, g)
    chain = [{"r": U, "kind": "formula", "via": best, "detail": f"B_r > 0 for every r >= {U}"}]
    while U > 1:
        step = positive_degree_step(q, g, U - 1, catalog)
        if step is None:
            break
        chain.append(step)
        U -= 1

    L = 1
    evidence = [{"kind": "trivial", "detail": "rho >= 1 by definition"}]
    if catalog is not None:
        for record in _witnesses_for(catalog, q, g):
            tr = cache.get(record, method)
            if tr.g != g:
                continue
            evidence.append({"kind": "witness", "id": tr.witness_id, "curve": tr.curve,
                             "zero_degrees": tr.zero_degrees, "rho_lower": tr.rho_lower})
            L = max(L, tr.rho_lower)
        for fact in catalog.facts_for(q, g, "forces-existence"):
            evidence.append({"kind": "fact", "id": fact.fact_id, "cite": fact.cite, "r": fact.r,
                             "rho_lower": fact.r + 1, "trust": EXTERNAL})
            L = max(L, fact.r + 1)
    if L > U:
        raise InvariantViolation(f"lower bound {L} exceeds upper bound {U} at (q={q}, g={g})")
    return RhoCertificate(q, g, L, U, evidence, chain, best)


def recheck_certificate(cert: RhoCertificate, catalog: Catalog | None) -> bool:
    """Re-derive every step of a certificate from scratch."""
    if cert.g == 0:
        return cert.lower == cert.upper == 1
    U, best = bounds.rho_upper_bound(cert.q, cert.g)
    if cert.upper_chain[0]["r"] != U or best != cert.formula_bound:
        return False
    for step in cert.upper_chain[1:]:
        if step["r"] != U - 1 or not recheck_step(step, cert.q, cert.g, catalog):
            return False
        U -= 1
    if U != cert.upper:
        return False
    L = 1
    for ev in cert.lower_evidence:
        if ev["kind"] == "witness":
            tr = verify_witness(catalog.witness(ev["id"]))
            if tr.rho_lower != ev["rho_lower"]:
                return False
            L = max(L, tr.rho_lower)
        elif ev["kind"] == "fact":
            facts = [f for f in catalog.facts_for(cert.q, cert.g, "forces-existence") if f.fact_id == ev["id"]]
            if not facts:
                return False
            L = max(L, facts[0].r + 1)
    return L == cert.lower
