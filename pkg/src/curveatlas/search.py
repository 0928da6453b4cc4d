"""Exhaustive scans of hyperelliptic families y^2 + h(x) y = f(x) over a fixed F_q.

The raw coefficient space (deg f <= 2g+2, deg h <= g+1) is walked in
lexicographic order of element indices (f_0 first).  A compiled kernel counts
points for whole blocks of candidates; only candidates satisfying the
predicate are then built as models, checked for smoothness and recounted.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, TextIO

import numpy as np

from ._kernels import hyper_family_counts, zech_tables
from .counting import count_sequence
from .curves import format_curve, make_hyperelliptic
from .errors import BudgetExceeded, DegreeViolation, SingularModel
from .fields import FieldDescriptor, build_extension, field_of_order
from .zeta import closed_points, divisors

DEFAULT_SEARCH_BUDGET = 1 << 27
BLOCK = 1 << 18
PREDICATES = ("B_r=0", "pointless", "max-B2")


@dataclass(frozen=True)
class SearchSpec:
    q: int
    g: int
    predicate: str
    r: Optional[int] = None
    budget: int = DEFAULT_SEARCH_BUDGET
    max_hits: Optional[int] = None
    h_zero: bool = False
    start_index: int = 0

    def __post_init__(self):
        if self.predicate not in PREDICATES:
            raise ValueError(f"predicate must be one of {PREDICATES}")
        if self.predicate == "B_r=0" and (self.r is None or self.r < 1):
            raise ValueError("predicate B_r=0 needs r >= 1")
        if self.g < 1:
            raise ValueError("genus must be positive")
        if self.h_zero and self.q % 2 == 0:
            raise ValueError("h = 0 gives only singular models in characteristic 2")

    @property
    def base(self) -> FieldDescriptor:
        return field_of_order(self.q)

    @property
    def nf(self) -> int:
        return 2 * self.g + 3

    @property
    def nh(self) -> int:
        return 0 if self.h_zero else self.g + 2

    @property
    def family_size(self) -> int:
        return self.q ** (self.nf + self.nh)

    @property
    def degrees_needed(self) -> list[int]:
        if self.predicate == "pointless":
            return [1]
        if self.predicate == "max-B2":
            return [1, 2]
        return divisors(self.r)


@dataclass
class SearchHit:
    index: int
    curve: str
    counts: dict
    closed: dict

    def to_json(self) -> dict:
        return {"index": self.index, "curve": self.curve, "N": self.counts, "B": self.closed}


@dataclass
class SearchResult:
    spec: SearchSpec
    hits: list = field(default_factory=list)
    enumerated: int = 0
    degree_valid: int = 0
    predicate_candidates: int = 0
    rejected_singular: int = 0
    max_b2: Optional[int] = None

    def summary(self) -> dict:
        out = {"q": self.spec.q, "g": self.spec.g, "predicate": self.spec.predicate, "r": self.spec.r,
               "h_zero": self.spec.h_zero, "family_size": self.spec.family_size, "enumerated": self.enumerated,
               "degree_valid": self.degree_valid, "predicate_candidates": self.predicate_candidates,
               "rejected_singular": self.rejected_singular, "hits": len(self.hits)}
        if self.spec.predicate == "max-B2":
            out["max_B2"] = self.max_b2
        return out


def decode(spec: SearchSpec, index: int) -> tuple[list, list]:
    """Coefficient lists (f, h), low degree first, of candidate ``index``."""
    F = spec.base
    digits = []
    for _ in range(spec.nf + spec.nh):
        digits.append(index % spec.q)
        index //= spec.q
    digits.reverse()
    f = [F.from_index(d) for d in digits[: spec.nf]]
    h = [F.from_index(d) for d in digits[spec.nf:]]
    return f, h


def _block_counts(spec: SearchSpec, n: int, start: int, stop: int, threads: int) -> np.ndarray:
    F = spec.base
    target, emb = build_extension(F, n)
    tab = zech_tables(target)
    emb_logs = np.array([tab.log(emb(x)) for x in F.elements()], dtype=np.int64)
    four = tab.log(target(4)) if target.p != 2 else 0
    out = np.empty(stop - start, dtype=np.int64)
    first_point = spec.predicate == "pointless"

    def run(chunk):
        a, b = chunk
        hyper_family_counts(spec.q, spec.nf, spec.nh, spec.g, a, b, emb_logs, tab.zech, tab.trace_log, tab.M,
                            target.p, four, first_point, out[a - start: b - start])

    step = -(-(stop - start) // max(threads, 1))
    chunks = [(a, min(a + step, stop)) for a in range(start, stop, step)]
    if len(chunks) == 1:
        run(chunks[0])
    else:
        with ThreadPoolExecutor(len(chunks)) as pool:
            list(pool.map(run, chunks))
    return out


def _closed_vector(counts: dict, r: int) -> np.ndarray:
    from .zeta import mobius

    total = sum(mobius(r // d) * counts[d] for d in divisors(r))
    return total // r


def _candidates(spec: SearchSpec, threads: int) -> Iterator[tuple[int, dict]]:
    """(index, {n: N_n}) for every degree-valid candidate passing the cheap predicate filter."""
    for start in range(spec.start_index, spec.family_size, BLOCK):
        stop = min(start + BLOCK, spec.family_size)
        counts = {}
        mask = None
        for n in spec.degrees_needed:
            counts[n] = _block_counts(spec, n, start, stop, threads)
            valid = counts[n] >= 0
            mask = valid if mask is None else mask & valid
        yield start, stop, mask, counts


def _verify(spec: SearchSpec, index: int, n_max: int):
    f, h = decode(spec, index)
    try:
        model = make_hyperelliptic(spec.base, f, h, spec.g, locate_singularity=False)
    except (DegreeViolation, SingularModel):
        return None
    profile = count_sequence(model, n_max)
    return model, profile


def _hit(spec: SearchSpec, index: int, model, profile) -> SearchHit:
    counts = {str(n): c for n, c in enumerate(profile.counts, 1)}
    closed = {str(r): closed_points(profile.counts, r) for r in range(1, len(profile.counts) + 1)}
    return SearchHit(index, format_curve(model), counts, closed)


def scan(spec: SearchSpec, threads: int = 1, stream: TextIO | None = None) -> SearchResult:
    """Run a family scan; raises BudgetExceeded when the raw family is larger than the budget."""
    if spec.family_size > spec.budget:
        raise BudgetExceeded(f"family of {spec.family_size} coefficient tuples exceeds the budget {spec.budget}")
    result = SearchResult(spec)
    n_max = max(spec.degrees_needed)
    best_rows: list = []  # (index,) candidates tied at the current maximum B_2
    for start, stop, mask, counts in _candidates(spec, threads):
        result.enumerated += stop - start
        result.degree_valid += int(mask.sum())
        if spec.predicate == "pointless":
            sel = mask & (counts[1] == 0)
        elif spec.predicate == "B_r=0":
            sel = mask & (_closed_vector(counts, spec.r) == 0)
        else:
            b2 = (counts[2] - counts[1]) // 2
            sel = mask.copy()
            order = np.flatnonzero(mask)
            order = order[np.argsort(-b2[order], kind="stable")]
            for pos in order:
                value = int(b2[pos])
                if result.max_b2 is not None and value < result.max_b2:
                    break
                found = _verify(spec, start + int(pos), n_max)
                result.predicate_candidates += 1
                if found is None:
                    result.rejected_singular += 1
                    continue
                if result.max_b2 is None or value > result.max_b2:
                    result.max_b2, best_rows = value, []
                best_rows.append((start + int(pos), found))
            continue
        for pos in np.flatnonzero(sel):
            index = start + int(pos)
            result.predicate_candidates += 1
            found = _verify(spec, index, n_max)
            if found is None:
                result.rejected_singular += 1
                continue
            hit = _hit(spec, index, *found)
            result.hits.append(hit)
            if stream is not None:
                stream.write(json.dumps(hit.to_json()) + "\n")
                stream.flush()
            if spec.max_hits is not None and len(result.hits) >= spec.max_hits:
                return result
    if spec.predicate == "max-B2":
        best_rows.sort(key=lambda t: t[0])
        for index, found in best_rows[: spec.max_hits]:
            hit = _hit(spec, index, *found)
            result.hits.append(hit)
            if stream is not None:
                stream.write(json.dumps(hit.to_json()) + "\n")
    return result
