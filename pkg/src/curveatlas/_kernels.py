"""Compiled enumeration kernels working on Zech-logarithm encoded elements.

Encoding: a nonzero element g^e is stored as e in [0, M) with M = Q - 1;
zero is stored as the sentinel M.  ``zech[d] = log(1 + g^d)``.
"""
from __future__ import annotations

import functools

import numba
import numpy as np

from .fields import FieldDescriptor, FieldElement

_JIT = dict(cache=True, nogil=True)


@numba.njit(**_JIT)
def _build_exp(p, K, modulus, gen, Q):
    M = Q - 1
    exp_idx = np.empty(M, np.int32)
    pw = np.empty(K, np.int64)
    acc = 1
    for i in range(K):
        pw[i] = acc
        acc *= p
    dg = 0
    for i in range(K):
        if gen[i] != 0:
            dg = i
    cur = np.zeros(K, np.int64)
    cur[0] = 1
    tmp = np.zeros(K + dg, np.int64)
    for e in range(M):
        idx = 0
        for i in range(K):
            idx += cur[i] * pw[i]
        exp_idx[e] = idx
        for i in range(K + dg):
            tmp[i] = 0
        for i in range(K):
            ci = cur[i]
            if ci != 0:
                for j in range(dg + 1):
                    tmp[i + j] += ci * gen[j]
        for i in range(K + dg - 1, K - 1, -1):
            c = tmp[i] % p
            if c != 0:
                for j in range(K):
                    tmp[i - K + j] -= c * modulus[j]
        for i in range(K):
            cur[i] = tmp[i] % p
    return exp_idx


class ZechTables:
    """Exponent, logarithm and Zech tables for one field."""

    def __init__(self, F: FieldDescriptor):
        self.field = F
        self.p = F.p
        self.Q = Q = F.q
        self.M = M = Q - 1
        gamma = F.primitive_element()
        self.generator = gamma
        modulus = np.array(F.modulus, dtype=np.int64)
        gen = np.array(gamma.coeffs, dtype=np.int64)
        self.exp_idx = _build_exp(F.p, F.k, modulus, gen, Q)
        log_idx = np.full(Q, M, dtype=np.int32)
        log_idx[self.exp_idx] = np.arange(M, dtype=np.int32)
        self.log_idx = log_idx
        c0 = self.exp_idx.astype(np.int64) % F.p
        plus_one = self.exp_idx.astype(np.int64) - c0 + (c0 + 1) % F.p
        self.zech = log_idx[plus_one]
        if F.p == 2:
            mask = 0
            for i, tr in enumerate(F.absolute_trace_basis()):
                if tr:
                    mask |= 1 << i
            self.trace_log = (np.bitwise_count(self.exp_idx & mask) & 1).astype(np.int8)
        else:
            self.trace_log = np.zeros(1, dtype=np.int8)

    def log(self, x: FieldElement) -> int:
        return int(self.log_idx[x.index])

    def logs(self, xs) -> np.ndarray:
        return np.array([self.log_idx[x.index] for x in xs], dtype=np.int64)

    def element(self, e: int) -> FieldElement:
        if e == self.M:
            return self.field.zero
        return self.field.from_index(int(self.exp_idx[e]))


@functools.lru_cache(maxsize=6)
def zech_tables(F: FieldDescriptor) -> ZechTables:
    return ZechTables(F)


# ---------------------------------------------------------------------------
# scalar arithmetic on logs


@numba.njit(inline="always")
def _mul(a, b, M):
    if a == M or b == M:
        return M
    s = a + b
    if s >= M:
        s -= M
    return s


@numba.njit(inline="always")
def _add(a, b, zech, M):
    if a == M:
        return b
    if b == M:
        return a
    d = b - a
    if d < 0:
        d += M
    z = zech[d]
    if z == M:
        return M
    s = a + z
    if s >= M:
        s -= M
    return s


@numba.njit(inline="always")
def _neg(a, M, p):
    if a == M or p == 2:
        return a
    s = a + M // 2
    if s >= M:
        s -= M
    return s


@numba.njit(**_JIT)
def _horner(coeffs, x, zech, M):
    acc = M
    for i in range(coeffs.shape[0] - 1, -1, -1):
        acc = _add(_mul(acc, x, M), coeffs[i], zech, M)
    return acc


# ---------------------------------------------------------------------------
# hyperelliptic y^2 + h(x) y = f(x)


@numba.njit(inline="always")
def _fibre(fx, hx, zech, trace_log, M, p, four):
    """Number of y with y^2 + hx*y = fx."""
    if p != 2:
        disc = _add(_mul(hx, hx, M), _mul(four, fx, M), zech, M)
        if disc == M:
            return 1
        return 2 if disc % 2 == 0 else 0
    if hx == M:
        return 1
    if fx == M:
        return 2
    c = (fx - 2 * hx) % M
    return 2 if trace_log[c] == 0 else 0


@numba.njit(**_JIT)
def hyper_affine_count(f, h, zech, trace_log, M, p, four, start, stop):
    """Affine points with x ranging over encoded values [start, stop) (M is zero)."""
    total = 0
    for x in range(start, stop):
        total += _fibre(_horner(f, x, zech, M), _horner(h, x, zech, M), zech, trace_log, M, p, four)
    return total


@numba.njit(**_JIT)
def hyper_family_counts(q, nf, nh, g, start, stop, emb_logs, zech, trace_log, M, p, four, first_point, out):
    """Point counts over one field for a block of coefficient tuples.

    Candidate ``idx`` has base-q digits (f_0, ..., f_{nf-1}, h_0, ..., h_{nh-1}),
    most significant first, where a digit is an element index of F_q; ``emb_logs``
    maps it to the encoded image in the counting field.  ``out[idx - start]``
    receives N (or -1 when max(2 deg h, deg f) is not 2g+1 or 2g+2).  With
    ``first_point`` set, counting stops at the first point found (N = 0 or 1).
    """
    f = np.empty(nf, np.int64)
    h = np.empty(nh, np.int64)
    for idx in range(start, stop):
        rem = idx
        for i in range(nh - 1, -1, -1):
            h[i] = emb_logs[rem % q]
            rem //= q
        for i in range(nf - 1, -1, -1):
            f[i] = emb_logs[rem % q]
            rem //= q
        df = -1
        for i in range(nf):
            if f[i] != M:
                df = i
        dh = -1
        for i in range(nh):
            if h[i] != M:
                dh = i
        top = max(2 * dh, df)
        if top != 2 * g + 1 and top != 2 * g + 2:
            out[idx - start] = -1
            continue
        if top == 2 * g + 2:
            lead_h = h[g + 1] if nh > g + 1 else M
            total = _fibre(f[2 * g + 2], lead_h, zech, trace_log, M, p, four)
        else:
            total = 1
        if first_point and total > 0:
            out[idx - start] = 1
            continue
        for x in range(M + 1):
            total += _fibre(_horner(f, x, zech, M), _horner(h, x, zech, M), zech, trace_log, M, p, four)
            if first_point and total > 0:
                break
        out[idx - start] = total
    return 0


# ---------------------------------------------------------------------------
# plane curves


@numba.njit(**_JIT)
def _mono_eval(ex, ey, ez, coef, x, y, z, zech, M):
    acc = M
    for t in range(coef.shape[0]):
        term = coef[t]
        if ex[t] > 0:
            if x == M:
                continue
            term = _mul(term, (x * ex[t]) % M, M)
        if ey[t] > 0:
            if y == M:
                continue
            term = _mul(term, (y * ey[t]) % M, M)
        if ez[t] > 0:
            if z == M:
                continue
            term = _mul(term, (z * ez[t]) % M, M)
        acc = _add(acc, term, zech, M)
    return acc


@numba.njit(**_JIT)
def plane_bruteforce_count(ex, ey, ez, coef, zech, M, start, stop):
    """Projective points: chart (x,y,1) for encoded x in [start, stop), plus the
    line at infinity when ``start == 0``.  Returns (points, candidates scanned)."""
    total = 0
    scanned = 0
    one = 0
    for x in range(start, stop):
        for y in range(M + 1):
            scanned += 1
            if _mono_eval(ex, ey, ez, coef, x, y, one, zech, M) == M:
                total += 1
    if start == 0:
        for x in range(M + 1):
            scanned += 1
            if _mono_eval(ex, ey, ez, coef, x, one, M, zech, M) == M:
                total += 1
        scanned += 1
        if _mono_eval(ex, ey, ez, coef, one, M, M, zech, M) == M:
            total += 1
    return total, scanned


@numba.njit(**_JIT)
def plane_singular_search(polys_ex, polys_ey, polys_ez, polys_coef, offsets, zech, M):
    """First projective point where every listed form vanishes.

    Forms are packed: form i occupies [offsets[i], offsets[i+1]).
    Returns (chart, x, y) with chart 0 = (x,y,1), 1 = (x,1,0), 2 = (1,0,0); chart -1 if none.
    """
    nforms = offsets.shape[0] - 1
    one = 0
    for chart in range(3):
        xr = M + 1 if chart < 2 else 1
        yr = M + 1 if chart == 0 else 1
        for x in range(xr):
            for y in range(yr):
                if chart == 0:
                    px, py, pz = x, y, one
                elif chart == 1:
                    px, py, pz = x, one, M
                else:
                    px, py, pz = one, M, M
                hit = True
                for i in range(nforms):
                    a, b = offsets[i], offsets[i + 1]
                    v = _mono_eval(polys_ex[a:b], polys_ey[a:b], polys_ez[a:b], polys_coef[a:b],
                                   px, py, pz, zech, M)
                    if v != M:
                        hit = False
                        break
                if hit:
                    return chart, x, y
    return -1, 0, 0


# ---------------------------------------------------------------------------
# distinct-root counting over F_Q


@numba.njit(**_JIT)
def _mulmod(a, b, g, D, out, tmp, zech, M, p):
    for i in range(2 * D - 1):
        tmp[i] = M
    for i in range(D):
        ai = a[i]
        if ai == M:
            continue
        for j in range(D):
            bj = b[j]
            if bj != M:
                tmp[i + j] = _add(tmp[i + j], _mul(ai, bj, M), zech, M)
    for i in range(2 * D - 2, D - 1, -1):
        c = tmp[i]
        if c != M:
            nc = _neg(c, M, p)
            for j in range(D):
                if g[j] != M:
                    tmp[i - D + j] = _add(tmp[i - D + j], _mul(nc, g[j], M), zech, M)
    for i in range(D):
        out[i] = tmp[i]


@numba.njit(**_JIT)
def _degree(a, n, M):
    for i in range(n - 1, -1, -1):
        if a[i] != M:
            return i
    return -1


@numba.njit(**_JIT)
def count_distinct_roots(c, Q, zech, M, p, work):
    """Number of distinct roots in F_Q of the polynomial with encoded coefficients c.

    Returns Q for the zero polynomial.  ``work`` is a (7, len(c) * 2) scratch array.
    """
    n = c.shape[0]
    D = _degree(c, n, M)
    if D < 0:
        return Q
    if D == 0:
        return 0
    if D == 1:
        return 1
    lead = c[D]
    g = work[0]
    for i in range(D + 1):
        g[i] = M if c[i] == M else (c[i] - lead) % M
    res = work[1]
    base = work[2]
    out = work[3]
    tmp = work[4]
    for i in range(D):
        res[i] = M
        base[i] = M
    res[0] = 0
    base[1] = 0
    e = Q
    while e > 0:
        if e & 1:
            _mulmod(res, base, g, D, out, tmp, zech, M, p)
            for i in range(D):
                res[i] = out[i]
        e >>= 1
        if e > 0:
            _mulmod(base, base, g, D, out, tmp, zech, M, p)
            for i in range(D):
                base[i] = out[i]
    # H = y^Q - y mod g
    res[1] = _add(res[1], _neg(0, M, p), zech, M)
    A = work[5]
    B = work[6]
    for i in range(D + 1):
        A[i] = g[i]
        B[i] = res[i] if i < D else M
    da = D
    db = _degree(B, D, M)
    if db < 0:
        return D
    while db >= 0:
        lb = B[db]
        for i in range(da, db - 1, -1):
            ci = A[i]
            if ci == M:
                continue
            fct = _neg((ci - lb) % M, M, p)
            for j in range(db + 1):
                if B[j] != M:
                    A[i - db + j] = _add(A[i - db + j], _mul(fct, B[j], M), zech, M)
        da = _degree(A, da + 1, M) if da >= 0 else -1
        A, B = B, A
        da, db = db, da
    return da


@numba.njit(**_JIT)
def plane_line_count(ex, ey, ez, coef, d, Q, zech, M, p, start, stop):
    """Projective points of a degree-d form, counting roots in y along each line x = const.

    Chart (x,y,1) handles encoded x in [start, stop); the line z = 0 is added when start == 0.
    """
    total = 0
    cy = np.empty(d + 1, np.int64)
    work = np.empty((7, 2 * d + 2), np.int64)
    for x in range(start, stop):
        for j in range(d + 1):
            cy[j] = M
        for t in range(coef.shape[0]):
            term = coef[t]
            if ex[t] > 0:
                if x == M:
                    continue
                term = _mul(term, (x * ex[t]) % M, M)
            cy[ey[t]] = _add(cy[ey[t]], term, zech, M)
        total += count_distinct_roots(cy, Q, zech, M, p, work)
    if start == 0:
        for j in range(d + 1):
            cy[j] = M
        for t in range(coef.shape[0]):
            if ez[t] == 0:
                cy[ex[t]] = _add(cy[ex[t]], coef[t], zech, M)
        total += count_distinct_roots(cy, Q, zech, M, p, work)
        if cy[d] == M:
            total += 1
    return total
