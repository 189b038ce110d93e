"""Hot numeric kernels: exact GF(p) row reduction and projective point scans.

Every kernel has two interchangeable implementations: a numba ``@njit`` one
and a pure-numpy one.  The active path is chosen once at import time; set
``HEIS5_NO_NUMBA=1`` (or run without numba installed) to force the numpy
fallback.  Both paths are exercised against each other in the test suite and
timed side by side in ``benchmarks/bench_kernels.py``.

All matrices are dense ``int64`` arrays with entries reduced into ``[0, p)``.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("HEIS5_NO_NUMBA", "") not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - environment without numba
        USE_NUMBA = False

if not USE_NUMBA:  # identity decorator so the same source serves both paths
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, -1, p)


@njit(cache=True)
def _pow_mod(a, e, p):
    r = 1
    a = a % p
    while e > 0:
        if e & 1:
            r = (r * a) % p
        a = (a * a) % p
        e >>= 1
    return r


# ---------------------------------------------------------------------------
# reduced row echelon form
# ---------------------------------------------------------------------------

@njit(cache=True)
def _rref_numba(A, p):
    # Barrett reduction: for 0 <= x <= 2*p*p and p <= 2048 the quotient
    # (x * magic) >> 40 is off by at most one, fixed by one subtract.
    m, n = A.shape
    magic = (1 << 40) // p
    p2 = p * p
    piv = np.empty(min(m, n), dtype=np.int64)
    r = 0
    for c in range(n):
        pr = -1
        for i in range(r, m):
            if A[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(n):
                t = A[r, j]
                A[r, j] = A[pr, j]
                A[pr, j] = t
        inv = _pow_mod(A[r, c], p - 2, p)
        if inv != 1:
            for j in range(n):
                x = A[r, j] * inv
                x -= ((x * magic) >> 40) * p
                if x >= p:
                    x -= p
                A[r, j] = x
        for i in range(m):
            if i == r:
                continue
            f = A[i, c]
            if f != 0:
                for j in range(n):
                    x = A[i, j] - f * A[r, j] + p2
                    x -= ((x * magic) >> 40) * p
                    if x >= p:
                        x -= p
                    A[i, j] = x
        piv[r] = c
        r += 1
        if r == m:
            break
    return r, piv[:r]


def _rref_numpy(A, p):
    m, n = A.shape
    piv = []
    r = 0
    for c in range(n):
        col = A[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            A[rows] = (A[rows] - np.outer(col[rows], A[r])) % p
        piv.append(c)
        r += 1
        if r == m:
            break
    return r, np.array(piv, dtype=np.int64)


def rref(A: np.ndarray, p: int):
    """In-place reduced row echelon form; returns (rank, pivot columns)."""
    if USE_NUMBA:
        return _rref_numba(A, p)
    return _rref_numpy(A, p)


# ---------------------------------------------------------------------------
# polynomial evaluation at many points
# ---------------------------------------------------------------------------

def power_table(p: int, maxdeg: int) -> np.ndarray:
    pw = np.empty((p, maxdeg + 1), dtype=np.int64)
    pw[:, 0] = 1
    vals = np.arange(p, dtype=np.int64)
    for e in range(1, maxdeg + 1):
        pw[:, e] = (pw[:, e - 1] * vals) % p
    return pw


@njit(cache=True)
def _eval_many_numba(exps, coeffs, pts, p, pw):
    npts = pts.shape[0]
    nv = pts.shape[1]
    k = exps.shape[0]
    out = np.empty(npts, dtype=np.int64)
    for s in range(npts):
        acc = 0
        for t in range(k):
            v = coeffs[t]
            for j in range(nv):
                e = exps[t, j]
                if e:
                    v = (v * pw[pts[s, j], e]) % p
            acc += v
        out[s] = acc % p
    return out


def _eval_many_numpy(exps, coeffs, pts, p, pw):
    acc = np.zeros(pts.shape[0], dtype=np.int64)
    for t in range(exps.shape[0]):
        v = np.full(pts.shape[0], coeffs[t], dtype=np.int64)
        for j in range(pts.shape[1]):
            e = exps[t, j]
            if e:
                v = (v * pw[pts[:, j], e]) % p
        acc = (acc + v) % p
    return acc


def eval_many(exps: np.ndarray, coeffs: np.ndarray, pts: np.ndarray, p: int) -> np.ndarray:
    """Values of the polynomial sum(c * x^e) at each row of pts, mod p."""
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64)
    pts = np.ascontiguousarray(pts, dtype=np.int64)
    maxdeg = int(exps.max()) if exps.size else 0
    pw = power_table(p, max(1, maxdeg))
    if USE_NUMBA:
        return _eval_many_numba(exps, coeffs, pts, p, pw)
    return _eval_many_numpy(exps, coeffs, pts, p, pw)


# ---------------------------------------------------------------------------
# projective common-zero scan
#
# Enumerates P^{nv-1}(GF(p)) chart by chart (first nonzero coordinate = 1),
# runs a Horner evaluation of the first polynomial along the last coordinate,
# and tests the remaining polynomials only on its zeros.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _scan_chart_numba(p, nv, level, exps0, coeffs0, exps_rest, coeffs_rest, nrest,
                      pw, out, maxout):
    count = 0
    x = np.zeros(nv, dtype=np.int64)
    x[level] = 1
    k0 = exps0.shape[0]
    krest = coeffs_rest.shape[1]
    deg_last = 0
    for t in range(k0):
        if exps0[t, nv - 1] > deg_last:
            deg_last = exps0[t, nv - 1]
    hc = np.zeros(deg_last + 1, dtype=np.int64)
    nfree = nv - 1 - level
    if nfree == 0:
        # single point e_level: plain evaluation of everything
        v = 0
        for t in range(k0):
            w = coeffs0[t]
            for j in range(nv):
                e = exps0[t, j]
                if e:
                    w = (w * pw[x[j], e]) % p
            v += w
        ok = v % p == 0
        if ok:
            for q in range(nrest):
                v = 0
                for t in range(krest):
                    c = coeffs_rest[q, t]
                    if c == 0:
                        continue
                    w = c
                    for j in range(nv):
                        e = exps_rest[q, t * nv + j]
                        if e:
                            w = (w * pw[x[j], e]) % p
                    v += w
                if v % p != 0:
                    ok = False
                    break
        if ok:
            if count >= maxout:
                return -1
            for j in range(nv):
                out[count, j] = x[j]
            count += 1
        return count
    npref = nfree - 1
    pref = np.zeros(max(npref, 1), dtype=np.int64)
    while True:
        for j in range(npref):
            x[level + 1 + j] = pref[j]
        for e in range(deg_last + 1):
            hc[e] = 0
        for t in range(k0):
            v = coeffs0[t]
            for j in range(nv - 1):
                e = exps0[t, j]
                if e:
                    v = (v * pw[x[j], e]) % p
            hc[exps0[t, nv - 1]] += v
        for e in range(deg_last + 1):
            hc[e] %= p
        for xl in range(p):
            acc = 0
            for e in range(deg_last, -1, -1):
                acc = acc * xl + hc[e]
            if acc % p != 0:
                continue
            x[nv - 1] = xl
            ok = True
            for q in range(nrest):
                v = 0
                for t in range(krest):
                    c = coeffs_rest[q, t]
                    if c == 0:
                        continue
                    w = c
                    for j in range(nv):
                        e = exps_rest[q, t * nv + j]
                        if e:
                            w = (w * pw[x[j], e]) % p
                    v += w
                if v % p != 0:
                    ok = False
                    break
            if ok:
                if count >= maxout:
                    return -1
                for j in range(nv):
                    out[count, j] = x[j]
                count += 1
        j = npref - 1
        while j >= 0:
            pref[j] += 1
            if pref[j] < p:
                break
            pref[j] = 0
            j -= 1
        if j < 0 or npref == 0:
            break
    return count


def _scan_chart_numpy(p, nv, level, exps0, coeffs0, rest, pw, chunk=1 << 18):
    nfree = nv - 1 - level
    found = []
    base = np.zeros(nv, dtype=np.int64)
    base[level] = 1
    if nfree == 0:
        pt = base.reshape(1, -1)
        if _eval_many_numpy(exps0, coeffs0, pt, p, pw)[0] == 0:
            if all(_eval_many_numpy(e, c, pt, p, pw)[0] == 0 for e, c in rest):
                found.append(pt.copy())
        return found
    total = p ** nfree
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        pts = np.tile(base, (stop - start, 1))
        rem = idx
        for j in range(nfree - 1, -1, -1):
            pts[:, level + 1 + j] = rem % p
            rem = rem // p
        mask = _eval_many_numpy(exps0, coeffs0, pts, p, pw) == 0
        pts = pts[mask]
        for e, c in rest:
            if pts.shape[0] == 0:
                break
            pts = pts[_eval_many_numpy(e, c, pts, p, pw) == 0]
        if pts.shape[0]:
            found.append(pts)
    return found


def common_zeros(p: int, nvars: int, polys, maxout: int | None = None) -> np.ndarray:
    """All points of P^{nvars-1}(GF(p)) where every polynomial vanishes.

    ``polys`` is a list of (exps, coeffs) pairs; the first polynomial is used
    as the scan filter, so put the cheapest or most selective one first.
    Points come back normalized (first nonzero coordinate 1) and sorted.
    """
    exps0 = np.ascontiguousarray(polys[0][0], dtype=np.int64)
    coeffs0 = np.ascontiguousarray(polys[0][1], dtype=np.int64) % p
    rest = [(np.ascontiguousarray(e, dtype=np.int64),
             np.ascontiguousarray(c, dtype=np.int64) % p) for e, c in polys[1:]]
    maxdeg = max(1, max(int(e.max()) if e.size else 0 for e, _ in polys))
    pw = power_table(p, maxdeg)
    chunks = []
    if USE_NUMBA:
        if rest:
            kmax = max(e.shape[0] for e, _ in rest)
            exps_rest = np.zeros((len(rest), kmax * nvars), dtype=np.int64)
            coeffs_rest = np.zeros((len(rest), kmax), dtype=np.int64)
            for q, (e, c) in enumerate(rest):
                exps_rest[q, : e.shape[0] * nvars] = e.reshape(-1)
                coeffs_rest[q, : c.shape[0]] = c
        else:
            exps_rest = np.zeros((1, nvars), dtype=np.int64)
            coeffs_rest = np.zeros((1, 1), dtype=np.int64)
        for level in range(nvars):
            cap = maxout if maxout is not None else 4 * p ** max(0, nvars - 2) + 64
            out = np.empty((cap, nvars), dtype=np.int64)
            n = _scan_chart_numba(p, nvars, level, exps0, coeffs0,
                                  exps_rest, coeffs_rest, len(rest), pw, out, cap)
            if n < 0:
                raise RuntimeError("common_zeros: output buffer overflow")
            if n:
                chunks.append(out[:n].copy())
    else:
        for level in range(nvars):
            chunks.extend(_scan_chart_numpy(p, nvars, level, exps0, coeffs0, rest, pw))
    if not chunks:
        return np.empty((0, nvars), dtype=np.int64)
    pts = np.vstack(chunks)
    order = np.lexsort(pts.T[::-1])
    return pts[order]


# ---------------------------------------------------------------------------
# one-pass membership scan for the invariant quadric pencil
#
# For a point of the iota-fixed plane, (a:b:c) -> x = (a,b,c,c,b), the pencil
# equations read lam^2*A_i - lam*mu*B_i - mu^2*C_i = 0: linear conditions on
# (lam^2 : lam*mu : mu^2).  The kernel of the 5x3 matrix plus the rank-one
# conic condition recovers every modulus whose curve meets the plane there.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _pencil_members_numba(p, abc, out, maxout):
    count = 0
    x = np.zeros(5, dtype=np.int64)
    M = np.zeros((5, 3), dtype=np.int64)
    for s in range(abc.shape[0]):
        x[0] = abc[s, 0]
        x[1] = abc[s, 1]
        x[2] = abc[s, 2]
        x[3] = abc[s, 2]
        x[4] = abc[s, 1]
        for i in range(5):
            M[i, 0] = (x[(i + 2) % 5] * x[(i + 3) % 5]) % p
            M[i, 1] = (-(x[i] * x[i])) % p
            M[i, 2] = (-(x[(i + 1) % 5] * x[(i + 4) % 5])) % p
        k0 = np.int64(-1)
        k1 = np.int64(0)
        k2 = np.int64(0)
        for i in range(5):
            for j in range(i + 1, 5):
                u0 = (M[i, 1] * M[j, 2] - M[i, 2] * M[j, 1]) % p
                u1 = (M[i, 2] * M[j, 0] - M[i, 0] * M[j, 2]) % p
                u2 = (M[i, 0] * M[j, 1] - M[i, 1] * M[j, 0]) % p
                if u0 != 0 or u1 != 0 or u2 != 0:
                    k0, k1, k2 = u0, u1, u2
                    break
            if k0 >= 0:
                break
        if k0 < 0:
            # rank <= 1 point: try every modulus directly
            for lam in range(p + 1):
                if lam == p:
                    l, m = np.int64(1), np.int64(0)
                else:
                    l, m = np.int64(lam), np.int64(1)
                good = True
                for i in range(5):
                    v = (M[i, 0] * l * l + M[i, 1] * l * m + M[i, 2] * m * m) % p
                    if v != 0:
                        good = False
                        break
                if good:
                    if count >= maxout:
                        return -1
                    out[count, 0] = l
                    out[count, 1] = m
                    out[count, 2] = abc[s, 0]
                    out[count, 3] = abc[s, 1]
                    out[count, 4] = abc[s, 2]
                    count += 1
            continue
        ok = True
        for i in range(5):
            v = (M[i, 0] * k0 + M[i, 1] * k1 + M[i, 2] * k2) % p
            if v != 0:
                ok = False
                break
        if not ok:
            continue
        if (k0 * k2 - k1 * k1) % p != 0:
            continue
        if k2 % p != 0:
            l, m = k1 % p, k2 % p
        elif k1 % p != 0:
            continue
        elif k0 % p != 0:
            l, m = np.int64(1), np.int64(0)
        else:
            continue
        if count >= maxout:
            return -1
        out[count, 0] = l
        out[count, 1] = m
        out[count, 2] = abc[s, 0]
        out[count, 3] = abc[s, 1]
        out[count, 4] = abc[s, 2]
        count += 1
    return count


def _pencil_members_numpy(p, abc):
    x = np.column_stack([abc[:, 0], abc[:, 1], abc[:, 2], abc[:, 2], abc[:, 1]])
    M = np.zeros((len(abc), 5, 3), dtype=np.int64)
    for i in range(5):
        M[:, i, 0] = (x[:, (i + 2) % 5] * x[:, (i + 3) % 5]) % p
        M[:, i, 1] = (-(x[:, i] ** 2)) % p
        M[:, i, 2] = (-(x[:, (i + 1) % 5] * x[:, (i + 4) % 5])) % p
    out = []
    for s in range(len(abc)):
        Ms = M[s]
        k = None
        for i in range(5):
            for j in range(i + 1, 5):
                u = np.array([
                    Ms[i, 1] * Ms[j, 2] - Ms[i, 2] * Ms[j, 1],
                    Ms[i, 2] * Ms[j, 0] - Ms[i, 0] * Ms[j, 2],
                    Ms[i, 0] * Ms[j, 1] - Ms[i, 1] * Ms[j, 0]]) % p
                if u.any():
                    k = u
                    break
            if k is not None:
                break
        if k is None:
            for lam in range(p + 1):
                l, m = (lam, 1) if lam < p else (1, 0)
                v = (Ms[:, 0] * l * l + Ms[:, 1] * l * m + Ms[:, 2] * m * m) % p
                if not v.any():
                    out.append((l, m, abc[s, 0], abc[s, 1], abc[s, 2]))
            continue
        if ((Ms @ k) % p).any():
            continue
        if (k[0] * k[2] - k[1] * k[1]) % p != 0:
            continue
        if k[2] % p != 0:
            l, m = int(k[1] % p), int(k[2] % p)
        elif k[1] % p != 0:
            continue
        elif k[0] % p != 0:
            l, m = 1, 0
        else:
            continue
        out.append((l, m, abc[s, 0], abc[s, 1], abc[s, 2]))
    return np.array(out, dtype=np.int64).reshape(-1, 5)


def _p2_points(p: int) -> np.ndarray:
    rows = [np.column_stack([np.ones(p * p, dtype=np.int64),
                             np.repeat(np.arange(p, dtype=np.int64), p),
                             np.tile(np.arange(p, dtype=np.int64), p)]),
            np.column_stack([np.zeros(p, dtype=np.int64),
                             np.ones(p, dtype=np.int64),
                             np.arange(p, dtype=np.int64)]),
            np.array([[0, 0, 1]], dtype=np.int64)]
    return np.vstack(rows)


def pencil_plane_members(p: int) -> np.ndarray:
    """Rows (lam, mu, a, b, c): the quadric-pencil curve at modulus (lam:mu)
    passes through the plane point (a:b:c:c:b).  One pass over P^2(GF(p))."""
    abc = _p2_points(p)
    if USE_NUMBA:
        maxout = 8 * p * p + 64
        out = np.empty((maxout, 5), dtype=np.int64)
        n = _pencil_members_numba(p, abc, out, maxout)
        if n < 0:
            raise RuntimeError("pencil_plane_members: buffer overflow")
        res = out[:n].copy()
    else:
        res = _pencil_members_numpy(p, abc)
    if res.size == 0:
        return res.reshape(-1, 5)
    order = np.lexsort(res.T[::-1])
    return res[order]
