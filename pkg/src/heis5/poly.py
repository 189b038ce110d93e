"""Sparse homogeneous polynomials in five variables over GF(p).

One global variable set y0..y4 serves every coordinate system (x, z, w, u
are labels on values, not separate rings).  The monomial order is graded
lexicographic with y0 > y1 > ... > y4, fixed once and for all; persisted
coefficient data relies on it.

Matrices of homogeneous polynomials carry row/column twists and, optionally,
row/column "weights" in Z/5: the entry (i, j) then only contains monomials m
with (sum_k k*m_k) = col_weight[j] - row_weight[i] (mod 5).  Degree pieces of
such matrices split into five independent blocks, which is what makes the
exact linear algebra in this package fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import arith

NVARS = 5

Monomial = tuple  # 5 non-negative exponents


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], a[4] + b[4])


def mono_weight(m: Monomial) -> int:
    return (m[1] + 2 * m[2] + 3 * m[3] + 4 * m[4]) % 5


@lru_cache(maxsize=None)
def degree_basis(d: int):
    """All monomials of degree d, descending lexicographic (y0^d first)."""
    if d < 0:
        return ()
    out = []

    def rec(prefix, left, k):
        if k == NVARS - 1:
            out.append(tuple(prefix + [left]))
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], left - e, k + 1)

    rec([], d, 0)
    return tuple(out)


@lru_cache(maxsize=None)
def basis_index(d: int):
    return {m: i for i, m in enumerate(degree_basis(d))}


@lru_cache(maxsize=None)
def basis_weights(d: int) -> np.ndarray:
    return np.array([mono_weight(m) for m in degree_basis(d)], dtype=np.int64)


def dim_degree(d: int) -> int:
    return len(degree_basis(d))


class HomPoly:
    """Homogeneous polynomial: degree plus a sparse monomial -> coeff map."""

    __slots__ = ("p", "degree", "terms")

    def __init__(self, p: int, degree: int, terms=None):
        self.p = p
        self.degree = degree
        self.terms = {}
        if terms:
            for m, c in terms.items():
                c = int(c) % p
                if c:
                    if sum(m) != degree:
                        raise ValueError(f"monomial {m} is not of degree {degree}")
                    self.terms[tuple(m)] = c

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, HomPoly) and self.p == other.p
                and self.degree == other.degree and self.terms == other.terms)

    def __hash__(self):
        return hash((self.p, self.degree, tuple(sorted(self.terms.items()))))

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = (t.get(m, 0) + c) % self.p
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return HomPoly(self.p, self.degree, t)

    def __neg__(self):
        return HomPoly(self.p, self.degree,
                       {m: self.p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        t = {}
        p = self.p
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                t[m] = (t.get(m, 0) + c1 * c2) % p
        return HomPoly(p, self.degree + other.degree, t)

    __rmul__ = __mul__

    def scale(self, c: int):
        c = int(c) % self.p
        return HomPoly(self.p, self.degree,
                       {m: (v * c) % self.p for m, v in self.terms.items()})

    def eval(self, pt) -> int:
        p = self.p
        acc = 0
        for m, c in self.terms.items():
            v = c
            for j in range(NVARS):
                e = m[j]
                if e:
                    v = v * pow(int(pt[j]), e, p) % p
            acc = (acc + v) % p
        return acc

    def weight(self):
        """The common Z/5 monomial weight, or None for mixed-weight terms."""
        ws = {mono_weight(m) for m in self.terms}
        if len(ws) == 1:
            return ws.pop()
        return None if ws else 0

    def lex_leading(self):
        return max(self.terms) if self.terms else None

    def monic(self):
        """Scale so the lex-leading coefficient is 1 (projective normal form)."""
        if not self.terms:
            return self
        return self.scale(pow(self.terms[self.lex_leading()], -1, self.p))

    def coeff_vector(self) -> np.ndarray:
        idx = basis_index(self.degree)
        v = np.zeros(len(idx), dtype=np.int64)
        for m, c in self.terms.items():
            v[idx[m]] = c
        return v

    def to_json(self) -> dict:
        ms = sorted(self.terms, reverse=True)
        return {"deg": self.degree,
                "terms": [{"c": int(self.terms[m]), "e": list(m)} for m in ms]}

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, reverse=True):
            mon = "*".join(f"y{j}^{e}" if e > 1 else f"y{j}"
                           for j, e in enumerate(m) if e)
            bits.append(f"{self.terms[m]}*{mon}" if mon else f"{self.terms[m]}")
        return " + ".join(bits)


def hp_zero(p: int, degree: int) -> HomPoly:
    return HomPoly(p, degree, {})


def hp_from_json(p: int, data: dict) -> HomPoly:
    return HomPoly(p, data["deg"],
                   {tuple(t["e"]): t["c"] for t in data["terms"]})


def variable(p: int, j: int) -> HomPoly:
    e = [0] * NVARS
    e[j] = 1
    return HomPoly(p, 1, {tuple(e): 1})


def monomial(p: int, exps, c: int = 1) -> HomPoly:
    return HomPoly(p, sum(exps), {tuple(exps): c})


def from_coeff_vector(p: int, d: int, vec) -> HomPoly:
    basis = degree_basis(d)
    return HomPoly(p, d, {basis[i]: int(v) for i, v in enumerate(vec) if int(v) % p})


# ---------------------------------------------------------------------------
# projective points
# ---------------------------------------------------------------------------

def normalize_point(coords, p: int):
    """Canonical representative: first nonzero coordinate scaled to 1."""
    c = [int(v) % p for v in coords]
    for v in c:
        if v:
            inv = pow(v, -1, p)
            return tuple(x * inv % p for x in c)
    raise ValueError("zero vector is not a projective point")


def points_equal(a, b, p: int) -> bool:
    return normalize_point(a, p) == normalize_point(b, p)


# ---------------------------------------------------------------------------
# matrices of homogeneous polynomials
# ---------------------------------------------------------------------------

@dataclass
class PolyMatrix:
    """Grid of homogeneous polynomials between twisted free modules.

    Entry (i, j) is zero or homogeneous of degree col_twists[j] - row_twists[i].
    Optional row/col weights declare the Z/5 monomial-weight grading.
    """

    p: int
    row_twists: list
    col_twists: list
    entries: list  # entries[i][j]: HomPoly or None
    row_weights: list | None = None
    col_weights: list | None = None

    def __post_init__(self):
        for i, rt in enumerate(self.row_twists):
            for j, ct in enumerate(self.col_twists):
                f = self.entries[i][j]
                if f is not None and not f.is_zero():
                    if f.degree != ct - rt:
                        raise ValueError(
                            f"entry ({i},{j}) has degree {f.degree}, expected {ct - rt}")
        if (self.row_weights is None) != (self.col_weights is None):
            raise ValueError("row_weights and col_weights must come together")
        if self.row_weights is not None:
            for i, rw in enumerate(self.row_weights):
                for j, cw in enumerate(self.col_weights):
                    f = self.entries[i][j]
                    if f is None or f.is_zero():
                        continue
                    want = (cw - rw) % 5
                    for m in f.terms:
                        if mono_weight(m) != want:
                            raise ValueError(
                                f"entry ({i},{j}) breaks the declared weight grading")

    @property
    def nrows(self) -> int:
        return len(self.row_twists)

    @property
    def ncols(self) -> int:
        return len(self.col_twists)

    def entry(self, i: int, j: int) -> HomPoly:
        f = self.entries[i][j]
        if f is None:
            return hp_zero(self.p, self.col_twists[j] - self.row_twists[i])
        return f

    def is_zero(self) -> bool:
        return all(f is None or f.is_zero() for row in self.entries for f in row)

    def has_constant_entry(self) -> bool:
        for i in range(self.nrows):
            for j in range(self.ncols):
                f = self.entries[i][j]
                if f is not None and not f.is_zero() and f.degree == 0:
                    return True
        return False

    def transpose(self) -> "PolyMatrix":
        ent = [[self.entries[i][j] for i in range(self.nrows)]
               for j in range(self.ncols)]
        rw = cw = None
        if self.row_weights is not None:
            rw = [(-w) % 5 for w in self.col_weights]
            cw = [(-w) % 5 for w in self.row_weights]
        return PolyMatrix(self.p, [-t for t in self.col_twists],
                          [-t for t in self.row_twists], ent, rw, cw)

    def column(self, j: int):
        return [self.entry(i, j) for i in range(self.nrows)]


def shift_polymat(A: PolyMatrix, s: int) -> PolyMatrix:
    """Same entries with all twists moved by s (a module twist)."""
    return PolyMatrix(A.p, [t + s for t in A.row_twists],
                      [t + s for t in A.col_twists], A.entries,
                      A.row_weights, A.col_weights)


def polymat_mul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    if A.col_twists != B.row_twists:
        raise ValueError("twist mismatch in product")
    ent = []
    for i in range(A.nrows):
        row = []
        for j in range(B.ncols):
            acc = hp_zero(A.p, B.col_twists[j] - A.row_twists[i])
            for k in range(A.ncols):
                f, g = A.entries[i][k], B.entries[k][j]
                if f is None or g is None or f.is_zero() or g.is_zero():
                    continue
                acc = acc + f * g
            row.append(acc if not acc.is_zero() else None)
        ent.append(row)
    rw = cw = None
    if A.row_weights is not None and B.col_weights is not None:
        rw, cw = list(A.row_weights), list(B.col_weights)
    return PolyMatrix(A.p, list(A.row_twists), list(B.col_twists), ent, rw, cw)


@lru_cache(maxsize=None)
def _shift_map(mono: Monomial, src_deg: int) -> np.ndarray:
    """Row indices of multiplication-by-mono on the degree basis (read-only)."""
    tidx = basis_index(src_deg + sum(mono))
    src = degree_basis(src_deg)
    out = np.fromiter((tidx[mono_mul(mono, s)] for s in src),
                      count=len(src), dtype=np.int64)
    out.setflags(write=False)
    return out


def matrix_degree_piece(A: PolyMatrix, d: int) -> np.ndarray:
    """The linear map between degree-d coefficient spaces induced by A.

    Maps (+)_j R_{d-ct_j} -> (+)_i R_{d-rt_i}; basis blocks are ordered by
    slot, within a slot by the global monomial order.
    """
    p = A.p
    row_dims = [dim_degree(d - rt) for rt in A.row_twists]
    col_dims = [dim_degree(d - ct) for ct in A.col_twists]
    roff = np.concatenate([[0], np.cumsum(row_dims)])
    coff = np.concatenate([[0], np.cumsum(col_dims)])
    M = np.zeros((int(roff[-1]), int(coff[-1])), dtype=np.int64)
    for j, ct in enumerate(A.col_twists):
        sdeg = d - ct
        if sdeg < 0:
            continue
        ncols = dim_degree(sdeg)
        cols = np.arange(ncols)
        for i, rt in enumerate(A.row_twists):
            f = A.entries[i][j]
            if f is None or f.is_zero():
                continue
            r0, c0 = int(roff[i]), int(coff[j])
            for m, c in f.terms.items():
                M[r0 + _shift_map(m, sdeg), c0 + cols] += c
    M %= p
    return M


def piece_slot_weights(twists, weights, d: int) -> np.ndarray:
    parts = []
    for t, w in zip(twists, weights):
        if d - t >= 0:
            parts.append((basis_weights(d - t) + w) % 5)
        else:
            parts.append(np.empty(0, dtype=np.int64))
    if not parts:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(parts)


def piece_col_weights(A: PolyMatrix, d: int):
    if A.col_weights is None:
        return None
    return piece_slot_weights(A.col_twists, A.col_weights, d)


def piece_row_weights(A: PolyMatrix, d: int):
    if A.row_weights is None:
        return None
    return piece_slot_weights(A.row_twists, A.row_weights, d)


def blocked_kernel(M: np.ndarray, p: int, row_w, col_w) -> np.ndarray:
    """Right kernel of M, computed per weight block when a grading is given.

    Basis columns are grouped weight 0..4, canonical within each block.
    """
    if row_w is None or col_w is None:
        return arith.kernel(M, p)
    cols = []
    for b in range(5):
        ci = np.nonzero(col_w == b)[0]
        ri = np.nonzero(row_w == b)[0]
        if ci.size == 0:
            continue
        sub = M[np.ix_(ri, ci)] if ri.size else np.zeros((0, ci.size), dtype=np.int64)
        Kb = arith.kernel(sub, p)
        if Kb.shape[1]:
            emb = np.zeros((M.shape[1], Kb.shape[1]), dtype=np.int64)
            emb[ci] = Kb
            cols.append(emb)
    if not cols:
        return np.zeros((M.shape[1], 0), dtype=np.int64)
    return np.hstack(cols)


def blocked_rank(M: np.ndarray, p: int, row_w, col_w) -> int:
    if row_w is None or col_w is None:
        return arith.rank(M, p)
    r = 0
    for b in range(5):
        ci = np.nonzero(col_w == b)[0]
        ri = np.nonzero(row_w == b)[0]
        if ci.size and ri.size:
            r += arith.rank(M[np.ix_(ri, ci)], p)
    return r


def piece_kernel(A: PolyMatrix, d: int) -> np.ndarray:
    M = matrix_degree_piece(A, d)
    return blocked_kernel(M, A.p, piece_row_weights(A, d), piece_col_weights(A, d))


def piece_rank(A: PolyMatrix, d: int) -> int:
    M = matrix_degree_piece(A, d)
    return blocked_rank(M, A.p, piece_row_weights(A, d), piece_col_weights(A, d))


def vector_to_polys(vec, col_twists, d: int, p: int):
    """Split a degree-d coefficient vector into the per-slot polynomials."""
    out = []
    off = 0
    for ct in col_twists:
        n = dim_degree(d - ct)
        out.append(from_coeff_vector(p, d - ct, vec[off:off + n]) if n else
                   hp_zero(p, d - ct))
        off += n
    return out


def polys_to_vector(polys, col_twists, d: int):
    parts = []
    for f, ct in zip(polys, col_twists):
        n = dim_degree(d - ct)
        if n == 0:
            continue
        if f is None or f.is_zero():
            parts.append(np.zeros(n, dtype=np.int64))
        else:
            parts.append(f.coeff_vector())
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
