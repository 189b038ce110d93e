"""Prime-field context and exact dense linear algebra over GF(p).

Matrices are plain ``numpy.int64`` arrays with entries in ``[0, p)``; the
functions here are thin, exact wrappers around the row-reduction kernel in
``_kernels``.  All results are canonical (reduced echelon pivots scanned in
column order), so repeated runs produce identical bases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import rref as _rref_inplace


class NotPrime(ValueError):
    pass


class BadResidueClass(ValueError):
    """p is not 1 mod 5, so there is no order-5 character on GF(p)."""


@dataclass(frozen=True)
class FieldContext:
    """An odd prime p = 1 (mod 5) with cached roots of unity.

    xi5 has multiplicative order 5; xi3 (order 3) and sqrt5 are present when
    they exist in GF(p) and None otherwise.
    """

    p: int
    xi5: int
    xi3: int | None
    sqrt5: int | None

    def inv(self, a: int) -> int:
        return pow(int(a) % self.p, -1, self.p)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def make_field(p: int) -> FieldContext:
    """Build the field context, finding xi5 / xi3 / sqrt5 by direct search."""
    p = int(p)
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2 or p % 5 != 1:
        raise BadResidueClass(f"p = {p} is not 1 mod 5; no order-5 scaling exists")
    xi5 = None
    for x in range(2, p):
        if pow(x, 5, p) == 1:
            xi5 = x
            break
    assert xi5 is not None
    xi3 = None
    if (p - 1) % 3 == 0:
        for x in range(2, p):
            if pow(x, 3, p) == 1:
                xi3 = x
                break
    sqrt5 = None
    for s in range(1, p):
        if s * s % p == 5 % p:
            sqrt5 = s
            break
    return FieldContext(p=p, xi5=xi5, xi3=xi3, sqrt5=sqrt5)


# ---------------------------------------------------------------------------
# dense linear algebra
# ---------------------------------------------------------------------------

def as_field_matrix(A, p: int) -> np.ndarray:
    M = np.asarray(A, dtype=np.int64) % p
    if M.ndim != 2:
        M = M.reshape(1, -1)
    return np.ascontiguousarray(M)


def rref(A: np.ndarray, p: int):
    """Reduced row echelon form of a copy of A; returns (R, pivot_columns)."""
    R = as_field_matrix(A, p).copy()
    _, piv = _rref_inplace(R, p)
    return R, piv


def rank(A: np.ndarray, p: int) -> int:
    R = as_field_matrix(A, p).copy()
    r, _ = _rref_inplace(R, p)
    return int(r)


def kernel(A: np.ndarray, p: int) -> np.ndarray:
    """Columns span the right null space: A @ K = 0, K has full column rank.

    The basis is canonical: one column per free column of the reduced form,
    with a 1 in that free coordinate.
    """
    A = as_field_matrix(A, p)
    m, n = A.shape
    R = A.copy()
    r, piv = _rref_inplace(R, p)
    piv = [int(c) for c in piv]
    free = [c for c in range(n) if c not in set(piv)]
    K = np.zeros((n, len(free)), dtype=np.int64)
    for k, c in enumerate(free):
        K[c, k] = 1
        for i, pc in enumerate(piv):
            K[pc, k] = (-int(R[i, c])) % p
    return K

def left_kernel(A: np.ndarray, p: int) -> np.ndarray:
    """Rows span the left null space: L @ A = 0."""
    return kernel(as_field_matrix(A, p).T, p).T


def solve(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of A x = b over GF(p), or None when inconsistent."""
    A = as_field_matrix(A, p)
    b = np.asarray(b, dtype=np.int64).reshape(-1) % p
    m, n = A.shape
    aug = np.hstack([A, b.reshape(-1, 1)])
    R, piv = rref(aug, p)
    piv = [int(c) for c in piv]
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, n]
    return x


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    A = as_field_matrix(A, p)
    B = as_field_matrix(B, p)
    if A.shape[1] == 0 or B.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    # split long inner products to stay far from int64 overflow
    step = max(1, (1 << 62) // max(1, (p - 1) ** 2) - 1)
    if A.shape[1] <= step:
        return (A @ B) % p
    acc = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(0, A.shape[1], step):
        acc = (acc + A[:, s:s + step] @ B[s:s + step]) % p
    return acc
