"""Dense linear algebra over the prime field F_p, on numpy int64 arrays.

All matrices hold integers reduced mod p.  These routines back the heavy
parts of the package: kernels of additive operators, subfield detection,
and canonical basis extraction.  Everything is exact.
"""

from __future__ import annotations

import numpy as np


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p.  Returns (rref matrix, pivot columns)."""
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat: np.ndarray, p: int) -> int:
    _, pivots = rref(mat, p)
    return len(pivots)


def nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel of mat over F_p, one basis vector per row."""
    a, pivots = rref(mat, p)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-a[r, fc]) % p
    return basis


def solve(mat: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of mat @ x = rhs over F_p, or None when inconsistent."""
    a = np.array(mat, dtype=np.int64) % p
    b = np.array(rhs, dtype=np.int64).reshape(-1, 1) % p
    aug, pivots = rref(np.hstack([a, b]), p)
    cols = a.shape[1]
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = aug[r, cols]
    return x


def inverse(mat: np.ndarray, p: int) -> np.ndarray | None:
    """Inverse matrix mod p, or None if singular."""
    a = np.array(mat, dtype=np.int64) % p
    n = a.shape[0]
    aug, pivots = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if pivots != list(range(n)):
        return None
    return aug[:, n:]


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # int64 is safe: entries < p <= 2**31 would overflow, but p here is a
    # small prime and dimensions stay in the hundreds.
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def matpow(mat: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(mat.shape[0], dtype=np.int64)
    base = np.array(mat, dtype=np.int64) % p
    while e > 0:
        if e & 1:
            result = matmul(result, base, p)
        base = matmul(base, base, p)
        e >>= 1
    return result


def row_space_basis(mat: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis (rref pivot rows) of the row space of mat over F_p."""
    a, pivots = rref(mat, p)
    return a[: len(pivots)]
