"""Dense linear algebra over the prime field F_p (int64 numpy arrays)."""

from __future__ import annotations

import numpy as np

DEFAULT_CHAR = 32003


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_char(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"characteristic must be prime, got {p}")
    if p >= 2**31:
        raise ValueError("characteristic must be below 2^31")
    return p


def rref(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (matrix, pivot columns)."""
    M = np.array(M, dtype=np.int64) % p
    rows, cols = M.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), -1, p)
        if inv != 1:
            M[r] = (M[r] * inv) % p
        col = M[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            M[others] = (M[others] - np.outer(col[others], M[r])) % p
        pivots.append(c)
        r += 1
    return M, pivots


def rank(M: np.ndarray, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    # forward elimination only
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        below = A[r + 1:, c]
        idx = np.flatnonzero(below)
        if idx.size:
            inv = pow(int(A[r, c]), -1, p)
            factors = (below[idx] * inv) % p
            A[r + 1 + idx] = (A[r + 1 + idx] - np.outer(factors, A[r])) % p
        r += 1
    return r


def solve(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Some x with A x = b (mod p), free variables set to zero; None if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    rows, cols = A.shape
    if rows == 0:
        return np.zeros(cols, dtype=np.int64)
    if cols == 0:
        return np.zeros(0, dtype=np.int64) if not np.any(b % p) else None
    R, piv = rref(np.hstack([A, b[:, None]]), p)
    if piv and piv[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = R[r, cols]
    return x


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel of A as rows of the returned matrix."""
    A = np.asarray(A, dtype=np.int64)
    rows, cols = A.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(A, p)
    free = [c for c in range(cols) if c not in set(piv)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for r, c in enumerate(piv):
            out[k, c] = (-R[r, f]) % p
    return out
