"""Gaussian elimination over GF(p) with numpy, batched over leading axes.

Pivoting always takes the first row (at or below the current one) with a
nonzero entry, so kernels and particular solutions are reproducible.
"""

from __future__ import annotations

import functools

import numpy as np

__all__ = ["inv_table", "rref", "rank", "kernel", "solve", "solve_batch", "matpow", "in_span"]


@functools.lru_cache(maxsize=None)
def inv_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        t[a] = pow(a, -1, p)
    return t


def _rref_batch(M: np.ndarray, p: int, ncols: int):
    """Row-reduce each matrix of the batch M (B, m, n') on its first ``ncols`` columns.

    Returns the reduced batch, the rank per batch and pivot columns (B, m),
    padded with -1.
    """
    # entries are reduced lazily: each step adds at most (p-1)^2 in magnitude,
    # so pick a dtype that holds ncols such steps
    dtype = np.int32 if (ncols + 1) * (p - 1) ** 2 + p < 2**31 else np.int64
    M = np.ascontiguousarray(np.asarray(M, dtype=np.int64) % p, dtype=dtype)
    B, m, _ = M.shape
    inv = inv_table(p).astype(dtype)
    rows = np.zeros(B, dtype=np.int64)
    pivots = np.full((B, m), -1, dtype=np.int64)
    ar_m = np.arange(m)
    ar = np.arange(B)
    for col in range(ncols):
        colv = M[:, :, col] % p
        M[:, :, col] = colv
        cand = (colv != 0) & (ar_m[None, :] >= rows[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        # batches without a pivot in this column go through the same steps
        # as no-ops: the swap is r<->r and every factor is zero
        r = np.minimum(rows, m - 1)
        piv = np.where(has, np.argmax(cand, axis=1), r)
        top = M[ar, r].copy()
        M[ar, r] = M[ar, piv]
        M[ar, piv] = top
        pr = M[ar, r]
        prow = (pr % p * inv[pr[:, col]][:, None]) % p
        factors = M[:, :, col].copy()
        factors[ar, r] = 0
        factors[~has] = 0
        M -= factors[:, :, None] * prow[:, None, :]
        hb = ar[has]
        M[hb, r[has]] = prow[has]
        pivots[hb, r[has]] = col
        rows += has
    return M.astype(np.int64) % p, rows, pivots


def rref(A: np.ndarray, p: int):
    """Reduced row echelon form of a single matrix; returns (R, pivot columns)."""
    A = np.asarray(A, dtype=np.int64)
    R, rk, piv = _rref_batch(A[None], p, A.shape[1])
    return R[0], [int(c) for c in piv[0, : rk[0]]]


def rank(A: np.ndarray, p: int) -> int:
    return len(rref(A, p)[1])


def kernel(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : A x = 0} as rows, one per free column, in column order."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, c in enumerate(piv):
            basis[i, c] = (-R[r, f]) % p
    return basis


def solve_batch(A: np.ndarray, y: np.ndarray, p: int):
    """Solve A[b] x = y[b] for every b; free variables are set to 0.

    Returns ``(x, ok)`` with x of shape (B, n) and a boolean mask of solvable systems.
    """
    A = np.asarray(A, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    B, m, n = A.shape
    aug = np.concatenate([A, y[:, :, None]], axis=2)
    R, rk, piv = _rref_batch(aug, p, n)
    # inconsistent iff a zero row (beyond the rank) has nonzero rhs
    beyond = np.arange(m)[None, :] >= rk[:, None]
    ok = ~np.any(beyond & (R[:, :, n] != 0), axis=1)
    x = np.zeros((B, n), dtype=np.int64)
    bidx, ridx = np.nonzero(piv >= 0)
    x[bidx, piv[bidx, ridx]] = R[bidx, ridx, n]
    return x, ok


def solve(A: np.ndarray, y: np.ndarray, p: int):
    """Single system: one solution of A x = y, or None."""
    x, ok = solve_batch(np.asarray(A)[None], np.asarray(y)[None], p)
    return x[0] if ok[0] else None


def matpow(A: np.ndarray, e: int, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64) % p
    result = np.eye(A.shape[0], dtype=np.int64)
    while e:
        if e & 1:
            result = (result @ A) % p
        A = (A @ A) % p
        e >>= 1
    return result


def in_span(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    basis = np.asarray(basis, dtype=np.int64).reshape(-1, len(v))
    if basis.shape[0] == 0:
        return not np.any(np.asarray(v) % p)
    return solve(basis.T, v, p) is not None
