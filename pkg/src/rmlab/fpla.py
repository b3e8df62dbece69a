"""Dense linear algebra over a prime field F_p on numpy integer arrays.

Everything here works on plain residues ``0 <= a < p``.  ``batch_rank``
eliminates a whole stack of small matrices at once, which is what makes the
exhaustive rank scans affordable.
"""

from __future__ import annotations

import numpy as np


def _inv_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        t[a] = pow(a, -1, p)
    return t


def rref(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = np.array(A, dtype=np.int64) % p
    rows, cols = M.shape
    inv = _inv_table(p)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            M[[r, k]] = M[[k, r]]
        M[r] = (M[r] * inv[M[r, c]]) % p
        f = M[:, c].copy()
        f[r] = 0
        M = (M - np.outer(f, M[r])) % p
        pivots.append(c)
        r += 1
    return M, pivots


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p: int) -> np.ndarray:
    """Basis of ``{x : A x = 0}`` as the rows of the returned array."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref(A, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fcol in enumerate(free):
        basis[k, fcol] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-R[i, fcol]) % p
    return basis


def in_span(basis, v, p: int) -> bool:
    basis = np.atleast_2d(np.asarray(basis, dtype=np.int64))
    if basis.size == 0:
        return not np.any(np.asarray(v) % p)
    return rank(np.vstack([basis, v]), p) == rank(basis, p)


def batch_rank(mats, p: int, stop_rows: int | None = None) -> np.ndarray:
    """Ranks of a stack of matrices with shape ``(B, rows, cols)``.

    ``stop_rows`` caps elimination at that many pivots: the returned rank is
    then ``min(true_rank, stop_rows)``, which is enough for threshold tests.
    """
    dtype = np.int16 if p * p < 2 ** 15 else np.int64
    A = (np.asarray(mats) % p).astype(dtype)
    B, R, C = A.shape
    inv = _inv_table(p).astype(dtype)
    rk = np.zeros(B, dtype=np.int64)
    row_ids = np.arange(R)
    limit = R if stop_rows is None else min(R, stop_rows)
    for c in range(C):
        active = rk < limit
        if not active.any():
            break
        cand = (A[:, :, c] != 0) & (row_ids[None, :] >= rk[:, None]) & active[:, None]
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.nonzero(has)[0]
        piv = cand[sel].argmax(axis=1)
        tgt = rk[sel]
        sub = A[sel]
        ar = np.arange(sel.size)
        prow = sub[ar, piv].copy()
        sub[ar, piv] = sub[ar, tgt]
        prow = (prow * inv[prow[:, c]][:, None]) % p
        sub[ar, tgt] = prow
        f = sub[:, :, c].copy()
        f[ar, tgt] = 0
        f[row_ids[None, :] <= tgt[:, None]] = 0
        sub = (sub - f[:, :, None] * prow[:, None, :]) % p
        A[sel] = sub
        rk[sel] += 1
    return rk


def enumerate_span(basis, p: int) -> np.ndarray:
    """All ``p**k`` linear combinations of the ``k`` basis rows, in counting order."""
    basis = np.atleast_2d(np.asarray(basis, dtype=np.int64))
    k = basis.shape[0]
    total = p ** k
    coeff = np.empty((total, k), dtype=np.int64)
    r = np.arange(total, dtype=np.int64)
    for i in range(k):
        coeff[:, i] = r % p
        r //= p
    return (coeff @ basis) % p
