"""Vectorized numpy fallback kernels.

Same contracts as numba_impl; everything stays in int64 with mod-p
reductions interleaved so no intermediate can overflow under the scan
guards (p fits in 31 bits, candidate spaces are budget-capped).
"""

from __future__ import annotations

import numpy as np


def idempotent_mask_chunk(start: int, count: int, p: int, n: int) -> np.ndarray:
    """Mask of rank-one idempotents among matrix indices [start, start+count)."""
    nn = n * n
    powers = p ** np.arange(nn, dtype=np.int64)
    idx = np.arange(start, start + count, dtype=np.int64)
    digits = (idx[:, None] // powers[None, :]) % p
    X = digits.reshape(count, n, n)
    XX = np.matmul(X, X) % p
    ok = (XX == X).all(axis=(1, 2))
    ok &= digits.any(axis=1)
    # rank <= 1 iff all 2x2 minors vanish; with nonzero that pins rank = 1
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                for l in range(j + 1, n):
                    minor = (X[:, i, j] * X[:, k, l] - X[:, i, l] * X[:, k, j]) % p
                    ok &= minor == 0
    return ok


def assoc_first_violation(C: np.ndarray, p: int) -> int:
    N = C.shape[0]
    for P in range(N):
        left = np.zeros((N, N, N), dtype=np.int64)
        right = np.zeros((N, N, N), dtype=np.int64)
        CP = C[P]
        for S in range(N):
            # left[Q,R,U] += C[Q,R,S] * C[P,S,U]; right[Q,R,U] += C[P,Q,S] * C[S,R,U]
            left = (left + C[:, :, S, None] * CP[S][None, None, :]) % p
            right = (right + CP[:, S][:, None, None] * C[S][None, :, :]) % p
        bad = (left != right).any(axis=2)
        if bad.any():
            QR = int(np.argmax(bad))
            return P * N * N + QR
    return -1


def census_mask_chunk(start: int, count: int, p: int, n: int,
                      basis: np.ndarray, tvecs: np.ndarray,
                      ox: np.ndarray, oy: np.ndarray,
                      prod: np.ndarray, comm: np.ndarray) -> np.ndarray:
    N = n * n
    K = basis.shape[0]
    powers = p ** np.arange(K, dtype=np.int64)
    idx = np.arange(start, start + count, dtype=np.int64)
    digits = (idx[:, None] // powers[None, :]) % p
    G = np.einsum("zk,kst->zst", digits, basis) % p

    mask = np.zeros(count, dtype=bool)
    diag_cols = np.array([d * n + d for d in range(n)], dtype=np.int64)
    dsum = G[:, :, diag_cols].sum(axis=2) % p
    alive = np.nonzero(((dsum @ tvecs.T) % p == 0).all(axis=1))[0]
    if alive.size == 0:
        return mask

    C = (prod[None] + np.einsum("pqs,zsu->zpqu", comm, G[alive])) % p

    for w in range(ox.shape[0]):
        out = np.einsum("p,q,zpqu->zu", ox[w], oy[w], C) % p
        good = (out == 0).all(axis=1)
        alive, C = alive[good], C[good]
        if alive.size == 0:
            return mask

    for P in range(N):
        good = np.ones(alive.size, dtype=bool)
        for Q in range(N):
            for R in range(N):
                left = np.einsum("zs,zsu->zu", C[:, Q, R, :], C[:, P, :, :]) % p
                right = np.einsum("zs,zsu->zu", C[:, P, Q, :], C[:, :, R, :]) % p
                good &= (left == right).all(axis=1)
        alive, C = alive[good], C[good]
        if alive.size == 0:
            return mask

    mask[alive] = True
    return mask
