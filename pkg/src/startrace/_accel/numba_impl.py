"""@njit kernels; see package docstring for the shared conventions.

Mod-p reductions sit inside each accumulation so nothing overflows int64
for p up to 2^31.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def idempotent_mask_chunk(start, count, p, n):
    nn = n * n
    out = np.zeros(count, dtype=np.bool_)
    X = np.empty((n, n), dtype=np.int64)
    for t in range(count):
        m = start + t
        nonzero = False
        for i in range(n):
            for j in range(n):
                d = m % p
                X[i, j] = d
                m //= p
                if d != 0:
                    nonzero = True
        if not nonzero:
            continue
        ok = True
        # x @ x == x mod p
        for i in range(n):
            if not ok:
                break
            for j in range(n):
                acc = 0
                for k in range(n):
                    acc = (acc + X[i, k] * X[k, j]) % p
                if acc != X[i, j]:
                    ok = False
                    break
        if ok:
            # rank <= 1: all 2x2 minors vanish
            for i in range(n):
                if not ok:
                    break
                for k in range(i + 1, n):
                    if not ok:
                        break
                    for j in range(n):
                        if not ok:
                            break
                        for l in range(j + 1, n):
                            if (X[i, j] * X[k, l] - X[i, l] * X[k, j]) % p != 0:
                                ok = False
                                break
        out[t] = ok
    return out


@njit(cache=True)
def assoc_first_violation(C, p):
    N = C.shape[0]
    for P in range(N):
        for Q in range(N):
            for R in range(N):
                for U in range(N):
                    lv = 0
                    rv = 0
                    for S in range(N):
                        vs = C[Q, R, S]
                        if vs != 0:
                            lv = (lv + vs * C[P, S, U]) % p
                        ws = C[P, Q, S]
                        if ws != 0:
                            rv = (rv + ws * C[S, R, U]) % p
                    if lv != rv:
                        return P * N * N + Q * N + R
    return -1


@njit(cache=True)
def census_mask_chunk(start, count, p, n, basis, tvecs, ox, oy, prod, comm):
    N = n * n
    K = basis.shape[0]
    out = np.zeros(count, dtype=np.bool_)
    G = np.empty((N, N), dtype=np.int64)
    C = np.empty((N, N, N), dtype=np.int64)
    dsum = np.empty(N, dtype=np.int64)
    npairs = ox.shape[0]
    for t0 in range(count):
        z = start + t0
        # decode digits against the candidate basis
        for s in range(N):
            for u in range(N):
                G[s, u] = 0
        m = z
        for k in range(K):
            d = m % p
            m //= p
            if d != 0:
                for s in range(N):
                    for u in range(N):
                        bv = basis[k, s, u]
                        if bv != 0:
                            G[s, u] = (G[s, u] + d * bv) % p

        # trace filter: g must keep the trace-zero basis trace-zero
        ok = True
        for s in range(N):
            acc = 0
            for d_ in range(n):
                acc += G[s, d_ * n + d_]
            dsum[s] = acc % p
        for b in range(tvecs.shape[0]):
            acc = 0
            for s in range(N):
                bs = tvecs[b, s]
                if bs != 0:
                    acc = (acc + bs * dsum[s]) % p
            if acc != 0:
                ok = False
                break

        if ok:
            for P in range(N):
                for Q in range(N):
                    for U in range(N):
                        acc = prod[P, Q, U]
                        for s in range(N):
                            cv = comm[P, Q, s]
                            if cv != 0:
                                acc = (acc + cv * G[s, U]) % p
                        C[P, Q, U] = acc % p

            # orthogonal idempotent pairs must multiply to zero
            for w in range(npairs):
                if not ok:
                    break
                for U in range(N):
                    acc = 0
                    for P in range(N):
                        xp = ox[w, P]
                        if xp != 0:
                            for Q in range(N):
                                yq = oy[w, Q]
                                if yq != 0:
                                    acc = (acc + xp * yq * C[P, Q, U]) % p
                    if acc != 0:
                        ok = False
                        break

            # full associativity scan, earliest-exit
            if ok:
                done = False
                for P in range(N):
                    for Q in range(N):
                        for R in range(N):
                            for U in range(N):
                                lv = 0
                                rv = 0
                                for S in range(N):
                                    vs = C[Q, R, S]
                                    if vs != 0:
                                        lv = (lv + vs * C[P, S, U]) % p
                                    ws = C[P, Q, S]
                                    if ws != 0:
                                        rv = (rv + ws * C[S, R, U]) % p
                                if lv != rv:
                                    ok = False
                                    done = True
                                    break
                            if done:
                                break
                        if done:
                            break
                    if done:
                        break
        out[t0] = ok
    return out
