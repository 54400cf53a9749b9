"""Integer kernels for the prime-field hot loops.

Two interchangeable backends compute identical results:

* ``numba``: @njit compiled loops (default when numba imports cleanly);
* ``numpy``: vectorized fallback, always available.

Selection: the ``STARTRACE_KERNELS`` environment variable may be set to
``numba``, ``numpy`` or ``auto`` (default).  ``force_backend`` overrides
at runtime (used by the benchmark and the agreement tests).  The choice
affects speed only; every caller gets exact mod-p integers either way.

Shared conventions: a matrix over GF(p) is encoded as base-p digits of an
integer index, cell (i, j) at digit position i*n + j, least significant
first.  A candidate perturbation map is a combination sum(d_k * B[k]) of
basis coefficient tables with base-p digit vector d, same digit order.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_VAR = "STARTRACE_KERNELS"
_forced: str | None = None
_numba_ok: bool | None = None


def _numba_available() -> bool:
    global _numba_ok
    if _numba_ok is None:
        try:
            from . import numba_impl  # noqa: F401

            _numba_ok = True
        except ImportError:
            _numba_ok = False
    return _numba_ok


def force_backend(name: str | None):
    """Override backend selection ('numba', 'numpy', or None for auto/env)."""
    global _forced
    if name not in (None, "numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    _forced = name


def backend_name() -> str:
    choice = _forced or os.environ.get(_ENV_VAR, "auto").lower()
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not _numba_available():
            raise ImportError("STARTRACE_KERNELS=numba but numba is not importable")
        return "numba"
    return "numba" if _numba_available() else "numpy"


def _impl():
    if backend_name() == "numba":
        from . import numba_impl as mod
    else:
        from . import numpy_impl as mod
    return mod


_CHUNK = 1 << 16


def idempotent_scan(p: int, n: int) -> np.ndarray:
    """Ascending indices of all rank-one idempotents in M_n(GF(p))."""
    total = p ** (n * n)
    mod = _impl()
    hits = []
    for start in range(0, total, _CHUNK):
        count = min(_CHUNK, total - start)
        mask = mod.idempotent_mask_chunk(start, count, p, n)
        idx = np.nonzero(mask)[0]
        if idx.size:
            hits.append(idx.astype(np.int64) + start)
    if not hits:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(hits)


def assoc_first_violation(C: np.ndarray, p: int) -> int:
    """First failing unit triple of the tensor C (flat P*N^2+Q*N+R), or -1."""
    return int(_impl().assoc_first_violation(np.ascontiguousarray(C % p), p))


def census_scan(total: int, p: int, n: int, basis: np.ndarray,
                tvecs: np.ndarray, ox: np.ndarray, oy: np.ndarray,
                prod: np.ndarray, comm: np.ndarray) -> np.ndarray:
    """Indices of admissible candidates among [0, total).

    A candidate index decodes to a perturbation map through ``basis``;
    admissible means its induced product passes the trace filter, every
    precomputed orthogonal idempotent pair, and the full associativity
    scan.  The right-identity axiom holds structurally for this family.
    """
    mod = _impl()
    hits = []
    for start in range(0, total, _CHUNK):
        count = min(_CHUNK, total - start)
        mask = mod.census_mask_chunk(start, count, p, n, basis, tvecs, ox, oy, prod, comm)
        idx = np.nonzero(mask)[0]
        if idx.size:
            hits.append(idx.astype(np.int64) + start)
    if not hits:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(hits)


def unit_product_tables(n: int, p: int):
    """prod[P,Q,:] = flat(e_P e_Q) and comm[P,Q,:] = flat(e_P e_Q - e_Q e_P)
    over GF(p), for the unit basis in flat order."""
    N = n * n
    prod = np.zeros((N, N, N), dtype=np.int64)
    for P in range(N):
        a, b = divmod(P, n)
        for Q in range(N):
            c, d = divmod(Q, n)
            if b == c:
                prod[P, Q, a * n + d] = 1
    comm = (prod - prod.transpose(1, 0, 2)) % p
    return prod, comm
