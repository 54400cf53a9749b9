"""Exact Gaussian elimination over a field protocol.

Rows are lists of scalars understood by the given field object.  All
routines are division-based RREF; exactness comes from the scalars
themselves (Fraction / modular int), so there is no tolerance anywhere.
"""

from __future__ import annotations


def rref(rows, ncols, field):
    """Reduced row echelon form.

    Returns (reduced_rows, pivot_cols).  Input rows are not mutated.
    Pivoting takes the first row with a nonzero entry in the current
    column, which keeps the result deterministic.
    """
    m = [list(r) for r in rows]
    zero = field.zero
    pivot_cols = []
    pr = 0
    for pc in range(ncols):
        pivot = None
        for r in range(pr, len(m)):
            if m[r][pc] != zero:
                pivot = r
                break
        if pivot is None:
            continue
        m[pr], m[pivot] = m[pivot], m[pr]
        pv = m[pr][pc]
        if pv != field.one:
            inv = field.inv(pv)
            m[pr] = [field.mul(inv, x) for x in m[pr]]
        for r in range(len(m)):
            if r != pr and m[r][pc] != zero:
                f = m[r][pc]
                row, prow = m[r], m[pr]
                for c in range(pc, ncols):
                    if prow[c] != zero:
                        row[c] = field.sub(row[c], field.mul(f, prow[c]))
        pivot_cols.append(pc)
        pr += 1
        if pr == len(m):
            break
    return m[:pr], pivot_cols


def rank(rows, ncols, field) -> int:
    _, pivots = rref(rows, ncols, field)
    return len(pivots)


def nullspace(rows, ncols, field):
    """Basis of the solution space of the homogeneous system rows . x = 0.

    One basis vector per free column, in ascending column order: the free
    variable is 1, earlier pivot variables are back-filled, everything
    else 0.  Returns a list of length-ncols tuples.
    """
    red, pivot_cols = rref(rows, ncols, field)
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [field.zero] * ncols
        vec[free] = field.one
        for r, pc in enumerate(pivot_cols):
            # row r reads: x[pc] + sum(red[r][c] * x[c] for free c) = 0
            coeff = red[r][free]
            if coeff != field.zero:
                vec[pc] = field.neg(coeff)
        basis.append(tuple(vec))
    return basis


def solve(rows, rhs, ncols, field):
    """One solution of the linear system rows . x = rhs, or None.

    Free variables are set to zero.  Inconsistent systems return None.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivot_cols = rref(aug, ncols + 1, field)
    if ncols in pivot_cols:
        return None  # a row reduced to 0 = 1
    x = [field.zero] * ncols
    for r, pc in enumerate(pivot_cols):
        # full RREF: pivot rows are clear of other pivot columns, and the
        # free columns contribute nothing because free variables are 0
        x[pc] = red[r][ncols]
    return tuple(x)
