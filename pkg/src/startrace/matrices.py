"""Dense exact matrices over a scalar field.

Carries the working objects of the whole package: matrix units, traces,
commutators, ranks, rank-one idempotents and their orthogonal pairs, and
the constructive decomposition of a trace-zero matrix as a commutator.

Indices are 0-based internally; report formatting elsewhere maps them to
1-based labels.  Dimension is capped at ``MAX_DIM`` to keep the dense
n^6 structure-tensor work downstream at desk scale.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from . import linalg
from .errors import (
    DecompositionFailed,
    DimensionMismatch,
    IndexOutOfRange,
    InfiniteField,
    MixedFields,
    NotNormalized,
    NotTraceless,
    SamplingFailed,
    SearchSpaceTooLarge,
)
from .fields import Field, field_from_string

MAX_DIM = 8
ENUM_GUARD = 2**24  # cap on p^(n^2) full-matrix scans


def _check_dim(n: int):
    if not 1 <= n <= MAX_DIM:
        raise DimensionMismatch(f"dimension {n} outside [1, {MAX_DIM}]")


@dataclass(frozen=True)
class Matrix:
    """Immutable n x n matrix; ``rows`` is a tuple of row tuples."""

    field: Field
    n: int
    rows: tuple

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(field, rows) -> "Matrix":
        n = len(rows)
        _check_dim(n)
        for r in rows:
            if len(r) != n:
                raise DimensionMismatch("matrix rows must all have length n")
        return Matrix(field, n, tuple(tuple(r) for r in rows))

    @staticmethod
    def from_ints(field, rows) -> "Matrix":
        return Matrix.from_rows(field, [[field.from_int(x) for x in r] for r in rows])

    @staticmethod
    def zero(field, n) -> "Matrix":
        _check_dim(n)
        z = field.zero
        return Matrix(field, n, tuple((z,) * n for _ in range(n)))

    @staticmethod
    def identity(field, n) -> "Matrix":
        _check_dim(n)
        z, o = field.zero, field.one
        return Matrix(field, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @staticmethod
    def unit(field, n, i, j) -> "Matrix":
        """Matrix unit: single 1 at row i, column j."""
        _check_dim(n)
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"unit index ({i}, {j}) outside [0, {n})")
        z, o = field.zero, field.one
        return Matrix(field, n, tuple(
            tuple(o if (r, c) == (i, j) else z for c in range(n)) for r in range(n)
        ))

    @staticmethod
    def random(field, n, rng) -> "Matrix":
        return Matrix.from_rows(field, [[field.random_scalar(rng) for _ in range(n)] for _ in range(n)])

    # -- arithmetic ----------------------------------------------------

    def _compat(self, other: "Matrix"):
        if self.field != other.field:
            raise MixedFields(f"{self.field} vs {other.field}")
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n} vs {other.n}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._compat(other)
        f = self.field
        return Matrix(f, self.n, tuple(
            tuple(f.add(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        ))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._compat(other)
        f = self.field
        return Matrix(f, self.n, tuple(
            tuple(f.sub(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        ))

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, self.n, tuple(tuple(f.neg(a) for a in r) for r in self.rows))

    def scale(self, s) -> "Matrix":
        f = self.field
        return Matrix(f, self.n, tuple(tuple(f.mul(s, a) for a in r) for r in self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._compat(other)
        f, n = self.field, self.n
        zero = f.zero
        out = []
        for i in range(n):
            row = []
            ri = self.rows[i]
            for j in range(n):
                acc = zero
                for k in range(n):
                    a = ri[k]
                    if a != zero:
                        b = other.rows[k][j]
                        if b != zero:
                            acc = f.add(acc, f.mul(a, b))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(f, n, tuple(out))

    def trace(self):
        f = self.field
        acc = f.zero
        for i in range(self.n):
            acc = f.add(acc, self.rows[i][i])
        return acc

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(a == z for r in self.rows for a in r)

    def is_scalar(self) -> bool:
        """True iff the matrix is c * identity for some c."""
        z = self.field.zero
        c = self.rows[0][0]
        for i in range(self.n):
            for j in range(self.n):
                want = c if i == j else z
                if self.rows[i][j] != want:
                    return False
        return True

    def rank(self) -> int:
        return linalg.rank([list(r) for r in self.rows], self.n, self.field)

    def flat(self) -> tuple:
        """Row-major flattening, length n^2."""
        return tuple(a for r in self.rows for a in r)

    # -- text / JSON ---------------------------------------------------

    def to_json_dict(self) -> dict:
        f = self.field
        return {
            "field": str(f),
            "n": self.n,
            "entries": [[f.format(a) for a in r] for r in self.rows],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "Matrix":
        f = field_from_string(d["field"])
        n = int(d["n"])
        rows = [[f.parse(s) for s in r] for r in d["entries"]]
        m = Matrix.from_rows(f, rows)
        if m.n != n:
            raise DimensionMismatch(f"declared n={n} but entries are {m.n}x{m.n}")
        return m

    def __str__(self):
        f = self.field
        return "[" + "; ".join(" ".join(f.format(a) for a in r) for r in self.rows) + "]"


def commutator(x: Matrix, y: Matrix) -> Matrix:
    """x y - y x; always trace-zero."""
    return (x @ y) - (y @ x)


# -- vectors ------------------------------------------------------------


def vdot(field, u, v):
    acc = field.zero
    for a, b in zip(u, v):
        acc = field.add(acc, field.mul(a, b))
    return acc


def outer(field, u, v) -> Matrix:
    """Column u times row v."""
    return Matrix.from_rows(field, [[field.mul(a, b) for b in v] for a in u])


def rank_one_idempotent(field, u, v) -> Matrix:
    """u v^T with v . u = 1; the result squares to itself and has rank 1."""
    if len(u) != len(v):
        raise DimensionMismatch("u and v must have equal length")
    if vdot(field, v, u) != field.one:
        raise NotNormalized("v . u != 1")
    return outer(field, u, v)


@dataclass(frozen=True)
class IdempotentPair:
    """Ordered pair of rank-one idempotents x, y with x y = y x = 0.

    Carries the rank-one factorizations x = u1 v1^T, y = u2 v2^T with
    v1.u1 = v2.u2 = 1 and v1.u2 = v2.u1 = 0.
    """

    x: Matrix
    y: Matrix
    u1: tuple
    v1: tuple
    u2: tuple
    v2: tuple

    def validate(self) -> bool:
        f = self.x.field
        x, y = self.x, self.y
        ok = (
            (x @ x) == x
            and (y @ y) == y
            and (x @ y).is_zero()
            and (y @ x).is_zero()
            and x.rank() == 1
            and y.rank() == 1
            and vdot(f, self.v1, self.u1) == f.one
            and vdot(f, self.v2, self.u2) == f.one
            and vdot(f, self.v1, self.u2) == f.zero
            and vdot(f, self.v2, self.u1) == f.zero
        )
        return ok


# -- exhaustive idempotent census (finite fields) ------------------------


def _decode_matrix(field, n, index: int, p: int) -> Matrix:
    """Digit decoding used by all full-matrix scans: cell (i, j) holds the
    base-p digit at position i*n + j, least significant first."""
    rows = []
    m = index
    digits = []
    for _ in range(n * n):
        digits.append(m % p)
        m //= p
    for i in range(n):
        rows.append(tuple(digits[i * n + j] for j in range(n)))
    return Matrix(field, n, tuple(rows))


def _guard_scan(field, n):
    if field.kind != "prime":
        raise InfiniteField("exhaustive matrix scans need a finite field")
    count = field.p ** (n * n)
    if count > ENUM_GUARD:
        raise SearchSpaceTooLarge(f"p^(n^2) = {count} exceeds {ENUM_GUARD}")
    return count


@lru_cache(maxsize=16)
def enumerate_rank_one_idempotents(field, n) -> tuple[Matrix, ...]:
    """All x with x @ x == x and rank(x) == 1, by full scan of all p^(n^2)
    matrices, in ascending digit-encoding order.

    The scan is also the census oracle: no parameterization shortcuts.
    """
    _check_dim(n)
    count = _guard_scan(field, n)
    p = field.p
    if count > 4096:
        from ._accel import idempotent_scan

        hits = idempotent_scan(p, n)
        return tuple(_decode_matrix(field, n, int(ix), p) for ix in hits)
    out = []
    for ix in range(count):
        x = _decode_matrix(field, n, ix, p)
        if not x.is_zero() and (x @ x) == x and x.rank() == 1:
            out.append(x)
    return tuple(out)


def _pair_factors(field, x: Matrix):
    """Recover (u, v) with x = u v^T, v.u = 1 from a rank-one idempotent."""
    n = x.n
    # first nonzero column is a multiple of u; first nonzero row gives v
    for j in range(n):
        col = tuple(x.rows[i][j] for i in range(n))
        if any(a != field.zero for a in col):
            u = col
            break
    for i in range(n):
        row = x.rows[i]
        if any(a != field.zero for a in row):
            # x = u v^T means row i is u[i] * v; rescale so v.u = 1
            s = field.inv(u[i]) if u[i] != field.zero else None
            if s is None:
                continue
            v = tuple(field.mul(s, a) for a in row)
            return u, v
    raise NotNormalized("matrix is not a rank-one idempotent")


@lru_cache(maxsize=16)
def orthogonal_idempotent_pairs(field, n) -> tuple[IdempotentPair, ...]:
    """All ordered pairs (x, y) of rank-one idempotents with xy = yx = 0."""
    idems = enumerate_rank_one_idempotents(field, n)
    out = []
    for x in idems:
        for y in idems:
            if (x @ y).is_zero() and (y @ x).is_zero():
                u1, v1 = _pair_factors(field, x)
                u2, v2 = _pair_factors(field, y)
                out.append(IdempotentPair(x, y, u1, v1, u2, v2))
    return tuple(out)


def sample_orthogonal_idempotent_pair(field, n, seed: int, max_tries: int = 64) -> IdempotentPair:
    """Seed-deterministic random orthogonal pair of rank-one idempotents.

    Construction: draw u1 and normalize v1 so v1.u1 = 1; project a random
    vector into ker(v1) to get u2; build v2 orthogonal to u1 and normalized
    against u2.  Degenerate draws are retried up to ``max_tries``.
    """
    if n < 2:
        raise DimensionMismatch("orthogonal pairs need n >= 2")
    rng = random.Random(seed)
    zero, one = field.zero, field.one
    for _ in range(max_tries):
        u1 = tuple(field.random_scalar(rng) for _ in range(n))
        w = tuple(field.random_scalar(rng) for _ in range(n))
        d = vdot(field, w, u1)
        if d == zero:
            continue
        dinv = field.inv(d)
        v1 = tuple(field.mul(dinv, a) for a in w)
        # u2 = w2 - (v1.w2) u1 lies in ker(v1)
        w2 = tuple(field.random_scalar(rng) for _ in range(n))
        c = vdot(field, v1, w2)
        u2 = tuple(field.sub(a, field.mul(c, b)) for a, b in zip(w2, u1))
        if all(a == zero for a in u2):
            continue
        # v2' = w3 - (w3.u1) v1 is orthogonal to u1; then normalize on u2
        w3 = tuple(field.random_scalar(rng) for _ in range(n))
        c = vdot(field, w3, u1)
        v2p = tuple(field.sub(a, field.mul(c, b)) for a, b in zip(w3, v1))
        d2 = vdot(field, v2p, u2)
        if d2 == zero:
            continue
        d2inv = field.inv(d2)
        v2 = tuple(field.mul(d2inv, a) for a in v2p)
        pair = IdempotentPair(outer(field, u1, v1), outer(field, u2, v2), u1, v1, u2, v2)
        if pair.validate():
            return pair
    raise SamplingFailed(f"no orthogonal idempotent pair after {max_tries} draws")


# -- trace-zero matrices as commutators ----------------------------------


def _distinct_elements(field, n):
    """n pairwise distinct field elements, or None."""
    if field.kind == "rational":
        return [field.from_int(k) for k in range(n)]
    if field.p >= n:
        return [field.from_int(k) for k in range(n)]
    return None


def _complete_basis(field, vecs, n):
    """Extend the independent list ``vecs`` to a basis using standard
    vectors, greedily; returns column matrix s."""
    basis = [list(v) for v in vecs]
    for k in range(n):
        cand = [field.one if i == k else field.zero for i in range(n)]
        trial = basis + [cand]
        if linalg.rank(trial, n, field) == len(trial):
            basis.append(cand)
        if len(basis) == n:
            break
    if len(basis) < n:
        return None
    cols = basis
    return Matrix.from_rows(field, [[cols[j][i] for j in range(n)] for i in range(n)])


def _inverse(field, s: Matrix):
    n = s.n
    rows = [list(r) + [field.one if i == j else field.zero for j in range(n)]
            for i, r in enumerate(s.rows)]
    red, pivots = linalg.rref(rows, 2 * n, field)
    if pivots[:n] != list(range(n)):
        return None
    return Matrix.from_rows(field, [r[n:] for r in red])


def _mat_vec(m: Matrix, v):
    f = m.field
    return tuple(vdot(f, row, v) for row in m.rows)


def _zero_diagonal_frame(field, m: Matrix):
    """Invertible s with diag(s^-1 m s) = 0 for a trace-zero non-scalar m,
    or None when the candidate search is exhausted.

    Recursive: pick v with m v outside span(v), change basis to make the
    leading diagonal entry 0, recurse on the trailing block.  A trailing
    block that degenerates to a nonzero scalar sends us back for another v.
    """
    n = m.n
    zero = field.zero
    if all(m.rows[i][i] == zero for i in range(n)):
        return Matrix.identity(field, n)
    if n == 1 or m.is_scalar():
        return None

    candidates = []
    for i in range(n):
        candidates.append(tuple(field.one if r == i else zero for r in range(n)))
    for i in range(n):
        for j in range(i + 1, n):
            candidates.append(tuple(field.one if r in (i, j) else zero for r in range(n)))
    rng = random.Random(0)
    for _ in range(16):
        candidates.append(tuple(field.random_scalar(rng) for _ in range(n)))

    for v in candidates:
        if all(a == zero for a in v):
            continue
        mv = _mat_vec(m, v)
        if linalg.rank([list(v), list(mv)], n, field) != 2:
            continue  # m v in span(v)
        s = _complete_basis(field, [v, mv], n)
        if s is None:
            continue
        sinv = _inverse(field, s)
        if sinv is None:
            continue
        m2 = sinv @ m @ s
        if n == 2:
            return s  # trailing 1x1 block is forced to 0 by the trace
        sub = Matrix.from_rows(field, [r[1:] for r in m2.rows[1:]])
        if sub.is_scalar() and not sub.is_zero():
            continue
        t = _zero_diagonal_frame(field, sub)
        if t is None:
            continue
        ext = [[field.one] + [zero] * (n - 1)]
        for i in range(n - 1):
            ext.append([zero] + list(t.rows[i]))
        return s @ Matrix.from_rows(field, ext)
    return None


def _solve_bracket(field, x: Matrix, m: Matrix):
    """Solve x y - y x = m for y (linear in y); None if inconsistent."""
    n = x.n
    nn = n * n
    rows = []
    rhs = []
    for i in range(n):
        for j in range(n):
            row = [field.zero] * nn
            # (x y)_ij = sum_k x_ik y_kj ; (y x)_ij = sum_k y_ik x_kj
            for k in range(n):
                row[k * n + j] = field.add(row[k * n + j], x.rows[i][k])
                row[i * n + k] = field.sub(row[i * n + k], x.rows[k][j])
            rows.append(row)
            rhs.append(m.rows[i][j])
    sol = linalg.solve(rows, rhs, nn, field)
    if sol is None:
        return None
    return Matrix.from_rows(field, [sol[i * n:(i + 1) * n] for i in range(n)])


def decompose_as_commutator(m: Matrix, max_tries: int = 64) -> tuple[Matrix, Matrix]:
    """Write a trace-zero m as a commutator: returns (x, y) with
    x y - y x = m exactly.

    Strategy, in order:
      * m = 0: (0, 0).
      * nonzero scalar m = c*1 (possible only when the characteristic
        divides n): superdiagonal x, subdiagonal y with entries i*c.
      * general: conjugate into a zero-diagonal frame, take x with
        distinct diagonal entries there, and divide for y (needs n
        distinct field elements).
      * fallback: seeded random x with the linear solve in y.
    """
    field, n = m.field, m.n
    if m.trace() != field.zero:
        raise NotTraceless("commutator decomposition needs trace 0")
    if m.is_zero():
        z = Matrix.zero(field, n)
        return z, z

    if m.is_scalar():
        c = m.rows[0][0]
        x = Matrix.from_rows(field, [
            [field.one if j == i + 1 else field.zero for j in range(n)] for i in range(n)
        ])
        y_rows = [[field.zero] * n for _ in range(n)]
        for i in range(1, n):
            y_rows[i][i - 1] = field.mul(field.from_int(i), c)
        y = Matrix.from_rows(field, y_rows)
        if commutator(x, y) == m:
            return x, y
        raise DecompositionFailed("scalar construction failed")  # pragma: no cover

    diag = _distinct_elements(field, n)
    if diag is not None:
        s = _zero_diagonal_frame(field, m)
        if s is not None:
            sinv = _inverse(field, s)
            m2 = sinv @ m @ s
            x2 = Matrix.from_rows(field, [
                [diag[i] if i == j else field.zero for j in range(n)] for i in range(n)
            ])
            y2_rows = [[field.zero] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    if i != j:
                        y2_rows[i][j] = field.div(m2.rows[i][j], field.sub(diag[i], diag[j]))
            y2 = Matrix.from_rows(field, y2_rows)
            x = s @ x2 @ sinv
            y = s @ y2 @ sinv
            if commutator(x, y) == m:
                return x, y

    rng = random.Random(0)
    for _ in range(max_tries):
        x = Matrix.random(field, n, rng)
        y = _solve_bracket(field, x, m)
        if y is not None and commutator(x, y) == m:
            return x, y
    raise DecompositionFailed(f"no decomposition after {max_tries} random frames")
