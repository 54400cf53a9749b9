"""Bilinear products on the matrix space as dense structure tensors.

A ``StructureTensor`` fixes the product on the unit basis —
``coeff[P][Q]`` is the flat output vector of e_P * e_Q — and the product
of arbitrary matrices is its bilinear extension.  Bilinearity is
therefore structural; the remaining axioms (associativity, right
identity, trace compatibility, orthogonality) are checked here with
explicit witnesses.

Flat index convention everywhere: P = a*n + b names the unit e_ab.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DimensionMismatch,
    InfiniteField,
    MixedFields,
)
from .fields import field_from_string
from .matrices import (
    ENUM_GUARD,
    Matrix,
    orthogonal_idempotent_pairs,
    sample_orthogonal_idempotent_pair,
)
from .perturbation import PerturbationMap

__all__ = [
    "StructureTensor",
    "ordinary_tensor",
    "opposite_tensor",
    "tensor_from_perturbation",
    "tensor_from_bilinear",
    "star_eval",
    "AxiomReport",
    "check_associativity",
    "check_identity",
    "check_left_identity",
    "check_trace",
    "check_orthogonality",
    "classify_product",
]


class StructureTensor:
    """Dense n^6 coefficient table of a bilinear product on matrix units.

    Treated as immutable after construction; equality and hashing are by
    exact coefficient comparison.
    """

    __slots__ = ("field", "n", "coeff", "_hash")

    def __init__(self, field, n, coeff):
        self.field = field
        self.n = n
        self.coeff = coeff  # coeff[P][Q] = tuple of n^2 output scalars
        self._hash = None

    def __eq__(self, other):
        if not isinstance(other, StructureTensor):
            return NotImplemented
        return self.field == other.field and self.n == other.n and self.coeff == other.coeff

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.n, self.coeff))
        return self._hash

    def out_vec(self, P, Q):
        return self.coeff[P][Q]

    def to_json_dict(self) -> dict:
        """Sparse entry list; omitted coefficients are zero."""
        f, n = self.field, self.n
        entries = []
        for P in range(n * n):
            for Q in range(n * n):
                vec = self.coeff[P][Q]
                for U in range(n * n):
                    if vec[U] != f.zero:
                        entries.append({
                            "left": [P // n, P % n],
                            "right": [Q // n, Q % n],
                            "out": [U // n, U % n],
                            "coeff": f.format(vec[U]),
                        })
        return {"field": str(f), "n": n, "entries": entries}

    @staticmethod
    def from_json_dict(d: dict) -> "StructureTensor":
        f = field_from_string(d["field"])
        n = int(d["n"])
        nn = n * n
        table = [[[f.zero] * nn for _ in range(nn)] for _ in range(nn)]
        for e in d["entries"]:
            (a, b), (c, cc), (u, v) = e["left"], e["right"], e["out"]
            P, Q, U = a * n + b, c * n + cc, u * n + v
            table[P][Q][U] = f.add(table[P][Q][U], f.parse(e["coeff"]))
        coeff = tuple(tuple(tuple(vec) for vec in row) for row in table)
        return StructureTensor(f, n, coeff)


def _vec_to_matrix(field, n, vec) -> Matrix:
    return Matrix(field, n, tuple(tuple(vec[r * n + c] for c in range(n)) for r in range(n)))


def ordinary_tensor(field, n) -> StructureTensor:
    """e_ab * e_cd = [b=c] e_ad: ordinary matrix multiplication."""
    z, o = field.zero, field.one
    nn = n * n
    rows = []
    for P in range(nn):
        a, b = divmod(P, n)
        row = []
        for Q in range(nn):
            c, d = divmod(Q, n)
            vec = [z] * nn
            if b == c:
                vec[a * n + d] = o
            row.append(tuple(vec))
        rows.append(tuple(row))
    return StructureTensor(field, n, tuple(rows))


def opposite_tensor(field, n) -> StructureTensor:
    """e_ab * e_cd = [d=a] e_cb: multiplication in the reversed order."""
    z, o = field.zero, field.one
    nn = n * n
    rows = []
    for P in range(nn):
        a, b = divmod(P, n)
        row = []
        for Q in range(nn):
            c, d = divmod(Q, n)
            vec = [z] * nn
            if d == a:
                vec[c * n + b] = o
            row.append(tuple(vec))
        rows.append(tuple(row))
    return StructureTensor(field, n, tuple(rows))


def tensor_from_perturbation(g: PerturbationMap) -> StructureTensor:
    """The tensor of x*y = xy + g(xy - yx), assembled on the unit basis:

        e_ab * e_cd = [b=c] e_ad + g([b=c] e_ad - [d=a] e_cb)
    """
    f, n = g.field, g.n
    nn = n * n
    rows = []
    for P in range(nn):
        a, b = divmod(P, n)
        row = []
        for Q in range(nn):
            c, d = divmod(Q, n)
            vec = [f.zero] * nn
            if b == c:
                vec[a * n + d] = f.add(vec[a * n + d], f.one)
                grow = g.coeff[a * n + d]
                for U in range(nn):
                    if grow[U] != f.zero:
                        vec[U] = f.add(vec[U], grow[U])
            if d == a:
                grow = g.coeff[c * n + b]
                for U in range(nn):
                    if grow[U] != f.zero:
                        vec[U] = f.sub(vec[U], grow[U])
            row.append(tuple(vec))
        rows.append(tuple(row))
    return StructureTensor(f, n, tuple(rows))


def tensor_from_bilinear(field, n, fn) -> StructureTensor:
    """Tabulate a caller-supplied bilinear function on the unit basis.

    The function must be bilinear for the tensor to represent it; this is
    how literal entrywise product formulas get encoded for comparison.
    """
    nn = n * n
    rows = []
    for P in range(nn):
        a, b = divmod(P, n)
        ea = Matrix.unit(field, n, a, b)
        row = []
        for Q in range(nn):
            c, d = divmod(Q, n)
            row.append(fn(ea, Matrix.unit(field, n, c, d)).flat())
        rows.append(tuple(row))
    return StructureTensor(field, n, tuple(rows))


def star_eval(t: StructureTensor, x: Matrix, y: Matrix) -> Matrix:
    """Bilinear extension: sum of x_P y_Q (e_P * e_Q)."""
    if x.field != t.field or y.field != t.field:
        raise MixedFields("operands and tensor must share a field")
    if x.n != t.n or y.n != t.n:
        raise DimensionMismatch("operands and tensor must share a dimension")
    f, n = t.field, t.n
    nn = n * n
    xf, yf = x.flat(), y.flat()
    acc = [f.zero] * nn
    for P in range(nn):
        xp = xf[P]
        if xp == f.zero:
            continue
        row = t.coeff[P]
        for Q in range(nn):
            yq = yf[Q]
            if yq == f.zero:
                continue
            c = f.mul(xp, yq)
            vec = row[Q]
            for U in range(nn):
                if vec[U] != f.zero:
                    acc[U] = f.add(acc[U], f.mul(c, vec[U]))
    return _vec_to_matrix(f, n, acc)


# -- axiom checks -----------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of one axiom check; a failed check always carries a witness
    that can be re-verified independently of the checker."""

    axiom: str  # "A" | "I" | "T" | "O"
    holds: bool
    mode: str  # "exhaustive" or "randomized(seed=...,trials=...)"
    witness: dict | None = None

    def to_json_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "holds": self.holds,
            "mode": self.mode,
            "witness": self.witness,
        }


def _unit_label(n, P):
    a, b = divmod(P, n)
    return {"one_based": [a + 1, b + 1], "zero_based": [a, b]}


def _tensor_ints(t: StructureTensor):
    """int64 array view for the prime-field kernels."""
    import numpy as np

    n = t.n
    nn = n * n
    arr = np.empty((nn, nn, nn), dtype=np.int64)
    for P in range(nn):
        for Q in range(nn):
            vec = t.coeff[P][Q]
            for U in range(nn):
                arr[P, Q, U] = vec[U]
    return arr


def _assoc_violation_python(t: StructureTensor):
    """Lexicographically first failing unit triple, or None (exact path)."""
    f, n = t.field, t.n
    nn = n * n
    zero = f.zero
    # nonzero output lists make family-like sparse tensors cheap to scan
    nz = [[tuple((U, vec[U]) for U in range(nn) if vec[U] != zero)
           for vec in row] for row in t.coeff]
    for P in range(nn):
        for Q in range(nn):
            wPQ = nz[P][Q]
            for R in range(nn):
                left = [zero] * nn
                for S, vs in nz[Q][R]:
                    vec = t.coeff[P][S]
                    for U in range(nn):
                        if vec[U] != zero:
                            left[U] = f.add(left[U], f.mul(vs, vec[U]))
                right = [zero] * nn
                for S, ws in wPQ:
                    vec = t.coeff[S][R]
                    for U in range(nn):
                        if vec[U] != zero:
                            right[U] = f.add(right[U], f.mul(ws, vec[U]))
                if left != right:
                    return P, Q, R, left, right
    return None


def check_associativity(t: StructureTensor) -> AxiomReport:
    """Exhaustive scan of all n^6 unit triples; sufficient by bilinearity.

    Prime fields go through the integer kernels; the rationals use the
    exact sparse scan.  Both deliver the lexicographically first failure.
    """
    f, n = t.field, t.n
    if f.kind == "prime":
        from ._accel import assoc_first_violation

        flat = assoc_first_violation(_tensor_ints(t), f.p)
        if flat < 0:
            return AxiomReport("A", True, "exhaustive")
        nn = n * n
        P, rem = divmod(int(flat), nn * nn)
        Q, R = divmod(rem, nn)
        inner = _vec_to_matrix(f, n, t.coeff[Q][R])   # e_Q * e_R
        outer_ = _vec_to_matrix(f, n, t.coeff[P][Q])  # e_P * e_Q
        left = star_eval(t, Matrix.unit(f, n, *divmod(P, n)), inner)
        right = star_eval(t, outer_, Matrix.unit(f, n, *divmod(R, n)))
        witness = {
            "triple": [_unit_label(n, P), _unit_label(n, Q), _unit_label(n, R)],
            "left": left.to_json_dict()["entries"],
            "right": right.to_json_dict()["entries"],
        }
        return AxiomReport("A", False, "exhaustive", witness)

    hit = _assoc_violation_python(t)
    if hit is None:
        return AxiomReport("A", True, "exhaustive")
    P, Q, R, left, right = hit
    witness = {
        "triple": [_unit_label(n, P), _unit_label(n, Q), _unit_label(n, R)],
        "left": _vec_to_matrix(f, n, left).to_json_dict()["entries"],
        "right": _vec_to_matrix(f, n, right).to_json_dict()["entries"],
    }
    return AxiomReport("A", False, "exhaustive", witness)


def check_identity(t: StructureTensor) -> AxiomReport:
    """Right identity on the basis: e_ab * 1 = e_ab for every unit."""
    f, n = t.field, t.n
    nn = n * n
    for P in range(nn):
        acc = [f.zero] * nn
        for m in range(n):
            vec = t.coeff[P][m * n + m]
            for U in range(nn):
                if vec[U] != f.zero:
                    acc[U] = f.add(acc[U], vec[U])
        want = [f.zero] * nn
        want[P] = f.one
        if acc != want:
            witness = {
                "unit": _unit_label(n, P),
                "result": _vec_to_matrix(f, n, acc).to_json_dict()["entries"],
            }
            return AxiomReport("I", False, "exhaustive", witness)
    return AxiomReport("I", True, "exhaustive")


def check_left_identity(t: StructureTensor) -> AxiomReport:
    """Optional probe: 1 * e_ab = e_ab.  Not part of the axiom suite (the
    identity axiom is one-sided, on the right); useful as a diagnostic."""
    f, n = t.field, t.n
    nn = n * n
    for Q in range(nn):
        acc = [f.zero] * nn
        for m in range(n):
            vec = t.coeff[m * n + m][Q]
            for U in range(nn):
                if vec[U] != f.zero:
                    acc[U] = f.add(acc[U], vec[U])
        want = [f.zero] * nn
        want[Q] = f.one
        if acc != want:
            witness = {
                "unit": _unit_label(n, Q),
                "result": _vec_to_matrix(f, n, acc).to_json_dict()["entries"],
            }
            return AxiomReport("left-I", False, "exhaustive", witness)
    return AxiomReport("left-I", True, "exhaustive")


def check_trace(t: StructureTensor) -> AxiomReport:
    """tr(e_ab * e_cd) = tr(e_ab e_cd) = [b=c][a=d] on all n^4 unit pairs;
    sufficient because both sides are bilinear."""
    f, n = t.field, t.n
    nn = n * n
    for P in range(nn):
        a, b = divmod(P, n)
        for Q in range(nn):
            c, d = divmod(Q, n)
            vec = t.coeff[P][Q]
            tr = f.zero
            for m in range(n):
                tr = f.add(tr, vec[m * n + m])
            want = f.one if (b == c and a == d) else f.zero
            if tr != want:
                witness = {
                    "pair": [_unit_label(n, P), _unit_label(n, Q)],
                    "trace_star": f.format(tr),
                    "trace_ordinary": f.format(want),
                }
                return AxiomReport("T", False, "exhaustive", witness)
    return AxiomReport("T", True, "exhaustive")


def check_orthogonality(t: StructureTensor, mode: str = "auto",
                        trials: int = 100, seed: int = 0) -> AxiomReport:
    """x * y = 0 for rank-one idempotent pairs with xy = yx = 0.

    ``exhaustive`` runs every ordered orthogonal pair (finite fields
    within the census guard); ``randomized`` samples ``trials`` seeded
    pairs and is the only option over the rationals.  ``auto`` picks
    exhaustive when legal, randomized otherwise.
    """
    f, n = t.field, t.n
    if mode == "auto":
        if f.kind == "prime" and f.p ** (n * n) <= ENUM_GUARD:
            mode = "exhaustive"
        else:
            mode = "randomized"

    if mode == "exhaustive":
        if f.kind != "prime":
            raise InfiniteField("exhaustive orthogonality needs a finite field")
        pairs = orthogonal_idempotent_pairs(f, n)
        for pair in pairs:
            out = star_eval(t, pair.x, pair.y)
            if not out.is_zero():
                witness = {
                    "x": pair.x.to_json_dict()["entries"],
                    "y": pair.y.to_json_dict()["entries"],
                    "star": out.to_json_dict()["entries"],
                }
                return AxiomReport("O", False, "exhaustive", witness)
        return AxiomReport("O", True, "exhaustive")

    if mode != "randomized":
        raise ValueError(f"unknown orthogonality mode {mode!r}")
    label = f"randomized(seed={seed},trials={trials})"
    for k in range(trials):
        pair = sample_orthogonal_idempotent_pair(f, n, seed + k)
        out = star_eval(t, pair.x, pair.y)
        if not out.is_zero():
            witness = {
                "x": pair.x.to_json_dict()["entries"],
                "y": pair.y.to_json_dict()["entries"],
                "star": out.to_json_dict()["entries"],
                "trial": k,
            }
            return AxiomReport("O", False, label, witness)
    return AxiomReport("O", True, label)


def classify_product(t: StructureTensor) -> str:
    """Exact tensor comparison against the two reference products:
    returns "ordinary", "opposite", or "neither"."""
    if t == ordinary_tensor(t.field, t.n):
        return "ordinary"
    if t == opposite_tensor(t.field, t.n):
        return "opposite"
    return "neither"
