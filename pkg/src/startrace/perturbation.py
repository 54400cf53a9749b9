"""Linear maps on the n x n matrix space and their structural analysis.

A ``PerturbationMap`` g is the deformation degree of freedom in the
product ansatz

    x * y  =  x y + g(x y - y x)

and everything here analyzes g: the trace-form coefficient reading, the
necessary vanishing patterns on its coefficients, the basis-level
associativity residual, and the extraction of the scale-plus-trace normal
form g(x) = s*x + tr(x)*z.

Coefficient conventions (the one real foot-gun in this module):

* storage is *standard orientation*: ``coeff[i*n+j][k*n+l]`` is the
  coefficient of e_kl in g(e_ij);
* ``trace_entry(g, i, j, k, l)`` returns tr(g(e_ij) e_kl), which equals
  the coefficient of e_lk (transposed!) in g(e_ij), i.e.
  ``coeff[i*n+j][l*n+k]``.  All vanishing patterns and constraint rows
  are phrased in trace-form entries, and this accessor is the single
  audited place where the transposition happens.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DimensionMismatch, IndexOutOfRange, MixedFields
from .fields import Field, field_from_string
from .matrices import Matrix

__all__ = [
    "PerturbationMap",
    "zero_map",
    "identity_map",
    "scale_trace_map",
    "map_from_images",
    "trace_entry",
    "diff_trace_entry",
    "TracelessCheck",
    "preserves_traceless",
    "associativity_residual",
    "residual_scan",
    "VANISHING_PATTERNS",
    "PatternReport",
    "vanishing_suite",
    "ScaleShiftFit",
    "extract_scale_shift",
    "scale_admissible",
]


@dataclass(frozen=True)
class PerturbationMap:
    """Linear endomorphism of the n x n matrix space, stored as its n^2 x n^2
    coefficient table in standard orientation (see module docstring)."""

    field: Field
    n: int
    coeff: tuple  # coeff[i*n+j][k*n+l] = coefficient of e_kl in g(e_ij)

    def apply(self, x: Matrix) -> Matrix:
        """Linear extension of the basis table to an arbitrary matrix."""
        if x.field != self.field:
            raise MixedFields(f"{x.field} vs {self.field}")
        if x.n != self.n:
            raise DimensionMismatch(f"{x.n} vs {self.n}")
        f, n = self.field, self.n
        acc = [f.zero] * (n * n)
        for i in range(n):
            for j in range(n):
                c = x.rows[i][j]
                if c == f.zero:
                    continue
                row = self.coeff[i * n + j]
                for t in range(n * n):
                    if row[t] != f.zero:
                        acc[t] = f.add(acc[t], f.mul(c, row[t]))
        return Matrix(f, n, tuple(tuple(acc[r * n + c] for c in range(n)) for r in range(n)))

    def image_of_unit(self, i: int, j: int) -> Matrix:
        n = self.n
        row = self.coeff[i * n + j]
        return Matrix(self.field, n, tuple(tuple(row[r * n + c] for c in range(n)) for r in range(n)))

    def to_json_dict(self) -> dict:
        f = self.field
        return {
            "field": str(f),
            "n": self.n,
            "orientation": "standard",
            "g": [[f.format(a) for a in row] for row in self.coeff],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "PerturbationMap":
        f = field_from_string(d["field"])
        n = int(d["n"])
        if d.get("orientation", "standard") != "standard":
            raise DimensionMismatch("only standard orientation tables are accepted")
        rows = d["g"]
        if len(rows) != n * n or any(len(r) != n * n for r in rows):
            raise DimensionMismatch("coefficient table must be n^2 x n^2")
        coeff = tuple(tuple(f.parse(s) for s in row) for row in rows)
        return PerturbationMap(f, n, coeff)


def zero_map(field, n) -> PerturbationMap:
    z = field.zero
    return PerturbationMap(field, n, tuple((z,) * (n * n) for _ in range(n * n)))


def identity_map(field, n) -> PerturbationMap:
    z, o = field.zero, field.one
    return PerturbationMap(field, n, tuple(
        tuple(o if s == t else z for t in range(n * n)) for s in range(n * n)
    ))


def scale_trace_map(field, n, scale, shift: Matrix) -> PerturbationMap:
    """The map g(x) = scale * x + tr(x) * shift.

    This is the family every admissible perturbation collapses to; the
    shift matrix is gauge (it only ever meets trace-zero arguments).
    """
    if shift.field != field or shift.n != n:
        raise MixedFields("shift matrix must live in the same matrix space")
    zf = shift.flat()
    rows = []
    for i in range(n):
        for j in range(n):
            row = [field.zero] * (n * n)
            row[i * n + j] = field.add(row[i * n + j], scale)
            if i == j:
                for t in range(n * n):
                    row[t] = field.add(row[t], zf[t])
            rows.append(tuple(row))
    return PerturbationMap(field, n, tuple(rows))


def map_from_images(field, n, images) -> PerturbationMap:
    """Build from the list of g(e_ij) in row-major unit order."""
    if len(images) != n * n:
        raise DimensionMismatch(f"need {n * n} unit images")
    rows = []
    for im in images:
        if im.field != field or im.n != n:
            raise MixedFields("unit image in the wrong matrix space")
        rows.append(im.flat())
    return PerturbationMap(field, n, tuple(rows))


def random_map(field, n, rng) -> PerturbationMap:
    return PerturbationMap(field, n, tuple(
        tuple(field.random_scalar(rng) for _ in range(n * n)) for _ in range(n * n)
    ))


# -- trace-form entries ---------------------------------------------------


def trace_entry(g: PerturbationMap, i, j, k, l):
    """tr(g(e_ij) e_kl): the transposed coefficient reading (see module
    docstring).  Equal to coeff[i*n+j][l*n+k]."""
    n = g.n
    for a in (i, j, k, l):
        if not 0 <= a < n:
            raise IndexOutOfRange(f"index {a} outside [0, {n})")
    return g.coeff[i * n + j][l * n + k]


def diff_trace_entry(g: PerturbationMap, i, j, k, l):
    """tr(g(e_ii - e_jj) e_kl)."""
    return g.field.sub(trace_entry(g, i, i, k, l), trace_entry(g, j, j, k, l))


# -- trace preservation ----------------------------------------------------


@dataclass(frozen=True)
class TracelessCheck:
    holds: bool
    witness_label: str | None = None
    witness: Matrix | None = None


def traceless_basis(field, n) -> list[tuple[str, Matrix]]:
    """Labelled basis of the trace-zero subspace: off-diagonal units and
    the diagonal differences e_ii - e_(n-1)(n-1)."""
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                out.append((f"e[{i}][{j}]", Matrix.unit(field, n, i, j)))
    for i in range(n - 1):
        d = Matrix.unit(field, n, i, i) - Matrix.unit(field, n, n - 1, n - 1)
        out.append((f"e[{i}][{i}]-e[{n - 1}][{n - 1}]", d))
    return out


def preserves_traceless(g: PerturbationMap) -> TracelessCheck:
    """Does g send every trace-zero matrix to a trace-zero matrix?

    Checked on the trace-zero basis, which suffices by linearity.
    """
    f = g.field
    for label, b in traceless_basis(f, g.n):
        if g.apply(b).trace() != f.zero:
            return TracelessCheck(False, label, b)
    return TracelessCheck(True)


# -- basis-level associativity residual ------------------------------------


def _star(g: PerturbationMap, x: Matrix, y: Matrix) -> Matrix:
    """Direct evaluation of x*y = xy + g(xy - yx)."""
    xy = x @ y
    return xy + g.apply(xy - (y @ x))


def associativity_residual(g: PerturbationMap, a, b, c, d, e, f) -> Matrix:
    """Defect of the basis-level associativity identity at the unit triple
    (e_ab, e_cd, e_ef) for the product induced by g.

    Expanding (e_ab * e_cd) * e_ef = e_ab * (e_cd * e_ef) under the ansatz
    and cancelling the common terms leaves

        -[d=e][a=f] g(e_cb) + [d=e] e_ab * g(e_cf) - [c=f] e_ab * g(e_ed)
      = -[a=f][b=c] g(e_ed) + [b=c] g(e_ad) * e_ef - [a=d] g(e_cb) * e_ef

    and this function returns left minus right.  The residual vanishes on
    all n^6 index tuples exactly when the induced product is associative.
    """
    fld, n = g.field, g.n
    for ix in (a, b, c, d, e, f):
        if not 0 <= ix < n:
            raise IndexOutOfRange(f"index {ix} outside [0, {n})")

    def unit(i, j):
        return Matrix.unit(fld, n, i, j)

    lhs = Matrix.zero(fld, n)
    if d == e and a == f:
        lhs = lhs - g.apply(unit(c, b))
    if d == e:
        lhs = lhs + _star(g, unit(a, b), g.apply(unit(c, f)))
    if c == f:
        lhs = lhs - _star(g, unit(a, b), g.apply(unit(e, d)))

    rhs = Matrix.zero(fld, n)
    if a == f and b == c:
        rhs = rhs - g.apply(unit(e, d))
    if b == c:
        rhs = rhs + _star(g, g.apply(unit(a, d)), unit(e, f))
    if a == d:
        rhs = rhs - _star(g, g.apply(unit(c, b)), unit(e, f))

    return lhs - rhs


def residual_scan(g: PerturbationMap):
    """First unit 6-tuple with nonzero associativity residual, or None."""
    n = g.n
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    for e in range(n):
                        for f in range(n):
                            if not associativity_residual(g, a, b, c, d, e, f).is_zero():
                                return (a, b, c, d, e, f)
    return None


# -- necessary vanishing patterns on the coefficient table -----------------

# Each pattern says: a specific trace-form entry vanishes for every
# assignment of pairwise-distinct indices.  "u" patterns read g(e_ij),
# "d" patterns read g(e_ii - e_jj); the output slot (r, s) is given by
# symbols drawn from {i, j, k, l}.  Arity = number of distinct indices
# the pattern consumes; patterns with arity > n are vacuous.
@dataclass(frozen=True)
class VanishingPattern:
    pid: str
    kind: str  # "u" or "d"
    out: tuple  # pair of symbols from ("i", "j", "k", "l")
    arity: int


VANISHING_PATTERNS: tuple[VanishingPattern, ...] = (
    VanishingPattern("g(ij):kl", "u", ("k", "l"), 4),
    VanishingPattern("g(ii-jj):kl", "d", ("k", "l"), 4),
    VanishingPattern("g(ij):jk", "u", ("j", "k"), 3),
    VanishingPattern("g(ij):kj", "u", ("k", "j"), 3),
    VanishingPattern("g(ij):ik", "u", ("i", "k"), 3),
    VanishingPattern("g(ij):ki", "u", ("k", "i"), 3),
    VanishingPattern("g(ij):kk", "u", ("k", "k"), 3),
    VanishingPattern("g(ii-jj):kk", "d", ("k", "k"), 3),
    VanishingPattern("g(ii-jj):ik", "d", ("i", "k"), 3),
    VanishingPattern("g(ii-jj):ki", "d", ("k", "i"), 3),
    VanishingPattern("g(ii-jj):kj", "d", ("k", "j"), 3),
    VanishingPattern("g(ii-jj):jk", "d", ("j", "k"), 3),
    VanishingPattern("g(ij):jj", "u", ("j", "j"), 2),
    VanishingPattern("g(ij):ii", "u", ("i", "i"), 2),
    VanishingPattern("g(ij):ij", "u", ("i", "j"), 2),
    VanishingPattern("g(ii-jj):ij", "d", ("i", "j"), 2),
    VanishingPattern("g(ii-jj):ji", "d", ("j", "i"), 2),
)


def _distinct_tuples(n, arity):
    return itertools.permutations(range(n), arity)


def pattern_instances(pat: VanishingPattern, n):
    """All (env, k_out, l_out) assignments of the pattern at dimension n."""
    syms = ("i", "j", "k", "l")[:pat.arity]
    for combo in _distinct_tuples(n, pat.arity):
        env = dict(zip(syms, combo))
        yield env, env[pat.out[0]], env[pat.out[1]]


def pattern_value(g: PerturbationMap, pat: VanishingPattern, env, r, s):
    if pat.kind == "u":
        return trace_entry(g, env["i"], env["j"], r, s)
    return diff_trace_entry(g, env["i"], env["j"], r, s)


@dataclass(frozen=True)
class PatternReport:
    pid: str
    status: str  # "pass" | "fail" | "vacuous"
    violation: dict | None = None


def vanishing_suite(g: PerturbationMap) -> list[PatternReport]:
    """Evaluate every vanishing pattern on all admissible distinct-index
    tuples; report pass/fail/vacuous per pattern with the first violation."""
    f, n = g.field, g.n
    out = []
    for pat in VANISHING_PATTERNS:
        if pat.arity > n:
            out.append(PatternReport(pat.pid, "vacuous"))
            continue
        bad = None
        for env, r, s in pattern_instances(pat, n):
            if pattern_value(g, pat, env, r, s) != f.zero:
                bad = {"indices": dict(sorted(env.items())), "value": f.format(pattern_value(g, pat, env, r, s))}
                break
        out.append(PatternReport(pat.pid, "fail" if bad else "pass", bad))
    return out


# -- scale-plus-trace normal form ------------------------------------------


@dataclass(frozen=True)
class ScaleShiftFit:
    """Result of fitting g(x) = scale*x + tr(x)*shift on the unit basis."""

    scale: object
    shift: Matrix
    exact_fit: bool
    witness: tuple | None = None  # first unit (i, j) where the fit breaks


def extract_scale_shift(g: PerturbationMap) -> ScaleShiftFit:
    """Read the candidate scale off one canonical entry, solve for the
    shift, then verify the fit on every basis unit.

    The scale is tr(g(e_01) e_10), the coefficient of e_01 in g(e_01);
    shift = g(e_00) - scale*e_00.  No admissibility of the scale is
    assumed here; that is a separate scalar condition.
    """
    f, n = g.field, g.n
    if n < 2:
        raise DimensionMismatch("extraction needs n >= 2")
    scale = trace_entry(g, 0, 1, 1, 0)
    shift = g.image_of_unit(0, 0) - Matrix.unit(f, n, 0, 0).scale(scale)
    witness = None
    for i in range(n):
        for j in range(n):
            want = Matrix.unit(f, n, i, j).scale(scale)
            if i == j:
                want = want + shift
            if g.image_of_unit(i, j) != want:
                witness = (i, j)
                break
        if witness:
            break
    return ScaleShiftFit(scale, shift, witness is None, witness)


def scale_admissible(field, scale) -> bool:
    """The scalar admissibility condition 2*s*(s+1) = 0.

    Away from characteristic two this pins s to {0, -1}; in characteristic
    two it holds for every s.
    """
    two = field.add(field.one, field.one)
    return field.mul(field.mul(two, scale), field.add(scale, field.one)) == field.zero
