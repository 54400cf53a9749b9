"""Classification of admissible products.

Two independent routes to the same answer:

* ``classify_symbolic``: assemble the homogeneous linear constraints that
  every admissible perturbation map must satisfy (the vanishing patterns,
  trace preservation, and the diagonal/off-diagonal link relations), solve
  them exactly, parameterize the solution space in scale-plus-trace form,
  and apply the scalar admissibility condition 2s(s+1) = 0.

* ``classify_brute``: enumerate every candidate map over a finite field
  (or every member of the solved linear space) and keep exactly those
  whose induced product passes the axiom checks.  Exhaustive enumeration
  is its own oracle; over characteristic two it is the designated
  authority, since the symbolic route's completeness is only claimed away
  from characteristic two.

Every admissible map either route emits is re-verified through the full
axiom checkers before the report goes out (self-audit).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from ._accel import census_scan, unit_product_tables
from .errors import InfiniteField, SearchSpaceTooLarge, UnparameterizableSolution
from .fields import Field, PrimeField
from .matrices import Matrix, orthogonal_idempotent_pairs
from .perturbation import (
    VANISHING_PATTERNS,
    PerturbationMap,
    extract_scale_shift,
    pattern_instances,
    scale_admissible,
    scale_trace_map,
    traceless_basis,
)
from .products import (
    check_associativity,
    check_identity,
    check_orthogonality,
    check_trace,
    classify_product,
    opposite_tensor,
    ordinary_tensor,
    star_eval,
    tensor_from_bilinear,
    tensor_from_perturbation,
)

DEFAULT_BUDGET = 2**26


# -- constraint system -------------------------------------------------------


@dataclass(frozen=True)
class Row:
    """One homogeneous constraint: sum of coeff * unknown = 0.

    ``tag`` is "<class> @ <assignment>"; the class names the source
    relation, the assignment pins the concrete indices.
    """

    cols: tuple  # ((column, coefficient), ...)
    tag: str

    @property
    def row_class(self) -> str:
        return self.tag.split(" @ ")[0]


@dataclass(frozen=True)
class ConstraintSystem:
    field: Field
    n: int
    nunknowns: int
    rows: tuple

    def row_classes(self) -> list[str]:
        seen = []
        for r in self.rows:
            c = r.row_class
            if c not in seen:
                seen.append(c)
        return seen

    def drop_class(self, cls: str) -> "ConstraintSystem":
        return ConstraintSystem(self.field, self.n, self.nunknowns,
                                tuple(r for r in self.rows if r.row_class != cls))


def _col(n, i, j, k, l):
    """Column of the standard-orientation unknown: coefficient of e_kl in
    g(e_ij)."""
    return (i * n + j) * n * n + (k * n + l)


def _trace_entry_col(n, i, j, k, l):
    """Column holding the trace-form entry tr(g(e_ij) e_kl), i.e. the
    standard coefficient of e_lk in g(e_ij)."""
    return _col(n, i, j, l, k)


def assemble_constraints(field, n) -> ConstraintSystem:
    """Every linear consequence used by the symbolic route, one row per
    concrete index assignment, each tagged with its source."""
    one = field.one
    neg = field.neg(one)
    rows = []

    # vanishing patterns on trace-form entries
    for pat in VANISHING_PATTERNS:
        if pat.arity > n:
            continue
        for env, r, s in pattern_instances(pat, n):
            assign = ",".join(f"{k}={v}" for k, v in sorted(env.items()))
            tag = f"vanish:{pat.pid} @ {assign}"
            if pat.kind == "u":
                rows.append(Row(((_trace_entry_col(n, env["i"], env["j"], r, s), one),), tag))
            else:
                rows.append(Row((
                    (_trace_entry_col(n, env["i"], env["i"], r, s), one),
                    (_trace_entry_col(n, env["j"], env["j"], r, s), neg),
                ), tag))

    # trace preservation on the trace-zero basis
    for label, b in traceless_basis(field, n):
        cols = {}
        for i in range(n):
            for j in range(n):
                c = b.rows[i][j]
                if c == field.zero:
                    continue
                for m in range(n):
                    col = _col(n, i, j, m, m)
                    cols[col] = field.add(cols.get(col, field.zero), c)
        cols = {c: v for c, v in cols.items() if v != field.zero}
        rows.append(Row(tuple(sorted(cols.items())), f"trace @ {label}"))

    # link relations tying the diagonal differences to the off-diagonal scale
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            assign = f"i={i},j={j}"
            rows.append(Row((
                (_trace_entry_col(n, i, i, i, i), one),
                (_trace_entry_col(n, j, j, i, i), neg),
                (_trace_entry_col(n, i, j, j, i), neg),
            ), f"link:g(ii-jj):ii=g(ij):ji @ {assign}"))
            rows.append(Row((
                (_trace_entry_col(n, i, i, j, j), one),
                (_trace_entry_col(n, j, j, j, j), neg),
                (_trace_entry_col(n, i, j, j, i), one),
            ), f"link:g(ii-jj):jj=-g(ij):ji @ {assign}"))
            rows.append(Row((
                (_trace_entry_col(n, i, j, j, i), one),
                (_trace_entry_col(n, j, i, i, j), neg),
            ), f"link:g(ij):ji=g(ji):ij @ {assign}"))

    return ConstraintSystem(field, n, n**4, tuple(rows))


def solve_linear_space(cs: ConstraintSystem):
    """Exact nullspace of the constraint system.

    Returns (basis, dim) where basis is a list of PerturbationMap and
    every member satisfies every row exactly.
    """
    f, n = cs.field, cs.n
    nn = n * n
    dense = []
    for row in cs.rows:
        r = [f.zero] * cs.nunknowns
        for c, v in row.cols:
            r[c] = f.add(r[c], v)
        dense.append(r)
    vecs = linalg.nullspace(dense, cs.nunknowns, f) if dense else [
        tuple(f.one if t == s else f.zero for t in range(cs.nunknowns))
        for s in range(cs.nunknowns)
    ]
    basis = [
        PerturbationMap(f, n, tuple(tuple(v[s * nn + t] for t in range(nn)) for s in range(nn)))
        for v in vecs
    ]
    return basis, len(basis)


def row_residual(cs: ConstraintSystem, g: PerturbationMap, row: Row):
    """Value of one constraint row at a concrete map (0 means satisfied)."""
    f, n = cs.field, cs.n
    nn = n * n
    acc = f.zero
    for c, v in row.cols:
        s, t = divmod(c, nn)
        acc = f.add(acc, f.mul(v, g.coeff[s][t]))
    return acc


# -- reports -----------------------------------------------------------------


@dataclass
class ClassificationReport:
    field_text: str
    n: int
    method: str
    config: dict
    solution_dim: int | None
    admissible: dict
    products: list = dc_field(default_factory=list)
    anomalies: list = dc_field(default_factory=list)
    flags: dict = dc_field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "field": self.field_text,
            "n": self.n,
            "method": self.method,
            "config": self.config,
            "solution_dim": self.solution_dim,
            "admissible": self.admissible,
            "products": self.products,
            "anomalies": self.anomalies,
            "flags": self.flags,
        }


def _audit_axioms(g: PerturbationMap, ortho_trials: int, seed: int) -> dict:
    """All five axioms on the induced tensor; bilinearity is structural."""
    t = tensor_from_perturbation(g)
    rep_a = check_associativity(t)
    rep_i = check_identity(t)
    rep_t = check_trace(t)
    rep_o = check_orthogonality(t, mode="auto", trials=ortho_trials, seed=seed)
    return {
        "B": {"axiom": "B", "holds": True, "mode": "structural"},
        "A": rep_a.to_json_dict(),
        "I": rep_i.to_json_dict(),
        "T": rep_t.to_json_dict(),
        "O": rep_o.to_json_dict(),
    }


def _admissible_scales(field):
    """Roots of 2s(s+1) = 0: {0, -1} away from characteristic two, every
    scalar in characteristic two."""
    if field.characteristic == 2:
        return [s for s in field.elements() if scale_admissible(field, s)]
    out = [field.zero, field.neg(field.one)]
    return out if out[0] != out[1] else out[:1]


def classify_symbolic(field, n, seed: int = 0, audit_shifts: int = 2,
                      system: ConstraintSystem | None = None) -> ClassificationReport:
    """Constraint solve, scale/shift parameterization, scalar condition,
    self-audit, product census.  Away from characteristic two the result
    is complete; in characteristic two completeness is deferred to the
    brute-force route and flagged.

    ``system`` overrides the assembled constraints (for experiments such
    as dropping a row class); solutions that escape the scale-plus-trace
    family then raise UnparameterizableSolution rather than being dropped.
    """
    cs = system if system is not None else assemble_constraints(field, n)
    basis, dim = solve_linear_space(cs)

    basis_params = []
    for k, g in enumerate(basis):
        fit = extract_scale_shift(g)
        if not fit.exact_fit:
            raise UnparameterizableSolution(
                f"nullspace member {k} leaves the scale-plus-trace family "
                f"(first bad unit {fit.witness})"
            )
        basis_params.append({
            "scale": field.format(fit.scale),
            "shift": fit.shift.to_json_dict()["entries"],
        })

    scales = _admissible_scales(field)
    char2 = field.characteristic == 2

    rng = random.Random(seed)
    anomalies = []
    products = []
    seen = []
    for s in scales:
        g0 = scale_trace_map(field, n, s, Matrix.zero(field, n))
        t = tensor_from_perturbation(g0)
        if t not in seen:
            seen.append(t)
            products.append({
                "kind": classify_product(t),
                "scale": field.format(s),
                "tensor": t.to_json_dict(),
            })
        # audit a few shifted family members per scale
        for _ in range(audit_shifts):
            z = Matrix.random(field, n, rng)
            g = scale_trace_map(field, n, s, z)
            audit = _audit_axioms(g, ortho_trials=50, seed=seed)
            bad = [a for a, r in audit.items() if not r["holds"]]
            if bad:
                anomalies.append({
                    "kind": "audit-failure",
                    "scale": field.format(s),
                    "shift": z.to_json_dict(),
                    "failed": bad,
                })

    for entry in products:
        if entry["kind"] == "neither":
            anomalies.append({"kind": "unexpected-product", "product": entry})

    report = ClassificationReport(
        field_text=str(field),
        n=n,
        method="symbolic",
        config={"seed": seed, "audit_shifts": audit_shifts},
        solution_dim=dim,
        admissible={
            "form": "g(x) = s*x + tr(x)*z",
            "scales": [field.format(s) for s in scales],
            "shift": "free (never reaches a trace-zero argument)",
            "solution_dim": dim,
            "solution_basis": basis_params,
        },
        products=products,
        anomalies=anomalies,
        flags={
            "completeness": "deferred-to-brute" if char2 else "complete",
            "expected_dim": n * n + 1,
        },
    )
    return report


# -- brute force --------------------------------------------------------------


def decode_candidate(field, n, index: int, basis=None) -> PerturbationMap:
    """Candidate index -> map: base-p digits (least significant first)
    combine the basis tables; without a basis, digit k lands directly in
    coefficient slot (k // n^2, k mod n^2)."""
    p = field.p
    nn = n * n
    table = [[field.zero] * nn for _ in range(nn)]
    m = index
    if basis is None:
        for k in range(nn * nn):
            d = m % p
            m //= p
            if d:
                s, t = divmod(k, nn)
                table[s][t] = field.add(table[s][t], field.from_int(d))
    else:
        for k in range(len(basis)):
            d = m % p
            m //= p
            if d:
                dk = field.from_int(d)
                bk = basis[k].coeff
                for s in range(nn):
                    for t in range(nn):
                        if bk[s][t] != field.zero:
                            table[s][t] = field.add(table[s][t], field.mul(dk, bk[s][t]))
    return PerturbationMap(field, n, tuple(tuple(r) for r in table))


def encode_candidate(g: PerturbationMap) -> int:
    """Inverse of decode_candidate for the direct (no-basis) encoding."""
    p = g.field.p
    nn = g.n * g.n
    acc = 0
    for k in reversed(range(nn * nn)):
        s, t = divmod(k, nn)
        acc = acc * p + int(g.coeff[s][t])
    return acc


def _census_tables(field, n, basis=None):
    """numpy inputs for the census kernels."""
    p = field.p
    nn = n * n
    if basis is None:
        K = nn * nn
        barr = np.zeros((K, nn, nn), dtype=np.int64)
        for k in range(K):
            s, t = divmod(k, nn)
            barr[k, s, t] = 1
    else:
        barr = np.array([[[int(b.coeff[s][t]) for t in range(nn)] for s in range(nn)]
                         for b in basis], dtype=np.int64)

    tv = []
    for _, b in traceless_basis(field, n):
        tv.append([int(x) for x in b.flat()])
    tvecs = np.array(tv, dtype=np.int64)

    pairs = orthogonal_idempotent_pairs(field, n)
    ox = np.array([[int(x) for x in pr.x.flat()] for pr in pairs], dtype=np.int64)
    oy = np.array([[int(x) for x in pr.y.flat()] for pr in pairs], dtype=np.int64)

    prod, comm = unit_product_tables(n, p)
    return barr, tvecs, ox, oy, prod, comm


def classify_brute(field, n, scope: str = "all_g", budget: int = DEFAULT_BUDGET,
                   seed: int = 0) -> ClassificationReport:
    """Exhaustive census of candidate maps over a finite field.

    ``all_g`` ranges over every linear map (p^(n^4) candidates);
    ``solution_space_only`` ranges over the solved constraint space
    (p^dim candidates).  Census order is ascending candidate index, so
    reports are deterministic.
    """
    if field.kind != "prime":
        raise InfiniteField("brute classification needs a finite field")
    if scope not in ("all_g", "solution_space_only"):
        raise ValueError(f"unknown scope {scope!r}")
    p = field.p

    sol_dim = None
    basis = None
    if scope == "solution_space_only":
        cs = assemble_constraints(field, n)
        basis, sol_dim = solve_linear_space(cs)
        total = p ** sol_dim
    else:
        total = p ** (n**4)
    if total > budget:
        raise SearchSpaceTooLarge(f"{total} candidates exceed budget {budget}")

    barr, tvecs, ox, oy, prod, comm = _census_tables(field, n, basis)
    hits = census_scan(total, p, n, barr, tvecs, ox, oy, prod, comm)
    hit_list = [int(h) for h in hits]

    admissible_maps = [(ix, decode_candidate(field, n, ix, basis)) for ix in hit_list]

    # self-audit: every admissible candidate back through the full checkers
    anomalies = []
    products = []
    seen = []
    fits = 0
    outliers = []
    for ix, g in admissible_maps:
        audit = _audit_axioms(g, ortho_trials=50, seed=seed)
        bad = [a for a, r in audit.items() if not r["holds"]]
        if bad:
            anomalies.append({"kind": "audit-failure", "candidate": ix, "failed": bad})
        fit = extract_scale_shift(g)
        if fit.exact_fit:
            fits += 1
        else:
            outliers.append(ix)
        t = tensor_from_perturbation(g)
        if t not in seen:
            seen.append(t)
            products.append({
                "kind": classify_product(t),
                "sample_candidate": ix,
                "tensor": t.to_json_dict(),
            })

    for entry in products:
        if entry["kind"] == "neither":
            anomalies.append({"kind": "unexpected-product", "product": entry})

    return ClassificationReport(
        field_text=str(field),
        n=n,
        method="brute",
        config={
            "seed": seed,
            "scope": scope,
            "budget": budget,
            "total_candidates": total,
            "encoding": "base-p digits, least significant first; "
                        + ("digit k -> coefficient slot (k div n^2, k mod n^2)"
                           if basis is None else "digit k scales solution-basis member k"),
        },
        solution_dim=sol_dim,
        admissible={
            "count": len(hit_list),
            "indices": hit_list,
            "scale_trace_fits": fits,
            "outliers": outliers,
        },
        products=products,
        anomalies=anomalies,
        flags={"authority": "exhaustive census"},
    )


# -- the characteristic-two boundary -----------------------------------------


def char2_exception_map(field, n=2) -> PerturbationMap:
    """The known nontrivial admissible map over GF(2), n=2:
    g(e00) = e00 + e11, g(e01) = e01, g(e10) = e10, g(e11) = 0.
    Equivalently g(x) = x + tr(x) e11 in characteristic two."""
    e = lambda i, j: Matrix.unit(field, n, i, j)
    return PerturbationMap(
        field, n,
        tuple(m.flat() for m in (
            e(0, 0) + e(1, 1),
            e(0, 1),
            e(1, 0),
            Matrix.zero(field, n),
        )),
    )


def _display_product(field):
    """The literal 2x2 entrywise formula the characteristic-two exception
    is displayed as:

        [[x00*y00 + x10*y01, x01*y00 + x11*y01],
         [x00*y10 + x10*y11, x01*y10 + x11*y11]]
    """

    def fn(x: Matrix, y: Matrix) -> Matrix:
        f = field
        a, b, c, d = x.rows[0][0], x.rows[0][1], x.rows[1][0], x.rows[1][1]
        e_, h, g_, i = y.rows[0][0], y.rows[0][1], y.rows[1][0], y.rows[1][1]
        m = f.mul
        return Matrix.from_rows(f, [
            [f.add(m(a, e_), m(c, h)), f.add(m(b, e_), m(d, h))],
            [f.add(m(a, g_), m(c, i)), f.add(m(b, g_), m(d, i))],
        ])

    return tensor_from_bilinear(field, 2, fn)


@dataclass
class Char2Finding:
    """Ground-truth comparison of the characteristic-two exception product
    against ordinary and opposite multiplication.  Computed, not assumed."""

    admissible: bool
    fit_scale: str
    fit_shift: list
    induced_equals_display: bool
    display_equals_ordinary: bool
    display_equals_opposite: bool
    induced_equals_ordinary: bool
    induced_equals_opposite: bool
    display_kind: str
    probe: dict

    def to_json_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "fit_scale": self.fit_scale,
            "fit_shift": self.fit_shift,
            "induced_equals_display": self.induced_equals_display,
            "display_equals_ordinary": self.display_equals_ordinary,
            "display_equals_opposite": self.display_equals_opposite,
            "induced_equals_ordinary": self.induced_equals_ordinary,
            "induced_equals_opposite": self.induced_equals_opposite,
            "display_kind": self.display_kind,
            "probe": self.probe,
        }


def adjudicate_char2_product() -> Char2Finding:
    """Build the GF(2), n=2 exception, compare its induced tensor and the
    displayed entrywise formula against both reference products, exactly."""
    f = PrimeField(2)
    g = char2_exception_map(f)
    induced = tensor_from_perturbation(g)
    display = _display_product(f)
    ordn = ordinary_tensor(f, 2)
    opp = opposite_tensor(f, 2)

    audit = _audit_axioms(g, ortho_trials=20, seed=0)
    admissible = all(r["holds"] for r in audit.values())
    fit = extract_scale_shift(g)

    # the separating probe: e01 * e10 under each product
    x, y = Matrix.unit(f, 2, 0, 1), Matrix.unit(f, 2, 1, 0)
    probe = {
        "pair": "e[0][1], e[1][0]",
        "display": star_eval(display, x, y).to_json_dict()["entries"],
        "ordinary": (x @ y).to_json_dict()["entries"],
        "opposite": (y @ x).to_json_dict()["entries"],
    }

    return Char2Finding(
        admissible=admissible,
        fit_scale=f.format(fit.scale),
        fit_shift=fit.shift.to_json_dict()["entries"],
        induced_equals_display=induced == display,
        display_equals_ordinary=display == ordn,
        display_equals_opposite=display == opp,
        induced_equals_ordinary=induced == ordn,
        induced_equals_opposite=induced == opp,
        display_kind=classify_product(display),
        probe=probe,
    )
