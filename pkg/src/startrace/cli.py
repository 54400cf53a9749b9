"""Command-line interface.

Three subcommands:

* ``check``    — load a product (structure-tensor JSON) or a perturbation
  map (coefficient-table JSON), run the four runtime axiom checks, print
  verdicts with witnesses;
* ``classify`` — run the symbolic or brute-force classifier for a field
  and dimension and report the admissible products;
* ``verify-paper`` — run the bundled end-to-end verification ledger for
  the classification theorem this package implements, including the
  characteristic-two boundary census.

Exit codes: 0 success / all pass; 1 axiom or suite failure; 2 malformed
input or configuration; 3 classification found anomalies (a mathematical
surprise, not a tool error).

Reports are pure functions of the flags (seeds included), so two runs
with the same arguments emit byte-identical JSON.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys

from . import classify as classify_mod
from .errors import ExactAlgebraError, InvalidField
from .fields import RATIONALS, PrimeField, field_from_string
from .matrices import Matrix
from .perturbation import (
    PerturbationMap,
    extract_scale_shift,
    identity_map,
    map_from_images,
    preserves_traceless,
    random_map,
    residual_scan,
    scale_trace_map,
    vanishing_suite,
)
from .products import (
    StructureTensor,
    check_associativity,
    check_identity,
    check_orthogonality,
    check_trace,
    tensor_from_perturbation,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BAD_INPUT = 2
EXIT_ANOMALY = 3


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fmt_index_pair(d: dict) -> str:
    ob, zb = d["one_based"], d["zero_based"]
    return f"e_{ob[0]}{ob[1]} (0-based e[{zb[0]}][{zb[1]}])"


def _print_axiom_line(rep, out):
    verdict = "PASS" if rep["holds"] else "FAIL"
    line = f"  [{verdict}] axiom {rep['axiom']} ({rep['mode']})"
    print(line, file=out)
    if not rep["holds"] and rep.get("witness"):
        w = rep["witness"]
        if "triple" in w:
            labels = ", ".join(_fmt_index_pair(u) for u in w["triple"])
            print(f"         witness triple: {labels}", file=out)
            print(f"         left  = {w['left']}", file=out)
            print(f"         right = {w['right']}", file=out)
        elif "pair" in w:
            labels = ", ".join(_fmt_index_pair(u) for u in w["pair"])
            print(f"         witness pair: {labels}", file=out)
        elif "unit" in w:
            print(f"         witness unit: {_fmt_index_pair(w['unit'])}", file=out)
        else:
            print(f"         witness: {w}", file=out)


# -- check --------------------------------------------------------------------


def _load_check_input(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    data = json.loads(text)
    if not isinstance(data, dict):
        raise InvalidField("input must be a JSON object")
    try:
        if "g" in data:
            g = PerturbationMap.from_json_dict(data)
            return tensor_from_perturbation(g), "perturbation-map"
        if "entries" in data:
            return StructureTensor.from_json_dict(data), "structure-tensor"
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InvalidField(f"input does not match its declared schema: {exc}") from exc
    raise InvalidField("input matches neither the tensor nor the map schema")


def cmd_check(args) -> int:
    try:
        tensor, schema = _load_check_input(args.input)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return EXIT_BAD_INPUT
    except ExactAlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    if args.field is not None:
        try:
            want = field_from_string(args.field)
        except ExactAlgebraError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT
        if want != tensor.field:
            print(f"error: file field {tensor.field} does not match --field {args.field}",
                  file=sys.stderr)
            return EXIT_BAD_INPUT
    if args.n is not None and args.n != tensor.n:
        print(f"error: file dimension {tensor.n} does not match --n {args.n}", file=sys.stderr)
        return EXIT_BAD_INPUT

    reports = [
        check_associativity(tensor).to_json_dict(),
        check_identity(tensor).to_json_dict(),
        check_trace(tensor).to_json_dict(),
        check_orthogonality(tensor, mode=args.ortho, trials=args.trials,
                            seed=args.seed).to_json_dict(),
    ]
    all_pass = all(r["holds"] for r in reports)
    payload = {
        "command": "check",
        "input": {"path": args.input, "schema": schema,
                  "field": str(tensor.field), "n": tensor.n},
        "config": {"ortho": args.ortho, "trials": args.trials, "seed": args.seed},
        "axioms": reports,
        "all_pass": all_pass,
    }
    if args.format == "json":
        sys.stdout.write(_dump_json(payload))
    else:
        print(f"check {args.input} [{schema}, field={tensor.field}, n={tensor.n}]")
        for r in reports:
            _print_axiom_line(r, sys.stdout)
        print("result:", "all axioms hold" if all_pass else "axiom failure")
    return EXIT_OK if all_pass else EXIT_FAIL


# -- classify -------------------------------------------------------------------


def cmd_classify(args) -> int:
    try:
        fld = field_from_string(args.field)
    except ExactAlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    try:
        if args.method == "symbolic":
            report = classify_mod.classify_symbolic(fld, args.n, seed=args.seed)
        else:
            report = classify_mod.classify_brute(fld, args.n, scope=args.scope,
                                                 budget=args.budget, seed=args.seed)
    except ExactAlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    payload = {"command": "classify", **report.to_json_dict()}
    if args.format == "json":
        sys.stdout.write(_dump_json(payload))
    else:
        print(f"classify field={report.field_text} n={report.n} method={report.method}")
        if report.solution_dim is not None:
            print(f"  constraint solution space dimension: {report.solution_dim}")
        print(f"  admissible: {report.admissible.get('count', report.admissible)}")
        for prod in report.products:
            print(f"  product: {prod['kind']}")
        if report.anomalies:
            print(f"  ANOMALIES: {report.anomalies}")
        else:
            print("  anomalies: none")
    return EXIT_ANOMALY if report.anomalies else EXIT_OK


# -- verify-paper ----------------------------------------------------------------


def _item(items, iid, title, ok, details):
    items.append({
        "id": iid,
        "title": title,
        "status": "pass" if ok else "fail",
        "details": details,
    })
    return ok


def _suite_trace_equivalence(seed: int) -> tuple[bool, dict]:
    """Trace axiom on the induced tensor agrees with trace-zero
    preservation of the map itself, on family members and violators."""
    fld = PrimeField(5)
    rng = random.Random(seed)
    samples = []
    for s in (fld.zero, fld.neg(fld.one)):
        for _ in range(3):
            samples.append(scale_trace_map(fld, 2, s, Matrix.random(fld, 2, rng)))
    for _ in range(20):
        samples.append(random_map(fld, 2, rng))
    bump = [Matrix.zero(fld, 2)] * 4
    bump[1] = Matrix.unit(fld, 2, 0, 0)  # sends the traceless e01 to e00
    samples.append(map_from_images(fld, 2, bump))

    agreements = 0
    violators = 0
    for g in samples:
        a = check_trace(tensor_from_perturbation(g)).holds
        b = preserves_traceless(g).holds
        if a == b:
            agreements += 1
        if not b:
            violators += 1
    ok = agreements == len(samples) and violators > 0
    return ok, {"samples": len(samples), "agreements": agreements, "violators": violators}


def _suite_vanishing(n: int, seed: int) -> tuple[bool, dict]:
    """Every vanishing pattern holds on the admissible family."""
    fld = PrimeField(7)
    rng = random.Random(seed)
    statuses = {}
    ok = True
    for s in (fld.zero, fld.neg(fld.one)):
        g = scale_trace_map(fld, n, s, Matrix.random(fld, n, rng))
        for rep in vanishing_suite(g):
            statuses[rep.pid] = rep.status
            if rep.status == "fail":
                ok = False
    return ok, {"field": "gf:7", "n": n, "patterns": statuses}


def _suite_residual(n: int, seed: int) -> tuple[bool, dict]:
    """Associativity residual vanishes on all unit 6-tuples for the family
    and is violated for the scale-2 map."""
    fld = RATIONALS
    rng = random.Random(seed)
    family_ok = True
    for s in (fld.zero, fld.neg(fld.one)):
        g = scale_trace_map(fld, n, s, Matrix.random(fld, n, rng))
        if residual_scan(g) is not None:
            family_ok = False
    bad = scale_trace_map(fld, n, fld.from_int(2), Matrix.zero(fld, n))
    hit = residual_scan(bad)
    ok = family_ok and hit is not None
    return ok, {
        "family_all_zero": family_ok,
        "scale2_violation_tuple": list(hit) if hit else None,
    }


def _suite_roundtrip(n: int, seed: int) -> tuple[bool, dict]:
    """Scale/shift extraction inverts the family constructor exactly."""
    rng = random.Random(seed)
    good = 0
    total = 0
    for fld in (RATIONALS, PrimeField(7)):
        for _ in range(10):
            s = fld.random_scalar(rng)
            z = Matrix.random(fld, n, rng)
            fit = extract_scale_shift(scale_trace_map(fld, n, s, z))
            total += 1
            if fit.exact_fit and fit.scale == s and fit.shift == z:
                good += 1
    g = identity_map(RATIONALS, n)
    images = [g.image_of_unit(i, j) for i in range(n) for j in range(n)]
    images[1] = images[1] + Matrix.unit(RATIONALS, n, 1, 0)  # breaks the fit
    broken = extract_scale_shift(map_from_images(RATIONALS, n, images))
    ok = good == total and not broken.exact_fit
    return ok, {"roundtrips": good, "total": total,
                "non_family_detected": not broken.exact_fit}


def _suite_symbolic(fld, n: int, seed: int) -> tuple[bool, dict]:
    rep = classify_mod.classify_symbolic(fld, n, seed=seed)
    kinds = sorted(p["kind"] for p in rep.products)
    ok = (
        kinds == ["opposite", "ordinary"]
        and not rep.anomalies
        and rep.solution_dim == n * n + 1
    )
    return ok, {
        "field": rep.field_text,
        "n": n,
        "solution_dim": rep.solution_dim,
        "products": kinds,
        "anomalies": len(rep.anomalies),
    }


def _suite_census(seed: int) -> tuple[bool, dict]:
    fld = PrimeField(2)
    rep = classify_mod.classify_brute(fld, 2, scope="all_g", seed=seed)
    special = classify_mod.encode_candidate(classify_mod.char2_exception_map(fld))
    family = []
    for s in fld.elements():
        for bits in itertools.product(range(2), repeat=4):
            z = Matrix.from_ints(fld, [[bits[0], bits[1]], [bits[2], bits[3]]])
            family.append(classify_mod.encode_candidate(scale_trace_map(fld, 2, s, z)))
    admissible = set(rep.admissible["indices"])
    kinds = sorted(p["kind"] for p in rep.products)
    ok = (
        not rep.anomalies
        and special in admissible
        and all(ix in admissible for ix in family)
        and kinds == ["opposite", "ordinary"]
    )
    return ok, {
        "total_candidates": rep.config["total_candidates"],
        "admissible_count": rep.admissible["count"],
        "family_members_all_admissible": all(ix in admissible for ix in family),
        "exception_map_admissible": special in admissible,
        "scale_trace_outliers": rep.admissible["outliers"],
        "products": kinds,
    }


def _suite_adjudication() -> tuple[bool, dict]:
    finding = classify_mod.adjudicate_char2_product()
    d = finding.to_json_dict()
    ok = (
        finding.admissible
        and finding.induced_equals_display
        and not finding.display_equals_ordinary
    )
    return ok, d


def cmd_verify_paper(args) -> int:
    items = []
    overall = True

    ok, d = _suite_trace_equivalence(args.seed)
    overall &= _item(items, "trace-equivalence",
                     "trace axiom <=> map preserves trace-zero matrices", ok, d)

    ok, d = _suite_vanishing(args.n, args.seed)
    overall &= _item(items, "vanishing-suite",
                     "coefficient vanishing patterns hold on the family", ok, d)

    ok, d = _suite_residual(args.n, args.seed)
    overall &= _item(items, "associativity-residual",
                     "unit-level residual: zero on family, violated at scale 2", ok, d)

    ok, d = _suite_roundtrip(args.n, args.seed)
    overall &= _item(items, "scale-shift-roundtrip",
                     "normal-form extraction inverts the family constructor", ok, d)

    ok, d = _suite_symbolic(RATIONALS, args.n, args.seed)
    overall &= _item(items, "symbolic-rational",
                     "symbolic classification over the rationals", ok, d)

    ok, d = _suite_symbolic(PrimeField(5), 2, args.seed)
    overall &= _item(items, "symbolic-gf5",
                     "symbolic classification over GF(5)", ok, d)

    ok, d = _suite_census(args.seed)
    overall &= _item(items, "census-gf2",
                     "exhaustive GF(2) n=2 census of all candidate maps", ok, d)

    ok, d = _suite_adjudication()
    overall &= _item(items, "char2-adjudication",
                     "characteristic-two exception product, adjudicated exactly", ok, d)

    payload = {
        "command": "verify-paper",
        "config": {"n": args.n, "seed": args.seed},
        "items": items,
        "overall": "pass" if overall else "fail",
    }
    if args.format == "json":
        sys.stdout.write(_dump_json(payload))
    else:
        print(f"verification ledger (n={args.n}, seed={args.seed})")
        for it in items:
            print(f"  [{it['status'].upper()}] {it['id']}: {it['title']}")
        print("overall:", payload["overall"])
    return EXIT_OK if overall else EXIT_FAIL


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="startrace",
        description="Exact checks and classification of trace- and "
                    "orthogonality-compatible matrix products.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the axiom checks on a product or map file")
    p.add_argument("--input", required=True, help="structure-tensor or map JSON file")
    p.add_argument("--field", default=None, help="expected field (validation only)")
    p.add_argument("--n", type=int, default=None, help="expected dimension (validation only)")
    p.add_argument("--ortho", choices=["auto", "exhaustive", "randomized"], default="auto")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="classify all admissible products")
    p.add_argument("--field", required=True, help='"rational" or "gf:<p>"')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=["symbolic", "brute"], required=True)
    p.add_argument("--scope", choices=["all_g", "solution_space_only"], default="all_g")
    p.add_argument("--budget", type=int, default=classify_mod.DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify-paper",
                       help="run the bundled end-to-end verification ledger")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_verify_paper)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
