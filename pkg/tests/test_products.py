"""Structure tensors and the axiom checkers."""

import random

import pytest

from startrace.errors import InfiniteField
from startrace.fields import RATIONALS, PrimeField
from startrace.matrices import Matrix
from startrace.perturbation import scale_trace_map, zero_map
from startrace.products import (
    StructureTensor,
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

Q = RATIONALS
GF2, GF3, GF5 = PrimeField(2), PrimeField(3), PrimeField(5)


def trace_scale_tensor(field, n):
    """x * y = tr(x) y: bilinear but wildly non-admissible."""
    return tensor_from_bilinear(field, n, lambda x, y: y.scale(x.trace()))


# -- construction ---------------------------------------------------------------


def test_reference_tensors_on_units():
    t_ord, t_opp = ordinary_tensor(GF5, 2), opposite_tensor(GF5, 2)
    e01, e10 = Matrix.unit(GF5, 2, 0, 1), Matrix.unit(GF5, 2, 1, 0)
    assert star_eval(t_ord, e01, e10) == Matrix.unit(GF5, 2, 0, 0)
    assert star_eval(t_opp, e01, e10) == Matrix.unit(GF5, 2, 1, 1)


def test_ordinary_tensor_support_count():
    t = ordinary_tensor(GF2, 2)
    ones = sum(1 for P in range(4) for S in range(4) for U in range(4)
               if t.coeff[P][S][U] != 0)
    assert ones == 2 ** 3  # one output unit per (b=c) incidence: n^3


def test_tensor_from_perturbation_limits():
    assert tensor_from_perturbation(zero_map(Q, 2)) == ordinary_tensor(Q, 2)
    neg_id = scale_trace_map(Q, 2, Q.neg(Q.one), Matrix.zero(Q, 2))
    assert tensor_from_perturbation(neg_id) == opposite_tensor(Q, 2)
    # the shift never matters: commutators are traceless
    rng = random.Random(0)
    for _ in range(5):
        z = Matrix.random(Q, 2, rng)
        g = scale_trace_map(Q, 2, Q.neg(Q.one), z)
        assert tensor_from_perturbation(g) == opposite_tensor(Q, 2)


def test_star_eval_matches_multiplication():
    rng = random.Random(1)
    for fld, n in ((Q, 3), (PrimeField(7), 2)):
        t = ordinary_tensor(fld, n)
        for _ in range(100):
            x, y = Matrix.random(fld, n, rng), Matrix.random(fld, n, rng)
            assert star_eval(t, x, y) == x @ y


def test_star_eval_right_identity_and_bilinearity():
    rng = random.Random(2)
    g = scale_trace_map(Q, 2, Q.neg(Q.one), Matrix.random(Q, 2, rng))
    t = tensor_from_perturbation(g)
    one = Matrix.identity(Q, 2)
    for _ in range(10):
        x = Matrix.random(Q, 2, rng)
        y = Matrix.random(Q, 2, rng)
        assert star_eval(t, x, one) == x
        two = Q.from_int(2)
        assert star_eval(t, x.scale(two), y) == star_eval(t, x, y).scale(two)
        assert star_eval(t, x, y.scale(two)) == star_eval(t, x, y).scale(two)


# -- associativity ------------------------------------------------------------------


def test_assoc_ordinary_and_opposite():
    assert check_associativity(ordinary_tensor(Q, 3)).holds
    assert check_associativity(opposite_tensor(GF5, 2)).holds


def test_assoc_scale_two_fails_with_recheckable_witness():
    g = scale_trace_map(Q, 2, Q.from_int(2), Matrix.zero(Q, 2))
    t = tensor_from_perturbation(g)
    rep = check_associativity(t)
    assert not rep.holds
    (pa, pb), (qa, qb), (ra, rb) = (w["zero_based"] for w in rep.witness["triple"])
    x, y, z = (Matrix.unit(Q, 2, pa, pb), Matrix.unit(Q, 2, qa, qb), Matrix.unit(Q, 2, ra, rb))
    lhs = star_eval(t, x, star_eval(t, y, z))
    rhs = star_eval(t, star_eval(t, x, y), z)
    assert lhs != rhs  # witness re-checked through the evaluator


def test_assoc_basis_reduction_consistency():
    # basis-triple verdict == random-triple verdict (100 trials)
    rng = random.Random(3)
    for g, expect in (
        (scale_trace_map(Q, 2, Q.neg(Q.one), Matrix.random(Q, 2, rng)), True),
        (scale_trace_map(Q, 2, Q.from_int(2), Matrix.zero(Q, 2)), False),
    ):
        t = tensor_from_perturbation(g)
        assert check_associativity(t).holds == expect
        found_violation = False
        for _ in range(100):
            x, y, z = (Matrix.random(Q, 2, rng) for _ in range(3))
            if star_eval(t, x, star_eval(t, y, z)) != star_eval(t, star_eval(t, x, y), z):
                found_violation = True
                break
        assert found_violation == (not expect)


# -- identity -------------------------------------------------------------------------


def test_identity_check():
    rng = random.Random(4)
    g = scale_trace_map(GF3, 2, GF3.one, Matrix.random(GF3, 2, rng))
    assert check_identity(tensor_from_perturbation(g)).holds
    assert check_identity(ordinary_tensor(Q, 3)).holds


def test_left_identity_probe():
    from startrace.products import check_left_identity

    # any product of the deformation form has a two-sided identity: the
    # deformation sees 1*y - y*1 = 0
    rng = random.Random(13)
    g = scale_trace_map(Q, 2, Q.neg(Q.one), Matrix.random(Q, 2, rng))
    assert check_left_identity(tensor_from_perturbation(g)).holds
    assert check_left_identity(opposite_tensor(Q, 3)).holds
    rep = check_left_identity(trace_scale_tensor(Q, 2))  # 1*y = tr(1) y = 2y
    assert not rep.holds and rep.witness is not None


def test_identity_check_perturbed_tensor_fails():
    t = ordinary_tensor(Q, 2)
    table = [[list(vec) for vec in row] for row in t.coeff]
    # corrupt e_01 * e_11: part of the right-identity decomposition
    table[1][3][0] = Q.one
    bad = StructureTensor(Q, 2, tuple(tuple(tuple(v) for v in row) for row in table))
    rep = check_identity(bad)
    assert not rep.holds
    assert rep.witness["unit"]["zero_based"] == [0, 1]


# -- trace ----------------------------------------------------------------------------


def test_trace_check():
    assert check_trace(opposite_tensor(Q, 3)).holds  # tr(yx) = tr(xy)
    # shift that kills trace-zero input: g(x) = tr(x) e00 passes
    g = scale_trace_map(Q, 2, Q.zero, Matrix.unit(Q, 2, 0, 0))
    assert check_trace(tensor_from_perturbation(g)).holds
    bad = trace_scale_tensor(Q, 2)
    rep = check_trace(bad)
    assert not rep.holds and rep.witness is not None


# -- orthogonality ----------------------------------------------------------------------


def test_orthogonality_family_exhaustive():
    rng = random.Random(5)
    g = scale_trace_map(GF5, 2, GF5.from_int(3), Matrix.random(GF5, 2, rng))
    rep = check_orthogonality(tensor_from_perturbation(g), mode="exhaustive")
    assert rep.holds and rep.mode == "exhaustive"
    assert check_orthogonality(ordinary_tensor(GF2, 2), mode="auto").mode == "exhaustive"


def test_orthogonality_randomized_over_rationals():
    rep = check_orthogonality(ordinary_tensor(Q, 3), mode="auto", trials=25, seed=1)
    assert rep.holds and rep.mode == "randomized(seed=1,trials=25)"
    with pytest.raises(InfiniteField):
        check_orthogonality(ordinary_tensor(Q, 2), mode="exhaustive")


def test_orthogonality_violation_witness():
    bad = trace_scale_tensor(GF2, 2)
    rep = check_orthogonality(bad, mode="exhaustive")
    assert not rep.holds
    # first scanned violating pair is (e00, e11): e00 * e11 = tr(e00) e11 != 0
    assert rep.witness["x"] == [["1", "0"], ["0", "0"]]
    assert rep.witness["y"] == [["0", "0"], ["0", "1"]]
    assert rep.witness["star"] == [["0", "0"], ["0", "1"]]
    # randomized mode finds it too
    rep2 = check_orthogonality(bad, mode="randomized", trials=50, seed=0)
    assert not rep2.holds


def test_identity_and_orthogonality_structural_for_any_map():
    # x*1 = x and x*y = 0 on orthogonal pairs hold for the product induced
    # by ANY linear map: both of g's arguments vanish there
    from startrace.perturbation import random_map

    rng = random.Random(7)
    for fld in (Q, GF3):
        for _ in range(15):
            t = tensor_from_perturbation(random_map(fld, 2, rng))
            assert check_identity(t).holds
            mode = "exhaustive" if fld.kind == "prime" else "randomized"
            assert check_orthogonality(t, mode=mode, trials=20, seed=3).holds


def test_trace_check_equivalent_to_traceless_preservation():
    # both directions: family members and violators, map-level vs tensor-level
    from startrace.perturbation import preserves_traceless, random_map

    rng = random.Random(8)
    seen_violator = False
    for _ in range(30):
        g = random_map(GF3, 2, rng)
        tensor_side = check_trace(tensor_from_perturbation(g)).holds
        map_side = preserves_traceless(g).holds
        assert tensor_side == map_side
        seen_violator |= not map_side
    assert seen_violator


# -- conclusion + serialization -----------------------------------------------------------


def test_classify_product_sweep():
    # reference tensors are recognized for every supported small case
    for fld in (Q, GF2, GF5):
        for n in (2, 3, 4):
            assert classify_product(ordinary_tensor(fld, n)) == "ordinary"
            assert classify_product(opposite_tensor(fld, n)) == "opposite"


def test_classify_product():
    assert classify_product(tensor_from_perturbation(zero_map(GF3, 2))) == "ordinary"
    neg_id = scale_trace_map(GF3, 2, GF3.neg(GF3.one), Matrix.zero(GF3, 2))
    assert classify_product(tensor_from_perturbation(neg_id)) == "opposite"
    assert classify_product(trace_scale_tensor(GF3, 2)) == "neither"


def test_tensor_json_roundtrip():
    rng = random.Random(6)
    for fld in (Q, GF3):
        g = scale_trace_map(fld, 2, fld.neg(fld.one), Matrix.random(fld, 2, rng))
        t = tensor_from_perturbation(g)
        d = t.to_json_dict()
        assert StructureTensor.from_json_dict(d) == t
    # sparse encoding: zero coefficients are omitted
    d = ordinary_tensor(GF2, 2).to_json_dict()
    assert len(d["entries"]) == 8
    assert all(e["coeff"] == "1" for e in d["entries"])
