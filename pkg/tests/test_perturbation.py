"""Perturbation maps: application, trace-form entries, vanishing patterns,
associativity residual, scale/shift extraction."""

import itertools
import random
from fractions import Fraction

import pytest

from startrace.errors import IndexOutOfRange
from startrace.fields import RATIONALS, PrimeField
from startrace.matrices import Matrix
from startrace.perturbation import (
    VANISHING_PATTERNS,
    PerturbationMap,
    associativity_residual,
    diff_trace_entry,
    extract_scale_shift,
    identity_map,
    map_from_images,
    preserves_traceless,
    random_map,
    residual_scan,
    scale_admissible,
    scale_trace_map,
    trace_entry,
    vanishing_suite,
    zero_map,
)

Q = RATIONALS
GF2, GF5, GF7 = PrimeField(2), PrimeField(5), PrimeField(7)


def char2_exception():
    """g(e00)=e00+e11, g(e01)=e01, g(e10)=e10, g(e11)=0 over GF(2)."""
    e = lambda i, j: Matrix.unit(GF2, 2, i, j)
    return map_from_images(GF2, 2, [e(0, 0) + e(1, 1), e(0, 1), e(1, 0), Matrix.zero(GF2, 2)])


# -- application --------------------------------------------------------------


def test_apply_identity_map():
    rng = random.Random(0)
    g = identity_map(Q, 3)
    x = Matrix.random(Q, 3, rng)
    assert g.apply(x) == x


def test_apply_char2_exception():
    g = char2_exception()
    # acts as [[a, b], [c, d]] -> [[a, b], [c, a]]
    x = Matrix.from_ints(GF2, [[1, 0], [1, 1]])
    assert g.apply(x) == Matrix.from_ints(GF2, [[1, 0], [1, 1]])
    y = Matrix.from_ints(GF2, [[0, 1], [1, 1]])
    assert g.apply(y) == Matrix.from_ints(GF2, [[0, 1], [1, 0]])
    assert g.apply(Matrix.unit(GF2, 2, 1, 1)).is_zero()
    assert g.apply(Matrix.unit(GF2, 2, 0, 0)) == Matrix.identity(GF2, 2)


def test_apply_trace_shift_map():
    z = Matrix.unit(Q, 2, 1, 0)
    g = scale_trace_map(Q, 2, Q.zero, z)  # g(x) = tr(x) * z
    assert g.apply(Matrix.unit(Q, 2, 0, 1)).is_zero()
    assert g.apply(Matrix.unit(Q, 2, 0, 0)) == z


# -- trace-form entries ---------------------------------------------------------


def test_trace_entry_identity_map_is_unit_trace():
    g = identity_map(GF5, 3)
    for i, j, k, l in itertools.product(range(3), repeat=4):
        want = 1 if (j == k and l == i) else 0  # tr(e_ij e_kl)
        assert trace_entry(g, i, j, k, l) == want


def test_trace_entry_equals_trace_of_product():
    # the accessor against the literal trace formula, both orders, n <= 3
    rng = random.Random(5)
    for fld, n in ((Q, 2), (GF5, 3)):
        g = random_map(fld, n, rng)
        for i, j, k, l in itertools.product(range(n), repeat=4):
            e_kl = Matrix.unit(fld, n, k, l)
            want = (g.image_of_unit(i, j) @ e_kl).trace()
            assert trace_entry(g, i, j, k, l) == want
            assert (e_kl @ g.image_of_unit(i, j)).trace() == want


def test_trace_entry_char2_exception():
    g = char2_exception()
    # coefficient of e_11 in g(e00), read through the trace form
    assert trace_entry(g, 0, 0, 1, 1) == 1
    with pytest.raises(IndexOutOfRange):
        trace_entry(g, 0, 0, 2, 0)


# -- trace preservation -----------------------------------------------------------


def test_preserves_traceless():
    rng = random.Random(6)
    for s in (Q.zero, Q.neg(Q.one), Q.from_int(5)):
        g = scale_trace_map(Q, 3, s, Matrix.random(Q, 3, rng))
        assert preserves_traceless(g).holds
    assert preserves_traceless(zero_map(Q, 2)).holds
    bump = [Matrix.zero(Q, 2)] * 4
    bump[1] = Matrix.unit(Q, 2, 0, 0)  # g(e01) = e00 has trace 1
    chk = preserves_traceless(map_from_images(Q, 2, bump))
    assert not chk.holds
    assert chk.witness_label == "e[0][1]"


# -- associativity residual --------------------------------------------------------


def test_residual_zero_map():
    g = zero_map(Q, 2)
    assert residual_scan(g) is None


def test_residual_family_n3_both_scales():
    rng = random.Random(7)
    for s in (Q.zero, Q.neg(Q.one)):
        g = scale_trace_map(Q, 3, s, Matrix.random(Q, 3, rng))
        assert residual_scan(g) is None


def test_residual_scale_two_violates():
    g = scale_trace_map(Q, 2, Q.from_int(2), Matrix.zero(Q, 2))
    hit = residual_scan(g)
    assert hit is not None
    assert not associativity_residual(g, *hit).is_zero()
    with pytest.raises(IndexOutOfRange):
        associativity_residual(g, 0, 0, 0, 0, 0, 5)


# -- vanishing patterns --------------------------------------------------------------


def test_vanishing_catalog_shape():
    assert len(VANISHING_PATTERNS) == 17
    assert sum(1 for p in VANISHING_PATTERNS if p.arity == 4) == 2
    assert sum(1 for p in VANISHING_PATTERNS if p.arity == 3) == 10
    assert sum(1 for p in VANISHING_PATTERNS if p.arity == 2) == 5


def test_vanishing_suite_family_gf7_n4():
    rng = random.Random(8)
    for s in (GF7.zero, GF7.neg(GF7.one)):
        g = scale_trace_map(GF7, 4, s, Matrix.random(GF7, 4, rng))
        for rep in vanishing_suite(g):
            assert rep.status == "pass", rep


def test_vanishing_suite_identity_map_passes():
    # necessary conditions, not sufficient: the identity map clears all
    # distinct-index patterns although its induced product is ordinary
    for rep in vanishing_suite(identity_map(Q, 4)):
        assert rep.status == "pass"


def test_vanishing_suite_targeted_violation():
    g0 = zero_map(Q, 4)
    coeff = [list(r) for r in g0.coeff]
    coeff[0 * 4 + 1][2 * 4 + 3] = Q.one  # coefficient of e_23 in g(e_01)
    g = PerturbationMap(Q, 4, tuple(tuple(r) for r in coeff))
    reps = {r.pid: r for r in vanishing_suite(g)}
    # trace-form entry g(01) at (3,2) is hit: all four indices distinct
    assert reps["g(ij):kl"].status == "fail"
    assert reps["g(ij):kl"].violation["indices"] == {"i": 0, "j": 1, "k": 3, "l": 2}
    assert diff_trace_entry(g, 0, 1, 3, 2) == trace_entry(g, 0, 0, 3, 2) - trace_entry(g, 1, 1, 3, 2)


def test_vanishing_suite_vacuous_at_small_n():
    reps = {r.pid: r.status for r in vanishing_suite(zero_map(Q, 2))}
    assert reps["g(ij):kl"] == "vacuous"       # needs 4 distinct indices
    assert reps["g(ii-jj):kk"] == "vacuous"    # needs 3
    assert reps["g(ij):ij"] == "pass"


# -- scale/shift extraction ------------------------------------------------------------


def test_extraction_examples():
    z = Matrix.unit(Q, 2, 0, 1)
    fit = extract_scale_shift(scale_trace_map(Q, 2, Q.neg(Q.one), z))
    assert fit.exact_fit and fit.scale == Fraction(-1) and fit.shift == z

    fit0 = extract_scale_shift(zero_map(Q, 2))
    assert fit0.exact_fit and fit0.scale == 0 and fit0.shift.is_zero()

    fitc = extract_scale_shift(char2_exception())
    assert fitc.exact_fit and fitc.scale == 1
    assert fitc.shift == Matrix.unit(GF2, 2, 1, 1)


def test_extraction_roundtrip_random():
    rng = random.Random(9)
    for fld in (Q, GF7):
        for _ in range(20):
            s = fld.random_scalar(rng)
            z = Matrix.random(fld, 3, rng)
            g = scale_trace_map(fld, 3, s, z)
            fit = extract_scale_shift(g)
            assert fit.exact_fit and fit.scale == s and fit.shift == z
            assert scale_trace_map(fld, 3, fit.scale, fit.shift) == g


def test_extraction_detects_non_family():
    g0 = identity_map(Q, 2)
    images = [g0.image_of_unit(i, j) for i in range(2) for j in range(2)]
    images[2] = images[2] + Matrix.unit(Q, 2, 0, 0)
    fit = extract_scale_shift(map_from_images(Q, 2, images))
    assert not fit.exact_fit
    assert fit.witness == (1, 0)


def test_scale_admissibility():
    assert scale_admissible(Q, Fraction(-1))
    assert scale_admissible(Q, Fraction(0))
    assert not scale_admissible(Q, Fraction(2))
    assert scale_admissible(GF2, 1)  # characteristic two accepts everything
    assert scale_admissible(GF2, 0)
    assert not scale_admissible(GF5, 3)
    assert scale_admissible(GF5, 4)  # 4 = -1 in GF(5)


def test_map_json_roundtrip():
    rng = random.Random(10)
    for fld in (Q, GF5):
        g = random_map(fld, 2, rng)
        d = g.to_json_dict()
        assert d["orientation"] == "standard"
        assert PerturbationMap.from_json_dict(d) == g
