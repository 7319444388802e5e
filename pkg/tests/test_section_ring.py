import math
import random
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from nagraded.field import FieldElem, t
from nagraded.fixtures import floor_fixture, random_unit_matrix, random_weights
from nagraded.linalg import Matrix
from nagraded.norms import DiagNorm, dinf, relative_spectrum
from nagraded.section_ring import (
    SpecError,
    degree_one,
    degree_one_general,
    floor_concave,
    linear_weights,
    max_of,
    monomials,
    norm_at,
    scaled,
    spec_from_record,
    spec_to_record,
    submultiplicativity_check,
    sym_surjection,
    table_weights,
    truncated,
    weights_at,
    zero_weights,
)

from strategies import small_rat


def brute_count(n, m):
    return sum(1 for a in product(range(m + 1), repeat=n) if sum(a) <= m)


def test_monomials_line():
    s = monomials(1, 3)
    assert s.exponents == ((0,), (1,), (2,), (3,)) and s.h0 == 4


def test_monomials_plane_degree_two():
    assert monomials(2, 2).h0 == 6 == brute_count(2, 2)


@pytest.mark.parametrize("m", range(0, 15))
def test_monomials_plane_closed_form(m):
    s = monomials(2, m)
    assert s.h0 == (m + 1) * (m + 2) // 2 == brute_count(2, m)
    assert list(s.exponents) == sorted(s.exponents)


def test_sym_surjection_degree_one_is_identity():
    assert sym_surjection(2, 1) == Matrix.identity(3)


def test_sym_surjection_line_degree_two():
    # basis 1.1, 1.z, z.z goes to 1, z, z^2
    assert sym_surjection(1, 2) == Matrix.identity(3)


@pytest.mark.parametrize("n,m,k", [(1, 3, 1), (2, 2, 1), (2, 3, 1), (1, 2, 2), (2, 2, 2)])
def test_sym_surjection_rank(n, m, k):
    A = sym_surjection(n, m, k)
    S = sympy.Matrix([[0 if x.is_zero else 1 for x in r] for r in A.rows])
    assert S.rank() == math.comb(m * k + n, n) == A.nrows


@given(small_rat, small_rat, st.integers(1, 12))
def test_degree_one_line_closed_form(a0, a1, m):
    spec = degree_one(DiagNorm.monomial([a0, a1]))
    assert weights_at(spec, m) == tuple(j * a1 + (m - j) * a0 for j in range(m + 1))


def test_zero_weights_give_trivial_norm():
    assert norm_at(zero_weights(2), 4).is_lattice


@pytest.mark.parametrize("m", range(1, 11))
def test_general_degree_one_matches_shortcut(m):
    spec = degree_one(DiagNorm.monomial([Fraction(1, 2), -1]))
    assert relative_spectrum(degree_one_general(spec, m), norm_at(spec, m)).lambdas == (0,) * (m + 1)


@pytest.mark.parametrize("m", range(1, 5))
def test_general_degree_one_plane(m):
    spec = degree_one(DiagNorm.monomial([0, 1, Fraction(1, 3)]))
    assert relative_spectrum(degree_one_general(spec, m), norm_at(spec, m)).lambdas == (0,) * math.comb(m + 2, 2)


@pytest.mark.parametrize("m", range(1, 6))
def test_scrambled_base_presents_the_same_norm(m):
    # a unitriangular change of basis that keeps the weights diagonal
    w = [Fraction(0), Fraction(3, 2)]
    B = Matrix([[FieldElem.one(), t() ** 2], [FieldElem.zero(), FieldElem.one()]])
    plain, twisted = degree_one(DiagNorm.monomial(w)), degree_one(DiagNorm(B, w))
    assert weights_at(twisted, m) is None
    assert relative_spectrum(norm_at(twisted, m), norm_at(plain, m)).lambdas == (0,) * (m + 1)


def test_submult_zero_passes():
    assert submultiplicativity_check(zero_weights(1), 6).ok


def test_submult_superadditive_passes():
    assert submultiplicativity_check(floor_fixture(), 10).ok
    assert submultiplicativity_check(linear_weights([0, 1, 2]), 5).ok


def test_submult_counterexample_has_witness():
    bad = table_weights(1, {1: [0, 1], 2: [0, 1, 1]})  # w_2(2) < w_1(1) + w_1(1)
    rep = submultiplicativity_check(bad, 2)
    assert not rep.ok
    assert rep.witness["m"] == 1 and rep.witness["alpha"] == [1] and rep.witness["beta"] == [1]


def test_submult_random_samples_on_general_norms():
    B = Matrix([[FieldElem.one(), t()], [FieldElem.zero(), FieldElem.one()]])
    spec = degree_one(DiagNorm(B, [0, 1]))
    assert submultiplicativity_check(spec, 4, samples=3, seed=5).ok


@pytest.mark.parametrize("seed", range(5))
def test_degree_one_dinf(seed):
    rng = random.Random(seed)
    a = degree_one(DiagNorm.monomial(random_weights(rng, 2)))
    b = degree_one(DiagNorm.monomial(random_weights(rng, 2)))
    d1_ = dinf(norm_at(a, 1), norm_at(b, 1))
    vals = [dinf(norm_at(a, m), norm_at(b, m)) / m for m in range(1, 13)]
    assert all(v <= d1_ for v in vals) and max(vals) == d1_


def test_truncation_at_k_is_parent():
    fc = floor_fixture()
    for k in (1, 2, 3, 5):
        assert weights_at(truncated(fc, k), k) == weights_at(fc, k)


def test_truncation_rejects_bad_degree():
    with pytest.raises(SpecError):
        norm_at(truncated(floor_fixture(), 3), 4)


def test_truncation_idempotent_on_degree_one():
    spec = degree_one(DiagNorm.monomial([0, Fraction(2, 3)]))
    for k in (1, 2, 4):
        assert weights_at(truncated(spec, k), 8) == weights_at(spec, 8)


def test_truncated_general_path_matches_shortcut():
    # the degree-2 norm presented in a twisted basis, then generated on the subring
    from nagraded.norms import quotient_norm, sym_power
    w2 = list(weights_at(floor_fixture(), 2))
    one, zero = FieldElem.one(), FieldElem.zero()
    B = Matrix([[one, t() ** 3, zero], [zero, one, zero], [zero, zero, one]])
    plain = table_weights(1, {2: w2})
    for r in (2, 3):
        gen = quotient_norm(sym_power(DiagNorm(B, w2), r), sym_surjection(1, r, 2))
        short = DiagNorm.monomial(weights_at(truncated(plain, 2), 2 * r))
        assert relative_spectrum(gen, short).lambdas == (0,) * (2 * r + 1)


@pytest.mark.parametrize("r,m", [(2, 3), (3, 2), (4, 4)])
def test_subring_rescaling(r, m):
    a, b = floor_fixture(), zero_weights(1)
    lam = relative_spectrum(norm_at(a, r * m), norm_at(b, r * m))
    sub = lam.scaled(m)  # degree m of the r-th subring, rescaled by its own degree
    assert sub.lambdas == tuple(r * x for x in lam.scaled(r * m).lambdas)


def test_scaled_rules():
    base = zero_weights(1)
    assert weights_at(scaled(base, "const", 2), 5) == (2,) * 6
    assert weights_at(scaled(base, "sqrt_ceil", 1), 10) == (4,) * 11
    assert weights_at(scaled(base, "linear", Fraction(1, 2)), 4) == (2,) * 5


def test_max_of_monomial():
    s = max_of(linear_weights([0, 1]), linear_weights([1, 0]))
    assert weights_at(s, 2) == (0, 1, 0)


specs = st.recursive(
    st.one_of(
        st.just(zero_weights(1)),
        st.builds(lambda a, b: linear_weights([a, b]), small_rat, small_rat),
        st.just(floor_fixture()),
        st.builds(lambda a, b: degree_one(DiagNorm.monomial([a, b])), small_rat, small_rat),
    ),
    lambda inner: st.one_of(
        st.builds(truncated, inner, st.integers(1, 3)),
        st.builds(scaled, inner, st.sampled_from(["const", "sqrt_ceil", "linear"]), small_rat),
        st.builds(max_of, inner, inner),
    ),
    max_leaves=3,
)


@given(specs)
def test_spec_record_round_trip(spec):
    rec = spec_to_record(spec)
    back = spec_from_record(rec)
    assert spec_to_record(back) == rec
    assert back == spec


def test_spec_errors_name_the_field():
    with pytest.raises(SpecError, match="spec.variant"):
        spec_from_record({"n": 1})
    with pytest.raises(SpecError, match=r"spec\.parent\.rule"):
        spec_from_record({"variant": "truncated", "k": 2,
                          "parent": {"variant": "monomial_weights", "n": 1}})


def test_table_spec_round_trip_and_lookup():
    s = table_weights(1, {1: ["0", "1/2"], 3: [0, 1, 1, 0]})
    assert spec_from_record(spec_to_record(s)) == s
    with pytest.raises(SpecError):
        weights_at(s, 2)
