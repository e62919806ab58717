import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from parhitchin.combinatorics import LeviType, compositions, conjugate, level_function, partitions, sort_to_partition
from parhitchin.errors import GenericityViolation, NotNilpotent, RankMismatch
from parhitchin.field import GF, FieldSpec
from parhitchin.local_higgs import (FlaggedLattice, StrongParabolicEndo, batch_bound_check, char_poly,
                                    check_decomposable, decompose, is_strongly_parabolic, jordan_type_mod_t,
                                    kernel_lattice, ad_surjectivity_check, nilpotent_representative,
                                    random_strong_parabolic, verify_valuation_bounds)
from parhitchin.series import AtLeast, SeriesPolynomial, TruncatedSeries, product
from parhitchin.spectral import random_generic_higgs

import oracles

F5 = GF.get(5)


def S(F, coeffs, prec):
    return TruncatedSeries(F, [F.from_int(c) for c in coeffs], prec)


def P(F, coeffs, prec):
    return SeriesPolynomial([S(F, c, prec) for c in coeffs])


def diag_theta(F, entries, prec, levi=None):
    r = len(entries)
    mat = [[S(F, [0, entries[i]] if i == j else [], prec) for j in range(r)] for i in range(r)]
    return StrongParabolicEndo(mat, FlaggedLattice(levi or LeviType((1,) * r), F.spec, prec))


def lattice(levi, p=101, prec=8):
    return FlaggedLattice(LeviType(tuple(levi)), FieldSpec(p), prec)


# -- sampler -----------------------------------------------------------------

def test_trivial_flag_sample_vanishes_mod_t():
    for seed in range(5):
        th = random_strong_parabolic(lattice((3,)), seed)
        assert all(a.coeffs[0] == 0 for row in th.matrix for a in row)


def test_full_flag_rank_two_sample_shape():
    for seed in range(20):
        th = random_strong_parabolic(lattice((1, 1), p=5), seed)
        const = [[a.coeffs[0] for a in row] for row in th.matrix]
        assert const[0] == [0, 0] and const[1][1] == 0


def test_sampler_is_deterministic():
    L = lattice((2, 1))
    assert random_strong_parabolic(L, 9).matrix == random_strong_parabolic(L, 9).matrix
    assert random_strong_parabolic(L, 9).matrix != random_strong_parabolic(L, 10).matrix


@given(st.sampled_from([c for r in range(1, 5) for c in compositions(r)]), st.integers(0, 2 ** 64 - 1))
def test_samples_are_strongly_parabolic(lt, seed):
    th = random_strong_parabolic(FlaggedLattice(lt, FieldSpec(7), 5), seed)
    assert is_strongly_parabolic(th.matrix, lt)


def test_endo_rejects_non_parabolic_matrix():
    L = lattice((1, 1), p=5, prec=3)
    bad = [[S(F5, [0], 3), S(F5, [1], 3)], [S(F5, [0], 3), S(F5, [0], 3)]]
    with pytest.raises(ValueError):
        StrongParabolicEndo(bad, L)


def test_literal_round_trip():
    L = lattice((2, 1), prec=4)
    th = random_strong_parabolic(L, 3)
    assert StrongParabolicEndo.from_literal(L, th.to_literal()).matrix == th.matrix


# -- characteristic polynomial ------------------------------------------------

def test_char_poly_diagonal_example():
    f = char_poly(diag_theta(F5, [1, 2], 5))
    assert f == P(F5, [[1], [0, -3], [0, 0, 2]], 5)


def test_char_poly_of_zero():
    L = lattice((4,), p=5, prec=3)
    zero = [[S(F5, [], 3)] * 4 for _ in range(4)]
    f = char_poly(StrongParabolicEndo(zero, L))
    assert f == P(F5, [[1], [], [], [], []], 3)


@given(st.lists(st.integers(0, 100), min_size=5, max_size=5))
def test_char_poly_two_by_two_formula(vals):
    F = GF.get(101)
    a, b, c, d, e = vals
    N = 4
    th = [[S(F, [0, a], N), S(F, [0, b], N)], [S(F, [c, d], N), S(F, [0, e], N)]]
    f = char_poly(StrongParabolicEndo(th, lattice((1, 1), prec=N)))
    assert f.coeffs[1] == S(F, [0, -(a + e)], N)
    assert f.coeffs[2] == S(F, [0, -b * c, a * e - b * d], N)


# -- valuation bounds --------------------------------------------------------

def test_bounds_trivial_flag():
    rep = verify_valuation_bounds(char_poly(random_strong_parabolic(lattice((2,)), 1)), (1, 2))
    assert rep.passed


def test_bounds_full_flag_can_be_sharp():
    L = lattice((1, 1))
    reps = [verify_valuation_bounds(char_poly(random_strong_parabolic(L, s)), (1, 1)) for s in range(20)]
    assert all(r.passed for r in reps)
    assert any(r.entries[1][1] == 1 for r in reps)


def test_bounds_for_lambda_power():
    f = P(F5, [[1], [], [], []], 4)
    rep = verify_valuation_bounds(f, (1, 1, 2))
    assert rep.passed and all(isinstance(v, AtLeast) for _, v, _, _ in rep.entries)


def test_bounds_detect_violation():
    f = P(F5, [[1], [0, 1], [0, 1]], 4)
    assert not verify_valuation_bounds(f, (1, 2)).passed


def test_batch_matches_single_samples():
    for levi in [(2, 1), (1, 2, 1), (3,)]:
        L = lattice(levi, p=7, prec=len(levi) + 4)
        gam = level_function(sort_to_partition(levi)).values
        passed, sharp = batch_bound_check(L, range(40))
        exact = FlaggedLattice(L.levi, L.field, L.rank + 1)
        for s in range(40):
            rep = verify_valuation_bounds(char_poly(random_strong_parabolic(exact, s)), gam)
            assert (rep.passed, rep.sharp) == (passed[s], sharp[s])


# -- kernels and decomposition -----------------------------------------------

def test_kernel_of_diagonal():
    th = diag_theta(F5, [1, 2], 5)
    basis = kernel_lattice(th, P(F5, [[1], [0, -1]], 5))
    assert len(basis) == 1
    vec = basis[0]
    assert vec[1].is_zero() and vec[0].is_unit()
    full = kernel_lattice(th, char_poly(th))
    assert len(full) == 2


def test_kernel_rank_mismatch():
    th = diag_theta(F5, [1, 2], 5)
    with pytest.raises(RankMismatch):
        kernel_lattice(th, P(F5, [[1], [0, -3]], 5))


def test_decompose_diagonal():
    th = diag_theta(F5, [1, 2], 5)
    res = decompose(th, [P(F5, [[1], [0, -1]], 5), P(F5, [[1], [0, -2]], 5)])
    assert res.block_sizes == [1, 1]
    assert res.assembly_det_valuation() == 0
    assert res.summands[0][1][0][1].is_zero() and res.summands[1][1][0][0].is_zero()


def test_decompose_single_branch_is_identity():
    th, f, factors = random_generic_higgs(lattice((1, 1, 1)), 5)
    assert len(factors) == 1
    res = decompose(th, [x.factor for x in factors])
    r = 3
    assert res.block_sizes == [3]
    for i in range(r):
        for j in range(r):
            assert res.assembly[i][j] == S(GF.get(101), [1 if i == j else 0], res.assembly[i][j].prec)


def test_decompose_seed_42_levi_21():
    L = lattice((2, 1))
    th, f, factors = random_generic_higgs(L, 42)
    assert [x.degree for x in factors] == [2, 1]
    assert len(kernel_lattice(th, factors[0].factor)) == 2
    res = decompose(th, [x.factor for x in factors])
    assert res.block_sizes == [2, 1]
    assert res.assembly_det_valuation() == 0
    assert res.blocks_match()
    assert product(res.block_char_polys).agrees(f, L.precision - L.rank)


def test_genericity_violation_on_equal_constant_terms():
    g = P(F5, [[1], [0, 1]], 5)
    h = P(F5, [[1], [0, 1, 3]], 5)
    with pytest.raises(GenericityViolation):
        check_decomposable([g, h])
    with pytest.raises(GenericityViolation):
        check_decomposable([P(F5, [[1], [1]], 5)])


@pytest.mark.parametrize("p", [5, 7, 101])
def test_decompose_random_generic(p):
    for levi in [(2, 1), (1, 2), (2, 2), (1, 3), (3, 1, 2)]:
        L = lattice(levi, p=p, prec=2 * sum(levi))
        for seed in range(3):
            th, f, factors = random_generic_higgs(L, seed)
            res = decompose(th, [x.factor for x in factors])
            assert res.assembly_det_valuation() == 0
            assert res.blocks_match()
            assert sorted(res.block_sizes, reverse=True) == list(conjugate(sort_to_partition(levi)).parts)


# -- reduction mod t ---------------------------------------------------------

def test_jordan_of_zero_mod_t():
    th = diag_theta(F5, [1, 2, 3], 4)
    assert jordan_type_mod_t(th).block_sizes.parts == (1, 1, 1)


def test_jordan_generic_levi_21():
    th, _, _ = random_generic_higgs(lattice((2, 1)), 42)
    assert jordan_type_mod_t(th).block_sizes.parts == (2, 1)


def test_jordan_single_block_full_flag():
    r = 4
    N0 = nilpotent_representative((r,))
    M = [[0] * r for _ in range(r)]
    th = StrongParabolicEndo.from_constant_parts(lattice((1,) * r), N0, M)
    assert jordan_type_mod_t(th).block_sizes.parts == (r,)


def test_ad_surjectivity_examples():
    F = GF.get(7)
    assert ad_surjectivity_check(F, [[0] * 3 for _ in range(3)])
    assert ad_surjectivity_check(F, nilpotent_representative((3,)))
    assert ad_surjectivity_check(F, nilpotent_representative((2, 1)))


def test_ad_surjectivity_all_partitions_small():
    for p in (2, 3, 7):
        F = GF.get(p)
        for r in range(1, 5):
            for mu in partitions(r):
                assert ad_surjectivity_check(F, nilpotent_representative(mu))


def test_ad_surjectivity_rejects_non_nilpotent():
    with pytest.raises(NotNilpotent):
        ad_surjectivity_check(F5, [[1, 0], [0, 0]])


# -- brute-force kernel oracle -----------------------------------------------

def _split_theta(F, residues, N, seed):
    """``theta = D + t*M`` with distinct residue eigenvalues; factors by Hensel."""
    from parhitchin.series import hensel_lift, linear_factor
    rng = random.Random(seed)
    r = len(residues)
    mat = [[S(F, [residues[i] if i == j else 0] + [rng.randrange(F.p) for _ in range(N - 1)], N)
            for j in range(r)] for i in range(r)]
    f = char_poly(mat)
    factors = []
    rest = f
    for k, c in enumerate(residues[:-1]):
        g0 = linear_factor(F, S(F, [c], N))
        h0 = product([linear_factor(F, S(F, [d], N)) for d in residues[k + 1:]])
        g, rest = hensel_lift(rest, g0, h0)
        factors.append(g)
    factors.append(rest)
    return mat, factors


@pytest.mark.parametrize("p,residues,N", [(2, (0, 1), 3), (3, (0, 1, 2), 2), (3, (1, 2), 4)])
def test_kernel_matches_enumeration_split_case(p, residues, N):
    F = GF.get(p)
    mat, factors = _split_theta(F, residues, N, seed=p + N)
    for g in factors:
        from parhitchin.linalg import poly_at_matrix
        A = oracles.series_array(poly_at_matrix(g, mat), N)
        basis = oracles.basis_arrays(kernel_lattice(mat, g), N)
        brute, _ = oracles.brute_kernel(A, p)
        spanned, _ = oracles.span(basis, p, N)
        assert brute == spanned
