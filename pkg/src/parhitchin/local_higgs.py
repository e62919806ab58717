"""Local strongly parabolic Higgs fields on a flagged lattice ``O^r``.

The lattice ``V = O^r`` carries the flag ``V = V^0 > V^1 > ... > V^sigma = tV``
in the adapted basis: ``V^i`` is spanned by the basis vectors after the
first ``m_1 + ... + m_i`` together with ``tV``.  A strongly parabolic
endomorphism is then ``N0 + t*M`` with ``N0`` constant and strictly block
lower triangular (block ``b`` maps into blocks ``> b``).
"""
from __future__ import annotations

import random

import numpy as np
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from . import fastpath
from .combinatorics import (LeviType, LevelFunction, Partition, conjugate, level_function,
                            sort_to_partition)
from .errors import GenericityViolation, NotNilpotent, PrecisionTooLow, RankMismatch
from .field import GF, FieldSpec, lcm
from .linalg import (berkowitz, det_valuation, field_mat_mul, field_nullspace, field_rank, field_row_echelon,
                     field_inverse, kernel_basis, mat_embed, mat_mod_t, mat_mul, mat_precision,
                     poly_at_matrix, smith_form)
from .series import (INF, AtLeast, SeriesPolynomial, TruncatedSeries, is_eisenstein, product)


@dataclass(frozen=True)
class FlaggedLattice:
    levi: LeviType
    field: FieldSpec
    precision: int = 32

    def __post_init__(self):
        if not isinstance(self.levi, LeviType):
            object.__setattr__(self, "levi", LeviType(tuple(self.levi)))
        if not isinstance(self.field, FieldSpec):
            object.__setattr__(self, "field", FieldSpec(*self.field))
        if self.precision < 1:
            raise ValueError("precision must be positive")

    @property
    def rank(self) -> int:
        return self.levi.rank

    @property
    def gf(self) -> GF:
        return self.field.build()

    def block_of(self) -> list[int]:
        """Graded block index of each adapted basis vector."""
        out = []
        for b, m in enumerate(self.levi.multiplicities):
            out += [b] * m
        return out


def is_strongly_parabolic(matrix, levi: LeviType) -> bool:
    """``theta(V^i) <= V^{i+1}``: the reduction mod ``t`` is strictly block lower triangular."""
    blocks = []
    for b, m in enumerate(levi.multiplicities):
        blocks += [b] * m
    n = len(blocks)
    for i in range(n):
        for j in range(n):
            a = matrix[i][j]
            if blocks[i] <= blocks[j]:
                if a.prec < 1:
                    return False
                if a.coeffs[0]:
                    return False
    return True


@dataclass
class StrongParabolicEndo:
    matrix: list
    lattice: FlaggedLattice

    def __post_init__(self):
        r = self.lattice.rank
        if len(self.matrix) != r or any(len(row) != r for row in self.matrix):
            raise ValueError(f"matrix must be {r}x{r}")
        if not is_strongly_parabolic(self.matrix, self.lattice.levi):
            raise ValueError("matrix does not shift the flag strictly")

    @property
    def field(self) -> GF:
        return self.matrix[0][0].field

    def to_literal(self):
        return [[a.to_literal() for a in row] for row in self.matrix]

    @classmethod
    def from_literal(cls, lattice: FlaggedLattice, literal):
        F = lattice.gf
        N = lattice.precision
        return cls([[TruncatedSeries.from_literal(F, a, N) for a in row] for row in literal], lattice)

    @classmethod
    def from_constant_parts(cls, lattice: FlaggedLattice, N0, M):
        """``theta = N0 + t*M`` for constant field matrices."""
        F = lattice.gf
        prec = lattice.precision
        r = lattice.rank
        mat = [[TruncatedSeries(F, (N0[i][j], M[i][j]), prec) for j in range(r)] for i in range(r)]
        return cls(mat, lattice)


def sample_constant_parts(lattice: FlaggedLattice, seed: int):
    """The raw ``(N0, M)`` pair behind :func:`random_strong_parabolic`."""
    rng = random.Random(seed)
    F = lattice.gf
    q = F.q
    r = lattice.rank
    blocks = lattice.block_of()
    N0 = [[rng.randrange(q) if blocks[i] > blocks[j] else 0 for j in range(r)] for i in range(r)]
    M = [[rng.randrange(q) for _ in range(r)] for _ in range(r)]
    return N0, M


def random_strong_parabolic(lattice: FlaggedLattice, seed: int) -> StrongParabolicEndo:
    """Uniform ``N0`` (strictly block lower) and uniform constant ``M``; deterministic in ``seed``."""
    N0, M = sample_constant_parts(lattice, seed)
    return StrongParabolicEndo.from_constant_parts(lattice, N0, M)


def char_poly(theta: StrongParabolicEndo | list) -> SeriesPolynomial:
    matrix = theta.matrix if isinstance(theta, StrongParabolicEndo) else theta
    return berkowitz(matrix)


@dataclass
class BoundReport:
    entries: list  # (i, valuation or AtLeast, gamma_i, ok)

    @property
    def passed(self) -> bool:
        return all(ok for *_, ok in self.entries)

    @property
    def sharp(self) -> bool:
        """Every coefficient attains its bound exactly."""
        return all(isinstance(v, int) and v == g for _, v, g, _ in self.entries)


def verify_valuation_bounds(f: SeriesPolynomial, gamma: LevelFunction | Sequence[int]) -> BoundReport:
    """Check ``v(b_i) >= gamma_i`` for ``i = 1..r``."""
    gamma = tuple(gamma)
    if f.degree != len(gamma):
        raise ValueError(f"degree {f.degree} but {len(gamma)} levels")
    entries = []
    for i, g in enumerate(gamma, 1):
        b = f.coeffs[i]
        v = b.valuation
        if v == INF:
            if b.prec < g:
                raise PrecisionTooLow(f"b_{i} vanishes to t^{b.prec} only; need t^{g}")
            entries.append((i, AtLeast(b.prec), g, True))
        else:
            entries.append((i, v, g, v >= g))
    return BoundReport(entries)


def batch_bound_check(lattice: FlaggedLattice, seeds: Sequence[int]):
    """Valuation bounds for many seeded samples at once.

    ``theta = N0 + t*M`` is linear in ``t``, so its characteristic polynomial
    is computed exactly modulo ``t^(r+1)``.  Returns boolean arrays
    ``(passed, sharp)`` indexed like ``seeds``.  Prime fields use a compiled
    batch kernel; extension fields fall back to one sample at a time.
    """
    F = lattice.gf
    r = lattice.rank
    gamma = np.array(level_function(sort_to_partition(lattice.levi)).values)
    seeds = list(seeds)
    if F.m == 1 and fastpath.ENABLED:
        parts = [sample_constant_parts(lattice, s) for s in seeds]
        coeffs = fastpath.charpoly_linear_batch(np.array([a for a, _ in parts]).reshape(-1, r, r),
                                                np.array([b for _, b in parts]).reshape(-1, r, r),
                                                F.p, r + 1)[:, 1:, :]
        nonzero = coeffs != 0
        # an exactly zero coefficient has infinite valuation
        vals = np.where(nonzero.any(axis=2), nonzero.argmax(axis=2), r + 1)
        return (vals >= gamma).all(axis=1), (vals == gamma).all(axis=1)
    exact = FlaggedLattice(lattice.levi, lattice.field, r + 1)
    passed, sharp = [], []
    for s in seeds:
        rep = verify_valuation_bounds(char_poly(random_strong_parabolic(exact, s)), gamma)
        passed.append(rep.passed)
        sharp.append(rep.sharp)
    return np.array(passed, dtype=bool), np.array(sharp, dtype=bool)


# -- kernels and the decomposition ------------------------------------------

def _embedded_matrix(theta, F: GF):
    mat = theta.matrix if isinstance(theta, StrongParabolicEndo) else theta
    if mat[0][0].field is F:
        return mat
    return mat_embed(mat, F)


def kernel_lattice(theta, f_i: SeriesPolynomial):
    """Saturated basis (list of column vectors) of ``Ker f_i(theta)``."""
    mat = _embedded_matrix(theta, f_i.field)
    M = poly_at_matrix(f_i, mat)
    basis, _ = kernel_basis(M)
    if len(basis) != f_i.degree:
        raise RankMismatch(f"kernel rank {len(basis)} but factor degree {f_i.degree}")
    return basis


@dataclass
class DecompositionResult:
    summands: list  # (factor, basis vectors)
    assembly: list  # r x r, columns are the concatenated bases
    block_char_polys: list = dc_field(default_factory=list)
    off_block_valuation: object = None

    @property
    def block_sizes(self) -> list[int]:
        return [len(b) for _, b in self.summands]

    def assembly_det_valuation(self):
        return det_valuation(self.assembly)

    def blocks_match(self, prec: int | None = None) -> bool:
        """Each block's characteristic polynomial agrees with its factor."""
        for (f, _), g in zip(self.summands, self.block_char_polys):
            n = min(f.prec, g.prec) if prec is None else prec
            if not g.agrees(f, n):
                return False
        return True


def check_decomposable(factors: Sequence[SeriesPolynomial]):
    """The genericity hypotheses on the factors; raises :class:`GenericityViolation`."""
    for f in factors:
        if not is_eisenstein(f):
            raise GenericityViolation(f"factor {f} is not Eisenstein")
    for a in range(len(factors)):
        for b in range(a + 1, len(factors)):
            fa, fb = factors[a], factors[b]
            if fa.degree != fb.degree:
                continue
            ca, cb = fa.constant_term(), fb.constant_term()
            if ca.coeffs[1] == cb.coeffs[1]:
                raise GenericityViolation(
                    f"factors {a} and {b} have equal constant terms modulo t^2")


def _inverse_unimodular(P):
    """Inverse over ``O``: invert mod ``t``, then Newton ``X <- X + X(I - PX)``."""
    F = P[0][0].field
    r = len(P)
    prec = mat_precision(P)
    if fastpath.eligible(F, r, prec):
        X = fastpath.unimodular_inverse(F, fastpath.to_array(P, prec))
        if X is None:
            raise RankMismatch("assembly matrix is not invertible over O")
        return fastpath.from_array(F, X)
    try:
        X0 = field_inverse(F, mat_mod_t(P))
    except ZeroDivisionError:
        raise RankMismatch("assembly matrix is not invertible over O") from None
    X = [[TruncatedSeries.constant(F, X0[i][j], prec) for j in range(r)] for i in range(r)]
    one = TruncatedSeries.one(F, prec)
    known = 1
    while known < prec:
        PX = mat_mul(P, X)
        E = [[(one if i == j else 0) - PX[i][j] for j in range(r)] for i in range(r)]
        X = [[a + b for a, b in zip(rx, re)] for rx, re in zip(X, mat_mul(X, E))]
        known *= 2
    return X


def decompose(theta, factors: Sequence[SeriesPolynomial]) -> DecompositionResult:
    """Split ``V`` into the kernels ``Ker f_i(theta)`` and certify the splitting."""
    factors = list(factors)
    check_decomposable(factors)
    F = factors[0].field
    mat = _embedded_matrix(theta, F)
    r = len(mat)
    if sum(f.degree for f in factors) != r:
        raise RankMismatch("factor degrees do not add up to the rank")
    summands = [(f, kernel_lattice(mat, f)) for f in factors]
    cols = [v for _, basis in summands for v in basis]
    assembly = [[cols[j][i] for j in range(r)] for i in range(r)]
    if field_rank(F, mat_mod_t(assembly)) < r:
        raise RankMismatch("kernels do not span V: assembly determinant is not a unit")
    Pinv = _inverse_unimodular(assembly)
    conj = mat_mul(Pinv, mat_mul(mat, assembly))
    blocks = []
    off_val = INF
    start = 0
    for f, basis in summands:
        k = len(basis)
        idx = range(start, start + k)
        blocks.append(berkowitz([[conj[i][j] for j in idx] for i in idx]))
        for i in range(r):
            if i in idx:
                continue
            for j in idx:
                off_val = min(off_val, conj[i][j].val_lower())
        start += k
    return DecompositionResult(summands, assembly, blocks, off_val)


# -- reductions modulo t ----------------------------------------------------

@dataclass(frozen=True)
class JordanType:
    block_sizes: Partition


def jordan_partition(F: GF, X) -> Partition:
    """Jordan block sizes of a nilpotent-or-not field matrix at eigenvalue 0."""
    r = len(X)
    ranks = [r]
    P = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    while True:
        P = field_mat_mul(F, P, X)
        ranks.append(field_rank(F, P))
        if ranks[-1] == ranks[-2]:
            break
    # number of blocks of size >= k is ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k in range(len(at_least), 0, -1):
        exactly = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        sizes += [k] * exactly
    # the nonnilpotent part (rank stabilizes above zero) contributes 1x1 blocks
    sizes += [1] * ranks[-1]
    return Partition(tuple(sorted(sizes, reverse=True)))


def jordan_type_mod_t(theta) -> JordanType:
    mat = theta.matrix if isinstance(theta, StrongParabolicEndo) else theta
    F = mat[0][0].field
    return JordanType(jordan_partition(F, mat_mod_t(mat)))


def ad_surjectivity_check(F: GF, X) -> bool:
    """Is ``ad(X): p -> n`` onto, for the parabolic ``p`` of the flag ``Ker X^i``?"""
    r = len(X)
    P = X
    for _ in range(r - 1):
        P = field_mat_mul(F, P, X)
    if any(any(row) for row in P):
        raise NotNilpotent("X^r != 0")
    # adapted basis: extend a basis of Ker X^(i-1) to Ker X^i
    basis, levels = [], []
    power = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    level = 0
    while len(basis) < r:
        level += 1
        power = field_mat_mul(F, power, X)
        for v in field_nullspace(F, power):
            if field_rank(F, basis + [v]) > len(basis):
                basis.append(v)
                levels.append(level)
    B = [[basis[j][i] for j in range(r)] for i in range(r)]
    Xp = field_mat_mul(F, field_inverse(F, B), field_mat_mul(F, X, B))
    p_coords = [(a, b) for a in range(r) for b in range(r) if levels[a] <= levels[b]]
    n_coords = [(a, b) for a in range(r) for b in range(r) if levels[a] < levels[b]]
    if not n_coords:
        return True
    n_index = {c: k for k, c in enumerate(n_coords)}
    rows = [[0] * len(p_coords) for _ in n_coords]
    for col, (a, b) in enumerate(p_coords):
        # [X', E_ab] = X' E_ab - E_ab X'
        for i in range(r):
            if Xp[i][a]:
                k = n_index.get((i, b))
                if k is None:
                    raise AssertionError("ad(X) left the nilradical")
                rows[k][col] = F.add(rows[k][col], Xp[i][a])
        for j in range(r):
            if Xp[b][j]:
                k = n_index.get((a, j))
                if k is None:
                    raise AssertionError("ad(X) left the nilradical")
                rows[k][col] = F.sub(rows[k][col], Xp[b][j])
    return field_rank(F, rows) == len(n_coords)


def nilpotent_representative(mu: Partition | Sequence[int], r: int | None = None):
    """Constant nilpotent matrix with Jordan blocks of the given sizes (1 on the subdiagonal)."""
    sizes = tuple(mu)
    r = sum(sizes) if r is None else r
    X = [[0] * r for _ in range(r)]
    start = 0
    for s in sizes:
        for k in range(s - 1):
            X[start + k + 1][start + k] = 1
        start += s
    return X
