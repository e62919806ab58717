"""Newton polygons, Eisenstein factorization and the local BNR construction.

Polygons are drawn over the points ``(i, v(b_i))`` where ``b_i`` multiplies
``lambda^(r-i)``, so slopes are the root valuations and are positive.

An edge of slope ``a/b`` (lowest terms) is factored in the ramified
variable ``s`` with ``s^b = t``: putting ``lambda = s^a y`` and dividing by
the edge height turns ``f`` into a series in ``s`` whose reduction is
``c * y^e * prod (y^b - zeta)`` over the roots ``zeta`` of the edge
polynomial.  Those residue factors are pairwise coprime whenever the
roots are distinct (even if ``p`` divides ``b``), so a linear multifactor
Hensel lift runs with no loss of precision.  The lifted factors involve
only powers ``s^(b k)`` and come back as polynomials over ``k[[t]]``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .combinatorics import (LeviType, LevelFunction, Partition, branch_steps, conjugate,
                            level_function, sort_to_partition)
from .errors import (ConfigError, DegreeMismatch, ExtensionCapExceeded, GenericityViolation,
                     NoConvergence, PrecisionTooLow)
from . import fastpath
from .field import GF, FieldSpec, embed_element, lcm
from .local_higgs import FlaggedLattice, StrongParabolicEndo, char_poly, random_strong_parabolic
from .series import INF, AtLeast, SeriesPolynomial, TruncatedSeries, product, resultant_valuation

DEFAULT_EXTENSION_CAP = 6


@dataclass(frozen=True)
class Edge:
    length: int
    rise: int

    @property
    def slope(self) -> Fraction:
        return Fraction(self.rise, self.length)

    @property
    def steps(self) -> int:
        """Number of lattice steps along the edge."""
        return gcd(self.length, self.rise)


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple
    edges: tuple
    # roots known to vanish to the working precision (b_r, ... all zero)
    tail: int = 0

    @property
    def slopes(self) -> list[Fraction]:
        return [e.slope for e in self.edges]

    def height_at(self, i: int):
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            if x0 <= i <= x1:
                return Fraction(y0) + Fraction(y1 - y0, x1 - x0) * (i - x0)
        return None

    def to_literal(self):
        return {"vertices": [list(v) for v in self.vertices],
                "edges": [[e.length, e.rise] for e in self.edges], "tail": self.tail}


def _lower_hull(points):
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly below the chord
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _polygon_from_points(points, r: int) -> NewtonPolygon:
    hull = _lower_hull(points)
    edges = tuple(Edge(x1 - x0, y1 - y0) for (x0, y0), (x1, y1) in zip(hull, hull[1:]))
    return NewtonPolygon(tuple(hull), edges, r - hull[-1][0])


def newton_polygon(f: SeriesPolynomial) -> NewtonPolygon:
    if not f.is_monic():
        raise ValueError("newton_polygon expects a monic polynomial")
    r = f.degree
    points, unknown = [], []
    for i, c in enumerate(f.coeffs):
        v = c.valuation
        if v == INF:
            unknown.append((i, c.prec))
        else:
            points.append((i, v))
    poly = _polygon_from_points(points, r)
    for i, prec in unknown:
        h = poly.height_at(i)
        if h is not None and prec <= h:
            raise PrecisionTooLow(f"b_{i} is zero only to t^{prec}; the polygon needs more than t^{h}")
    return poly


def expected_polygon(gamma: LevelFunction | Sequence[int]) -> NewtonPolygon:
    """Polygon of a polynomial whose ``b_i`` have valuation exactly ``gamma_i``."""
    gamma = tuple(gamma)
    return _polygon_from_points([(0, 0)] + [(i, g) for i, g in enumerate(gamma, 1)], len(gamma))


@dataclass(frozen=True)
class EdgeData:
    edge: Edge
    start: tuple
    # edge polynomial in w, low degree first; degree = edge.steps
    polynomial: tuple


def edge_data(f: SeriesPolynomial, polygon: NewtonPolygon | None = None) -> list[EdgeData]:
    polygon = polygon or newton_polygon(f)
    out = []
    for (x0, y0), e in zip(polygon.vertices, polygon.edges):
        k = e.steps
        b, a = e.length // k, e.rise // k
        phi = [0] * (k + 1)
        for j in range(k + 1):
            c = f.coeffs[x0 + j * b]
            h = y0 + j * a
            if c.prec <= h:
                raise PrecisionTooLow(f"coefficient b_{x0 + j * b} unknown at t^{h}")
            phi[k - j] = c.coeffs[h] if h < len(c.coeffs) else 0
        out.append(EdgeData(e, (x0, y0), tuple(phi)))
    return out


@dataclass(frozen=True)
class GenericityReport:
    ok: bool
    diagnostics: tuple = ()

    def __bool__(self):
        return self.ok


def genericity_check(f: SeriesPolynomial) -> GenericityReport:
    """Every edge polynomial has nonzero pairwise distinct roots."""
    try:
        poly = newton_polygon(f)
        edges = edge_data(f, poly)
    except PrecisionTooLow as exc:
        return GenericityReport(False, (f"precision: {exc}",))
    F = f.field
    diags = []
    if poly.tail:
        diags.append(f"{poly.tail} roots vanish to the working precision")
    for n, ed in enumerate(edges):
        phi = list(ed.polynomial)
        if phi[0] == 0:
            diags.append(f"edge {n} (slope {ed.edge.slope}): zero root")
        elif not F.is_squarefree(phi):
            diags.append(f"edge {n} (slope {ed.edge.slope}): repeated root")
    return GenericityReport(not diags, tuple(diags))


def parabolic_genericity(f: SeriesPolynomial, levi: LeviType | Sequence[int]) -> GenericityReport:
    """Generic for the flag type: polygon as expected from ``gamma`` and distinct edge roots.

    The expected polygon has slopes ``1/mu`` only, so every factor is Eisenstein.
    """
    gamma = level_function(sort_to_partition(levi))
    want = expected_polygon(gamma)
    try:
        got = newton_polygon(f)
    except PrecisionTooLow as exc:
        return GenericityReport(False, (f"precision: {exc}",))
    if got != want:
        return GenericityReport(False, (f"polygon {got.vertices} differs from {want.vertices}",))
    return genericity_check(f)


def splitting_degree(F: GF, phi) -> int:
    """Degree over ``F`` of the splitting field of a squarefree polynomial."""
    return lcm(*F.distinct_degree_degrees(F.poly_strip(phi)))


# -- factorization -----------------------------------------------------------

@dataclass(frozen=True)
class EisensteinFactor:
    factor: SeriesPolynomial
    degree: int

    def __post_init__(self):
        if self.factor.degree != self.degree:
            raise ValueError("degree does not match the factor")

    def sort_key(self):
        return (-self.degree, tuple(self.factor.constant_term().to_literal()))


def _lift_reference(FF: GF, psi, residues, pbar, idem, c0, c0inv, P):
    """Pure-Python lifting loop; ``G[n][k]`` is the ``s^k`` coefficient of factor ``n``."""
    nf = len(residues)
    # series in s: list indexed by s-degree of polys in y
    H = [[c0]]
    G = [[list(g)] for g in residues]
    # prefix products Pr[0] = H, Pr[n+1] = Pr[n] * G[n]
    Pr = [[[c0]]]
    for n, g in enumerate(residues):
        Pr.append([FF.poly_mul(Pr[n][0], g)])
    add, mul = FF.poly_add, FF.poly_mul
    for k in range(1, P):
        inner = []
        for n in range(nf):
            acc = []
            prev, gs = Pr[n], G[n]
            for u in range(1, k):
                if prev[u] and gs[k - u]:
                    acc = add(acc, mul(prev[u], gs[k - u]))
            inner.append(acc)
        cur = []
        for n in range(nf):
            cur = add(mul(cur, G[n][0]), inner[n])
        err = FF.poly_sub(psi[k], cur)
        dH, R = FF.poly_divmod(err, pbar)
        R = FF.poly_scale(R, c0inv)
        H.append(dH)
        for n in range(nf):
            G[n].append(FF.poly_rem(mul(R, idem[n]), residues[n]) if R else [])
        Pr[0].append(dH)
        for n in range(nf):
            val = add(add(mul(Pr[n][k], G[n][0]), mul(Pr[n][0], G[n][k])), inner[n])
            Pr[n + 1].append(val)
    return G


def _lift_compiled(FF: GF, fc, psi, residues, pbar, idem, c0, c0inv, r):
    """Same loop as the reference, compiled; returns an array ``(nf, P, r+1)``."""
    R = r + 1
    nf = len(residues)
    P = len(psi)
    res = np.zeros((nf, R), np.int64)
    rdeg = np.array([len(g) - 1 for g in residues], np.int64)
    for n, g in enumerate(residues):
        res[n, :len(g)] = g
    idem_arr = np.zeros((nf, R), np.int64)
    for n, e_n in enumerate(idem):
        idem_arr[n, :len(e_n)] = e_n
    pb = np.zeros(R, np.int64)
    pb[:len(pbar)] = pbar
    return fastpath._lift_core(np.array(psi, np.int64).reshape(P, R), res, rdeg, pb, len(pbar) - 1,
                               idem_arr, c0, c0inv, fc)


def _lists_to_array(G, R: int):
    arr = np.zeros((len(G), len(G[0]), R), np.int64)
    for n, rows in enumerate(G):
        for k, g in enumerate(rows):
            arr[n, k, :len(g)] = g
    return arr


def _lift_edge(FF: GF, f: SeriesPolynomial, start, a: int, b: int, steps: int, roots):
    """Hensel-lift the residue factors ``y^b - zeta`` of one edge; see module docstring."""
    r = f.degree
    i0, h0 = start
    i1 = i0 + steps * b
    m = b * h0 + a * (r - i0)
    P = min(b * f.coeffs[r - j].prec + a * j - m for j in range(r + 1))
    if P <= 0:
        raise PrecisionTooLow("edge too high for the working precision")
    psi = [[0] * (r + 1) for _ in range(P)]
    for j in range(r + 1):
        c = f.coeffs[r - j]
        for tk, val in enumerate(c.coeffs):
            if val:
                e = b * tk + a * j - m
                if e < 0:
                    raise AssertionError("coefficient below the Newton polygon")
                if e < P:
                    psi[e][j] = val
    residues = []
    if r - i1:
        residues.append([0] * (r - i1) + [1])
    first_root = len(residues)
    for z in roots:
        residues.append([FF.neg(z)] + [0] * (b - 1) + [1])
    pbar = [1]
    for g in residues:
        pbar = FF.poly_mul(pbar, g)
    c0 = psi[0][r - i0]
    if FF.poly_strip(psi[0]) != FF.poly_scale(pbar, c0):
        raise AssertionError("residue factorization does not match the edge data")
    c0inv = FF.inv(c0)
    idem = []
    for n, g in enumerate(residues):
        cof = FF.poly_divmod(pbar, g)[0]
        one, e_n, _ = FF.poly_xgcd(cof, g)
        if one != [1]:
            raise GenericityViolation("residue factors are not coprime")
        idem.append(FF.poly_rem(e_n, g))
    nf = len(residues)
    fc = fastpath.field_context(FF) if fastpath.ENABLED else None
    if fc is not None:
        G = _lift_compiled(FF, fc, psi, residues, pbar, idem, c0, c0inv, r)
    else:
        G = _lists_to_array(_lift_reference(FF, psi, residues, pbar, idem, c0, c0inv, P), r + 1)
    # back to lambda over k[[t]]: the s^k y^j term of a factor is t^((k + a(b-j))/b) lambda^j
    out = []
    tprec = -(-(P + a) // b)
    for n in range(first_root, nf):
        coeffs_t = []
        for j in range(b):
            col = G[n, :, j]
            ks = np.flatnonzero(col)
            es = ks + a * (b - j)
            if (es % b).any():
                raise NoConvergence("lifted factor is not defined over k[[t]]")
            series = [0] * tprec
            for e, k in zip((es // b).tolist(), ks.tolist()):
                if e < tprec:
                    series[e] = int(col[k])
            coeffs_t.append(TruncatedSeries(FF, series, tprec))
        out.append(SeriesPolynomial.from_low(coeffs_t + [TruncatedSeries.one(FF, tprec)]))
    return out


def factor_field(f: SeriesPolynomial, extension_cap: int = DEFAULT_EXTENSION_CAP) -> GF:
    """Smallest field containing every edge root, as an extension of the base field."""
    F = f.field
    degs = [splitting_degree(F, ed.polynomial) for ed in edge_data(f)]
    e = lcm(*degs)
    if e > extension_cap:
        raise ExtensionCapExceeded(f"edge roots need degree {e} > cap {extension_cap}")
    return GF.get(F.p, F.m * e)


def factor_spectral(f: SeriesPolynomial, extension_cap: int = DEFAULT_EXTENSION_CAP,
                    check: bool = True) -> list[EisensteinFactor]:
    """Split a generic ``f`` into monic factors, one per edge root.

    Factors live over the splitting field of the edge polynomials and are
    sorted by degree (descending), then by constant term.
    """
    report = genericity_check(f)
    if not report:
        raise GenericityViolation("; ".join(report.diagnostics))
    F = f.field
    FF = factor_field(f, extension_cap)
    fe = f if FF is F else f.embed(FF)
    factors = []
    for ed in edge_data(f):
        k = ed.edge.steps
        b, a = ed.edge.length // k, ed.edge.rise // k
        phi = [embed_element(F, FF, c) for c in ed.polynomial]
        roots = FF.roots(phi)
        if len(roots) != k:
            raise AssertionError("edge polynomial does not split in the factor field")
        for g in _lift_edge(FF, fe, ed.start, a, b, k, roots):
            factors.append(EisensteinFactor(g, b))
    factors.sort(key=EisensteinFactor.sort_key)
    if check:
        polys = [e.factor for e in factors]
        # every factor coefficient is known to the same precision n
        n = min(min(c.prec for g in polys for c in g.coeffs), min(c.prec for c in fe.coeffs))
        ok = fastpath.product_agrees(fe, polys, n)
        if ok is None:
            ok = product(polys).agrees(fe, n)
        if not ok:
            raise NoConvergence("factors do not multiply back to f")
    return factors


@dataclass(frozen=True)
class BranchProfile:
    degrees: tuple

    @property
    def branch_count(self) -> int:
        return len(self.degrees)

    @property
    def rank(self) -> int:
        return sum(self.degrees)


def ramification_profile(f: SeriesPolynomial, extension_cap: int = DEFAULT_EXTENSION_CAP) -> BranchProfile:
    """Branch degrees of the spectral germ, read off the factorization."""
    fac = factor_spectral(f, extension_cap)
    return BranchProfile(tuple(sorted((e.degree for e in fac), reverse=True)))


def pairwise_delta(factors: Sequence[SeriesPolynomial | EisensteinFactor]) -> int:
    polys = [x.factor if isinstance(x, EisensteinFactor) else x for x in factors]
    total = 0
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            v = resultant_valuation(polys[i], polys[j])
            if isinstance(v, AtLeast):
                raise PrecisionTooLow(f"branches {i} and {j} meet beyond the working precision")
            total += v
    return total


def local_delta(f: SeriesPolynomial, extension_cap: int = DEFAULT_EXTENSION_CAP) -> int:
    """Sum of pairwise intersection multiplicities of the branches."""
    return pairwise_delta(factor_spectral(f, extension_cap))


# -- the reverse construction -------------------------------------------------

@dataclass
class LocalHiggsTriple:
    """``V = sum_i O[lambda]/(f_i)`` with ``theta = lambda`` in a flag-adapted basis.

    ``basis[k] = (i, e)`` says the ``k``-th basis vector is ``lambda^e`` in the
    ``i``-th summand.
    """

    endo: StrongParabolicEndo
    basis: list
    factors: list

    @property
    def lattice(self) -> FlaggedLattice:
        return self.endo.lattice

    @property
    def matrix(self):
        return self.endo.matrix


def bnr_reverse(factors: Sequence[SeriesPolynomial | EisensteinFactor],
                levi: LeviType | Sequence[int]) -> LocalHiggsTriple:
    levi = levi if isinstance(levi, LeviType) else LeviType(tuple(levi))
    polys = [x.factor if isinstance(x, EisensteinFactor) else x for x in factors]
    polys = sorted(polys, key=lambda g: -g.degree)
    mu = conjugate(sort_to_partition(levi))
    if tuple(g.degree for g in polys) != mu.parts:
        raise DegreeMismatch(f"factor degrees {[g.degree for g in polys]} vs conjugate partition {mu.parts}")
    F = polys[0].field
    prec = min(g.prec for g in polys)
    c = branch_steps(levi)
    basis = []
    for j, m in enumerate(levi.multiplicities):
        for i in range(m):
            basis.append((i, c[i][j]))
    index = {v: k for k, v in enumerate(basis)}
    r = levi.rank
    zero = TruncatedSeries.zero(F, prec)
    mat = [[zero] * r for _ in range(r)]
    for col, (i, e) in enumerate(basis):
        g = polys[i]
        if e + 1 < g.degree:
            mat[index[(i, e + 1)]][col] = TruncatedSeries.one(F, prec)
        else:
            # lambda^mu = -(b_1 lambda^(mu-1) + ... + b_mu)
            for k in range(g.degree):
                mat[index[(i, k)]][col] = -g.coeffs[g.degree - k].with_precision(prec)
    lattice = FlaggedLattice(levi, FieldSpec(F.p, F.m), prec)
    return LocalHiggsTriple(StrongParabolicEndo(mat, lattice), basis, polys)


# -- samplers ----------------------------------------------------------------

def random_generic_spectral(F: GF, levi: LeviType | Sequence[int], prec: int, seed: int,
                            max_tries: int = 100) -> SeriesPolynomial:
    """``b_i = t^gamma_i * (unit + ...)`` with random coefficients, resampled until generic."""
    gamma = level_function(sort_to_partition(levi))
    rng = random.Random(seed)
    for _ in range(max_tries):
        low = []
        for g in gamma:
            coeffs = [0] * g + [F.random_nonzero(rng)] + [F.random(rng) for _ in range(max(prec - g - 1, 0))]
            low.append(TruncatedSeries(F, coeffs[:prec], prec))
        f = SeriesPolynomial.monic(F, low, prec)
        if genericity_check(f):
            return f
    raise GenericityViolation(f"no generic sample in {max_tries} tries")


def random_generic_higgs(lattice: FlaggedLattice, seed: int, max_tries: int = 100,
                        extension_cap: int = DEFAULT_EXTENSION_CAP):
    """A random strongly parabolic ``theta`` whose char poly is parabolic-generic.

    Tries ``seed`` first, then seeds drawn from ``random.Random(seed)``.
    Returns ``(theta, f, factors)``.
    """
    rng = random.Random(seed)
    s = seed
    for _ in range(max_tries):
        theta = random_strong_parabolic(lattice, s)
        f = char_poly(theta)
        if parabolic_genericity(f, lattice.levi):
            return theta, f, factor_spectral(f, extension_cap)
        s = rng.getrandbits(64)
    raise GenericityViolation(f"no parabolic-generic sample in {max_tries} tries")


def random_eisenstein(F: GF, degree: int, prec: int, rng: random.Random, const1: int | None = None):
    low = []
    for k in range(degree):
        coeffs = [0] + [F.random(rng) for _ in range(prec - 1)]
        low.append(coeffs)
    # low[0] is the constant term
    low[0][1] = const1 if const1 is not None else F.random_nonzero(rng)
    return SeriesPolynomial.from_low([TruncatedSeries(F, c, prec) for c in low]
                                     + [TruncatedSeries.one(F, prec)])


def random_eisenstein_tuple(F: GF, degrees: Sequence[int], prec: int, seed: int):
    """Eisenstein factors of the given degrees; equal degrees get distinct ``t``-coefficients."""
    rng = random.Random(seed)
    used: dict[int, set] = {}
    out = []
    for d in degrees:
        seen = used.setdefault(d, set())
        if len(seen) >= F.q - 1:
            raise ConfigError(f"field of order {F.q} too small for {len(seen) + 1} factors of degree {d}")
        while True:
            c = F.random_nonzero(rng)
            if c not in seen:
                break
        seen.add(c)
        out.append(random_eisenstein(F, d, prec, rng, c))
    return out
