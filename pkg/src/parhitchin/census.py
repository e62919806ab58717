"""Closed-form global invariants of parabolic Hitchin systems.

Everything here is exact integer or rational arithmetic.  A marked point
contributes through its Levi type only (and through its weights for the
parabolic degree), so most quantities are ``global term + sum over points``.
Single-point statements (normalized genus, BNR degree) are extended to
several points additively; reports label those values as extensions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

from .combinatorics import (LeviType, compositions, flag_dimension, level_function,
                            sort_to_partition, weyl_coset_count)
from .errors import ConfigError, CountOverflow

EXTENSION_LABEL = "extension beyond single-point statement"


def _even_weights(sigma: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(j, sigma) for j in range(sigma + 1))


@dataclass(frozen=True)
class MarkedPoint:
    """A marked point: Levi type plus weights ``0 = a_0 < ... < a_sigma = 1``.

    When ``weights`` is omitted the evenly spaced weights ``j / sigma`` are used.
    """

    levi: LeviType
    weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        lt = self.levi if isinstance(self.levi, LeviType) else LeviType(tuple(self.levi))
        object.__setattr__(self, "levi", lt)
        ws = _even_weights(lt.length) if self.weights is None else tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if len(ws) != lt.length + 1:
            raise ConfigError(f"need {lt.length + 1} weights for levi {lt.multiplicities}, got {len(ws)}")
        if ws[0] != 0 or ws[-1] != 1:
            raise ConfigError("weights must start at 0 and end at 1")
        if any(b <= a for a, b in zip(ws, ws[1:])):
            raise ConfigError(f"weights must be strictly increasing: {ws}")


@dataclass(frozen=True)
class ParabolicData:
    """Genus, rank, degree and marked points.

    ``characteristic`` is the characteristic of the ground field when known;
    characteristic 2 requires ``rank >= 3``.
    """

    genus: int
    rank: int
    degree: int = 0
    points: tuple[MarkedPoint, ...] = ()
    characteristic: int | None = None

    def __post_init__(self):
        pts = tuple(p if isinstance(p, MarkedPoint) else MarkedPoint(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if self.genus < 2:
            raise ConfigError(f"genus must be >= 2, got {self.genus}")
        if self.rank < 1:
            raise ConfigError(f"rank must be >= 1, got {self.rank}")
        if self.characteristic == 2 and self.rank < 3:
            raise ConfigError("characteristic 2 requires rank >= 3")
        for pt in pts:
            if pt.levi.rank != self.rank:
                raise ConfigError(f"levi {pt.levi.multiplicities} does not have rank {self.rank}")
        object.__setattr__(self, "_flag_total", sum(_flag_dim(p.levi.multiplicities) for p in pts))
        object.__setattr__(self, "_gamma_total", sum(_gamma_sum(p.levi.multiplicities) for p in pts))

    @property
    def deg_D(self) -> int:
        return len(self.points)

    @classmethod
    def from_levis(cls, genus, rank, degree=0, levis: Sequence = (), characteristic=None):
        return cls(genus, rank, degree, tuple(MarkedPoint(LeviType(tuple(lt))) for lt in levis),
                   characteristic)


# -- per-point terms ---------------------------------------------------------

@lru_cache(maxsize=None)
def _gamma_sum(ms: tuple[int, ...]) -> int:
    return sum(level_function(sort_to_partition(ms)).values)


@lru_cache(maxsize=None)
def _flag_dim(ms: tuple[int, ...]) -> int:
    return flag_dimension(ms)


def _sum_flag(pd: ParabolicData) -> int:
    return pd._flag_total


def _sum_gamma(pd: ParabolicData) -> int:
    return pd._gamma_total


# -- invariants --------------------------------------------------------------

def par_degree(pd: ParabolicData, levi_subdims: Sequence[Sequence[int]] | None = None) -> Fraction:
    """``deg E + sum_x sum_j a_j(x) m^j(x)``.

    ``levi_subdims`` replaces the jump dimensions at each point, e.g. by the
    induced flag of a subbundle; it must list one tuple per marked point.
    """
    if levi_subdims is None:
        dims = [p.levi.multiplicities for p in pd.points]
    else:
        dims = [tuple(d) for d in levi_subdims]
        if len(dims) != len(pd.points):
            raise ConfigError("levi_subdims needs one entry per marked point")
    total = Fraction(pd.degree)
    for pt, ms in zip(pd.points, dims):
        if len(ms) != pt.levi.length:
            raise ConfigError(f"subdims {ms} do not match levi {pt.levi.multiplicities}")
        total += sum(a * m for a, m in zip(pt.weights[1:], ms))
    return total


def par_slope(pd: ParabolicData, levi_subdims=None) -> Fraction:
    """Parabolic degree over rank; with ``levi_subdims`` the rank is theirs."""
    rank = pd.rank if not levi_subdims else sum(levi_subdims[0])
    return par_degree(pd, levi_subdims) / rank


def dim_moduli(pd: ParabolicData) -> int:
    r, g = pd.rank, pd.genus
    return (g - 1) * r * r + 1 + _sum_flag(pd)


def dim_higgs(pd: ParabolicData) -> int:
    r, g = pd.rank, pd.genus
    return 2 * (g - 1) * r * r + 2 + 2 * _sum_flag(pd)


def dim_higgs_weak(pd: ParabolicData) -> int:
    r, g = pd.rank, pd.genus
    return (2 * g - 2 + pd.deg_D) * r * r + 1


def dim_hitchin_base(pd: ParabolicData) -> int:
    r, g = pd.rank, pd.genus
    return r * r * (g - 1) + r * (r + 1) * pd.deg_D // 2


def dim_parabolic_base(pd: ParabolicData) -> int:
    r, g = pd.rank, pd.genus
    return 1 + r * r * (g - 1) + r * (r + 1) * pd.deg_D // 2 - _sum_gamma(pd)


def genus_spectral(pd: ParabolicData) -> int:
    r, g = pd.rank, pd.genus
    return 1 + r * r * (g - 1) + r * (r - 1) * pd.deg_D // 2


def genus_normalized(pd: ParabolicData) -> int:
    r, g = pd.rank, pd.genus
    return r * r * (g - 1) + 1 + _sum_flag(pd)


def local_delta_sum(pd: ParabolicData) -> int:
    """``sum_x sum_j m^j(x) (m^j(x) - 1) / 2``."""
    return sum(m * (m - 1) // 2 for p in pd.points for m in p.levi.multiplicities)


def bnr_degree(pd: ParabolicData) -> int:
    r, g = pd.rank, pd.genus
    return (r * r - r) * (g - 1) + _sum_flag(pd) + pd.degree


def weak_fiber_components(pd: ParabolicData, limit: int | None = None) -> int:
    """Product over points of ``|W / W_P|``; raises CountOverflow past ``limit``."""
    total = 1
    for p in pd.points:
        total *= weyl_coset_count(p.levi, limit=limit)
        if limit is not None and total > limit:
            raise CountOverflow(f"component count {total} exceeds limit {limit}")
    return total


def nilpotent_cone_dims(pd: ParabolicData) -> tuple[int, int]:
    r, g = pd.rank, pd.genus
    return dim_moduli(pd), r * r * (g - 1) + 1 + r * (r - 1) * pd.deg_D // 2


def sl_variant_base_dim(pd: ParabolicData) -> int:
    return dim_parabolic_base(pd) - pd.genus


# -- report ------------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator}
    return v


@dataclass
class CensusReport:
    values: dict
    extensions: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations

    def __getitem__(self, key):
        return self.values[key]

    def to_json(self) -> dict:
        out = {k: _jsonable(v) for k, v in self.values.items()}
        out["extensions"] = list(self.extensions)
        out["violations"] = list(self.violations)
        return out


def identity_violations(pd: ParabolicData) -> list[str]:
    """Names of the built-in identities that fail for ``pd`` (normally empty)."""
    bad = []
    if 2 * dim_parabolic_base(pd) != dim_higgs(pd):
        bad.append("half_dimension")
    if dim_higgs(pd) != 2 * dim_moduli(pd):
        bad.append("higgs_twice_moduli")
    delta = genus_spectral(pd) - genus_normalized(pd)
    if delta != local_delta_sum(pd) or delta < 0:
        bad.append("delta_sum")
    if pd.points and dim_parabolic_base(pd) > dim_hitchin_base(pd):
        bad.append("base_inequality")
    trivial = all(p.levi.length == 1 for p in pd.points)
    if (weak_fiber_components(pd) == 1) != trivial:
        bad.append("components_trivial_flag")
    return bad


# report order; also the row order of the human-readable table
CENSUS_FIELDS = ("genus", "rank", "degree", "deg_D", "par_degree", "par_slope", "dim_moduli",
                 "dim_higgs", "dim_higgs_weak", "dim_hitchin_base", "dim_parabolic_base",
                 "genus_spectral", "genus_normalized", "delta", "bnr_degree", "weak_fiber_components",
                 "dim_nilpotent_cone", "dim_nilpotent_cone_weak", "sl_variant_base_dim")


def census(pd: ParabolicData, limit: int | None = None) -> CensusReport:
    nil, nil_weak = nilpotent_cone_dims(pd)
    values = {
        "genus": pd.genus,
        "rank": pd.rank,
        "degree": pd.degree,
        "deg_D": pd.deg_D,
        "par_degree": par_degree(pd),
        "par_slope": par_slope(pd),
        "dim_moduli": dim_moduli(pd),
        "dim_higgs": dim_higgs(pd),
        "dim_higgs_weak": dim_higgs_weak(pd),
        "dim_hitchin_base": dim_hitchin_base(pd),
        "dim_parabolic_base": dim_parabolic_base(pd),
        "genus_spectral": genus_spectral(pd),
        "genus_normalized": genus_normalized(pd),
        "delta": genus_spectral(pd) - genus_normalized(pd),
        "bnr_degree": bnr_degree(pd),
        "weak_fiber_components": weak_fiber_components(pd, limit=limit),
        "dim_nilpotent_cone": nil,
        "dim_nilpotent_cone_weak": nil_weak,
        "sl_variant_base_dim": sl_variant_base_dim(pd),
    }
    ext = []
    if pd.deg_D > 1:
        ext = [f"genus_normalized: {EXTENSION_LABEL}", f"bnr_degree: {EXTENSION_LABEL}",
               f"delta: {EXTENSION_LABEL}"]
    return CensusReport(values, ext, identity_violations(pd))


# -- sweeps ------------------------------------------------------------------

def parabolic_data_sweep(max_genus: int, max_rank: int, max_points: int):
    """Every ParabolicData with ``2 <= g <= max_genus``, ``r <= max_rank`` and
    ``deg D <= max_points``, one per multiset of Levi types.

    The invariants are symmetric in the marked points, so unordered point
    sets cover all ordered ones.
    """
    for r in range(1, max_rank + 1):
        points = [MarkedPoint(lt) for lt in compositions(r)]
        for k in range(max_points + 1):
            for pts in combinations_with_replacement(points, k):
                base = ParabolicData(2, r, 0, pts)
                yield base
                for g in range(3, max_genus + 1):
                    # only the genus changes and it stays valid, so skip re-validation
                    pd = object.__new__(ParabolicData)
                    pd.__dict__.update(base.__dict__, genus=g)
                    yield pd
