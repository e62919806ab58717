"""Seeded randomized checks, one trial at a time.

Every experiment is a function ``(ctx, seed) -> TrialOutcome``.  A trial is
either a pass, a failure (with enough data to replay it), or not applicable
when the sample falls outside the hypotheses of the property being checked
(e.g. a non-generic characteristic polynomial for the decomposition).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .census import ParabolicData, identity_violations
from .combinatorics import LeviType, conjugate, level_function, sort_to_partition
from .errors import ParHitchinError
from .field import GF
from .local_higgs import (FlaggedLattice, char_poly, decompose, is_strongly_parabolic,
                          jordan_type_mod_t, random_strong_parabolic, verify_valuation_bounds)
from .series import INF, AtLeast, product
from .spectral import (DEFAULT_EXTENSION_CAP, bnr_reverse, factor_spectral, local_delta,
                       parabolic_genericity, random_eisenstein_tuple, random_generic_spectral,
                       ramification_profile)

PASS, FAIL, NOT_APPLICABLE = "pass", "fail", "not_applicable"


@dataclass
class TrialContext:
    field: GF
    precision: int
    levi: LeviType
    parabolic: ParabolicData | None = None
    extension_cap: int = DEFAULT_EXTENSION_CAP

    @property
    def lattice(self) -> FlaggedLattice:
        return FlaggedLattice(self.levi, self.field.spec, self.precision)

    @property
    def mu(self) -> tuple[int, ...]:
        return conjugate(sort_to_partition(self.levi)).parts


@dataclass
class TrialOutcome:
    status: str
    expected: object = None
    actual: object = None
    theta: list | None = None
    char_poly: list | None = None
    error: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def record(self) -> dict:
        out = {"status": self.status, "expected": self.expected, "actual": self.actual}
        if self.theta is not None:
            out["theta"] = self.theta
        if self.char_poly is not None:
            out["char_poly"] = self.char_poly
        if self.error is not None:
            out["error"] = self.error
        out.update(self.extra)
        return out


def _val(v):
    if isinstance(v, AtLeast):
        return f">={v.cap}"
    return "inf" if v == INF else v


def _error(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}"


def _guarded(fn):
    """Turn library errors into failure records instead of crashes."""
    def wrapper(ctx: TrialContext, seed: int) -> TrialOutcome:
        try:
            return fn(ctx, seed)
        except ParHitchinError as exc:
            return TrialOutcome(FAIL, error=_error(exc))
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _sample(ctx: TrialContext, seed: int):
    theta = random_strong_parabolic(ctx.lattice, seed)
    return theta, char_poly(theta)


def _generic_sample(ctx: TrialContext, seed: int):
    """``(theta, f, factors)`` or ``None`` when ``f`` is not parabolic-generic."""
    theta, f = _sample(ctx, seed)
    if not parabolic_genericity(f, ctx.levi):
        return theta, f, None
    return theta, f, factor_spectral(f, ctx.extension_cap)


@_guarded
def valuation_bounds(ctx: TrialContext, seed: int) -> TrialOutcome:
    """``v(b_i) >= gamma_i`` for the characteristic polynomial of a random theta."""
    theta, f = _sample(ctx, seed)
    gamma = level_function(sort_to_partition(ctx.levi)).values
    rep = verify_valuation_bounds(f, gamma)
    status = PASS if rep.passed else FAIL
    return TrialOutcome(status, list(gamma), [_val(v) for _, v, _, _ in rep.entries],
                        theta.to_literal(), f.to_literal(), extra={"sharp": rep.sharp})


@_guarded
def decomposition(ctx: TrialContext, seed: int) -> TrialOutcome:
    """Kernels of the factors span ``V`` and the block polynomials recover ``f``."""
    theta, f, factors = _generic_sample(ctx, seed)
    if factors is None:
        return TrialOutcome(NOT_APPLICABLE)
    res = decompose(theta, [x.factor for x in factors])
    det_v = res.assembly_det_valuation()
    check_prec = ctx.precision - ctx.levi.rank
    prod = product(res.block_char_polys)
    target = f.embed(prod.field) if prod.field is not f.field else f
    agrees = prod.prec >= check_prec and prod.agrees(target, check_prec)
    actual = {"det_valuation": _val(det_v), "blocks_agree": agrees,
              "block_sizes": res.block_sizes}
    expected = {"det_valuation": 0, "blocks_agree": True,
                "block_sizes": [x.degree for x in factors]}
    status = PASS if actual == expected else FAIL
    return TrialOutcome(status, expected, actual, theta.to_literal(), f.to_literal())


@_guarded
def jordan_type(ctx: TrialContext, seed: int) -> TrialOutcome:
    """On generic samples ``theta mod t`` has Jordan type the conjugate partition."""
    theta, f = _sample(ctx, seed)
    if not parabolic_genericity(f, ctx.levi):
        return TrialOutcome(NOT_APPLICABLE)
    got = jordan_type_mod_t(theta).block_sizes.parts
    status = PASS if got == ctx.mu else FAIL
    return TrialOutcome(status, list(ctx.mu), list(got), theta.to_literal(), f.to_literal())


@_guarded
def polygon_profile(ctx: TrialContext, seed: int) -> TrialOutcome:
    """Branch degrees of a generic spectral germ form the conjugate partition."""
    f = random_generic_spectral(ctx.field, ctx.levi, ctx.precision, seed)
    prof = ramification_profile(f, ctx.extension_cap)
    n1 = sort_to_partition(ctx.levi).parts[0]
    expected = {"degrees": list(ctx.mu), "branch_count": n1}
    actual = {"degrees": list(prof.degrees), "branch_count": prof.branch_count}
    status = PASS if expected == actual else FAIL
    return TrialOutcome(status, expected, actual, char_poly=f.to_literal())


@_guarded
def delta_match(ctx: TrialContext, seed: int) -> TrialOutcome:
    """Local delta invariant equals ``sum m_j (m_j - 1) / 2``."""
    f = random_generic_spectral(ctx.field, ctx.levi, ctx.precision, seed)
    expected = sum(m * (m - 1) // 2 for m in ctx.levi.multiplicities)
    got = local_delta(f, ctx.extension_cap)
    return TrialOutcome(PASS if got == expected else FAIL, expected, got, char_poly=f.to_literal())


@_guarded
def bnr_roundtrip(ctx: TrialContext, seed: int) -> TrialOutcome:
    """Eisenstein factors -> theta -> factors again, with matching degrees."""
    factors = random_eisenstein_tuple(ctx.field, ctx.mu, ctx.precision, seed)
    triple = bnr_reverse(factors, ctx.levi)
    f = char_poly(triple.endo)
    strongly = is_strongly_parabolic(triple.matrix, ctx.levi)
    matches = f.agrees(product(factors))
    recovered = factor_spectral(f, ctx.extension_cap)
    res = decompose(triple.matrix, [x.factor for x in recovered])
    expected = {"strongly_parabolic": True, "char_poly_matches": True, "degrees": list(ctx.mu)}
    actual = {"strongly_parabolic": strongly, "char_poly_matches": matches,
              "degrees": sorted(res.block_sizes, reverse=True)}
    status = PASS if expected == actual else FAIL
    return TrialOutcome(status, expected, actual, triple.endo.to_literal(), f.to_literal())


@_guarded
def census_identities(ctx: TrialContext, seed: int) -> TrialOutcome:
    """Built-in identities of the global census for the configured data."""
    if ctx.parabolic is None:
        return TrialOutcome(NOT_APPLICABLE)
    bad = identity_violations(ctx.parabolic)
    return TrialOutcome(PASS if not bad else FAIL, [], bad)


REGISTRY: dict[str, Callable[[TrialContext, int], TrialOutcome]] = {
    "valuation_bounds": valuation_bounds,
    "decomposition": decomposition,
    "jordan_type": jordan_type,
    "polygon_profile": polygon_profile,
    "bnr_roundtrip": bnr_roundtrip,
    "delta_match": delta_match,
    "census_identities": census_identities,
}
