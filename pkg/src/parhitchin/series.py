"""Truncated power series ``F[t]/(t^N)`` and polynomials over them.

Every :class:`TruncatedSeries` carries its own absolute precision: it is
known modulo ``t^prec``.  Products and quotients follow capped-absolute
rules, so a valuation read off a result is a certificate rather than an
artifact of truncation.  Nothing ever extends precision implicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NoConvergence, NotAUnit, NotCoprime, PrecisionTooLow
from .field import GF, FieldSpec, embed_element

DEFAULT_PRECISION = 32
INF = math.inf


def _mul_coeffs(F: GF, a, b, n):
    """First ``n`` coefficients of the product of coefficient lists."""
    la, lb = len(a), len(b)
    if F.m == 1:
        p = F.p
        out = [0] * n
        for i in range(min(la, n)):
            x = a[i]
            if x:
                lim = min(lb, n - i)
                for j in range(lim):
                    y = b[j]
                    if y:
                        out[i + j] += x * y
        return [c % p for c in out]
    out = [0] * n
    add, mul = F.add, F.mul
    for i in range(min(la, n)):
        x = a[i]
        if x:
            for j in range(min(lb, n - i)):
                y = b[j]
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return out


def _inv_coeffs(F: GF, a, n):
    """Inverse of a unit coefficient list to ``n`` terms (long division)."""
    inv0 = F.inv(a[0])
    out = [0] * n
    out[0] = inv0
    if F.m == 1:
        p = F.p
        for k in range(1, n):
            s = 0
            for j in range(1, min(k, len(a) - 1) + 1):
                s += a[j] * out[k - j]
            out[k] = (-s * inv0) % p
        return out
    for k in range(1, n):
        s = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j] and out[k - j]:
                s = F.add(s, F.mul(a[j], out[k - j]))
        out[k] = F.neg(F.mul(s, inv0))
    return out


class TruncatedSeries:
    """An element of ``F[[t]]`` known modulo ``t^prec``."""

    __slots__ = ("field", "coeffs", "prec", "_val")

    def __init__(self, field: GF, coeffs: Iterable[int], prec: int | None = None):
        coeffs = list(coeffs)
        if prec is None:
            prec = len(coeffs)
        if prec < 0:
            raise PrecisionTooLow(f"negative precision {prec}")
        if len(coeffs) < prec:
            coeffs += [0] * (prec - len(coeffs))
        self.field = field
        self.coeffs = tuple(coeffs[:prec])
        self.prec = prec
        self._val = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, field, prec):
        return cls(field, (), prec)

    @classmethod
    def one(cls, field, prec):
        return cls(field, (1,), prec)

    @classmethod
    def constant(cls, field, c, prec):
        return cls(field, (c,), prec)

    @classmethod
    def monomial(cls, field, c, k, prec):
        """``c * t^k`` to precision ``prec``."""
        if k >= prec:
            return cls(field, (), prec)
        return cls(field, [0] * k + [c], prec)

    @classmethod
    def from_literal(cls, field, literal: Sequence[int], prec: int):
        if len(literal) > prec:
            raise ValueError(f"literal has {len(literal)} terms, precision is {prec}")
        return cls(field, [field.from_int(c) if field.m == 1 else c % field.q
                           for c in literal], prec)

    def to_literal(self) -> list[int]:
        out = list(self.coeffs)
        while out and out[-1] == 0:
            out.pop()
        return out

    # -- valuation ------------------------------------------------------
    @property
    def valuation(self):
        """Index of the first nonzero coefficient, or ``inf`` if zero at this precision."""
        if self._val is None:
            v = INF
            for i, c in enumerate(self.coeffs):
                if c:
                    v = i
                    break
            self._val = v
        return self._val

    def val_lower(self) -> int:
        """Certified lower bound for the valuation (``prec`` when zero)."""
        v = self.valuation
        return self.prec if v == INF else v

    def is_zero(self) -> bool:
        return self.valuation == INF

    def is_unit(self) -> bool:
        return self.prec > 0 and self.coeffs[0] != 0

    def leading(self) -> int:
        """Coefficient at the valuation (the angular component)."""
        v = self.valuation
        if v == INF:
            raise PrecisionTooLow("leading coefficient of a series that is zero at this precision")
        return self.coeffs[v]

    def certify_valuation(self, bound: int | None = None) -> int:
        v = self.valuation
        if v == INF:
            raise PrecisionTooLow(f"valuation not certified below precision {self.prec}")
        return v

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries.constant(self.field, self.field.from_int(other), self.prec)
        if other.field is not self.field:
            raise ValueError(f"mixed fields {self.field} and {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        n = min(self.prec, other.prec)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if F.m == 1:
            p = F.p
            return TruncatedSeries(F, [(a[i] + b[i]) % p for i in range(n)], n)
        return TruncatedSeries(F, [F.add(a[i], b[i]) for i in range(n)], n)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return TruncatedSeries(F, [F.neg(c) for c in self.coeffs], self.prec)

    def __sub__(self, other):
        other = self._check(other)
        n = min(self.prec, other.prec)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if F.m == 1:
            p = F.p
            return TruncatedSeries(F, [(a[i] - b[i]) % p for i in range(n)], n)
        return TruncatedSeries(F, [F.sub(a[i], b[i]) for i in range(n)], n)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(self.field.from_int(other))
        if other.field is not self.field:
            raise ValueError(f"mixed fields {self.field} and {other.field}")
        n = min(self.prec + other.val_lower(), other.prec + self.val_lower(),
                max(self.prec, other.prec))
        return TruncatedSeries(self.field, _mul_coeffs(self.field, self.coeffs, other.coeffs, n), n)

    __rmul__ = __mul__

    def scale(self, c: int) -> "TruncatedSeries":
        """Multiply by a field element."""
        F = self.field
        return TruncatedSeries(F, [F.mul(x, c) for x in self.coeffs], self.prec)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``t^k``; precision grows by ``k`` only up to the cap."""
        n = self.prec + k
        return TruncatedSeries(self.field, [0] * k + list(self.coeffs), n)

    def exact_shift_down(self, k: int) -> "TruncatedSeries":
        """Divide by ``t^k``; the first ``k`` coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ArithmeticError(f"series not divisible by t^{k}")
        return TruncatedSeries(self.field, self.coeffs[k:], max(self.prec - k, 0))

    def inverse(self) -> "TruncatedSeries":
        if not self.is_unit():
            raise NotAUnit(f"series with valuation {self.valuation} is not a unit")
        return TruncatedSeries(self.field, _inv_coeffs(self.field, self.coeffs, self.prec), self.prec)

    def exact_div(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """``self / other`` when ``v(self) >= v(other)``; loses ``v(other)`` digits."""
        v = other.certify_valuation()
        if self.val_lower() < v:
            raise ArithmeticError("quotient is not integral")
        num = self.exact_shift_down(v) if v else self
        den = other.exact_shift_down(v) if v else other
        inv = TruncatedSeries(self.field, _inv_coeffs(self.field, den.coeffs, min(den.prec, num.prec)),
                              min(den.prec, num.prec))
        return num * inv

    def truncate(self, prec: int) -> "TruncatedSeries":
        if prec > self.prec:
            raise PrecisionTooLow(f"cannot raise precision from {self.prec} to {prec}")
        return TruncatedSeries(self.field, self.coeffs[:prec], prec)

    def with_precision(self, prec: int) -> "TruncatedSeries":
        """Truncate or zero-pad to ``prec``.  Padding picks a representative."""
        return TruncatedSeries(self.field, self.coeffs[:prec], prec)

    def agrees(self, other: "TruncatedSeries", prec: int | None = None) -> bool:
        n = min(self.prec, other.prec) if prec is None else prec
        if n > self.prec or n > other.prec:
            return False
        return self.coeffs[:n] == other.coeffs[:n]

    def embed(self, big: GF) -> "TruncatedSeries":
        return TruncatedSeries(big, [embed_element(self.field, big, c) for c in self.coeffs], self.prec)

    def __eq__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries.constant(self.field, self.field.from_int(other), self.prec)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.field is other.field and self.prec == other.prec
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.prec, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else (f"{c}*t" if i == 1 else f"{c}*t^{i}"))
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(t^{self.prec})"


def invert_unit(s: TruncatedSeries) -> TruncatedSeries:
    return s.inverse()


# -- polynomials ------------------------------------------------------------

class SeriesPolynomial:
    """Polynomial in ``lambda`` over the truncated series ring.

    ``coeffs`` is leading-first: ``coeffs[i]`` multiplies ``lambda^(deg - i)``,
    matching ``f = b_0 lambda^r + b_1 lambda^(r-1) + ... + b_r``.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, coeffs: Sequence[TruncatedSeries]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        self.field = coeffs[0].field
        self.coeffs = coeffs

    @classmethod
    def monic(cls, field: GF, lower: Sequence[TruncatedSeries], prec: int) -> "SeriesPolynomial":
        return cls((TruncatedSeries.one(field, prec),) + tuple(lower))

    @classmethod
    def from_literal(cls, field: GF, literal: Sequence[Sequence[int]], prec: int):
        """Arrays of coefficient arrays, leading coefficient first."""
        return cls([TruncatedSeries.from_literal(field, c, prec) for c in literal])

    @classmethod
    def from_low(cls, low: Sequence[TruncatedSeries]) -> "SeriesPolynomial":
        return cls(tuple(reversed(low)))

    def to_literal(self) -> list[list[int]]:
        return [c.to_literal() for c in self.coeffs]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def low(self) -> list[TruncatedSeries]:
        return list(reversed(self.coeffs))

    @property
    def prec(self) -> int:
        return min(c.prec for c in self.coeffs)

    def is_monic(self) -> bool:
        lead = self.coeffs[0]
        return lead.prec > 0 and lead.coeffs[0] == 1 and not any(lead.coeffs[1:])

    def b(self, i: int) -> TruncatedSeries:
        return self.coeffs[i]

    def constant_term(self) -> TruncatedSeries:
        return self.coeffs[-1]

    def __mul__(self, other: "SeriesPolynomial") -> "SeriesPolynomial":
        a, b = self.low, other.low
        out = [None] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                term = x * y
                out[i + j] = term if out[i + j] is None else out[i + j] + term
        return SeriesPolynomial.from_low(out)

    def __add__(self, other):
        a, b = self.low, other.low
        n = max(len(a), len(b))
        out = []
        for i in range(n):
            if i < len(a) and i < len(b):
                out.append(a[i] + b[i])
            else:
                out.append(a[i] if i < len(a) else b[i])
        return SeriesPolynomial.from_low(out)

    def __sub__(self, other):
        return self + SeriesPolynomial([-c for c in other.coeffs])

    def divmod_monic(self, g: "SeriesPolynomial"):
        """Division with remainder by a monic ``g``."""
        if not g.is_monic():
            raise ValueError("divisor must be monic")
        a = self.low
        dg = g.degree
        gl = g.low
        if len(a) - 1 < dg:
            return None, self
        q = [None] * (len(a) - dg)
        for i in range(len(a) - 1, dg - 1, -1):
            c = a[i]
            q[i - dg] = c
            for j in range(dg):
                a[i - dg + j] = a[i - dg + j] - c * gl[j]
        rem = a[:dg] if dg else [TruncatedSeries.zero(self.field, self.prec)]
        return SeriesPolynomial.from_low(q), SeriesPolynomial.from_low(rem)

    def with_precision(self, prec: int) -> "SeriesPolynomial":
        return SeriesPolynomial([c.with_precision(prec) for c in self.coeffs])

    def truncate(self, prec: int) -> "SeriesPolynomial":
        return SeriesPolynomial([c.truncate(prec) for c in self.coeffs])

    def embed(self, big: GF) -> "SeriesPolynomial":
        return SeriesPolynomial([c.embed(big) for c in self.coeffs])

    def agrees(self, other: "SeriesPolynomial", prec: int | None = None) -> bool:
        if self.degree != other.degree:
            return False
        return all(a.agrees(b, prec) for a, b in zip(self.coeffs, other.coeffs))

    def valuations(self) -> list:
        return [c.valuation for c in self.coeffs]

    def __eq__(self, other):
        if not isinstance(other, SeriesPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        d = self.degree
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero() and i:
                continue
            k = d - i
            mono = "" if k == 0 else ("lam" if k == 1 else f"lam^{k}")
            parts.append(f"({c!r})" + (f"*{mono}" if mono else ""))
        return "SeriesPolynomial(" + " + ".join(parts) + ")"


def linear_factor(field: GF, root: TruncatedSeries) -> SeriesPolynomial:
    """``lambda - root``."""
    return SeriesPolynomial.monic(field, [-root], root.prec)


def product(polys: Sequence[SeriesPolynomial]) -> SeriesPolynomial:
    out = polys[0]
    for g in polys[1:]:
        out = out * g
    return out


def is_eisenstein(f: SeriesPolynomial) -> bool:
    """Monic with all lower coefficients in ``tO`` and ``v(b_r) = 1``."""
    if not f.is_monic():
        raise ValueError("is_eisenstein expects a monic polynomial")
    if f.degree < 1:
        return False
    for c in f.coeffs[1:]:
        if c.prec < 1:
            raise PrecisionTooLow("precision 0 cannot decide membership in tO")
        if c.coeffs[0] != 0:
            return False
    last = f.coeffs[-1]
    if last.prec < 2:
        raise PrecisionTooLow("need precision >= 2 to certify v(b_r) = 1")
    return last.coeffs[1] != 0


@dataclass(frozen=True)
class AtLeast:
    """A valuation known only to be ``>= cap`` at the working precision."""

    cap: int

    def __ge__(self, other):
        return self.cap >= other

    def __repr__(self):
        return f">={self.cap}"


def resultant_valuation(f: SeriesPolynomial, g: SeriesPolynomial):
    """``v(Res(f, g))`` via the Sylvester determinant; :class:`AtLeast` if not certified."""
    from .linalg import det_valuation
    S = sylvester_matrix(f, g)
    return det_valuation(S)


def sylvester_matrix(f: SeriesPolynomial, g: SeriesPolynomial):
    m, n = f.degree, g.degree
    size = m + n
    F = f.field
    prec = min(f.prec, g.prec)
    zero = TruncatedSeries.zero(F, prec)
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(f.coeffs) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(g.coeffs) + [zero] * (size - n - 1 - i))
    return rows


def _bezout_matrix(g: SeriesPolynomial, h: SeriesPolynomial, prec: int):
    """Columns: ``g*lambda^k`` (k < deg h) then ``h*lambda^k`` (k < deg g); rows: lambda^0.."""
    F = g.field
    n = g.degree + h.degree
    zero = TruncatedSeries.zero(F, prec)
    cols = []
    for poly, count in ((g, h.degree), (h, g.degree)):
        low = [c.with_precision(prec) for c in poly.low]
        for k in range(count):
            col = [zero] * n
            for i, c in enumerate(low):
                if i + k < n:
                    col[i + k] = c
            cols.append(col)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def hensel_lift(f: SeriesPolynomial, g0: SeriesPolynomial, h0: SeriesPolynomial,
                max_iter: int = 64):
    """Lift ``f ~ g0*h0`` to a factorization ``f = g*h`` over the truncated ring.

    ``g0`` and ``h0`` are monic and need not be coprime modulo ``t``: with
    ``rho = v(Res(g0, h0))`` the Newton iteration converges once the
    starting error has valuation above ``2*rho``.  The factors are returned
    at precision ``N - rho`` where ``N`` is the precision of ``f``.
    """
    from .linalg import smith_form
    if not (f.is_monic() and g0.is_monic() and h0.is_monic()):
        raise ValueError("hensel_lift works with monic polynomials")
    if g0.degree + h0.degree != f.degree:
        raise ValueError("degrees of the initial split do not add up")
    F = f.field
    N = f.prec
    g, h = g0.with_precision(N), h0.with_precision(N)
    if g.degree == 0 or h.degree == 0:
        return (f, h) if h.degree == 0 else (g, f)
    rho = resultant_valuation(g, h)
    if isinstance(rho, AtLeast):
        raise NotCoprime(f"initial factors share a root to precision {rho.cap}")
    target = N - rho
    if target <= 0:
        raise PrecisionTooLow(f"precision {N} does not exceed resultant valuation {rho}")
    prev = -1
    for _ in range(max_iter):
        err = f - g * h
        err_low = [c.with_precision(N) for c in err.low[:f.degree]]
        v = min(c.val_lower() for c in err_low)
        if v >= target:
            return g.with_precision(target), h.with_precision(target)
        if v <= prev:
            raise NoConvergence(f"error valuation stuck at {v}")
        prev = v
        M = _bezout_matrix(g, h, N)
        sf = smith_form(M, want_u=True, want_v=True)
        U, D, V = sf.U, sf.D, sf.V
        if sf.rank < len(M):
            raise NotCoprime("Bezout system is singular at this precision")
        rhs = [sum((U[i][k] * err_low[k] for k in range(len(M))), TruncatedSeries.zero(F, N))
               for i in range(len(M))]
        y = []
        for i in range(len(M)):
            d = D[i]
            dv = d.certify_valuation()
            if rhs[i].val_lower() < dv:
                raise NoConvergence("correction is not integral; starting split too coarse")
            y.append(rhs[i].exact_shift_down(dv) if dv else rhs[i])
        x = [sum((V[i][k] * y[k] for k in range(len(M))), TruncatedSeries.zero(F, N)).with_precision(N)
             for i in range(len(M))]
        dh, dg = x[:h.degree], x[h.degree:]
        g = SeriesPolynomial.from_low([a + b for a, b in zip(g.low, dg)] + [g.coeffs[0]])
        h = SeriesPolynomial.from_low([a + b for a, b in zip(h.low, dh)] + [h.coeffs[0]])
        g, h = g.with_precision(N), h.with_precision(N)
    raise NoConvergence(f"no convergence after {max_iter} iterations")
