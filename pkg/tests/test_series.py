import random

import pytest
from hypothesis import given, strategies as st

from parhitchin.errors import NotAUnit, NotCoprime, PrecisionTooLow
from parhitchin.field import GF
from parhitchin.series import (INF, AtLeast, SeriesPolynomial, TruncatedSeries, hensel_lift,
                               invert_unit, is_eisenstein, linear_factor, product,
                               resultant_valuation)

F5, F7 = GF.get(5), GF.get(7)


def S(F, coeffs, prec):
    return TruncatedSeries(F, [F.from_int(c) for c in coeffs], prec)


def P(F, coeffs, prec):
    """Polynomial from coefficient lists, leading first."""
    return SeriesPolynomial([S(F, c, prec) for c in coeffs])


# -- oracle examples ---------------------------------------------------------

def test_invert_unit_examples():
    assert invert_unit(S(F5, [1, 1], 4)).to_literal() == [1, 4, 1, 4]
    for N in (1, 3, 7):
        assert invert_unit(S(F5, [1], N)) == S(F5, [1], N)
    # (2 + t)(3 + t) = 6 + 5t + t^2 = 1 mod (5, t^2)
    assert invert_unit(S(F5, [2, 1], 2)).to_literal() == [3, 1]


def test_invert_unit_rejects_non_units():
    with pytest.raises(NotAUnit):
        invert_unit(S(F5, [0, 1], 4))


def test_is_eisenstein_examples():
    assert is_eisenstein(P(F5, [[1], [0, 1], [0, 3]], 4))
    assert not is_eisenstein(P(F5, [[1], [-1]], 4))
    assert not is_eisenstein(P(F5, [[1], [0], [0, 0, 1]], 4))


def test_is_eisenstein_needs_precision():
    with pytest.raises(PrecisionTooLow):
        is_eisenstein(P(F5, [[1], [0]], 1))


def test_resultant_valuation_examples():
    N = 6
    assert resultant_valuation(P(F5, [[1], [0, 1]], N), P(F5, [[1], [0, 2]], N)) == 1
    f = P(F5, [[1], [0, 1], [0, 3]], N)
    assert isinstance(resultant_valuation(f, f), AtLeast)
    assert resultant_valuation(P(F5, [[1], [0], [0, 1]], N), P(F5, [[1], [0, -1]], N)) == 1


def test_hensel_lift_exact_split():
    N = 6
    g, h = P(F5, [[1], [0, -1]], N), P(F5, [[1], [0, -2]], N)
    f = P(F5, [[1], [0, -3], [0, 0, 2]], N)
    assert (g * h).agrees(f)
    a, b = hensel_lift(f, g, h)
    assert a.agrees(g, a.prec) and b.agrees(h, b.prec)
    assert (a * b).agrees(f, a.prec)


def test_hensel_lift_trivial_split():
    N = 5
    f = P(F5, [[1], [0, 1], [0, 3]], N)
    one = SeriesPolynomial([S(F5, [1], N)])
    a, b = hensel_lift(f, f, one)
    assert a == f and b.degree == 0


def test_hensel_lift_close_factors_f7():
    N = 6
    g = P(F7, [[1], [0, 1]], N)
    h = P(F7, [[1], [0, 1, 1]], N)
    f = g * h
    # the two factors agree mod t^2, so that split is not coprime
    with pytest.raises(NotCoprime):
        hensel_lift(f, g, P(F7, [[1], [0, 1]], N))
    # split mod t^3: v(Res) = 2, factors recovered at precision N - 2
    a, b = hensel_lift(f, g, h)
    assert a.prec == N - 2
    assert a.agrees(g, N - 2) and b.agrees(h, N - 2)


def test_hensel_lift_coprime_mod_t():
    rng = random.Random(3)
    N = 8
    for _ in range(20):
        g = SeriesPolynomial.monic(F7, [S(F7, [1] + [rng.randrange(7) for _ in range(N - 1)], N),
                                        S(F7, [2] + [rng.randrange(7) for _ in range(N - 1)], N)], N)
        h = SeriesPolynomial.monic(F7, [S(F7, [5] + [rng.randrange(7) for _ in range(N - 1)], N)], N)
        f = g * h
        a, b = hensel_lift(f, g.truncate(1).with_precision(N), h.truncate(1).with_precision(N))
        assert (a * b).agrees(f)
        assert a.agrees(g) and b.agrees(h)


# -- ring properties ---------------------------------------------------------

RING_FIELDS = [(5, 1), (7, 1), (101, 1), (3, 2)]


@pytest.mark.parametrize("p,m", RING_FIELDS)
def test_ring_axioms(p, m):
    F = GF.get(p, m)
    rng = random.Random(p + 10 * m)
    N = 6
    rand = lambda: TruncatedSeries(F, [F.random(rng) for _ in range(N)], N)
    for _ in range(500):
        a, b, c = rand(), rand(), rand()
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if a.is_unit():
            assert (a * b) * a.inverse() == b


series_inputs = st.tuples(st.lists(st.integers(0, 6), min_size=8, max_size=8),
                          st.lists(st.integers(0, 6), min_size=8, max_size=8),
                          st.integers(0, 3), st.integers(0, 3))


@given(series_inputs)
def test_valuation_additive(data):
    ca, cb, sa, sb = data
    N = 8
    a = TruncatedSeries(F7, [0] * sa + [1 + ca[0] % 6] + ca[1:], N)
    b = TruncatedSeries(F7, [0] * sb + [1 + cb[0] % 6] + cb[1:], N)
    assert a.valuation == sa and b.valuation == sb
    assert (a * b).valuation == sa + sb


def test_zero_has_infinite_valuation():
    assert TruncatedSeries.zero(F5, 4).valuation == INF


def test_precision_never_grows():
    a, b = S(F5, [1, 2, 3], 3), S(F5, [1, 2, 3, 4, 0], 5)
    assert (a * b).prec == 3 and (a + b).prec == 3


@given(st.lists(st.integers(0, 4), min_size=4, max_size=4),
       st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_resultant_symmetric(xs, ys):
    N = 4
    f = linear_factor(F5, S(F5, [0] + xs[:3], N)) * linear_factor(F5, S(F5, [0, 1] + xs[3:], N))
    g = linear_factor(F5, S(F5, ys, N))
    assert resultant_valuation(f, g) == resultant_valuation(g, f)


def test_literal_round_trip():
    f = P(F5, [[1], [0, 1, 2], [0, 3]], 4)
    lit = f.to_literal()
    assert SeriesPolynomial.from_literal(F5, lit, 4) == f
    assert product([f]) == f
