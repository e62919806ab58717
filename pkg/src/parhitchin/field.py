"""Finite fields F_{p^m} and univariate polynomials over them.

Elements are plain ints in ``[0, p^m)``: the base-``p`` digits are the
coefficients of the element in the power basis of ``F_p[x]/(phi)``.  For
``m == 1`` this is the usual residue.  ``phi`` is the smallest monic
irreducible of degree ``m`` in a fixed enumeration order, so the encoding
of a given ``(p, m)`` never changes between runs.

Polynomials over a field are lists of elements, lowest degree first, with
no trailing zeros (the zero polynomial is ``[]``).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

# fields at most this large get log/exp/Zech tables
_TABLE_LIMIT = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % d == 0:
            return n == d
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic must be prime, got {self.p}")
        if self.m < 1:
            raise ValueError("extension degree must be >= 1")

    @property
    def order(self) -> int:
        return self.p ** self.m

    def build(self) -> "GF":
        return GF.get(self.p, self.m)


# -- polynomials over the prime field, used only to pick the modulus --------

def _prime_poly_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _prime_poly_rem(out, mod, p)


def _prime_poly_rem(a, mod, p):
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    a = a[:dm] if dm else []
    while a and a[-1] == 0:
        a.pop()
    return a


def _prime_poly_gcd(a, b, p):
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        a, b = b, _prime_poly_rem(a, b, p)
    return a


def _strip(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _prime_poly_powmod(base, e, mod, p):
    result = [1]
    base = _prime_poly_rem(base, mod, p)
    while e:
        if e & 1:
            result = _prime_poly_mulmod(result, base, mod, p)
        e >>= 1
        if e:
            base = _prime_poly_mulmod(base, base, mod, p)
    return result


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible_prime(poly, p):
    """Rabin's test over F_p for a monic ``poly`` of degree m."""
    m = len(poly) - 1
    x = [0, 1]
    if _prime_poly_powmod(x, p ** m, poly, p) != x:
        return False
    for q in _prime_factors(m):
        h = _prime_poly_powmod(x, p ** (m // q), poly, p)
        diff = _strip([(a - b) % p for a, b in zip(h + [0] * (m + 1), x + [0] * (m + 1))])
        if len(_prime_poly_gcd(poly, diff, p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree m over F_p (coefficients low first).

    Candidates are enumerated by the integer whose base-p digits are the
    low coefficients; the first irreducible one wins.
    """
    if m == 1:
        return (0, 1)
    for code in range(p ** m):
        low = [(code // p ** i) % p for i in range(m)]
        if low[0] == 0:
            continue
        poly = low + [1]
        if _is_irreducible_prime(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")


@lru_cache(maxsize=None)
def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


@lru_cache(maxsize=None)
def _jit_kernels():
    """Compiled digit arithmetic for fields too large for log tables."""
    import numpy as np
    from numba import njit

    @njit(cache=True)
    def mul(a, b, p, m, phi):
        da = np.zeros(m, np.int64)
        db = np.zeros(m, np.int64)
        for i in range(m):
            da[i] = a % p
            a //= p
            db[i] = b % p
            b //= p
        prod = np.zeros(2 * m - 1, np.int64)
        for i in range(m):
            if da[i]:
                for j in range(m):
                    prod[i + j] = (prod[i + j] + da[i] * db[j]) % p
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i]
            if c:
                for j in range(m):
                    prod[i - m + j] = (prod[i - m + j] - c * phi[j]) % p
        v = 0
        for i in range(m - 1, -1, -1):
            v = v * p + prod[i]
        return v

    @njit(cache=True)
    def add(a, b, p, m):
        v = 0
        scale = 1
        for _ in range(m):
            v += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return v

    @njit(cache=True)
    def power(a, e, p, m, phi):
        r = 1
        while e:
            if e & 1:
                r = mul(r, a, p, m, phi)
            e >>= 1
            if e:
                a = mul(a, a, p, m, phi)
        return r

    @njit(cache=True)
    def tables(g, q, p, m, phi):
        exp = np.zeros(2 * (q - 1), np.int64)
        log = np.zeros(q, np.int64)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = mul(x, g, p, m, phi)
        for k in range(q - 1, 2 * (q - 1)):
            exp[k] = exp[k - q + 1]
        zech = np.zeros(q - 1, np.int64)
        for k in range(q - 1):
            s = add(1, exp[k], p, m)
            zech[k] = -1 if s == 0 else log[s]
        return log, exp, zech

    return mul, add, power, tables


class GF:
    """Arithmetic in F_{p^m}.  Use :meth:`GF.get` to share instances."""

    _cache: dict = {}

    @classmethod
    def get(cls, p: int, m: int = 1) -> "GF":
        key = (p, m)
        if key not in cls._cache:
            cls._cache[key] = cls(p, m)
        return cls._cache[key]

    def __init__(self, p: int, m: int = 1):
        if not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")
        self.p, self.m = p, m
        self.q = p ** m
        self.modulus = default_modulus(p, m)
        self.spec = FieldSpec(p, m)
        self.is_prime = m == 1
        self._log = self._exp = self._zech = None
        self._jit = None
        if m > 1 and self.q > _TABLE_LIMIT and self.q * p < (1 << 62) and _numba_available():
            import numpy as np
            self._jit = np.array(self.modulus[:m], dtype=np.int64)
        if m > 1 and self.q <= _TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (GF.get, (self.p, self.m))

    # -- digit helpers -------------------------------------------------
    def digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.m):
            a, d = divmod(a, p)
            out.append(d)
        return out

    def from_digits(self, ds) -> int:
        v = 0
        for d in reversed(list(ds)):
            v = v * self.p + d % self.p
        return v

    def _digit_mul(self, a: int, b: int) -> int:
        if self._jit is not None:
            return int(_jit_kernels()[0](a, b, self.p, self.m, self._jit))
        p, m, phi = self.p, self.m, self.modulus
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(m):
                    prod[i - m + j] -= c * phi[j]
        return self.from_digits(prod[:m])

    def _digit_add(self, a, b):
        if self._jit is not None:
            return int(_jit_kernels()[1](a, b, self.p, self.m))
        p = self.p
        v, scale = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            v += ((x + y) % p) * scale
            scale *= p
        return v

    def _build_tables(self):
        q = self.q
        # find a generator: smallest element of multiplicative order q-1
        factors = _prime_factors(q - 1)
        g = 2
        while True:
            if all(self._digit_pow(g, (q - 1) // f) != 1 for f in factors):
                break
            g += 1
        self.generator = g
        if _numba_available():
            import numpy as np
            phi = np.array(self.modulus[:self.m], dtype=np.int64)
            tabs = _jit_kernels()[3](g, q, self.p, self.m, phi)
            self._np_tabs = tabs
            self._log, self._exp, self._zech = (t.tolist() for t in tabs)
            return
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._digit_mul(x, g)
        for k in range(q - 1, 2 * (q - 1)):
            exp[k] = exp[k - q + 1]
        # zech[k] = log(1 + g^k), or -1 when 1 + g^k = 0
        zech = [0] * (q - 1)
        for k in range(q - 1):
            s = self._digit_add(1, exp[k])
            zech[k] = -1 if s == 0 else log[s]
        self._log, self._exp, self._zech = log, exp, zech
        self.generator = g

    def _np_tables(self):
        """``(log, exp, zech)`` as int64 arrays, built on first use."""
        if getattr(self, "_np_tabs", None) is None:
            import numpy as np
            self._np_tabs = tuple(np.array(t, dtype=np.int64) for t in (self._log, self._exp, self._zech))
        return self._np_tabs

    def _digit_pow(self, a, e):
        if self._jit is not None and e < (1 << 62):
            return int(_jit_kernels()[2](a, e, self.p, self.m, self._jit))
        r = 1
        while e:
            if e & 1:
                r = self._digit_mul(r, a)
            e >>= 1
            if e:
                a = self._digit_mul(a, a)
        return r

    # -- field operations ---------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if not a:
            return b
        if not b:
            return a
        if self._log is not None:
            la, lb = self._log[a], self._log[b]
            z = self._zech[(lb - la) % (self.q - 1)]
            return 0 if z < 0 else self._exp[la + z]
        return self._digit_add(a, b)

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        if not a:
            return 0
        p = self.p
        if p == 2:
            return a
        if self._log is not None:
            # -1 = g^((q-1)/2)
            return self._exp[self._log[a] + (self.q - 1) // 2]
        return self.from_digits([(-d) % p for d in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._digit_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if self._log is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if self.m == 1:
            return pow(a, e, self.p)
        if e == 0:
            return 1
        if not a:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._digit_pow(a, e)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def from_int(self, n: int) -> int:
        return n % self.p

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.q)

    def random_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.q)

    def elements(self):
        return range(self.q)

    # -- univariate polynomials --------------------------------------------
    def poly_strip(self, a):
        n = len(a)
        while n and a[n - 1] == 0:
            n -= 1
        return list(a[:n])

    def poly_add(self, a, b):
        n = max(len(a), len(b))
        a = list(a) + [0] * (n - len(a))
        b = list(b) + [0] * (n - len(b))
        if self.m == 1:
            p = self.p
            return self.poly_strip([(x + y) % p for x, y in zip(a, b)])
        return self.poly_strip([self.add(x, y) for x, y in zip(a, b)])

    def poly_sub(self, a, b):
        n = max(len(a), len(b))
        a = list(a) + [0] * (n - len(a))
        b = list(b) + [0] * (n - len(b))
        if self.m == 1:
            p = self.p
            return self.poly_strip([(x - y) % p for x, y in zip(a, b)])
        return self.poly_strip([self.sub(x, y) for x, y in zip(a, b)])

    def poly_scale(self, a, c):
        return self.poly_strip([self.mul(x, c) for x in a])

    def poly_mul(self, a, b):
        if not a or not b:
            return []
        if self.m == 1:
            p = self.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return self.poly_strip([c % p for c in out])
        out = [0] * (len(a) + len(b) - 1)
        add, mul = self.add, self.mul
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return self.poly_strip(out)

    def poly_divmod(self, a, b):
        b = self.poly_strip(b)
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        a = list(a)
        db = len(b) - 1
        inv_lead = self.inv(b[-1])
        if len(a) - 1 < db:
            return [], self.poly_strip(a)
        quo = [0] * (len(a) - db)
        if self.m == 1:
            p = self.p
            for i in range(len(a) - 1, db - 1, -1):
                c = a[i] * inv_lead % p
                if c:
                    quo[i - db] = c
                    for j in range(db + 1):
                        a[i - db + j] = (a[i - db + j] - c * b[j]) % p
            return self.poly_strip(quo), self.poly_strip(a[:db])
        for i in range(len(a) - 1, db - 1, -1):
            c = self.mul(a[i], inv_lead)
            if c:
                quo[i - db] = c
                for j in range(db + 1):
                    a[i - db + j] = self.sub(a[i - db + j], self.mul(c, b[j]))
        return self.poly_strip(quo), self.poly_strip(a[:db])

    def poly_rem(self, a, b):
        return self.poly_divmod(a, b)[1]

    def poly_monic(self, a):
        a = self.poly_strip(a)
        if not a:
            return a
        return self.poly_scale(a, self.inv(a[-1]))

    def poly_gcd(self, a, b):
        a, b = self.poly_strip(a), self.poly_strip(b)
        while b:
            a, b = b, self.poly_rem(a, b)
        return self.poly_monic(a)

    def poly_xgcd(self, a, b):
        """Return ``(g, s, u)`` with ``s*a + u*b = g`` monic."""
        r0, r1 = self.poly_strip(a), self.poly_strip(b)
        s0, s1, u0, u1 = [1], [], [], [1]
        while r1:
            q, r = self.poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.poly_sub(s0, self.poly_mul(q, s1))
            u0, u1 = u1, self.poly_sub(u0, self.poly_mul(q, u1))
        if not r0:
            return [], [], []
        c = self.inv(r0[-1])
        return self.poly_scale(r0, c), self.poly_scale(s0, c), self.poly_scale(u0, c)

    def poly_powmod(self, base, e, mod):
        if self.m > 1:
            from . import fastpath
            out = fastpath.poly_powmod(self, base, e, self.poly_strip(mod))
            if out is not None:
                return out
        result = [1]
        base = self.poly_rem(base, mod)
        while e:
            if e & 1:
                result = self.poly_rem(self.poly_mul(result, base), mod)
            e >>= 1
            if e:
                base = self.poly_rem(self.poly_mul(base, base), mod)
        return result

    def poly_eval(self, a, x):
        acc = 0
        for c in reversed(a):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def poly_derivative(self, a):
        return self.poly_strip([self.mul(self.from_int(i), c) for i, c in enumerate(a)][1:])

    def is_squarefree(self, a) -> bool:
        a = self.poly_strip(a)
        if len(a) <= 2:
            return True
        return len(self.poly_gcd(a, self.poly_derivative(a))) == 1

    def distinct_degree_degrees(self, a) -> list[int]:
        """Degrees of the irreducible factors of a squarefree ``a``."""
        f = self.poly_monic(a)
        degrees = []
        x = [0, 1]
        h = x
        i = 0
        while len(f) - 1 >= 2 * (i + 1):
            i += 1
            h = self.poly_powmod(h, self.q, f)
            g = self.poly_gcd(f, self.poly_sub(h, x))
            if len(g) > 1:
                degrees += [i] * ((len(g) - 1) // i)
                f = self.poly_divmod(f, g)[0]
                h = self.poly_rem(h, f)
        if len(f) > 1:
            degrees.append(len(f) - 1)
        return sorted(degrees)

    def roots(self, a, seed: int = 0) -> list[int]:
        """All roots in this field of a squarefree polynomial, sorted."""
        f = self.poly_monic(a)
        if len(f) <= 1:
            return []
        # keep only the part that splits here
        g = self.poly_gcd(f, self.poly_sub(self.poly_powmod([0, 1], self.q, f), [0, 1]))
        rng = random.Random(seed)
        out = []
        self._split_linear(g, rng, out)
        return sorted(out)

    def _split_linear(self, f, rng, out):
        deg = len(f) - 1
        if deg == 0:
            return
        if deg == 1:
            out.append(self.neg(self.mul(f[0], self.inv(f[1]))))
            return
        while True:
            a = rng.randrange(self.q)
            if self.p == 2:
                # trace of a*y: sum of (a*y)^(2^i), i < m
                base = [0, a] if a else [0, 1]
                t = self.poly_rem(base, f)
                acc = t
                for _ in range(self.m - 1):
                    t = self.poly_rem(self.poly_mul(t, t), f)
                    acc = self.poly_add(acc, t)
                cand = acc
            else:
                h = self.poly_powmod([a, 1], (self.q - 1) // 2, f)
                cand = self.poly_sub(h, [1])
            g = self.poly_gcd(f, cand)
            if 0 < len(g) - 1 < deg:
                self._split_linear(g, rng, out)
                self._split_linear(self.poly_divmod(f, g)[0], rng, out)
                return


@lru_cache(maxsize=None)
def embedding(p: int, m_small: int, m_big: int) -> tuple[int, ...]:
    """Images of the power basis of F_{p^m_small} inside F_{p^m_big}.

    The generator ``x`` of the small field maps to the smallest root of the
    small modulus in the big field.
    """
    if m_big % m_small:
        raise ValueError(f"F_{p}^{m_small} does not embed in F_{p}^{m_big}")
    big = GF.get(p, m_big)
    if m_small == 1:
        return (1,)
    phi = list(default_modulus(p, m_small))
    rho = big.roots(phi)[0]
    images, x = [], 1
    for _ in range(m_small):
        images.append(x)
        x = big.mul(x, rho)
    return tuple(images)


def embed_element(small: GF, big: GF, a: int) -> int:
    if small is big:
        return a
    if small.m == 1:
        return a
    basis = embedding(small.p, small.m, big.m)
    acc = 0
    for d, b in zip(small.digits(a), basis):
        if d:
            acc = big.add(acc, big.mul(d, b))
    return acc


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out
