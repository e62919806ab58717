"""numpy and numba kernels for matrices and polynomials over ``F_q[t]/(t^N)``.

An element of ``F_{p^e}`` acts on the field by an ``e x e`` matrix over
``F_p`` (the regular representation), so an ``r x r`` matrix over the
extension becomes an ``re x re`` matrix over ``F_p`` and products are
plain integer matrix products reduced mod ``p``.  Arrays are laid out as
``(N, R, R)`` with the ``t``-degree first.

Results carry the minimum entry precision of the inputs, which is a valid
(if sometimes conservative) precision for every entry.

The scalar loops (Hensel lifting, modular powers, series products) are
compiled with numba and cached on disk.  Set ``ENABLED = False`` to force
the pure Python reference paths.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from numba import njit

from .field import GF, default_modulus
from .series import TruncatedSeries

# keep every intermediate dot product inside int64
_SAFE = 1 << 62
ENABLED = True


def eligible(F: GF, size: int, prec: int) -> bool:
    if not ENABLED:
        return False
    p = F.p
    return (p - 1) ** 2 * size * F.m * max(prec, 1) < _SAFE


@lru_cache(maxsize=None)
def _regrep(p: int, m: int):
    """Matrices of multiplication by ``x^k`` for ``k < m``, shape ``(m, m, m)``."""
    if m == 1:
        return np.ones((1, 1, 1), dtype=np.int64)
    phi = default_modulus(p, m)
    comp = np.zeros((m, m), dtype=np.int64)
    for i in range(1, m):
        comp[i, i - 1] = 1
    for i in range(m):
        comp[i, m - 1] = (-phi[i]) % p
    out = [np.eye(m, dtype=np.int64)]
    for _ in range(1, m):
        out.append(out[-1] @ comp % p)
    return np.stack(out)


def to_array(A, prec: int | None = None) -> np.ndarray:
    """Series matrix (or scalar) to an ``(N, R, R)`` array over ``F_p``."""
    F = A[0][0].field
    n, k = len(A), len(A[0])
    N = prec if prec is not None else min(a.prec for row in A for a in row)
    m = F.m
    if m == 1:
        out = np.zeros((N, n, k), dtype=np.int64)
        for i, row in enumerate(A):
            for j, a in enumerate(row):
                cs = a.coeffs[:N]
                if any(cs):
                    out[:len(cs), i, j] = cs
        return out
    digits = np.zeros((N, n, k, m), dtype=np.int64)
    for i, row in enumerate(A):
        for j, a in enumerate(row):
            for d, c in enumerate(a.coeffs[:N]):
                if c:
                    digits[d, i, j] = F.digits(c)
    blocks = np.einsum("dijk,kab->diajb", digits, _regrep(F.p, m)) % F.p
    return blocks.reshape(N, n * m, k * m)


def from_array(F: GF, arr: np.ndarray, prec: int | None = None):
    N = arr.shape[0] if prec is None else prec
    m = F.m
    n, k = arr.shape[1] // m, arr.shape[2] // m
    if m == 1:
        return [[TruncatedSeries(F, arr[:N, i, j].tolist(), N) for j in range(k)] for i in range(n)]
    # the first column of each block holds the digits of the element
    firstcol = arr[:N, :, ::m].reshape(N, n, m, k)
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            dig = firstcol[:, i, :, j].tolist()
            row.append(TruncatedSeries(F, [F.from_digits(ds) for ds in dig], N))
        out.append(row)
    return out


@njit(cache=True)
def _mul(A, B, p):
    N = min(A.shape[0], B.shape[0])
    n, k, m = A.shape[1], A.shape[2], B.shape[2]
    C = np.zeros((N, n, m), np.int64)
    for d1 in range(N):
        for i in range(n):
            for l in range(k):
                a = A[d1, i, l]
                if a:
                    for d2 in range(N - d1):
                        for j in range(m):
                            C[d1 + d2, i, j] += a * B[d2, l, j]
        if d1 % 8 == 7:
            for d in range(N):
                for i in range(n):
                    for j in range(m):
                        C[d, i, j] %= p
    for d in range(N):
        for i in range(n):
            for j in range(m):
                C[d, i, j] %= p
    return C


def mul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Truncated product of ``(N, n, k)`` and ``(N, k, m)`` arrays."""
    return _mul(np.ascontiguousarray(A), np.ascontiguousarray(B), p)


@njit(cache=True)
def _berkowitz(A, e, p):
    """Coefficient blocks ``(r+1, N, e, e)`` of ``det(lambda I - A)``, leading first."""
    N = A.shape[0]
    r = A.shape[1] // e
    C = np.zeros((r + 1, N, e, e), np.int64)
    for a in range(e):
        C[0, 0, a, a] = 1
    ncur = 1
    for k in range(r):
        lo, hi = k * e, (k + 1) * e
        col = np.zeros((k + 2, N, e, e), np.int64)
        for a in range(e):
            col[0, 0, a, a] = 1
        col[1] = (p - A[:, lo:hi, lo:hi]) % p
        R = np.ascontiguousarray(A[:, lo:hi, :lo])
        vec = np.ascontiguousarray(A[:, :lo, lo:hi])
        Ak = np.ascontiguousarray(A[:, :lo, :lo])
        for s in range(k):
            col[s + 2] = (p - _mul(R, vec, p)) % p
            vec = _mul(Ak, vec, p)
        new = np.zeros((r + 1, N, e, e), np.int64)
        for i in range(k + 2):
            for j in range(min(i, k) + 1):
                if j < ncur:
                    new[i] = (new[i] + _mul(col[i - j], C[j], p)) % p
        C = new
        ncur = k + 2
    return C


def berkowitz(F: GF, arr: np.ndarray):
    """Characteristic polynomial coefficients (leading first) as series lists."""
    e = F.m
    blocks = _berkowitz(np.ascontiguousarray(arr), e, F.p)
    N = arr.shape[0]
    out = []
    for blk in blocks:
        col = blk[:, :, 0]
        if e == 1:
            out.append(TruncatedSeries(F, col[:, 0].tolist(), N))
        else:
            out.append(TruncatedSeries(F, [F.from_digits(ds) for ds in col.tolist()], N))
    return out


def scalar_block(F: GF, s: TruncatedSeries, size: int, N: int) -> np.ndarray:
    """``s * I_size`` as an ``(N, size*m, size*m)`` array."""
    m = F.m
    out = np.zeros((N, size * m, size * m), dtype=np.int64)
    rep = _regrep(F.p, m)
    for d, c in enumerate(s.coeffs[:N]):
        if c:
            blk = np.tensordot(np.array(F.digits(c) if m > 1 else [c], dtype=np.int64), rep, 1) % F.p
            for i in range(size):
                out[d, i * m:(i + 1) * m, i * m:(i + 1) * m] = blk
    return out


def poly_at(F: GF, coeffs, A: np.ndarray, N: int) -> np.ndarray:
    """Horner evaluation of a polynomial (leading coefficient first) at an array matrix."""
    size = A.shape[1] // F.m
    p = F.p
    A = A[:N]
    out = scalar_block(F, coeffs[0], size, N)
    for c in coeffs[1:]:
        out = mul(out, A, p)
        out = (out + scalar_block(F, c, size, N)) % p
    return out


# -- Smith form with e x e blocks as scalars ----------------------------------

@njit(cache=True)
def _mm(A, B, p):
    n, k, m = A.shape[0], A.shape[1], B.shape[1]
    C = np.zeros((n, m), np.int64)
    for i in range(n):
        for l in range(k):
            a = A[i, l]
            if a:
                for j in range(m):
                    C[i, j] += a * B[l, j]
    for i in range(n):
        for j in range(m):
            C[i, j] %= p
    return C


@njit(cache=True)
def _inv_mod(a, p):
    r, e, b = 1, p - 2, a % p
    while e:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@njit(cache=True)
def _block_inverse(B, p):
    """Inverse of an invertible ``e x e`` matrix over ``F_p``."""
    e = B.shape[0]
    aug = np.zeros((e, 2 * e), np.int64)
    aug[:, :e] = B % p
    for i in range(e):
        aug[i, e + i] = 1
    for c in range(e):
        piv = -1
        for i in range(c, e):
            if aug[i, c]:
                piv = i
                break
        if piv < 0:
            return np.zeros((e, e), np.int64), False
        if piv != c:
            tmp = aug[c].copy()
            aug[c] = aug[piv]
            aug[piv] = tmp
        inv = _inv_mod(aug[c, c], p)
        aug[c] = aug[c] * inv % p
        for i in range(e):
            if i != c and aug[i, c]:
                aug[i] = (aug[i] - aug[i, c] * aug[c]) % p
    return aug[:, e:].copy(), True


@njit(cache=True)
def _series_block_inverse(u, p):
    """Inverse of a unit series of blocks ``(N, e, e)``."""
    N, e = u.shape[0], u.shape[1]
    w = np.zeros((N, e, e), np.int64)
    w0, ok = _block_inverse(u[0], p)
    w[0] = w0
    for k in range(1, N):
        acc = np.zeros((e, e), np.int64)
        for j in range(1, k + 1):
            acc = (acc + _mm(u[j], w[k - j], p)) % p
        w[k] = (p - _mm(w0, acc, p)) % p
    return w


@njit(cache=True)
def _block_val(A, bi, bj, e):
    N = A.shape[0]
    for d in range(N):
        for a in range(e):
            for b in range(e):
                if A[d, bi * e + a, bj * e + b]:
                    return d
    return N


@njit(cache=True)
def _shift_mul_rows(A, k, i, c, e, p):
    """Row block ``i`` -= ``c`` * row block ``k`` (truncated)."""
    N = A.shape[0]
    ncols = A.shape[2]
    for d1 in range(N):
        cb = c[d1]
        if not cb.any():
            continue
        for d2 in range(N - d1):
            A[d1 + d2, i * e:(i + 1) * e, :] = (A[d1 + d2, i * e:(i + 1) * e, :]
                                                 - _mm(cb, A[d2, k * e:(k + 1) * e, :], p)) % p


@njit(cache=True)
def _shift_mul_cols(A, k, j, c, e, p):
    """Column block ``j`` -= column block ``k`` * ``c`` (truncated)."""
    N = A.shape[0]
    for d1 in range(N):
        cb = c[d1]
        if not cb.any():
            continue
        for d2 in range(N - d1):
            A[d1 + d2, :, j * e:(j + 1) * e] = (A[d1 + d2, :, j * e:(j + 1) * e]
                                                 - _mm(A[d2, :, k * e:(k + 1) * e], cb, p)) % p


@njit(cache=True)
def _smith(A, e, p):
    """Smith form of an ``(N, n e, m e)`` block array; returns valuations, rank, V."""
    N = A.shape[0]
    n, m = A.shape[1] // e, A.shape[2] // e
    A = A.copy()
    V = np.zeros((N, m * e, m * e), np.int64)
    for a in range(m * e):
        V[0, a, a] = 1
    vals = np.zeros(min(n, m), np.int64)
    rank = 0
    for k in range(min(n, m)):
        best, bi, bj = N, -1, -1
        for i in range(k, n):
            for j in range(k, m):
                v = _block_val(A, i, j, e)
                if v < best:
                    best, bi, bj = v, i, j
                    if v == 0:
                        break
            if best == 0:
                break
        if best >= N:
            break
        v = best
        if bi != k:
            tmp = A[:, k * e:(k + 1) * e, :].copy()
            A[:, k * e:(k + 1) * e, :] = A[:, bi * e:(bi + 1) * e, :]
            A[:, bi * e:(bi + 1) * e, :] = tmp
        if bj != k:
            tmp = A[:, :, k * e:(k + 1) * e].copy()
            A[:, :, k * e:(k + 1) * e] = A[:, :, bj * e:(bj + 1) * e]
            A[:, :, bj * e:(bj + 1) * e] = tmp
            tmp = V[:, :, k * e:(k + 1) * e].copy()
            V[:, :, k * e:(k + 1) * e] = V[:, :, bj * e:(bj + 1) * e]
            V[:, :, bj * e:(bj + 1) * e] = tmp
        # normalize the pivot row by the inverse of the unit part
        unit = np.zeros((N, e, e), np.int64)
        unit[:N - v] = A[v:, k * e:(k + 1) * e, k * e:(k + 1) * e]
        w = _series_block_inverse(unit, p)
        row = A[:, k * e:(k + 1) * e, :].copy()
        newrow = np.zeros_like(row)
        for d1 in range(N):
            for d2 in range(N - d1):
                newrow[d1 + d2] = (newrow[d1 + d2] + _mm(w[d1], row[d2], p)) % p
        A[:, k * e:(k + 1) * e, :] = newrow
        for i in range(k + 1, n):
            c = np.zeros((N, e, e), np.int64)
            c[:N - v] = A[v:, i * e:(i + 1) * e, k * e:(k + 1) * e]
            if c.any():
                _shift_mul_rows(A, k, i, c, e, p)
        for j in range(k + 1, m):
            c = np.zeros((N, e, e), np.int64)
            c[:N - v] = A[v:, k * e:(k + 1) * e, j * e:(j + 1) * e]
            if c.any():
                _shift_mul_cols(A, k, j, c, e, p)
                _shift_mul_cols(V, k, j, c, e, p)
        vals[k] = v
        rank += 1
    return vals[:rank].copy(), rank, V


def smith(F: GF, arr: np.ndarray):
    """``(valuations, rank, V)`` for a block array; uniform precision ``arr.shape[0]``."""
    return _smith(np.ascontiguousarray(arr), F.m, F.p)


def columns(F: GF, arr: np.ndarray, cols) -> list:
    """Selected block columns of an array as lists of series (column vectors)."""
    N = arr.shape[0]
    e = F.m
    n = arr.shape[1] // e
    out = []
    for j in cols:
        vec = []
        for i in range(n):
            if e == 1:
                vec.append(TruncatedSeries(F, arr[:, i, j].tolist(), N))
            else:
                dig = arr[:, i * e:(i + 1) * e, j * e].tolist()
                vec.append(TruncatedSeries(F, [F.from_digits(ds) for ds in dig], N))
        out.append(vec)
    return out


# -- unimodular inverse --------------------------------------------------------

@njit(cache=True)
def _unimodular_inverse(A, p):
    N, n = A.shape[0], A.shape[1]
    X = np.zeros((N, n, n), np.int64)
    X0, ok = _block_inverse(A[0], p)
    if not ok:
        return X, False
    X[0] = X0
    known = 1
    while known < N:
        PX = _mul(A, X, p)
        E = (p - PX) % p
        for a in range(n):
            E[0, a, a] = (E[0, a, a] + 1) % p
        X = (X + _mul(X, E, p)) % p
        known *= 2
    return X, True


def unimodular_inverse(F: GF, arr: np.ndarray):
    """Inverse over ``F_q[t]/(t^N)``; ``None`` when the reduction mod ``t`` is singular."""
    X, ok = _unimodular_inverse(np.ascontiguousarray(arr), F.p)
    return X if ok else None


# -- field elements inside compiled code ------------------------------------------
# mode 0: prime field; mode 1: log/exp/Zech tables; mode 2: base-p digits

def field_context(F: GF):
    empty = np.zeros(1, np.int64)
    if F.m == 1:
        return (0, F.p, 1, F.q, empty, empty, empty, empty)
    if F._log is not None:
        tabs = F._np_tables()
        return (1, F.p, F.m, F.q, np.array(F.modulus[:F.m], np.int64)) + tabs
    if F.q * F.p >= (1 << 62):
        return None
    return (2, F.p, F.m, F.q, np.array(F.modulus[:F.m], np.int64), empty, empty, empty)


@njit(cache=True)
def _digits_op(a, b, p, m, sign):
    v = 0
    scale = 1
    for _ in range(m):
        v += ((a % p + sign * (b % p)) % p) * scale
        a //= p
        b //= p
        scale *= p
    return v


@njit(cache=True)
def _digit_mul(a, b, p, m, phi):
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
def fadd(a, b, fc):
    mode, p, m, q = fc[0], fc[1], fc[2], fc[3]
    if mode == 0:
        return (a + b) % p
    if a == 0:
        return b
    if b == 0:
        return a
    if mode == 1:
        log, exp, zech = fc[5], fc[6], fc[7]
        la = log[a]
        z = zech[(log[b] - la) % (q - 1)]
        return 0 if z < 0 else exp[la + z]
    return _digits_op(a, b, p, m, 1)


@njit(cache=True)
def fsub(a, b, fc):
    mode, p, m = fc[0], fc[1], fc[2]
    if mode == 0:
        return (a - b) % p
    if b == 0:
        return a
    return fadd(a, _digits_op(0, b, p, m, -1), fc)


@njit(cache=True)
def fmul(a, b, fc):
    mode, p, m = fc[0], fc[1], fc[2]
    if mode == 0:
        return a * b % p
    if a == 0 or b == 0:
        return 0
    if mode == 1:
        return fc[6][fc[5][a] + fc[5][b]]
    return _digit_mul(a, b, p, m, fc[4])


# -- polynomial helpers on fixed-size coefficient arrays ----------------------------

@njit(cache=True)
def _pmul_acc(out, a, b, fc):
    """``out += a * b`` (low-degree first; silently truncated to ``len(out)``)."""
    n = out.shape[0]
    for i in range(a.shape[0]):
        x = a[i]
        if x:
            for j in range(min(b.shape[0], n - i)):
                y = b[j]
                if y:
                    out[i + j] = fadd(out[i + j], fmul(x, y, fc), fc)


@njit(cache=True)
def _prem_monic(a, mod, dmod, fc):
    """Remainder of ``a`` by a monic ``mod`` of degree ``dmod``; ``a`` is overwritten."""
    quo = np.zeros(max(a.shape[0] - dmod, 1), np.int64)
    for i in range(a.shape[0] - 1, dmod - 1, -1):
        c = a[i]
        if c:
            quo[i - dmod] = c
            for j in range(dmod + 1):
                a[i - dmod + j] = fsub(a[i - dmod + j], fmul(c, mod[j], fc), fc)
    return quo


@njit(cache=True)
def _powmod(base, e, mod, dmod, fc):
    result = np.zeros(dmod, np.int64)
    result[0] = 1
    while e:
        if e & 1:
            prod = np.zeros(2 * dmod - 1, np.int64)
            _pmul_acc(prod, result, base, fc)
            _prem_monic(prod, mod, dmod, fc)
            result = prod[:dmod].copy()
        e >>= 1
        if e:
            prod = np.zeros(2 * dmod - 1, np.int64)
            _pmul_acc(prod, base, base, fc)
            _prem_monic(prod, mod, dmod, fc)
            base = prod[:dmod].copy()
    return result


def poly_powmod(F: GF, base, e: int, mod):
    """``base^e mod mod`` for a monic ``mod`` of degree >= 1, or None when not compiled."""
    if not ENABLED or e >= (1 << 63) or len(mod) < 2 or mod[-1] != 1:
        return None
    fc = field_context(F)
    if fc is None:
        return None
    dmod = len(mod) - 1
    b = np.zeros(max(len(base), dmod), np.int64)
    b[:len(base)] = base
    if len(base) > dmod:
        _prem_monic(b, np.array(mod, np.int64), dmod, fc)
    out = _powmod(b[:dmod].copy(), e, np.array(mod, np.int64), dmod, fc)
    return F.poly_strip(out.tolist())


@njit(cache=True)
def _spoly_mul(A, B, fc):
    """Product of polynomials with series coefficients, ``(deg+1, n)`` low-degree first, mod ``t^n``."""
    n = A.shape[1]
    out = np.zeros((A.shape[0] + B.shape[0] - 1, n), np.int64)
    for i in range(A.shape[0]):
        for j in range(B.shape[0]):
            _pmul_acc(out[i + j], A[i], B[j], fc)
    return out


def spoly_array(f, n: int) -> np.ndarray:
    out = np.zeros((f.degree + 1, n), np.int64)
    for i, c in enumerate(f.low):
        k = min(n, len(c.coeffs))
        out[i, :k] = c.coeffs[:k]
    return out


def product_agrees(f, polys, n: int):
    """Whether ``prod(polys) = f`` modulo ``t^n``; None when not compiled."""
    fc = field_context(f.field) if ENABLED else None
    if fc is None:
        return None
    acc = spoly_array(polys[0], n)
    for g in polys[1:]:
        acc = _spoly_mul(acc, spoly_array(g, n), fc)
    return acc.shape == (f.degree + 1, n) and bool((acc == spoly_array(f, n)).all())


@njit(cache=True)
def _lift_core(psi, residues, rdeg, pbar, dbar, idem, c0, c0inv, fc):
    """Linear multifactor Hensel lift; see the spectral module.

    ``psi`` is ``(P, r+1)``; ``residues[n]`` is monic of degree ``rdeg[n]``.
    Returns the lifted factors as ``(nf, P, r+1)``.
    """
    P, R = psi.shape[0], psi.shape[1]
    nf = rdeg.shape[0]
    W = 2 * R
    G = np.zeros((nf, P, R), np.int64)
    Pr = np.zeros((nf + 1, P, R), np.int64)
    for n in range(nf):
        G[n, 0, :rdeg[n] + 1] = residues[n, :rdeg[n] + 1]
    Pr[0, 0, 0] = c0
    for n in range(nf):
        _pmul_acc(Pr[n + 1, 0], Pr[n, 0], G[n, 0], fc)
    # rows that are entirely zero are skipped; the s-expansion is sparse
    gnz = np.zeros((nf, P), np.bool_)
    pnz = np.zeros((nf + 1, P), np.bool_)
    for n in range(nf):
        gnz[n, 0] = True
        pnz[n + 1, 0] = True
    pnz[0, 0] = True
    inner = np.zeros((nf, R), np.int64)
    for k in range(1, P):
        inner[:] = 0
        for n in range(nf):
            for u in range(1, k):
                if pnz[n, u] and gnz[n, k - u]:
                    _pmul_acc(inner[n], Pr[n, u], G[n, k - u], fc)
        cur = np.zeros(R, np.int64)
        for n in range(nf):
            nxt = inner[n].copy()
            _pmul_acc(nxt, cur, G[n, 0], fc)
            cur = nxt
        err = np.zeros(R, np.int64)
        for j in range(R):
            err[j] = fsub(psi[k, j], cur[j], fc)
        dH = _prem_monic(err, pbar, dbar, fc)
        for j in range(R):
            err[j] = fmul(err[j], c0inv, fc)
        for n in range(nf):
            tmp = np.zeros(W, np.int64)
            _pmul_acc(tmp, err[:dbar], idem[n], fc)
            _prem_monic(tmp, residues[n], rdeg[n], fc)
            G[n, k, :rdeg[n]] = tmp[:rdeg[n]]
            gnz[n, k] = G[n, k].any()
        Pr[0, k, :min(dH.shape[0], R)] = dH[:R]
        pnz[0, k] = Pr[0, k].any()
        for n in range(nf):
            val = inner[n].copy()
            _pmul_acc(val, Pr[n, k], G[n, 0], fc)
            _pmul_acc(val, Pr[n, 0], G[n, k], fc)
            Pr[n + 1, k] = val
            pnz[n + 1, k] = val.any()
    return G


@njit(cache=True)
def _charpoly_linear_batch(N0s, Ms, p, N):
    S, r = N0s.shape[0], N0s.shape[1]
    out = np.zeros((S, r + 1, N), np.int64)
    for s in range(S):
        A = np.zeros((N, r, r), np.int64)
        A[0] = N0s[s]
        if N > 1:
            A[1] = Ms[s]
        C = _berkowitz(A, 1, p)
        for i in range(r + 1):
            out[s, i] = C[i, :, 0, 0]
    return out


def charpoly_linear_batch(N0s: np.ndarray, Ms: np.ndarray, p: int, N: int) -> np.ndarray:
    """Coefficients of ``det(lambda - N0 - t M)`` mod ``t^N`` over ``F_p``.

    Input shape ``(S, r, r)``; output ``(S, r+1, N)`` with the ``lambda``
    degree falling along axis 1.
    """
    return _charpoly_linear_batch(np.ascontiguousarray(N0s, dtype=np.int64),
                                  np.ascontiguousarray(Ms, dtype=np.int64), p, N)
