"""Linear algebra over the truncated DVR and over finite fields.

Series matrices are lists of rows of :class:`TruncatedSeries`.  Field
matrices are lists of rows of field elements (ints).
"""
from __future__ import annotations

from dataclasses import dataclass

from . import fastpath
from .errors import PrecisionTooLow
from .field import GF
from .series import AtLeast, SeriesPolynomial, TruncatedSeries


# -- series matrices --------------------------------------------------------

def identity(F: GF, n: int, prec: int):
    one, zero = TruncatedSeries.one(F, prec), TruncatedSeries.zero(F, prec)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    F = A[0][0].field
    prec = min(mat_precision(A), mat_precision(B))
    if fastpath.eligible(F, len(B), prec) and prec > 0:
        return fastpath.from_array(F, fastpath.mul(fastpath.to_array(A, prec),
                                                   fastpath.to_array(B, prec), F.p))
    return mat_mul_reference(A, B)


def mat_mul_reference(A, B):
    """Entrywise product with per-entry precision tracking."""
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = A[i]
        out_row = []
        for j in range(m):
            acc = None
            for l in range(k):
                a = row[l]
                if a.is_zero() and a.prec >= B[l][j].prec:
                    continue
                term = a * B[l][j]
                acc = term if acc is None else acc + term
            if acc is None:
                acc = TruncatedSeries.zero(A[0][0].field, min(row[0].prec, B[0][j].prec))
            out_row.append(acc)
        out.append(out_row)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scalar(A, c: TruncatedSeries):
    return [[c * a for a in row] for row in A]


def mat_vec(A, x):
    return [sum((a * b for a, b in zip(row, x)), TruncatedSeries.zero(row[0].field, row[0].prec))
            for row in A]


def mat_embed(A, big: GF):
    return [[a.embed(big) for a in row] for row in A]


def mat_precision(A) -> int:
    return min(a.prec for row in A for a in row)


def mat_mod_t(A):
    """Reduction modulo ``t``: a field matrix."""
    return [[a.coeffs[0] if a.prec else 0 for a in row] for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def poly_at_matrix(f: SeriesPolynomial, A):
    """``f(A)`` by Horner's rule."""
    F = f.field
    n = len(A)
    prec = min(f.prec, mat_precision(A))
    if fastpath.eligible(F, n, prec) and prec > 0:
        arr = fastpath.poly_at(F, f.coeffs, fastpath.to_array(A, prec), prec)
        return fastpath.from_array(F, arr)
    zero = TruncatedSeries.zero(F, prec)
    out = [[f.coeffs[0] if i == j else zero for j in range(n)] for i in range(n)]
    for c in f.coeffs[1:]:
        out = mat_mul(out, A)
        for i in range(n):
            out[i][i] = out[i][i] + c
    return out


def berkowitz(A) -> SeriesPolynomial:
    """Characteristic polynomial ``det(lambda I - A)`` without divisions.

    Each step borders the leading principal submatrix by one row and
    column and multiplies by a Toeplitz matrix built from ``R A_k^j S``.
    """
    n = len(A)
    F = A[0][0].field
    prec = mat_precision(A)
    if fastpath.eligible(F, n, prec) and prec > 0:
        return SeriesPolynomial(fastpath.berkowitz(F, fastpath.to_array(A, prec)))
    return berkowitz_reference(A)


def berkowitz_reference(A) -> SeriesPolynomial:
    n = len(A)
    F = A[0][0].field
    prec = mat_precision(A)
    one = TruncatedSeries.one(F, prec)
    zero = TruncatedSeries.zero(F, prec)
    C = [one]
    for k in range(n):
        a = A[k][k]
        R = A[k][:k]
        S = [A[i][k] for i in range(k)]
        col = [one, -a]
        vec = S
        for _ in range(k):
            rs = sum((r * s for r, s in zip(R, vec)), zero)
            col.append(-rs)
            vec = [sum((A[i][l] * vec[l] for l in range(k)), zero) for i in range(k)]
        new = []
        for i in range(k + 2):
            acc = zero
            for j in range(min(i, k) + 1):
                if i - j < len(col) and j < len(C):
                    acc = acc + col[i - j] * C[j]
            new.append(acc)
        C = new
    return SeriesPolynomial(C)


# -- Smith normal form over the truncated DVR -------------------------------

@dataclass
class SmithForm:
    """``U * A * V = diag(D)`` with ``D[k] = t^{v_k}`` for ``k < rank``.

    Entries past ``rank`` are zero modulo ``t^residual_prec``.
    """

    U: list | None
    D: list
    V: list | None
    rank: int
    residual_prec: int

    @property
    def valuations(self) -> list[int]:
        return [d.valuation for d in self.D[: self.rank]]


def smith_form(A, want_u: bool = False, want_v: bool = False) -> SmithForm:
    """Smith normal form with pivot = entry of minimal certified valuation.

    Raises :class:`PrecisionTooLow` when an entry that is zero at its own
    precision would have to be divided by a pivot of higher valuation,
    since its true valuation could be smaller than the pivot's.
    """
    m, n = len(A), len(A[0])
    F = A[0][0].field
    P = max(a.prec for row in A for a in row)
    A = [list(row) for row in A]
    U = identity(F, m, P) if want_u else None
    V = identity(F, n, P) if want_v else None
    D = []
    rank = 0
    for k in range(min(m, n)):
        best, bi, bj = None, -1, -1
        for i in range(k, m):
            row = A[i]
            for j in range(k, n):
                v = row[j].valuation
                if v != float("inf") and (best is None or v < best):
                    best, bi, bj = v, i, j
                    if v == 0:
                        break
            if best == 0:
                break
        if best is None:
            break
        if bi != k:
            A[k], A[bi] = A[bi], A[k]
            if U is not None:
                U[k], U[bi] = U[bi], U[k]
        if bj != k:
            for row in A:
                row[k], row[bj] = row[bj], row[k]
            if V is not None:
                for row in V:
                    row[k], row[bj] = row[bj], row[k]
        v = best
        piv = A[k][k]
        unit = piv.exact_shift_down(v) if v else piv
        uinv = unit.inverse()
        A[k] = [x * uinv for x in A[k]]
        if U is not None:
            U[k] = [x * uinv for x in U[k]]
        for i in range(k + 1, m):
            a = A[i][k]
            if a.is_zero():
                if a.prec < v:
                    raise PrecisionTooLow(f"entry zero only to t^{a.prec}, pivot valuation {v}")
                continue
            c = a.exact_shift_down(v) if v else a
            rk = A[k]
            A[i] = [A[i][j] - c * rk[j] if j != k else TruncatedSeries.zero(F, a.prec)
                    for j in range(n)]
            if U is not None:
                uk = U[k]
                U[i] = [x - c * y for x, y in zip(U[i], uk)]
        for j in range(k + 1, n):
            a = A[k][j]
            if a.is_zero():
                if a.prec < v:
                    raise PrecisionTooLow(f"entry zero only to t^{a.prec}, pivot valuation {v}")
                continue
            c = a.exact_shift_down(v) if v else a
            A[k][j] = TruncatedSeries.zero(F, a.prec)
            if V is not None:
                for row in V:
                    row[j] = row[j] - c * row[k]
        D.append(A[k][k])
        rank += 1
    rest = [A[i][j].prec for i in range(rank, m) for j in range(rank, n)]
    residual = min(rest) if rest else P
    for _ in range(rank, min(m, n)):
        D.append(TruncatedSeries.zero(F, residual))
    return SmithForm(U, D, V, rank, residual)


def det_valuation(A):
    """Valuation of ``det A``; :class:`AtLeast` when the determinant is zero at this precision."""
    F = A[0][0].field
    prec = mat_precision(A)
    if len(A) == len(A[0]) and fastpath.eligible(F, len(A), prec) and prec > 0:
        vals, rank, _ = fastpath.smith(F, fastpath.to_array(A, prec))
        total = int(vals.sum())
        return AtLeast(total + prec) if rank < len(A) else total
    sf = smith_form(A)
    total = sum(sf.valuations)
    if sf.rank < len(A):
        return AtLeast(total + sf.residual_prec)
    return total


def kernel_basis(A, min_gap: bool = True):
    """Saturated kernel basis (columns) of a square series matrix.

    Returns ``(basis, smith)``.  With ``min_gap`` the residual precision
    must exceed every nonzero invariant-factor valuation, otherwise the
    split between kernel and image is not certified.
    """
    F = A[0][0].field
    prec = mat_precision(A)
    n = len(A[0])
    if fastpath.eligible(F, n, prec) and prec > 0:
        vals, rank, V = fastpath.smith(F, fastpath.to_array(A, prec))
        if min_gap and 0 < rank < n:
            # kernel vectors are accurate modulo t^(prec - top)
            top = int(vals[:rank].max())
            if prec - top <= top:
                raise PrecisionTooLow(
                    f"kernel not separated: residual precision {prec - top}, pivot valuation {top}")
        return fastpath.columns(F, V, range(rank, n)), None
    sf = smith_form(A, want_v=True)
    if min_gap and sf.rank and sf.rank < len(A[0]):
        top = max(sf.valuations)
        if sf.residual_prec <= top:
            raise PrecisionTooLow(
                f"kernel not separated: residual precision {sf.residual_prec}, pivot valuation {top}")
    n = len(A[0])
    basis = [[sf.V[i][j] for i in range(n)] for j in range(sf.rank, n)]
    return basis, sf


# -- field matrices ---------------------------------------------------------

def field_rank(F: GF, M) -> int:
    return len(field_row_echelon(F, M)[1])


def field_row_echelon(F: GF, M):
    """Reduced row echelon form and pivot columns."""
    A = [list(r) for r in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if A[i][c]), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(x, inv) for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def field_nullspace(F: GF, M):
    """Basis of ``{x : M x = 0}`` as a list of vectors."""
    cols = len(M[0])
    R, pivots = field_row_echelon(F, M)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [0] * cols
        x[fcol] = 1
        for r, pc in enumerate(pivots):
            x[pc] = F.neg(R[r][fcol])
        basis.append(x)
    return basis


def field_mat_mul(F: GF, A, B):
    n, k, m = len(A), len(B), len(B[0])
    if F.m == 1:
        p = F.p
        return [[sum(A[i][l] * B[l][j] for l in range(k)) % p for j in range(m)] for i in range(n)]
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = 0
            for l in range(k):
                if A[i][l] and B[l][j]:
                    acc = F.add(acc, F.mul(A[i][l], B[l][j]))
            row.append(acc)
        out.append(row)
    return out


def field_inverse(F: GF, M):
    n = len(M)
    aug = [list(M[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    R, pivots = field_row_echelon(F, aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]
