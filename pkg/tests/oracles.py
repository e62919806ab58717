"""Brute-force references over the finite ring F_p[t]/(t^N)."""
import itertools

import numpy as np


def series_array(mat, N):
    """Matrix of prime-field series to an ``(N, rows, cols)`` int array."""
    rows, cols = len(mat), len(mat[0])
    out = np.zeros((N, rows, cols), dtype=np.int64)
    for i, row in enumerate(mat):
        for j, a in enumerate(row):
            cs = list(a.coeffs)[:N]
            out[:len(cs), i, j] = cs
    return out


def all_vectors(p, r, N):
    """Every vector of ``(F_p[t]/t^N)^r`` as an array ``(p^(rN), N, r)``."""
    grid = np.array(list(itertools.product(range(p), repeat=r * N)), dtype=np.int64)
    return grid.reshape(-1, N, r)


def apply(A, V, p):
    """``A v`` for a batch of vectors, truncated at ``t^N``."""
    N = A.shape[0]
    out = np.zeros_like(V)
    for d1 in range(N):
        for d2 in range(N - d1):
            out[:, d1 + d2, :] += np.einsum("ij,kj->ki", A[d1], V[:, d2, :])
    return out % p


def brute_kernel(A, p):
    """Set of all kernel vectors (as byte strings) of ``A`` over ``F_p[t]/t^N``."""
    N, r = A.shape[0], A.shape[2]
    V = all_vectors(p, r, N)
    mask = ~apply(A, V, p).any(axis=(1, 2))
    return {v.tobytes() for v in V[mask]}, V[mask]


def span(basis, p, N):
    """All ``F_p[t]/t^N``-combinations of the basis columns ``(N, r)`` each."""
    d = len(basis)
    r = basis[0].shape[1]
    coeffs = all_vectors(p, d, N)  # (K, N, d)
    out = np.zeros((len(coeffs), N, r), dtype=np.int64)
    for j, b in enumerate(basis):
        for d1 in range(N):
            for d2 in range(N - d1):
                out[:, d1 + d2, :] += coeffs[:, d1, j][:, None] * b[d2][None, :]
    out %= p
    return {v.tobytes() for v in out}, out


def basis_arrays(basis, N):
    """Kernel basis (list of column vectors of series) to ``(N, r)`` arrays."""
    out = []
    for vec in basis:
        arr = np.zeros((N, len(vec)), dtype=np.int64)
        for i, a in enumerate(vec):
            cs = list(a.coeffs)[:N]
            arr[:len(cs), i] = cs
        out.append(arr)
    return out


def mod_t_image(vectors):
    return {v[0].tobytes() for v in vectors}


def shift(vectors, k):
    """Multiply a batch ``(K, N, r)`` by ``t^k`` modulo ``t^N``."""
    out = np.zeros_like(vectors)
    N = vectors.shape[1]
    if k < N:
        out[:, k:, :] = vectors[:, :N - k, :]
    return out


def truncate(vectors, M):
    """Reduce a batch modulo ``t^M`` and return it as a set of byte strings."""
    return {v.tobytes() for v in np.ascontiguousarray(vectors[:, :M, :])}


def module_structure(vectors, p):
    """Free rank and torsion exponents of a submodule of ``(F_p[t]/t^N)^r``.

    The submodule is ``sum O/t^(e_j)`` with ``e_j <= N``; summands with
    ``e_j = N`` are reported as free.  Read off from the sizes of
    ``t^k * K``: ``log_p |t^k K| - log_p |t^(k+1) K|`` counts summands
    with ``e_j > k``.
    """
    N = vectors.shape[1]
    logs = []
    for k in range(N + 1):
        size = len({v.tobytes() for v in shift(vectors, k)})
        e = round(np.log(size) / np.log(p))
        assert p ** e == size
        logs.append(e)
    above = [logs[k] - logs[k + 1] for k in range(N)]
    free = above[N - 1]
    torsion = []
    for k in range(N - 1):
        torsion += [k + 1] * (above[k] - above[k + 1])
    return free, sorted(torsion)
