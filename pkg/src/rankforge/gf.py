"""Dense linear algebra over a prime field GF(p).

Matrices are numpy int64 arrays with entries reduced mod p.  Everything is
plain Gaussian elimination with full reduction; sizes here are small enough
that vectorized row updates are all the speed we need.
"""

from __future__ import annotations

import numpy as np


def gf_normalize(a, p: int):
    return np.asarray(a, dtype=np.int64) % p


def gf_matmul(a, b, p: int):
    a = gf_normalize(a, p)
    b = gf_normalize(b, p)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    return (a @ b) % p


def gf_eye(n: int):
    return np.eye(n, dtype=np.int64)


def gf_rref(a, p: int):
    """Reduced row echelon form; returns (rref, pivot_columns)."""
    a = gf_normalize(a, p).copy()
    m, n = a.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def gf_rank(a, p: int) -> int:
    a = gf_normalize(a, p)
    if a.size == 0:
        return 0
    return len(gf_rref(a, p)[1])


def gf_nullspace(a, p: int):
    """Columns spanning the kernel of a."""
    a = gf_normalize(a, p)
    m, n = a.shape
    rref, pivots = gf_rref(a, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, c in enumerate(free):
        basis[c, k] = 1
        for r, pc in enumerate(pivots):
            basis[pc, k] = (-rref[r, c]) % p
    return basis


def gf_colspace(a, p: int):
    """Pivot columns of a, a basis of its column space."""
    a = gf_normalize(a, p)
    _, pivots = gf_rref(a, p)
    return a[:, pivots]


def gf_solve(a, b, p: int):
    """A solution x of a @ x = b, or None when inconsistent.

    b may be a vector or a matrix; free variables are set to zero.
    """
    a = gf_normalize(a, p)
    b = gf_normalize(b, p)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    m, n = a.shape
    aug, pivots = gf_rref(np.hstack([a, b]), p)
    if any(c >= n for c in pivots):
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = aug[r, n:]
    return x[:, 0] if vector else x


def gf_quotient_pivots(b, p: int):
    """Echelon data for the quotient of k^n by the column space of b.

    Returns (reduced, pivot_rows): ``reduced`` has one normalized row per
    basis vector of the column space, ``pivot_rows`` their leading
    coordinates.  Coordinates outside pivot_rows index a basis of the
    quotient, and :func:`gf_reduce_mod` rewrites vectors in that basis.
    """
    b = gf_normalize(b, p)
    reduced, pivots = gf_rref(b.T, p)
    return reduced[: len(pivots)], list(pivots)


def gf_reduce_mod(reduced, pivot_rows, x, p: int):
    """Residue of x modulo the span described by gf_quotient_pivots."""
    x = gf_normalize(x, p).copy()
    for row, c in zip(reduced, pivot_rows):
        coef = x[c] % p
        if coef:
            x = (x - coef * row) % p
    return x
