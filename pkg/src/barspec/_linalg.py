"""Dense linear algebra over a prime field F_p.

Matrices are numpy integer arrays with entries reduced mod p.  Everything
here is plain Gaussian elimination; the matrices arising from barcodes and
meshes are small, so no sparsity tricks are needed.
"""

from __future__ import annotations

import numpy as np


def asfield(mat, p: int) -> np.ndarray:
    a = np.asarray(mat, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    return a


def _inv_mod(x: int, p: int) -> int:
    return pow(int(x) % p, p - 2, p)


def rref(mat, p: int):
    """Row-reduce mod p.  Returns (reduced matrix, list of pivot columns)."""
    a = asfield(mat, p).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * _inv_mod(a[r, c], p)) % p
        hit = np.nonzero(a[:, c])[0]
        hit = hit[hit != r]
        if hit.size:
            a[hit] = (a[hit] - np.outer(a[hit, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat, p: int) -> int:
    a = asfield(mat, p)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def solve(A, b, p: int):
    """One solution x of A x = b mod p, or None when inconsistent.

    ``b`` may be a vector or a matrix of stacked right-hand sides.
    """
    A = asfield(A, p)
    b = np.asarray(b, dtype=np.int64) % p
    single = b.ndim == 1
    B = b.reshape(-1, 1) if single else b
    if A.shape[0] != B.shape[0]:
        raise ValueError("shape mismatch")
    n = A.shape[1]
    aug, pivots = rref(np.hstack([A, B]), p)
    for c in pivots:
        if c >= n:
            return None
    x = np.zeros((n, B.shape[1]), dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = aug[r, n:]
    return x[:, 0] if single else x


def nullspace(A, p: int) -> np.ndarray:
    """Basis of ker(A) mod p as columns."""
    A = asfield(A, p)
    n = A.shape[1]
    red, pivots = rref(A, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, c in enumerate(free):
        basis[c, k] = 1
        for r, pc in enumerate(pivots):
            basis[pc, k] = (-red[r, c]) % p
    return basis


def in_span(basis_rows, v, p: int) -> bool:
    """Whether v lies in the row span of basis_rows mod p."""
    basis_rows = asfield(basis_rows, p)
    v = np.asarray(v, dtype=np.int64) % p
    if basis_rows.size == 0:
        return not v.any()
    return rank(basis_rows, p) == rank(np.vstack([basis_rows, v]), p)


def row_basis(mat, p: int) -> np.ndarray:
    """Rows forming a basis of the row space (in reduced echelon form)."""
    red, pivots = rref(mat, p)
    return red[: len(pivots)]
