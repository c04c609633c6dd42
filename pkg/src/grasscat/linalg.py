"""Dense linear algebra over F_p and over the truncated ring F_p[t]/(t^D).

Vectors and matrices are int64 numpy arrays with entries in [0, p).  A
matrix over F_p[t]/(t^D) is stored as an array of shape (rows, cols, D)
whose last axis holds the coefficients of 1, t, ..., t^(D-1).
"""

from __future__ import annotations

import numpy as np


def _mod(a, p):
    return np.mod(a, p, dtype=np.int64)


def rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    A = _mod(np.array(A, dtype=np.int64, copy=True), p)
    if A.ndim != 2:
        raise ValueError("rref needs a 2-d array")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = _mod(A[r] * pow(int(A[r, c]), -1, p), p)
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = _mod(A[hit] - np.outer(col[hit], A[r]), p)
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(A: np.ndarray, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {x : A x = 0}."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(A, p)
    free = [c for c in range(cols) if c not in set(piv)]
    N = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        N[i, f] = 1
        for r, c in enumerate(piv):
            N[i, c] = (-R[r, f]) % p
    return N


def row_basis(A: np.ndarray, p: int, width: int | None = None) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        w = width if width is not None else (A.shape[1] if A.ndim == 2 else 0)
        return np.zeros((0, w), dtype=np.int64)
    return rref(A, p)[0]


def annihilator(W: np.ndarray, dim: int, p: int) -> np.ndarray:
    """Rows c with c . w = 0 for every row w of W."""
    W = np.asarray(W, dtype=np.int64).reshape(-1, dim)
    return nullspace(W, p)


def complement_rows(S: np.ndarray, T: np.ndarray, p: int) -> np.ndarray:
    """Rows of T whose span, added to span(S), gives span(S) + span(T) minimally."""
    dim = T.shape[1]
    T = np.asarray(T, dtype=np.int64).reshape(-1, dim)
    S = np.asarray(S, dtype=np.int64).reshape(-1, dim)
    if T.shape[0] == 0:
        return np.zeros((0, dim), dtype=np.int64)
    red = _mod(T, p)
    if S.shape[0]:
        R, piv = rref(S, p)
        if piv:
            red = _mod(red - red[:, piv] @ R, p)
    # greedy choice in order: pivot columns of the transpose
    _, keep = rref(red.T, p)
    if not keep:
        return np.zeros((0, dim), dtype=np.int64)
    return T[keep].copy()


def inverse(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return R[:n, n:]


def contains(W: np.ndarray, V: np.ndarray, p: int) -> bool:
    """True when span(V) is inside span(W)."""
    if V.shape[0] == 0:
        return True
    return rank(np.vstack([W, V]), p) == rank(W, p)


# -- truncated polynomial matrices ------------------------------------------


def pmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Product of polynomial matrices modulo t^D."""
    D = A.shape[2]
    C = np.zeros((A.shape[0], B.shape[1], D), dtype=np.int64)
    for e in range(D):
        if not A[:, :, e].any():
            continue
        C[:, :, e:] += np.einsum("ab,bcf->acf", A[:, :, e], B[:, :, : D - e])
        C %= p
    return C


def peye(s: int, D: int) -> np.ndarray:
    out = np.zeros((s, s, D), dtype=np.int64)
    out[np.arange(s), np.arange(s), 0] = 1
    return out


def pinv(A: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a square polynomial matrix with invertible constant term."""
    s, _, D = A.shape
    A0inv = inverse(A[:, :, 0], p)
    X = np.zeros_like(A)
    X[:, :, 0] = A0inv
    # Newton iteration X <- X (2 - A X), doubling precision each step
    prec = 1
    two = 2 * peye(s, D)
    while prec < D:
        X = pmul(X, _mod(two - pmul(A, X, p), p), p)
        prec *= 2
    return X


def lin(A: np.ndarray) -> np.ndarray:
    """F_p-matrix of v -> A v on vectors laid out as (coordinate, power)."""
    r, c, D = A.shape
    out = np.zeros((r, D, c, D), dtype=np.int64)
    for e in range(D):
        for g in range(D - e):
            out[:, g + e, :, g] = A[:, :, e]
    return out.reshape(r * D, c * D)


def tshift(V: np.ndarray, s: int, D: int, by: int = 1) -> np.ndarray:
    """Multiply row vectors (laid out as (coordinate, power)) by t^by."""
    V = V.reshape(-1, s, D)
    out = np.zeros_like(V)
    if by < D:
        out[:, :, by:] = V[:, :, : D - by]
    return out.reshape(-1, s * D)


def valuation(v: np.ndarray) -> int:
    nz = np.flatnonzero(v)
    return int(nz[0]) if nz.size else len(v)
