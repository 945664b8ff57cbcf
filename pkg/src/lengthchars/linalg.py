"""Exact linear algebra over prime fields and over the rationals.

Field matrices are plain ``numpy`` integer arrays whose entries are kept in
``range(p)``; every function takes the prime ``p`` explicitly.  Rational
matrices are nested lists of :class:`fractions.Fraction`.  Nothing in here
ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

DEFAULT_PRIME = 2


class InconsistentSystemError(ValueError):
    """Raised when a linear system has no solution."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"field characteristic must be prime, got {p}")
    return p


def as_field_matrix(m, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Return ``m`` as a reduced, read-only int64 matrix over F_p."""
    a = np.array(m, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    a = np.mod(a, p)
    a.setflags(write=False)
    return a


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form over F_p.

    Returns the echelon matrix, its rank and the list of pivot columns.
    """
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a, r, pivots


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return rref(m, p)[1]


def nullspace(m: np.ndarray, p: int) -> np.ndarray:
    """Basis of ``{v : m v = 0}`` as the columns of a ``cols x k`` matrix."""
    rows, cols = m.shape
    if rows == 0:
        return identity(cols)
    r, rk, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free))
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-r[i, f]) % p
    return basis


def nullspace_basis(m: np.ndarray, p: int) -> list[np.ndarray]:
    """Nullspace as a list of column vectors."""
    ns = nullspace(m, p)
    return [ns[:, j].copy() for j in range(ns.shape[1])]


def left_nullspace(m: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning ``{w : w m = 0}``."""
    return nullspace(m.T, p).T


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution ``x`` of ``a x = b`` over F_p, or ``None``.

    ``b`` may be a vector or a matrix (solved column by column).
    """
    vec = b.ndim == 1
    bb = b.reshape(-1, 1) if vec else b
    rows, cols = a.shape
    if bb.shape[0] != rows:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if rows == 0:
        x = zeros(cols, bb.shape[1])
        return x[:, 0] if vec else x
    aug = np.concatenate([a % p, bb % p], axis=1)
    r, rk, pivots = rref(aug, p)
    if any(pc >= cols for pc in pivots):
        return None
    x = zeros(cols, bb.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x[:, 0] if vec else x


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n, k = m.shape
    if n != k:
        raise ValueError("only square matrices are invertible")
    x = solve(m, identity(n), p)
    if x is None or rank(m, p) < n:
        raise ValueError("matrix is singular")
    return x


def is_invertible(m: np.ndarray, p: int) -> bool:
    n, k = m.shape
    return n == k and rank(m, p) == n


def column_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Independent columns of ``m`` spanning its column space."""
    if m.shape[1] == 0:
        return zeros(m.shape[0], 0)
    _, _, pivots = rref(m, p)
    return np.array(m[:, pivots], dtype=np.int64).reshape(m.shape[0], len(pivots))


def extend_to_basis(b: np.ndarray, p: int) -> np.ndarray:
    """Columns completing the independent columns ``b`` to a basis of F_p^n."""
    n = b.shape[0]
    aug = np.concatenate([b, identity(n)], axis=1)
    _, _, pivots = rref(aug, p)
    extra = [c - b.shape[1] for c in pivots if c >= b.shape[1]]
    return identity(n)[:, extra]


def quotient_map(sub: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Projection ``q`` of F_p^n onto F_p^n / span(sub) and a section ``s``.

    ``q`` has kernel exactly the column space of ``sub`` and ``q @ s = 1``.
    """
    n = sub.shape[0]
    q = left_nullspace(sub, p) if sub.shape[1] else identity(n)
    q = rref(q, p)[0][: q.shape[0]] if q.shape[0] else q
    s = solve(q, identity(q.shape[0]), p)
    assert s is not None
    return q, s


def subspace_key(basis: np.ndarray, p: int) -> bytes:
    """Canonical byte string for the column space of ``basis``."""
    if basis.shape[1] == 0:
        return b"" + bytes([basis.shape[0]])
    r, rk, _ = rref(basis.T, p)
    return np.ascontiguousarray(r[:rk]).tobytes()


def subspaces(n: int, p: int, dim: int | None = None):
    """Yield every subspace of F_p^n as a ``n x k`` basis matrix.

    Subspaces are produced in echelon form, ordered by dimension and then by
    the lexicographic order of their reduced echelon rows.
    """
    from itertools import combinations, product

    dims = range(n + 1) if dim is None else [dim]
    for k in dims:
        for pivots in combinations(range(n), k):
            free_slots = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
            for values in product(range(p), repeat=len(free_slots)):
                r = zeros(k, n)
                for i, pc in enumerate(pivots):
                    r[i, pc] = 1
                for (i, c), v in zip(free_slots, values):
                    r[i, c] = v
                yield r.T


def count_subspaces(n: int, p: int) -> int:
    """Number of subspaces of F_p^n (sum of Gaussian binomials)."""
    total = 0
    for k in range(n + 1):
        num = den = 1
        for i in range(k):
            num *= p ** (n - i) - 1
            den *= p ** (i + 1) - 1
        total += num // den
    return total


# --- rationals -----------------------------------------------------------


def to_fractions(m: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in m]


def rref_exact(m: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], int, list[int]]:
    a = [list(map(Fraction, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        k = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, r, pivots


def solve_exact(m: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve ``m x = b`` exactly over Q.

    Free variables (if any) are set to zero.  Raises
    :class:`InconsistentSystemError` when ``b`` is not in the column space.
    """
    rows = len(m)
    if rows != len(b):
        raise ValueError("row count of m and length of b differ")
    cols = len(m[0]) if rows else 0
    aug = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(m, b)]
    r, rk, pivots = rref_exact(aug)
    if cols in pivots:
        raise InconsistentSystemError("right-hand side is not in the column space")
    x = [Fraction(0)] * cols
    for i, pc in enumerate(pivots):
        x[pc] = r[i][cols]
    return x


def mat_vec_exact(m: Sequence[Sequence], x: Sequence) -> list[Fraction]:
    return [sum((Fraction(a) * Fraction(v) for a, v in zip(row, x)), Fraction(0)) for row in m]
