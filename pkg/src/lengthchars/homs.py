"""Hom spaces, endomorphism algebras and the Krull-Schmidt machinery.

Endomorphisms are handled through their faithful block-diagonal matrices on
the underlying vector space of the module, so an :class:`EndAlgebra` is a
matrix algebra over F_p and radicals, idempotents and Wedderburn block data
can be computed with plain linear algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from . import linalg as la
from .quiver import Morphism, QuiverError, Rep, direct_sum, subrep

DEFAULT_SEED = 0xC0FFEE
ISO_EXHAUSTIVE_BUDGET = 2**16


@dataclass(frozen=True, eq=False)
class HomSpace:
    source: Rep
    target: Rep
    basis: tuple[Morphism, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _coord_system(self) -> np.ndarray:
        if not self.basis:
            return la.zeros(sum(a * b for a, b in zip(self.source.dims, self.target.dims)), 0)
        return np.stack([b.vector() for b in self.basis], axis=1)

    def coordinates(self, f: Morphism) -> np.ndarray:
        x = la.solve(self._coord_system, f.vector(), self.source.p)
        if x is None:
            raise ValueError("morphism is not in this Hom space")
        return x

    def element(self, coeffs: Sequence[int]) -> Morphism:
        p = self.source.p
        maps = [la.zeros(e, d) for d, e in zip(self.source.dims, self.target.dims)]
        for c, b in zip(coeffs, self.basis):
            if c % p:
                for v, m in enumerate(b.maps):
                    maps[v] = (maps[v] + c * m) % p
        return Morphism(self.source, self.target, tuple(maps), check=False)

    def elements(self):
        """Every element (p^dim of them), zero first."""
        for coeffs in product(range(self.source.p), repeat=self.dim):
            yield self.element(coeffs)


def _vertex_offsets(x: Rep, y: Rep) -> list[int]:
    offs = [0]
    for d, e in zip(x.dims, y.dims):
        offs.append(offs[-1] + d * e)
    return offs


def hom_system(x: Rep, y: Rep) -> np.ndarray:
    """Coefficient matrix of the intertwiner equations for Hom(x, y)."""
    q, p = x.quiver, x.p
    offs = _vertex_offsets(x, y)
    blocks = []
    for k in range(len(q.arrows)):
        s, t = q.arrow_ends(k)
        rows = y.dims[t] * x.dims[s]
        if rows == 0:
            continue
        m = la.zeros(rows, offs[-1])
        # Y_k X_s - X_t A_k, row-major vectorisation
        m[:, offs[s] : offs[s + 1]] = np.kron(y.maps[k], la.identity(x.dims[s]))
        m[:, offs[t] : offs[t + 1]] = (m[:, offs[t] : offs[t + 1]] - np.kron(la.identity(y.dims[t]), x.maps[k].T)) % p
        blocks.append(m)
    if not blocks:
        return la.zeros(0, offs[-1])
    return np.concatenate(blocks, axis=0) % p


def hom_dim(x: Rep, y: Rep) -> int:
    if x.quiver != y.quiver or x.p != y.p:
        raise QuiverError("Hom between representations of different quivers or fields")
    sysm = hom_system(x, y)
    return sysm.shape[1] - la.rank(sysm, x.p)


def hom_basis(x: Rep, y: Rep) -> HomSpace:
    if x.quiver != y.quiver or x.p != y.p:
        raise QuiverError("Hom between representations of different quivers or fields")
    offs = _vertex_offsets(x, y)
    ns = la.nullspace(hom_system(x, y), x.p)
    basis = []
    for j in range(ns.shape[1]):
        col = ns[:, j]
        maps = tuple(col[offs[v] : offs[v + 1]].reshape(y.dims[v], x.dims[v]) for v in range(len(x.dims)))
        basis.append(Morphism(x, y, maps, check=False))
    return HomSpace(x, y, tuple(basis))


# --- matrix algebras -----------------------------------------------------


def _matpow(a: np.ndarray, e: int, mod: int) -> np.ndarray:
    result = la.identity(a.shape[0])
    base = a % mod
    while e:
        if e & 1:
            result = (result @ base) % mod
        base = (base @ base) % mod
        e >>= 1
    return result


def _trace_functional(a: np.ndarray, p: int, i: int) -> int:
    """Tr(a~^(p^i)) / p^i mod p for the integer lift a~ of a."""
    mod = p ** (i + 1)
    t = int(np.trace(_matpow(a, p**i, mod))) % mod
    if t % (p**i):
        raise ArithmeticError("trace functional evaluated outside its domain")
    return (t // p**i) % p


def matrix_algebra_radical(mats: Sequence[np.ndarray], p: int) -> np.ndarray:
    """Jacobson radical of the algebra spanned by ``mats`` (closed under products).

    Returns coefficient vectors (columns) with respect to ``mats``.  Uses the
    characteristic-p trace-form iteration: starting from the whole algebra,
    ``I_i = {a in I_(i-1) : g_i(a b) = 0 for all b}`` with
    ``g_i(a) = Tr(a~^(p^i)) / p^i mod p``, stopping at ``i = floor(log_p n)``.
    """
    d = len(mats)
    if d == 0:
        return la.zeros(0, 0)
    n = mats[0].shape[0]
    coeffs = la.identity(d)
    steps = int(math.floor(math.log(n, p) + 1e-9)) if n > 0 else 0
    for i in range(steps + 1):
        if coeffs.shape[1] == 0:
            break
        elems = [_combine(mats, coeffs[:, k], p) for k in range(coeffs.shape[1])]
        g = la.zeros(d, len(elems))
        for j, b in enumerate(mats):
            for k, a in enumerate(elems):
                g[j, k] = _trace_functional((a @ b) % p, p, i)
        coeffs = la.matmul(coeffs, la.nullspace(g, p), p)
    return coeffs


def _combine(mats: Sequence[np.ndarray], coeffs: Sequence[int], p: int) -> np.ndarray:
    out = np.zeros_like(mats[0])
    for c, m in zip(coeffs, mats):
        if c % p:
            out = out + int(c) * m
    return out % p


def is_nilpotent(a: np.ndarray, p: int) -> bool:
    n = a.shape[0]
    return n == 0 or not _matpow(a, n, p).any()


@dataclass(frozen=True, eq=False)
class EndAlgebra:
    """End(M) with its multiplication table and Jacobson radical.

    ``mult_table[i, j]`` holds the coordinates of ``basis[i] o basis[j]``.
    """

    module: Rep
    basis: tuple[Morphism, ...]
    mats: tuple[np.ndarray, ...]
    mult_table: np.ndarray
    radical: np.ndarray  # coefficient columns

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def p(self) -> int:
        return self.module.p

    @cached_property
    def _flat(self) -> np.ndarray:
        return np.stack([m.reshape(-1) for m in self.mats], axis=1)

    def coordinates(self, a: np.ndarray) -> np.ndarray:
        x = la.solve(self._flat, a.reshape(-1), self.p)
        if x is None:
            raise ValueError("matrix is not in the endomorphism algebra")
        return x

    def matrix(self, coeffs: Sequence[int]) -> np.ndarray:
        return _combine(self.mats, coeffs, self.p)

    def morphism(self, coeffs: Sequence[int]) -> Morphism:
        return _from_block(self.module, self.module, self.matrix(coeffs))

    @cached_property
    def radical_basis(self) -> tuple[Morphism, ...]:
        return tuple(self.morphism(self.radical[:, k]) for k in range(self.radical.shape[1]))

    @cached_property
    def identity_coords(self) -> np.ndarray:
        return self.coordinates(la.identity(self.module.total_dim))

    @cached_property
    def _complement(self) -> np.ndarray:
        return la.extend_to_basis(self.radical, self.p)

    def quotient_coords(self, coeffs: np.ndarray) -> np.ndarray:
        """Coordinates of the class of an element in End/rad (w.r.t. the complement)."""
        full = np.concatenate([self.radical, self._complement], axis=1)
        z = la.solve(full, coeffs, self.p)
        assert z is not None
        return z[self.radical.shape[1] :]

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", a, b, self.mult_table) % self.p


def _from_block(x: Rep, y: Rep, m: np.ndarray) -> Morphism:
    maps = []
    r = c = 0
    for d, e in zip(x.dims, y.dims):
        maps.append(m[r : r + e, c : c + d])
        r += e
        c += d
    return Morphism(x, y, tuple(maps), check=False)


def end_algebra(m: Rep) -> EndAlgebra:
    if m.is_zero():
        raise ValueError("End of the zero module is not an algebra with 1 in this sense")
    p = m.p
    h = hom_basis(m, m)
    mats = tuple(b.block_diagonal() for b in h.basis)
    flat = np.stack([a.reshape(-1) for a in mats], axis=1)
    d = len(mats)
    table = la.zeros(d * d, d)
    prods = np.stack([((mats[i] @ mats[j]) % p).reshape(-1) for i in range(d) for j in range(d)], axis=1)
    coords = la.solve(flat, prods, p)
    assert coords is not None
    table = coords.T.reshape(d, d, d)
    rad = matrix_algebra_radical(mats, p)
    return EndAlgebra(m, h.basis, mats, table, rad)


def jacobson_radical(e: EndAlgebra) -> tuple[Morphism, ...]:
    return e.radical_basis


# --- indecomposability and splitting ------------------------------------


@dataclass(frozen=True)
class IndecomposabilityResult:
    indecomposable: bool
    idempotent: Morphism | None = None

    def __bool__(self):
        return self.indecomposable


def _fitting_split(m: Rep, phi: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]] | None:
    """Fitting decomposition along the endomorphism with block matrix ``phi``."""
    p, n = m.p, m.total_dim
    power = _matpow(phi, n, p)
    rk = la.rank(power, p) if n else 0
    if rk == 0 or rk == n:
        return None
    kers, ims = [], []
    off = 0
    for d in m.dims:
        blk = power[off : off + d, off : off + d]
        kers.append(la.nullspace(blk, p) if d else la.zeros(0, 0))
        ims.append(la.column_basis(blk, p) if d else la.zeros(0, 0))
        off += d
    return kers, ims


def _idempotent(m: Rep, kers, ims) -> Morphism:
    p = m.p
    maps = []
    for k, i in zip(kers, ims):
        b = np.concatenate([k, i], axis=1)
        if b.shape[0] == 0:
            maps.append(la.zeros(0, 0))
            continue
        diag = la.zeros(b.shape[1], b.shape[1])
        for j in range(k.shape[1]):
            diag[j, j] = 1
        maps.append(la.matmul(la.matmul(b, diag, p), la.inverse(b, p), p))
    return Morphism(m, m, tuple(maps), check=False)


def _quotient_is_commutative(e: EndAlgebra) -> bool:
    comp = e._complement
    p = e.p
    for i in range(comp.shape[1]):
        for j in range(i + 1, comp.shape[1]):
            a, b = comp[:, i], comp[:, j]
            c = (e.multiply(a, b) - e.multiply(b, a)) % p
            if e.quotient_coords(c).any():
                return False
    return True


def _frobenius_fixed(e: EndAlgebra) -> np.ndarray:
    """Quotient coordinates spanning {z in End/rad : z^p = z} (commutative quotient)."""
    comp = e._complement
    p = e.p
    cols = []
    for i in range(comp.shape[1]):
        a = comp[:, i]
        power = a
        for _ in range(p - 1):
            power = e.multiply(power, a)
        cols.append(e.quotient_coords((power - a) % p))
    f = np.stack(cols, axis=1) if cols else la.zeros(0, 0)
    return la.nullspace(f, p)


def _splitting_endomorphism(e: EndAlgebra, rng: np.random.Generator | None) -> np.ndarray | None:
    """An endomorphism that is neither nilpotent nor invertible, or None if End is local."""
    p, n = e.p, e.module.total_dim
    d = e.dim
    if d == 1 or e.radical.shape[1] == d - 1:
        return None
    ident = la.identity(n)
    if _quotient_is_commutative(e):
        fixed = _frobenius_fixed(e)
        if fixed.shape[1] <= 1:
            return None
        comp = e._complement
        one = e.quotient_coords(e.identity_coords)
        for j in range(fixed.shape[1]):
            z = fixed[:, j]
            if la.rank(np.stack([z, one], axis=1), p) == 2:
                a = e.matrix(la.matmul(comp, z.reshape(-1, 1), p)[:, 0])
                for c in range(p):
                    phi = (a - c * ident) % p
                    if _fitting_split(e.module, phi) is not None:
                        return phi
        raise ArithmeticError("Frobenius-fixed element failed to split")
    # non-commutative semisimple quotient: a matrix block of size >= 2 exists
    rng = rng if rng is not None else np.random.default_rng(DEFAULT_SEED)
    for _ in range(256):
        a = e.matrix(rng.integers(0, p, size=d))
        for c in range(p):
            phi = (a - c * ident) % p
            if _fitting_split(e.module, phi) is not None:
                return phi
    if p**d <= ISO_EXHAUSTIVE_BUDGET:
        for coeffs in product(range(p), repeat=d):
            a = e.matrix(coeffs)
            if _fitting_split(e.module, a) is not None:
                return a
    raise ArithmeticError("could not find a splitting endomorphism")


def is_indecomposable(m: Rep, rng: np.random.Generator | None = None, end: EndAlgebra | None = None) -> IndecomposabilityResult:
    """Decide whether End(m) is local; on failure return a nontrivial idempotent."""
    if m.is_zero():
        raise ValueError("the zero module is neither decomposable nor indecomposable")
    e = end if end is not None else end_algebra(m)
    phi = _splitting_endomorphism(e, rng)
    if phi is None:
        return IndecomposabilityResult(True)
    kers, ims = _fitting_split(m, phi)
    return IndecomposabilityResult(False, _idempotent(m, kers, ims))


def split(m: Rep, rng: np.random.Generator | None = None) -> tuple[Rep, Rep] | None:
    """Split ``m`` into two nonzero summands, or return None if indecomposable."""
    e = end_algebra(m)
    phi = _splitting_endomorphism(e, rng)
    if phi is None:
        return None
    kers, ims = _fitting_split(m, phi)
    return subrep(m, kers)[0], subrep(m, ims)[0]


def krull_schmidt(m: Rep, seed: int = DEFAULT_SEED) -> list[Rep]:
    """Indecomposable summands of ``m`` (a list; the multiset is unique up to iso)."""
    rng = np.random.default_rng(seed)
    out: list[Rep] = []
    stack = [m] if not m.is_zero() else []
    while stack:
        x = stack.pop()
        parts = split(x, rng)
        if parts is None:
            out.append(x)
        else:
            stack.extend(reversed(parts))
    return out


# --- isomorphism ---------------------------------------------------------


def _is_invertible_morphism(f: Morphism) -> bool:
    return all(la.is_invertible(mm, f.p) for mm in f.maps)


def is_isomorphic(x: Rep, y: Rep, seed: int = DEFAULT_SEED, budget: int = ISO_EXHAUSTIVE_BUDGET) -> bool:
    """Search Hom(x, y) for an element invertible at every vertex."""
    if x.quiver != y.quiver or x.p != y.p or x.dims != y.dims:
        return False
    if x == y:
        return True
    p = x.p
    h = hom_basis(x, y)
    if h.dim == 0:
        return x.is_zero()
    if hom_dim(y, x) != h.dim or hom_dim(x, x) != h.dim or hom_dim(y, y) != h.dim:
        return False
    rng = np.random.default_rng(seed)
    for _ in range(64):
        if _is_invertible_morphism(h.element(rng.integers(0, p, size=h.dim))):
            return True
    if p**h.dim <= budget:
        return any(_is_invertible_morphism(f) for f in h.elements())
    for i in range(h.dim):
        for j in range(i, h.dim):
            for c in range(p):
                coeffs = [0] * h.dim
                coeffs[i] = 1
                coeffs[j] = (coeffs[j] + c) % p
                if _is_invertible_morphism(h.element(coeffs)):
                    return True
    return False


def group_isomorphic(reps: Sequence[Rep]) -> list[tuple[Rep, int]]:
    """Collapse a list of representations into (representative, multiplicity) pairs."""
    groups: list[list] = []
    for r in reps:
        for g in groups:
            if is_isomorphic(g[0], r):
                g[1] += 1
                break
        else:
            groups.append([r, 1])
    return [(g[0], g[1]) for g in groups]


# --- lengths over End(M) -------------------------------------------------


def _action_matrices(e: EndAlgebra, h: HomSpace) -> list[np.ndarray]:
    """Matrices of post-composition by each basis element of ``e`` on ``h``."""
    p = e.p
    if h.target != e.module:
        raise ValueError("the Hom space is not closed under End(M)-action")
    coords = h._coord_system
    out = []
    for b in e.basis:
        cols = np.stack([(b @ g).vector() for g in h.basis], axis=1) if h.basis else la.zeros(coords.shape[0], 0)
        t = la.solve(coords, cols, p) if h.basis else la.zeros(0, 0)
        if t is None:
            raise ValueError("the Hom space is not closed under End(M)-action")
        out.append(t)
    return out


def _span(vectors: Sequence[np.ndarray], n: int, p: int) -> np.ndarray:
    if not vectors:
        return la.zeros(n, 0)
    return la.column_basis(np.stack(vectors, axis=1), p)


def semisimple_length(mats: Sequence[np.ndarray], p: int) -> int:
    """Composition length of F_p^n under the semisimple algebra generated by ``mats``.

    The algebra is assumed to contain the identity and to act semisimply;
    block data (center dimension k, matrix size) is read off from central
    primitive idempotents, and each block of rank r contributes r / (n_j k_j).
    """
    n = mats[0].shape[0] if mats else 0
    if n == 0:
        return 0
    alg = _span([m.reshape(-1) for m in mats], n * n, p)
    basis = [alg[:, j].reshape(n, n) for j in range(alg.shape[1])]
    # center: combinations commuting with every basis element
    rows = []
    for g in basis:
        rows.append(np.stack([((b @ g) - (g @ b)).reshape(-1) % p for b in basis], axis=1))
    cen = la.nullspace(np.concatenate(rows, axis=0) % p, p)
    center = [_combine(basis, cen[:, j], p) for j in range(cen.shape[1])]
    # Berlekamp subalgebra {z : z^p = z} of the (commutative) center
    flat_c = np.stack([c.reshape(-1) for c in center], axis=1)
    frob = []
    for c in center:
        z = _matpow(c, p, p)
        co = la.solve(flat_c, ((z - c) % p).reshape(-1), p)
        frob.append(co)
    fixed = la.nullspace(np.stack(frob, axis=1), p)
    fixed_elems = [_combine(center, fixed[:, j], p) for j in range(fixed.shape[1])]
    idems = [la.identity(n)]
    for z in fixed_elems:
        refined = []
        for e in idems:
            w = (z @ e) % p
            rk_e = la.rank(e, p)
            values = [c for c in range(p) if la.rank((w - c * e) % p, p) < rk_e]
            if len(values) <= 1:
                refined.append(e)
                continue
            for c in values:
                prod = e.copy()
                for d in values:
                    if d != c:
                        prod = (prod @ ((w - d * e) % p) * pow(c - d, -1, p)) % p
                refined.append(prod)
        idems = refined
    total = 0
    for e in idems:
        k = la.rank(np.stack([((e @ c) % p).reshape(-1) for c in center], axis=1), p)
        blk = la.rank(np.stack([((e @ b) % p).reshape(-1) for b in basis], axis=1), p)
        size = math.isqrt(blk // k)
        if size * size * k != blk:
            raise ArithmeticError("block dimension is not of the form n^2 k")
        simple_dim = size * k
        rk = la.rank(e, p)
        if rk % simple_dim:
            raise ArithmeticError("block rank is not a multiple of the simple dimension")
        total += rk // simple_dim
    return total


def module_length(e: EndAlgebra, h: HomSpace) -> int:
    """Length of ``h`` as a left End(M)-module under post-composition.

    Sums the semisimple lengths of the radical layers rad^i h / rad^(i+1) h.
    """
    p = e.p
    if h.target != e.module:
        raise ValueError("the Hom space is not closed under End(M)-action")
    if h.dim == 0:
        return 0
    acts = _action_matrices(e, h)
    rad_acts = [_combine(acts, e.radical[:, k], p) for k in range(e.radical.shape[1])]
    layers = [la.identity(h.dim)]
    while layers[-1].shape[1]:
        cur = layers[-1]
        vecs = [(r @ cur[:, j]) % p for r in rad_acts for j in range(cur.shape[1])]
        layers.append(_span(vecs, h.dim, p))
    total = 0
    for top, bottom in zip(layers, layers[1:]):
        # coordinates with the first columns spanning the lower layer
        ext = la.matmul(top, la.extend_to_basis(la.solve(top, bottom, p), p), p)
        frame = np.concatenate([bottom, ext], axis=1)
        q = ext.shape[1]
        induced = []
        for a in acts:
            c = la.solve(frame, la.matmul(a, ext, p), p)
            induced.append(c[bottom.shape[1] :, :])
        total += semisimple_length(induced + [la.identity(q)], p)
    return total
