"""Enumeration of indecomposable representations and the morphism pool.

A :class:`Catalog` is the finite stand-in for the set of indecomposable
objects: every indecomposable (up to isomorphism) in each scanned dimension
vector, in canonical order.  It also knows how to decompose an arbitrary
representation into catalog entries, which is what makes characters
(functions on catalog entries) evaluable on every object.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from . import linalg as la
from .homs import DEFAULT_SEED, end_algebra, hom_basis, hom_dim, hom_system, is_indecomposable, is_isomorphic, krull_schmidt
from .quiver import (
    BudgetExceeded,
    Morphism,
    Quiver,
    Rep,
    cokernel,
    direct_sum,
    quotient,
    random_rep,
    submodule_bases,
    subrep,
)

log = logging.getLogger(__name__)

EXHAUSTIVE_BUDGET = 2**16
DEFAULT_SAMPLES = 3000

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"
DISCONNECTED = "disconnected"
SKIPPED = "skipped"


class OutOfCatalogError(LookupError):
    def __init__(self, dims: tuple[int, ...]):
        super().__init__(f"summand with dimension vector {dims} is not in the catalog")
        self.dims = dims


def _dim_vectors(n: int, per_vertex: Sequence[int], total: int | None) -> list[tuple[int, ...]]:
    out = []
    for d in product(*[range(b + 1) for b in per_vertex]):
        s = sum(d)
        if s == 0 or (total is not None and s > total):
            continue
        out.append(d)
    return sorted(out, key=_dims_order)


def _dims_order(d: Sequence[int]) -> tuple:
    return (sum(d), tuple(-x for x in d))


def _entry_order(r: Rep) -> tuple:
    flat = tuple(int(x) for m in r.maps for x in m.reshape(-1))
    return _dims_order(r.dims) + (flat,)


def _splits_off_simple(r: Rep) -> bool:
    """Cheap sufficient test for decomposability: a simple socle vector outside the radical."""
    q, p = r.quiver, r.p
    if r.total_dim <= 1:
        return False
    for v, d in enumerate(r.dims):
        if d == 0:
            continue
        outs = [r.maps[k] for k in q.outgoing(v) if r.maps[k].shape[0]]
        soc = la.nullspace(np.concatenate(outs, axis=0), p) if outs else la.identity(d)
        if soc.shape[1] == 0:
            continue
        ins = [r.maps[k] for k in q.incoming(v) if r.maps[k].shape[1]]
        rad = np.concatenate(ins, axis=1) if ins else la.zeros(d, 0)
        rk = la.rank(rad, p) if rad.shape[1] else 0
        if la.rank(np.concatenate([rad, soc], axis=1), p) > rk:
            return True
    return False


def _signature(r: Rep) -> tuple:
    return tuple(la.rank(m, r.p) if m.size else 0 for m in r.maps)


@dataclass(frozen=True, eq=False)
class Catalog:
    """Indecomposables up to isomorphism within a dimension bound, in canonical order."""

    quiver: Quiver
    p: int
    per_vertex: tuple[int, ...]
    total: int | None
    entries: tuple[Rep, ...]
    hom_dims: np.ndarray
    complete: bool
    strata: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED

    def __len__(self):
        return len(self.entries)

    @cached_property
    def names(self) -> tuple[str, ...]:
        counts: dict[tuple, int] = {}
        for e in self.entries:
            counts[e.dims] = counts.get(e.dims, 0) + 1
        seen: dict[tuple, int] = {}
        out = []
        for e in self.entries:
            if e.total_dim == 1:
                out.append("S" + self.quiver.vertices[e.dims.index(1)])
                continue
            base = "M" + ("".join(map(str, e.dims)) if max(e.dims) < 10 else ",".join(map(str, e.dims)))
            if counts[e.dims] > 1:
                seen[e.dims] = seen.get(e.dims, 0) + 1
                base += f".{seen[e.dims]}"
            out.append(base)
        return tuple(out)

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    @cached_property
    def simple_indices(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if e.total_dim == 1)

    def stratum(self, dims: Sequence[int]) -> list[int]:
        dims = tuple(dims)
        return [i for i, e in enumerate(self.entries) if e.dims == dims]

    @cached_property
    def _hom_inverse(self) -> list[list[Fraction]] | None:
        n = len(self.entries)
        if n == 0:
            return []
        cols = []
        try:
            for j in range(n):
                cols.append(la.solve_exact(self.hom_dims.tolist(), [int(i == j) for i in range(n)]))
        except la.InconsistentSystemError:
            return None
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    @cached_property
    def _cache(self) -> dict:
        out = {}
        for i, e in enumerate(self.entries):
            m = np.zeros(len(self.entries), dtype=np.int64)
            m[i] = 1
            out[e.key] = m
        return out

    def register(self, rep: Rep, multiplicities: np.ndarray) -> None:
        """Record a known decomposition (e.g. for direct sums built from entries)."""
        self._cache[rep.key] = np.asarray(multiplicities, dtype=np.int64)

    def sum_of(self, multiplicities: Sequence[int]) -> Rep:
        parts = [e for e, m in zip(self.entries, multiplicities) for _ in range(int(m))]
        rep = direct_sum(parts, self.quiver, self.p)
        self.register(rep, np.array(multiplicities))
        return rep

    def multiplicities(self, rep: Rep) -> np.ndarray:
        """Multiplicity of each catalog entry as a direct summand of ``rep``.

        On complete catalogs the vector is read off the Hom-dimension
        vector ``(dim Hom(E_i, rep))_i`` by an exact solve (the Hom table
        is invertible there); otherwise ``rep`` is decomposed with
        Krull-Schmidt and each summand matched up to isomorphism.
        """
        if rep.quiver != self.quiver or rep.p != self.p:
            raise ValueError("representation is not over the catalog's quiver and field")
        hit = self._cache.get(rep.key)
        if hit is not None:
            return hit
        if rep.is_zero():
            m = np.zeros(len(self.entries), dtype=np.int64)
        elif self.complete and self._hom_inverse is not None:
            m = self._solve_multiplicities(rep)
        else:
            m = self._ks_multiplicities(rep)
        self._cache[rep.key] = m
        return m

    def _solve_multiplicities(self, rep: Rep) -> np.ndarray:
        v = [hom_dim(e, rep) for e in self.entries]
        inv = self._hom_inverse
        m = [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in inv]
        if any(x.denominator != 1 or x < 0 for x in m):
            return self._ks_multiplicities(rep)
        out = np.array([int(x) for x in m], dtype=np.int64)
        dims = tuple(int(sum(out[i] * e.dims[v] for i, e in enumerate(self.entries))) for v in range(len(rep.dims)))
        if dims != rep.dims:
            return self._ks_multiplicities(rep)
        return out

    def _ks_multiplicities(self, rep: Rep) -> np.ndarray:
        out = np.zeros(len(self.entries), dtype=np.int64)
        for s in krull_schmidt(rep, self.seed):
            out[self.match(s)] += 1
        return out

    def index_of_rep(self, rep: Rep, missing=LookupError) -> int:
        """Index of the entry isomorphic to ``rep``; ``missing`` is returned (or raised) otherwise."""
        try:
            m = self.multiplicities(rep)
        except OutOfCatalogError:
            m = None
        if m is not None and m.sum() == 1:
            return int(np.flatnonzero(m)[0])
        if isinstance(missing, type) and issubclass(missing, Exception):
            raise missing(f"{rep.dims} is not isomorphic to a catalog entry")
        return missing

    def match(self, indecomposable: Rep) -> int:
        """Index of the entry isomorphic to ``indecomposable``."""
        for i in self.stratum(indecomposable.dims):
            if is_isomorphic(self.entries[i], indecomposable, self.seed):
                return i
        raise OutOfCatalogError(indecomposable.dims)


def _scan_stratum(q: Quiver, dims: tuple[int, ...], p: int, reps, rng) -> list[Rep]:
    found: list[Rep] = []
    sigs: list[tuple] = []
    for r in reps:
        if _splits_off_simple(r):
            continue
        e = end_algebra(r)
        if e.dim > 1 and not is_indecomposable(r, rng, end=e):
            continue
        sig = (e.dim,) + _signature(r)
        if any(s == sig and is_isomorphic(f, r) for f, s in zip(found, sigs)):
            continue
        found.append(r)
        sigs.append(sig)
    return found


def enumerate_catalog(
    q: Quiver,
    p: int = la.DEFAULT_PRIME,
    per_vertex: int | Sequence[int] | None = None,
    total: int | None = None,
    exhaustive_budget: int = EXHAUSTIVE_BUDGET,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> Catalog:
    """Enumerate indecomposables with every dimension vector inside the bound.

    Strata with at most ``exhaustive_budget`` representations are scanned
    exhaustively.  Larger strata are sampled (only at dimension vectors that
    can carry indecomposables according to root data) and flag the catalog
    as incomplete.
    """
    la.check_prime(p)
    n = len(q.vertices)
    if per_vertex is None and total is None:
        raise ValueError("need a per-vertex or a total dimension bound")
    if per_vertex is None:
        pv = (total,) * n
    elif isinstance(per_vertex, int):
        pv = (per_vertex,) * n
    else:
        pv = tuple(int(b) for b in per_vertex)
    rng = np.random.default_rng(seed)
    dynkin = q.is_dynkin()
    roots = set(q.positive_roots()) if dynkin else None
    strata: dict[tuple, str] = {}
    entries: list[Rep] = []
    for dims in _dim_vectors(n, pv, total):
        support = [v for v, d in enumerate(dims) if d]
        if not q.underlying_connected(support):
            strata[dims] = DISCONNECTED
            continue
        size = p ** sum(dims[s] * dims[t] for s, t in map(q.arrow_ends, range(len(q.arrows))))
        if size <= exhaustive_budget:
            reps = _all_reps(q, dims, p)
            strata[dims] = EXHAUSTIVE
        else:
            plausible = dims in roots if dynkin else q.tits_form(dims) <= 1
            if not plausible:
                strata[dims] = SKIPPED
                continue
            reps = (random_rep(q, dims, p, rng) for _ in range(samples))
            strata[dims] = SAMPLED
            log.info("sampling stratum %s (%d representations exceed budget)", dims, size)
        entries.extend(_scan_stratum(q, dims, p, reps, rng))
    entries.sort(key=_entry_order)
    hd = np.array([[hom_dim(a, b) for b in entries] for a in entries], dtype=np.int64).reshape(len(entries), len(entries))
    complete = bool(
        dynkin
        and all(s in (EXHAUSTIVE, DISCONNECTED) for s in strata.values())
        and all(all(r[v] <= pv[v] for v in range(n)) and (total is None or sum(r) <= total) for r in roots)
    )
    return Catalog(q, p, pv, total, tuple(entries), hd, complete, strata, seed)


def _all_reps(q: Quiver, dims, p):
    from .quiver import all_reps

    return all_reps(q, dims, p)


# --- morphism pool -------------------------------------------------------


@dataclass
class MorphismPool:
    morphisms: list[Morphism] = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)
    _keys: set = field(default_factory=set, repr=False)

    def add(self, f: Morphism, tag: str) -> bool:
        if f.is_zero() and not (f.target.is_zero() or f.source.is_zero()):
            return False
        if f.key in self._keys:
            return False
        self._keys.add(f.key)
        self.morphisms.append(f)
        self.provenance.append(tag)
        return True

    def __len__(self):
        return len(self.morphisms)

    def __iter__(self):
        return iter(zip(self.morphisms, self.provenance))


def radical_approximation(c: Catalog, i: int) -> Morphism:
    """The map from entry ``i`` into a sum of entries whose components span every radical map.

    Every non-split-mono map from the entry into a catalog object factors
    through it, so on a complete catalog it is left almost split.
    """
    m = c.entries[i]
    comps: list[Morphism] = []
    mult = np.zeros(len(c), dtype=np.int64)
    for j, x in enumerate(c.entries):
        if j == i:
            basis = end_algebra(m).radical_basis
        else:
            basis = hom_basis(m, x).basis
        comps.extend(basis)
        mult[j] += len(basis)
    if not comps:
        return m.zero_to(_zero(c))
    targets = [f.target for f in comps]
    total = direct_sum(targets)
    c.register(total, mult)
    maps = tuple(np.concatenate([f.maps[v] for f in comps], axis=0) for v in range(len(m.dims)))
    return Morphism(m, total, maps, check=False)


def _zero(c: Catalog) -> Rep:
    return Rep.zero(c.quiver, c.p)


def build_pool(c: Catalog, depth: int = 2, submodule_budget: int = 4096) -> MorphismPool:
    """Finite pool of morphisms standing in for all morphisms of the category.

    Contains identities, Hom-basis elements between entries, composites of
    basis elements up to ``depth`` factors, maps to the zero object,
    inclusions of subrepresentations of entries and the projections onto the
    quotients, and (on complete catalogs) the radical approximation of each entry.
    """
    if not c.entries:
        raise ValueError("empty catalog")
    pool = MorphismPool()
    zero = _zero(c)
    bases = {}
    for i, x in enumerate(c.entries):
        pool.add(x.identity(), "identity")
    for i, x in enumerate(c.entries):
        for j, y in enumerate(c.entries):
            bases[i, j] = hom_basis(x, y).basis
            for f in bases[i, j]:
                pool.add(f, "hom-basis")
    layer = [(i, j, f) for (i, j), fs in bases.items() for f in fs if not f.is_iso()]
    for _ in range(depth - 1):
        nxt = []
        for i, j, f in layer:
            for k in range(len(c.entries)):
                for g in bases[j, k]:
                    if g.is_iso():
                        continue
                    h = g @ f
                    if not h.is_zero() and pool.add(h, "composite"):
                        nxt.append((i, k, h))
        layer = nxt
    for i, x in enumerate(c.entries):
        pool.add(x.zero_to(zero), "zero-target")
        if c.complete:
            # on truncated catalogs these targets grow huge and are not left almost split anyway
            pool.add(radical_approximation(c, i), "sum")
    for i, x in enumerate(c.entries):
        try:
            subs = list(submodule_bases(x, submodule_budget))
        except BudgetExceeded:
            continue
        for bases_u in subs:
            dims = tuple(b.shape[1] for b in bases_u)
            if sum(dims) in (0, x.total_dim):
                continue
            _, inc = subrep(x, bases_u)
            _, proj = quotient(x, bases_u)
            pool.add(inc, "inclusion")
            pool.add(proj, "projection")
    return pool
