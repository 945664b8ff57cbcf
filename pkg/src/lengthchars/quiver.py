"""Quivers, their representations over F_p, and morphisms between them.

A :class:`Rep` stores one matrix per arrow, of shape ``dim(target) x
dim(source)``; a :class:`Morphism` stores one matrix per vertex.  All objects
are immutable.  The exact-structure operations (kernels, cokernels, images,
pushouts, subrepresentation enumeration) live at the bottom of the module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import linalg as la


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    """A finite acyclic quiver (no loops, no oriented cycles)."""

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex label")
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise QuiverError("duplicate arrow label")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise QuiverError(f"arrow {a.label} uses an unknown vertex")
            if a.source == a.target:
                raise QuiverError(f"arrow {a.label} is a loop; only acyclic quivers are supported")
        self.topological_order  # raises on cycles

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple]) -> "Quiver":
        """Build a quiver from ``(source, target)`` or ``(label, source, target)`` tuples."""
        arrows = []
        for i, e in enumerate(edges):
            if len(e) == 2:
                arrows.append(Arrow(f"a{i + 1}", str(e[0]), str(e[1])))
            else:
                arrows.append(Arrow(str(e[0]), str(e[1]), str(e[2])))
        return cls(tuple(str(v) for v in vertices), tuple(arrows))

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        indeg = [0] * len(self.vertices)
        for a in self.arrows:
            indeg[self.index[a.target]] += 1
        ready = [i for i, d in enumerate(indeg) if d == 0]
        order = []
        while ready:
            i = ready.pop(0)
            order.append(i)
            for a in self.arrows:
                if self.index[a.source] == i:
                    t = self.index[a.target]
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        ready.append(t)
        if len(order) != len(self.vertices):
            raise QuiverError("quiver has an oriented cycle")
        return tuple(order)

    def arrow_ends(self, k: int) -> tuple[int, int]:
        a = self.arrows[k]
        return self.index[a.source], self.index[a.target]

    def incoming(self, v: int) -> list[int]:
        return [k for k, a in enumerate(self.arrows) if self.index[a.target] == v]

    def outgoing(self, v: int) -> list[int]:
        return [k for k, a in enumerate(self.arrows) if self.index[a.source] == v]

    def vertex(self, v) -> int:
        if isinstance(v, (int, np.integer)) and str(v) not in self.index:
            if 0 <= v < len(self.vertices):
                return int(v)
        try:
            return self.index[str(v)]
        except KeyError:
            raise QuiverError(f"unknown vertex {v!r}") from None

    def paths_from(self, v: int) -> list[tuple[int, ...]]:
        """All paths starting at vertex ``v`` as tuples of arrow indices."""
        out: list[tuple[int, ...]] = [()]
        frontier: list[tuple[tuple[int, ...], int]] = [((), v)]
        while frontier:
            nxt = []
            for path, end in frontier:
                for k in self.outgoing(end):
                    np_ = path + (k,)
                    out.append(np_)
                    nxt.append((np_, self.arrow_ends(k)[1]))
            frontier = nxt
        return out

    def path_end(self, v: int, path: tuple[int, ...]) -> int:
        return self.arrow_ends(path[-1])[1] if path else v

    def tits_form(self, d: Sequence[int]) -> int:
        return sum(x * x for x in d) - sum(d[s] * d[t] for s, t in map(self.arrow_ends, range(len(self.arrows))))

    def underlying_connected(self, support: Iterable[int]) -> bool:
        sup = set(support)
        if not sup:
            return False
        start = next(iter(sup))
        seen = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for k in range(len(self.arrows)):
                s, t = self.arrow_ends(k)
                for a, b in ((s, t), (t, s)):
                    if a == i and b in sup and b not in seen:
                        seen.add(b)
                        stack.append(b)
        return seen == sup

    def is_dynkin(self) -> bool:
        """True iff the Tits form is positive definite (a union of ADE diagrams)."""
        n = len(self.vertices)
        g = np.zeros((n, n), dtype=object)
        for i in range(n):
            g[i, i] = 2
        for k in range(len(self.arrows)):
            s, t = self.arrow_ends(k)
            g[s, t] -= 1
            g[t, s] -= 1
        from fractions import Fraction

        # Sylvester's criterion with exact leading minors
        m = [[Fraction(int(x)) for x in row] for row in g]
        for k in range(n):
            a = [row[: k + 1] for row in m[: k + 1]]
            det = Fraction(1)
            for c in range(k + 1):
                piv = next((r for r in range(c, k + 1) if a[r][c] != 0), None)
                if piv is None:
                    return False
                if piv != c:
                    a[c], a[piv] = a[piv], a[c]
                    det = -det
                det *= a[c][c]
                for r in range(c + 1, k + 1):
                    f = a[r][c] / a[c][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
            if det <= 0:
                return False
        return True

    def positive_roots(self) -> list[tuple[int, ...]]:
        """Positive roots of a Dynkin quiver (dimension vectors with Tits form 1)."""
        if not self.is_dynkin():
            raise QuiverError("positive roots are finite only for Dynkin quivers")
        n = len(self.vertices)
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        roots = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for r in frontier:
                for i in range(n):
                    c = tuple(x + (j == i) for j, x in enumerate(r))
                    if c not in roots and self.tits_form(c) == 1:
                        roots.add(c)
                        nxt.append(c)
            frontier = nxt
        return sorted(roots, key=lambda d: (sum(d), tuple(-x for x in d)))


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Rep:
    """A finite-dimensional representation of ``quiver`` over F_p."""

    quiver: Quiver
    dims: tuple[int, ...]
    maps: tuple[np.ndarray, ...]
    p: int = la.DEFAULT_PRIME

    def __post_init__(self):
        q = self.quiver
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != len(q.vertices) or any(d < 0 for d in dims):
            raise QuiverError(f"bad dimension vector {self.dims} for {len(q.vertices)} vertices")
        if len(self.maps) != len(q.arrows):
            raise QuiverError("need exactly one matrix per arrow")
        maps = []
        for k, m in enumerate(self.maps):
            s, t = q.arrow_ends(k)
            a = np.array(m, dtype=np.int64)
            if a.size == 0:
                a = a.reshape(dims[t], dims[s])
            if a.shape != (dims[t], dims[s]):
                raise QuiverError(
                    f"arrow {q.arrows[k].label}: matrix shape {a.shape} != {(dims[t], dims[s])}"
                )
            maps.append(_freeze(a % self.p))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "maps", tuple(maps))

    @classmethod
    def from_dict(cls, quiver: Quiver, dims: Mapping | Sequence, maps: Mapping | None = None, p: int = la.DEFAULT_PRIME) -> "Rep":
        """Convenience constructor keyed by vertex and arrow labels; missing arrows are zero."""
        if isinstance(dims, Mapping):
            dv = [0] * len(quiver.vertices)
            for v, d in dims.items():
                dv[quiver.vertex(v)] = int(d)
        else:
            dv = [int(d) for d in dims]
        maps = maps or {}
        mats = []
        for k, a in enumerate(quiver.arrows):
            s, t = quiver.arrow_ends(k)
            mats.append(np.array(maps.get(a.label, np.zeros((dv[t], dv[s]))), dtype=np.int64).reshape(dv[t], dv[s]))
        return cls(quiver, tuple(dv), tuple(mats), p)

    @classmethod
    def zero(cls, quiver: Quiver, p: int = la.DEFAULT_PRIME) -> "Rep":
        n = len(quiver.vertices)
        return cls.from_dict(quiver, [0] * n, None, p)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    @cached_property
    def key(self) -> tuple:
        """Exact identity of the underlying matrices (not an isomorphism invariant)."""
        return (self.p, self.dims, tuple(m.tobytes() for m in self.maps))

    def __eq__(self, other):
        return isinstance(other, Rep) and self.quiver == other.quiver and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Rep(dims={self.dims}, p={self.p})"

    def identity(self) -> "Morphism":
        return Morphism(self, self, tuple(la.identity(d) for d in self.dims))

    def zero_to(self, other: "Rep") -> "Morphism":
        return Morphism(self, other, tuple(la.zeros(e, d) for d, e in zip(self.dims, other.dims)))

    def block_matrix(self, k: int) -> np.ndarray:
        return self.maps[k]


@dataclass(frozen=True, eq=False)
class Morphism:
    """An intertwiner ``source -> target``; the commutativity condition is checked."""

    source: Rep
    target: Rep
    maps: tuple[np.ndarray, ...]
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        x, y = self.source, self.target
        if x.quiver != y.quiver or x.p != y.p:
            raise QuiverError("morphism between representations of different quivers or fields")
        if len(self.maps) != len(x.dims):
            raise QuiverError("need one matrix per vertex")
        maps = []
        for v, m in enumerate(self.maps):
            a = np.array(m, dtype=np.int64)
            if a.size == 0:
                a = a.reshape(y.dims[v], x.dims[v])
            if a.shape != (y.dims[v], x.dims[v]):
                raise QuiverError(f"vertex {v}: shape {a.shape} != {(y.dims[v], x.dims[v])}")
            maps.append(_freeze(a % x.p))
        object.__setattr__(self, "maps", tuple(maps))
        if self.check and not self.commutes():
            raise QuiverError("vertex maps do not intertwine the arrow maps")

    def commutes(self) -> bool:
        q, p = self.source.quiver, self.source.p
        for k in range(len(q.arrows)):
            s, t = q.arrow_ends(k)
            lhs = la.matmul(self.target.maps[k], self.maps[s], p)
            rhs = la.matmul(self.maps[t], self.source.maps[k], p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    @property
    def p(self) -> int:
        return self.source.p

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """``self @ other`` is the composite ``self o other``."""
        if other.target != self.source:
            raise QuiverError("composable morphisms required")
        return Morphism(other.source, self.target, tuple(la.matmul(a, b, self.p) for a, b in zip(self.maps, other.maps)), check=False)

    def __add__(self, other: "Morphism") -> "Morphism":
        self._same_space(other)
        return Morphism(self.source, self.target, tuple((a + b) % self.p for a, b in zip(self.maps, other.maps)), check=False)

    def __sub__(self, other: "Morphism") -> "Morphism":
        self._same_space(other)
        return Morphism(self.source, self.target, tuple((a - b) % self.p for a, b in zip(self.maps, other.maps)), check=False)

    def __neg__(self) -> "Morphism":
        return self.scale(-1)

    def scale(self, c: int) -> "Morphism":
        return Morphism(self.source, self.target, tuple((c * a) % self.p for a in self.maps), check=False)

    def _same_space(self, other):
        if other.source != self.source or other.target != self.target:
            raise QuiverError("morphisms live in different Hom spaces")

    def is_zero(self) -> bool:
        return all(not m.any() for m in self.maps)

    def vector(self) -> np.ndarray:
        """Concatenated row-major vertex maps."""
        if not self.maps:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([m.reshape(-1) for m in self.maps])

    def block_diagonal(self) -> np.ndarray:
        """The morphism as one ``target.total_dim x source.total_dim`` matrix."""
        out = la.zeros(self.target.total_dim, self.source.total_dim)
        r = c = 0
        for m in self.maps:
            out[r : r + m.shape[0], c : c + m.shape[1]] = m
            r += m.shape[0]
            c += m.shape[1]
        return out

    def is_mono(self) -> bool:
        return all(la.rank(m, self.p) == m.shape[1] for m in self.maps)

    def is_epi(self) -> bool:
        return all(la.rank(m, self.p) == m.shape[0] for m in self.maps)

    def is_iso(self) -> bool:
        return self.is_mono() and self.is_epi()

    @cached_property
    def key(self) -> tuple:
        return (self.source.key, self.target.key, tuple(m.tobytes() for m in self.maps))

    def __eq__(self, other):
        return isinstance(other, Morphism) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Morphism({self.source.dims} -> {self.target.dims})"


# --- constructions -------------------------------------------------------


def _block_diag(mats: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = la.zeros(rows, cols)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def direct_sum(xs: Sequence[Rep], quiver: Quiver | None = None, p: int | None = None) -> Rep:
    """Block-diagonal direct sum; the empty sum needs ``quiver`` (and ``p``)."""
    xs = list(xs)
    if not xs:
        if quiver is None:
            raise QuiverError("empty direct sum needs an explicit quiver")
        return Rep.zero(quiver, la.DEFAULT_PRIME if p is None else p)
    q, pp = xs[0].quiver, xs[0].p
    if any(x.quiver != q or x.p != pp for x in xs):
        raise QuiverError("direct sum of representations of different quivers or fields")
    dims = tuple(sum(x.dims[v] for x in xs) for v in range(len(q.vertices)))
    maps = tuple(_block_diag([x.maps[k] for x in xs]) for k in range(len(q.arrows)))
    return Rep(q, dims, maps, pp)


def summand_inclusion(xs: Sequence[Rep], i: int, total: Rep | None = None) -> Morphism:
    total = direct_sum(xs) if total is None else total
    maps = []
    for v in range(len(total.dims)):
        m = la.zeros(total.dims[v], xs[i].dims[v])
        off = sum(x.dims[v] for x in xs[:i])
        m[off : off + xs[i].dims[v], :] = la.identity(xs[i].dims[v])
        maps.append(m)
    return Morphism(xs[i], total, tuple(maps), check=False)


def summand_projection(xs: Sequence[Rep], i: int, total: Rep | None = None) -> Morphism:
    inc = summand_inclusion(xs, i, total)
    return Morphism(inc.target, inc.source, tuple(m.T for m in inc.maps), check=False)


def direct_sum_morphisms(fs: Sequence[Morphism]) -> Morphism:
    src = direct_sum([f.source for f in fs])
    tgt = direct_sum([f.target for f in fs])
    return Morphism(src, tgt, tuple(_block_diag([f.maps[v] for f in fs]) for v in range(len(src.dims))), check=False)


def subrep(y: Rep, bases: Sequence[np.ndarray]) -> tuple[Rep, Morphism]:
    """Subrepresentation spanned by the given column bases (one per vertex)."""
    q, p = y.quiver, y.p
    maps = []
    for k in range(len(q.arrows)):
        s, t = q.arrow_ends(k)
        img = la.matmul(y.maps[k], bases[s], p)
        c = la.solve(bases[t], img, p)
        if c is None:
            raise QuiverError("subspaces are not stable under the arrow maps")
        maps.append(c)
    u = Rep(q, tuple(b.shape[1] for b in bases), tuple(maps), p)
    return u, Morphism(u, y, tuple(bases), check=False)


def quotient(y: Rep, bases: Sequence[np.ndarray]) -> tuple[Rep, Morphism]:
    """Quotient of ``y`` by the (arrow-stable) subspaces with the given bases."""
    q, p = y.quiver, y.p
    proj, sect = zip(*(la.quotient_map(b, p) for b in bases))
    maps = []
    for k in range(len(q.arrows)):
        s, t = q.arrow_ends(k)
        maps.append(la.matmul(la.matmul(proj[t], y.maps[k], p), sect[s], p))
    z = Rep(q, tuple(m.shape[0] for m in proj), tuple(maps), p)
    return z, Morphism(y, z, tuple(proj), check=False)


def kernel(f: Morphism) -> tuple[Rep, Morphism]:
    return subrep(f.source, [la.nullspace(m, f.p) for m in f.maps])


def cokernel(f: Morphism) -> tuple[Rep, Morphism]:
    return quotient(f.target, [la.column_basis(m, f.p) for m in f.maps])


def image(f: Morphism) -> tuple[Rep, Morphism, Morphism]:
    """``f = mono o epi`` through the image representation."""
    bases = [la.column_basis(m, f.p) for m in f.maps]
    im, mono = subrep(f.target, bases)
    epi_maps = []
    for b, m in zip(bases, f.maps):
        e = la.solve(b, m, f.p)
        assert e is not None
        epi_maps.append(e)
    epi = Morphism(f.source, im, tuple(epi_maps), check=False)
    return im, mono, epi


def pushout(f: Morphism, g: Morphism) -> tuple[Rep, Morphism, Morphism]:
    """Pushout of ``Y <-f- X -g-> M`` as the cokernel of ``(f, -g): X -> Y + M``."""
    if f.source != g.source:
        raise QuiverError("pushout needs morphisms with a common source")
    y, m = f.target, g.target
    ym = direct_sum([y, m])
    stacked = Morphism(f.source, ym, tuple(np.concatenate([a, (-b) % f.p], axis=0) for a, b in zip(f.maps, g.maps)), check=False)
    w, pi = cokernel(stacked)
    return w, pi @ summand_inclusion([y, m], 0, ym), pi @ summand_inclusion([y, m], 1, ym)


# --- named representations ----------------------------------------------


def simple_at(q: Quiver, v, p: int = la.DEFAULT_PRIME) -> Rep:
    i = q.vertex(v)
    return Rep.from_dict(q, [int(j == i) for j in range(len(q.vertices))], None, p)


def projective_at(q: Quiver, v, p: int = la.DEFAULT_PRIME) -> Rep:
    """Indecomposable projective at ``v``: basis = paths starting at ``v``."""
    i = q.vertex(v)
    paths = q.paths_from(i)
    at = [[path for path in paths if q.path_end(i, path) == w] for w in range(len(q.vertices))]
    pos = [{path: r for r, path in enumerate(ps)} for ps in at]
    maps = []
    for k in range(len(q.arrows)):
        s, t = q.arrow_ends(k)
        m = la.zeros(len(at[t]), len(at[s]))
        for c, path in enumerate(at[s]):
            m[pos[t][path + (k,)], c] = 1
        maps.append(m)
    return Rep(q, tuple(len(ps) for ps in at), tuple(maps), p)


def injective_at(q: Quiver, v, p: int = la.DEFAULT_PRIME) -> Rep:
    """Indecomposable injective at ``v``: dual basis = paths ending at ``v``."""
    i = q.vertex(v)
    op = Quiver(q.vertices, tuple(Arrow(a.label, a.target, a.source) for a in q.arrows))
    pr = projective_at(op, q.vertices[i], p)
    return Rep(q, pr.dims, tuple(m.T for m in pr.maps), p)


def regular_rep(q: Quiver, p: int = la.DEFAULT_PRIME) -> Rep:
    return direct_sum([projective_at(q, v, p) for v in q.vertices])


# --- subrepresentations --------------------------------------------------


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, estimate: int, budget: int):
        super().__init__(f"{what}: estimated {estimate} candidates exceeds budget {budget}")
        self.estimate = estimate
        self.budget = budget


def submodule_estimate(y: Rep) -> int:
    """Upper bound on the number of subrepresentations (product of subspace counts)."""
    out = 1
    for d in y.dims:
        out *= la.count_subspaces(d, y.p)
    return out


def _subspace_tuples(y: Rep) -> Iterator[list[np.ndarray]]:
    q, p = y.quiver, y.p
    order = q.topological_order
    n = len(order)
    chosen: list[np.ndarray | None] = [None] * len(q.vertices)

    def rec(i: int):
        if i == n:
            yield list(chosen)
            return
        v = order[i]
        d = y.dims[v]
        gens = [la.matmul(y.maps[k], chosen[q.arrow_ends(k)[0]], p) for k in q.incoming(v)]
        w = la.column_basis(np.concatenate(gens, axis=1), p) if gens else la.zeros(d, 0)
        comp = la.extend_to_basis(w, p)
        for sub in la.subspaces(comp.shape[1], p):
            basis = np.concatenate([w, la.matmul(comp, sub, p)], axis=1)
            chosen[v] = la.rref(basis.T, p)[0][: basis.shape[1]].T.copy() if basis.shape[1] else la.zeros(d, 0)
            yield from rec(i + 1)
        chosen[v] = None

    yield from rec(0)


def submodules(y: Rep, budget: int = 200_000) -> list[tuple[Rep, Morphism]]:
    """Every subrepresentation of ``y`` with its inclusion.

    Ordered by dimension vector and then by the echelon forms of the chosen
    subspaces.  Refuses with :class:`BudgetExceeded` when the up-front
    estimate exceeds ``budget``.
    """
    est = submodule_estimate(y)
    if est > budget:
        raise BudgetExceeded(f"submodules of {y.dims}", est, budget)
    found = []
    for bases in _subspace_tuples(y):
        dims = tuple(b.shape[1] for b in bases)
        key = (dims, tuple(la.subspace_key(b, y.p) for b in bases))
        found.append((key, bases))
    found.sort(key=lambda kb: kb[0])
    return [subrep(y, bases) for _, bases in found]


def submodule_bases(y: Rep, budget: int = 200_000) -> Iterator[list[np.ndarray]]:
    """Lazy variant of :func:`submodules` yielding only the subspace bases (unordered)."""
    est = submodule_estimate(y)
    if est > budget:
        raise BudgetExceeded(f"submodules of {y.dims}", est, budget)
    yield from _subspace_tuples(y)


def random_rep(q: Quiver, dims: Sequence[int], p: int, rng: np.random.Generator) -> Rep:
    maps = []
    for k in range(len(q.arrows)):
        s, t = q.arrow_ends(k)
        maps.append(rng.integers(0, p, size=(dims[t], dims[s])))
    return Rep(q, tuple(dims), tuple(maps), p)


def all_reps(q: Quiver, dims: Sequence[int], p: int) -> Iterator[Rep]:
    """Every representation with dimension vector ``dims`` (p^(sum of matrix sizes) of them)."""
    shapes = [(dims[q.arrow_ends(k)[1]], dims[q.arrow_ends(k)[0]]) for k in range(len(q.arrows))]
    sizes = [r * c for r, c in shapes]
    total = sum(sizes)
    for values in product(range(p), repeat=total):
        arr = np.array(values, dtype=np.int64)
        maps = []
        off = 0
        for (r, c), sz in zip(shapes, sizes):
            maps.append(arr[off : off + sz].reshape(r, c))
            off += sz
        yield Rep(q, tuple(dims), tuple(maps), p)
