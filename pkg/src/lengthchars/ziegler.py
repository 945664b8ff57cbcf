"""Finite-scale topology on the irreducible characters of a catalog.

For a morphism ``a: X -> Y`` and a character ``x`` put
``x(a) = x(X) - x(Y) + x(Coker a)``.  The sets ``U_a = {x : x(a) != 0}``
form a basis of opens.  Here ``a`` ranges over a finite pool, so a point can
be certified isolated (some ``U_a`` is the singleton) but never certified
non-isolated.

Every ``x(a)`` only depends on the multiplicity vector
``m(X) - m(Y) + m(Coker a)``, which is computed once per pool morphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .catalog import Catalog, MorphismPool, OutOfCatalogError, build_pool
from .character import Character, degree, evaluate, module_characters, verify_axioms
from .homs import end_algebra, hom_basis
from .quiver import Morphism, cokernel, pushout

DISCRETE = "discrete-certified"
DISCRETE_TRUNCATED = "discrete-relative-to-truncation"
UNRESOLVED = "unresolved"


def presentation_vector(c: Catalog, f: Morphism) -> np.ndarray:
    """``m(X) - m(Y) + m(Coker f)`` as catalog multiplicities."""
    coker, _ = cokernel(f)
    return c.multiplicities(f.source) - c.multiplicities(f.target) + c.multiplicities(coker)


def chi_alpha(x: Character, f: Morphism) -> int:
    """``x(X) - x(Y) + x(Coker f)`` for ``f: X -> Y``; never negative for a character."""
    coker, _ = cokernel(f)
    val = evaluate(x, f.source) - evaluate(x, f.target) + evaluate(x, coker)
    assert val >= 0, f"negative value {val} of {x} on a presented functor"
    return val


@dataclass
class SpectrumModel:
    catalog: Catalog
    points: list[Character]
    pool: MorphismPool
    vectors: np.ndarray  # one presentation vector per evaluable pool morphism
    evaluable: list[int]  # pool indices behind the rows of ``vectors``
    unevaluable: list[int] = field(default_factory=list)

    @property
    def values(self) -> np.ndarray:
        """``values[k, j]`` is point ``j`` evaluated on pool morphism ``evaluable[k]``."""
        pts = np.array([x.values for x in self.points], dtype=np.int64).reshape(len(self.points), -1)
        return self.vectors @ pts.T

    def opens(self) -> list[frozenset[int]]:
        """``U_a`` as a set of point indices for each evaluable pool morphism."""
        vals = self.values
        return [frozenset(np.flatnonzero(row).tolist()) for row in vals]

    def point_index(self, x: Character) -> int:
        return self.points.index(x)

    def add_morphism(self, f: Morphism, tag: str) -> int | None:
        """Append ``f`` to the pool and the opens table; returns its row or ``None``."""
        if not self.pool.add(f, tag):
            return None
        try:
            v = presentation_vector(self.catalog, f)
        except OutOfCatalogError:
            self.unevaluable.append(len(self.pool) - 1)
            return None
        self.vectors = np.vstack([self.vectors, v[None, :]])
        self.evaluable.append(len(self.pool) - 1)
        return len(self.evaluable) - 1


def build_model(c: Catalog, depth: int = 2, verify_cap: int | None = None, pool: MorphismPool | None = None) -> SpectrumModel:
    """Points are the characters of the catalog entries; opens come from the pool."""
    points = module_characters(c)
    if len({x.values for x in points}) != len(points):
        raise ValueError("two catalog entries share a character")
    if verify_cap is not None:
        for x in points:
            rep = verify_axioms(x, verify_cap)
            if not rep.ok:
                raise ValueError(f"{x} fails the axioms: {rep.describe()[:1]}")
    pool = pool if pool is not None else build_pool(c, depth)
    rows, good, bad = [], [], []
    for k, f in enumerate(pool.morphisms):
        try:
            rows.append(presentation_vector(c, f))
            good.append(k)
        except OutOfCatalogError:
            bad.append(k)
    vectors = np.array(rows, dtype=np.int64).reshape(len(rows), len(c.entries))
    model = SpectrumModel(c, points, pool, vectors, good, bad)
    if (model.values < 0).any():
        raise AssertionError("negative presentation value; the pool or catalog is inconsistent")
    return model


def basic_open(f: Morphism, s: SpectrumModel) -> list[Character]:
    v = presentation_vector(s.catalog, f)
    return [x for x in s.points if int(v @ x.vector) != 0]


def closed_v(f: Morphism, n: int, s: SpectrumModel) -> list[Character]:
    v = presentation_vector(s.catalog, f)
    return [x for x in s.points if int(v @ x.vector) <= n]


def degree_v(n: int, s: SpectrumModel) -> list[Character]:
    return [x for x in s.points if degree(x) <= n]


# --- left almost split maps ----------------------------------------------


def _span_rank(vectors: list[np.ndarray], n: int, p: int) -> int:
    if not vectors:
        return 0
    return la.rank(np.stack(vectors, axis=1).reshape(n, len(vectors)), p)


def is_split_mono(f: Morphism) -> bool:
    """Whether some ``r`` satisfies ``r f = 1``; a linear condition on Hom(target, source)."""
    m = f.source
    if m.is_zero():
        return True
    rs = hom_basis(f.target, m).basis
    if not rs:
        return False
    cols = np.stack([(r @ f).vector() for r in rs], axis=1)
    return la.solve(cols, m.identity().vector(), m.p) is not None


def left_almost_split_check(f: Morphism, s: SpectrumModel) -> bool:
    """``f: M -> N`` is not split mono and every radical map from ``M`` to an entry factors through ``f``.

    For an indecomposable ``M`` the maps into an indecomposable ``X`` that
    are not split mono form a subspace: all of Hom(M, X) if ``X`` is not
    isomorphic to ``M``, and the radical of End(M) otherwise.  Factoring is
    membership in the image of ``h -> h f``, so the whole test is linear.
    """
    c = s.catalog
    m = f.source
    i = c.index_of_rep(m)
    if is_split_mono(f):
        return False
    p = c.p
    for j, x in enumerate(c.entries):
        if j == i:
            radicals = [g.vector() for g in end_algebra(m).radical_basis]
        else:
            radicals = [g.vector() for g in hom_basis(m, x).basis]
        if not radicals:
            continue
        n = radicals[0].size
        through = [(h @ f).vector() for h in hom_basis(f.target, x).basis]
        r0 = _span_rank(through, n, p)
        if _span_rank(through + radicals, n, p) != r0:
            return False
    return True


# --- isolation ------------------------------------------------------------


@dataclass(frozen=True)
class IsolationCertificate:
    point: Character
    morphism: Morphism
    tag: str
    almost_split_checked: bool

    def describe(self, c: Catalog) -> str:
        f = self.morphism
        flag = " (left almost split)" if self.almost_split_checked else ""
        return f"{self.point.label}: U[{_obj(c, f.source)} -> {_obj(c, f.target)}] [{self.tag}]{flag}"


def _obj(c: Catalog, r) -> str:
    if r.is_zero():
        return "0"
    try:
        mult = c.multiplicities(r)
    except OutOfCatalogError:
        return f"?{r.dims}"
    parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(c.names, mult) if k]
    return "+".join(parts)


def _augment_with_pushouts(s: SpectrumModel, rows: list[int]) -> None:
    """Push singleton-open maps ``a: X -> Y`` out along every basis map ``X -> M``."""
    c = s.catalog
    for r in rows:
        a = s.pool.morphisms[s.evaluable[r]]
        if a.source.is_zero():
            continue
        for j, m in enumerate(c.entries):
            for g in hom_basis(a.source, m).basis:
                _, _, from_m = pushout(a, g)
                s.add_morphism(from_m, "pushout")


def isolated_points(s: SpectrumModel, augment: bool = True) -> tuple[list[IsolationCertificate], list[Character]]:
    """Certificates for points with a singleton basic open, and the points left unresolved."""
    c = s.catalog

    def singletons():
        out: dict[int, list[int]] = {}
        for r, u in enumerate(s.opens()):
            if len(u) == 1:
                out.setdefault(next(iter(u)), []).append(r)
        return out

    found = singletons()
    if augment:
        _augment_with_pushouts(s, [r for rs in found.values() for r in rs])
        found = singletons()
    certs, unresolved = [], []
    for j, x in enumerate(s.points):
        rows = found.get(j, [])
        if not rows:
            unresolved.append(x)
            continue
        chosen = None
        for r in rows:
            f = s.pool.morphisms[s.evaluable[r]]
            if c.complete and _is_entry(c, f.source, j) and left_almost_split_check(f, s):
                chosen = (r, True)
                break
        if chosen is None:
            chosen = (rows[0], False)
        r, las = chosen
        k = s.evaluable[r]
        certs.append(IsolationCertificate(x, s.pool.morphisms[k], s.pool.provenance[k], las))
    return certs, unresolved


def _is_entry(c: Catalog, r, j: int) -> bool:
    return not r.is_zero() and r.dims == c.entries[j].dims and c.index_of_rep(r, missing=None) == j


@dataclass(frozen=True)
class DiscretenessVerdict:
    status: str
    certified: int
    total: int
    unresolved: tuple[str, ...]

    def __bool__(self):
        return self.status == DISCRETE

    def __str__(self):
        s = f"{self.status} {self.certified}/{self.total}"
        if self.unresolved:
            s += " unresolved: " + ", ".join(self.unresolved)
        return s


def is_discrete(s: SpectrumModel, certificates=None) -> DiscretenessVerdict:
    """Discrete-certified iff every point is certified isolated on a complete catalog."""
    if certificates is None:
        certs, unresolved = isolated_points(s)
    else:
        certs, unresolved = certificates
    names = tuple(x.label or str(x.values) for x in unresolved)
    if unresolved:
        status = UNRESOLVED
    elif s.catalog.complete:
        status = DISCRETE
    else:
        status = DISCRETE_TRUNCATED
    return DiscretenessVerdict(status, len(certs), len(s.points), names)


@dataclass
class TopologyReport:
    verdict: DiscretenessVerdict
    certificates: list[IsolationCertificate]
    unresolved: list[Character]
    opens: list[tuple[str, str, str, tuple[str, ...]]]  # (source, target, tag, members)
    distinct_opens: int
    unevaluable: int

    def lines(self, c: Catalog) -> list[str]:
        out = [f"verdict: {self.verdict}"]
        if not c.complete:
            out.append("catalog: truncated; unresolved points are not claimed to be non-isolated")
        for cert in self.certificates:
            out.append("isolated " + cert.describe(c))
        for x in self.unresolved:
            out.append(f"unresolved {x.label}")
        out.append(f"distinct basic opens: {self.distinct_opens}")
        if self.unevaluable:
            out.append(f"pool morphisms with cokernel outside the catalog: {self.unevaluable}")
        for src, tgt, tag, members in self.opens:
            out.append(f"open {src} -> {tgt} [{tag}]: {{{', '.join(members)}}}")
        return out


def topology_report(s: SpectrumModel) -> TopologyReport:
    certs, unresolved = isolated_points(s)
    verdict = is_discrete(s, (certs, unresolved))
    c = s.catalog
    opens = []
    seen = set()
    for r, u in enumerate(s.opens()):
        f = s.pool.morphisms[s.evaluable[r]]
        members = tuple(s.points[j].label for j in sorted(u))
        seen.add(u)
        opens.append((_obj(c, f.source), _obj(c, f.target), s.pool.provenance[s.evaluable[r]], members))
    return TopologyReport(verdict, certs, unresolved, opens, len(seen), len(s.unevaluable))
