"""Subobject-closed subcategories of a catalog and the invariant sub(x).

An entry ``X`` is a subobject of a finite sum of copies of ``M`` iff the
kernels of a basis of Hom(X, M) meet in zero.  Stacking the basis maps at
each vertex turns this into a rank test, so no power ``M^k`` is ever built.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg as la
from .catalog import Catalog
from .character import Character, leq
from .homs import hom_basis
from .quiver import Rep
from .ziegler import SpectrumModel

SUBSET_CAP = 2**16


def embeds_in_power(x: Rep, m: Rep) -> bool:
    """Whether ``x`` is a subobject of ``m^k`` for some ``k``."""
    if x.quiver != m.quiver:
        raise ValueError("representations over different quivers")
    if x.is_zero():
        return True
    basis = hom_basis(x, m).basis
    for v, d in enumerate(x.dims):
        if d == 0:
            continue
        if not basis:
            return False
        stacked = np.concatenate([f.maps[v] for f in basis], axis=0)
        if la.rank(stacked, x.p) < d:
            return False
    return True


@dataclass(frozen=True)
class SubClosedSet:
    catalog: Catalog = field(repr=False, compare=False)
    members: frozenset[int]
    generator: object = field(default=None, repr=False, compare=False)

    def names(self) -> list[str]:
        return [self.catalog.names[i] for i in sorted(self.members)]

    def __contains__(self, i) -> bool:
        return i in self.members

    def __le__(self, other: "SubClosedSet") -> bool:
        return self.members <= other.members

    def __len__(self):
        return len(self.members)

    def __str__(self):
        return "{" + ", ".join(self.names()) + "}"


_STACKS: dict = {}


def _stacks(c: Catalog) -> list[list[list[np.ndarray]]]:
    """``out[j][i][v]``: the Hom(E_j, E_i) basis maps at vertex ``v``, stacked vertically."""
    hit = _STACKS.get(id(c))
    if hit is not None and hit[0] is c:
        return hit[1]
    out = []
    for x in c.entries:
        row = []
        for g in c.entries:
            basis = hom_basis(x, g).basis
            row.append([np.concatenate([f.maps[v] for f in basis], axis=0) if basis else la.zeros(0, d) for v, d in enumerate(x.dims)])
        out.append(row)
    _STACKS[id(c)] = (c, out)
    return out


def _closure_indices(c: Catalog, gens: Sequence[int]) -> frozenset[int]:
    if not gens:
        return frozenset()
    st = _stacks(c)
    members = []
    for j, x in enumerate(c.entries):
        ok = True
        for v, d in enumerate(x.dims):
            if d and la.rank(np.concatenate([st[j][i][v] for i in gens], axis=0), c.p) < d:
                ok = False
                break
        if ok:
            members.append(j)
    return frozenset(members)


def _summand_indices(c: Catalog, gens: Iterable[Rep]) -> list[int]:
    idx = set()
    for g in gens:
        idx.update(np.flatnonzero(c.multiplicities(g)).tolist())
    return sorted(idx)


def sub_closure(gens: Sequence[Rep], c: Catalog) -> SubClosedSet:
    """Entries embedding into a finite sum of copies of the generators."""
    idx = _summand_indices(c, gens)
    members = _closure_indices(c, idx)
    assert _closure_indices(c, sorted(members)) == members, "closure is not a fixed point"
    return SubClosedSet(c, members, tuple(gens))


def closure_of_indices(c: Catalog, idx: Iterable[int]) -> SubClosedSet:
    return SubClosedSet(c, _closure_indices(c, sorted(set(idx))), None)


def sub_chi(x: Character, s: SpectrumModel) -> frozenset[int]:
    """Point indices of the characters ``x_N`` with ``N`` in sub(M), for ``x = x_M``."""
    if x.module is None:
        raise ValueError("sub(x) is only available for characters of known modules")
    closed = sub_closure([x.module], s.catalog)
    return frozenset(j for j, pt in enumerate(s.points) if pt.module is not None and s.catalog.index_of_rep(pt.module, None) in closed.members)


@dataclass
class SubTheoremReport:
    sets: list[frozenset[int]]
    pairs_checked: int
    collisions: list[tuple[int, int]]

    @property
    def injective(self) -> bool:
        return not self.collisions


def verify_sub_theorem(s: SpectrumModel) -> SubTheoremReport:
    """Check that distinct points have distinct sub(x)."""
    sets = [sub_chi(x, s) for x in s.points]
    pairs = list(itertools.combinations(range(len(sets)), 2))
    collisions = [(i, j) for i, j in pairs if sets[i] == sets[j] and s.points[i] != s.points[j]]
    return SubTheoremReport(sets, len(pairs), collisions)


@dataclass
class OrderReport:
    points: list[str]
    pairs: list[tuple[int, int, bool, bool]]  # (i, j, x_i <= x_j, sub(x_i) <= sub(x_j))
    down_sets: list[frozenset[int]]  # U_psi = {x : x <= psi}

    @property
    def disagreements(self) -> list[tuple[int, int, bool, bool]]:
        return [t for t in self.pairs if t[2] != t[3]]

    def hasse(self, which: int) -> list[tuple[int, int]]:
        """Covering relations of the order in column ``which`` (2 for <=, 3 for sub-inclusion)."""
        rel = {(i, j) for i, j, *v in self.pairs if v[which - 2] and i != j}
        return sorted((i, j) for i, j in rel if not any((i, k) in rel and (k, j) in rel for k in range(len(self.points))))


def compare_orders(s: SpectrumModel) -> OrderReport:
    sets = [sub_chi(x, s) for x in s.points]
    n = len(s.points)
    pairs = [(i, j, leq(s.points[i], s.points[j]), sets[i] <= sets[j]) for i in range(n) for j in range(n)]
    down = [frozenset(i for i in range(n) if leq(s.points[i], s.points[j])) for j in range(n)]
    return OrderReport([x.label for x in s.points], pairs, down)


@dataclass
class SubClosedFamily:
    sets: list[SubClosedSet]

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def member_sets(self) -> set[frozenset[int]]:
        return {s.members for s in self.sets}

    def intersection_closed(self) -> bool:
        fam = self.member_sets()
        return all(a & b in fam for a, b in itertools.combinations(fam, 2))

    def minimal_from(self, k: int) -> list[SubClosedSet]:
        """Inclusion-minimal members among those with at least ``k`` elements."""
        big = [s for s in self.sets if len(s) >= k]
        return [s for s in big if not any(t.members < s.members for t in big)]

    def hasse(self) -> list[tuple[int, int]]:
        """Covering pairs ``(i, j)`` with ``sets[i]`` a maximal proper subset of ``sets[j]``."""
        ms = [s.members for s in self.sets]
        out = []
        for i, j in itertools.permutations(range(len(ms)), 2):
            if ms[i] < ms[j] and not any(ms[i] < ms[k] < ms[j] for k in range(len(ms))):
                out.append((i, j))
        return sorted(out)


def all_subclosed_sets(c: Catalog, cap: int = SUBSET_CAP) -> SubClosedFamily:
    """Every subobject-closed set of entries, by closing all subsets."""
    n = len(c.entries)
    if 2**n > cap:
        raise ValueError(f"2^{n} subsets exceeds the cap {cap}")
    found: dict[frozenset[int], None] = {}
    for r in range(n + 1):
        for sub in itertools.combinations(range(n), r):
            found.setdefault(_closure_indices(c, list(sub)), None)
    sets = sorted(found, key=lambda m: (len(m), sorted(m)))
    fam = SubClosedFamily([SubClosedSet(c, m) for m in sets])
    if not fam.intersection_closed():
        raise AssertionError("sub-closed sets are not closed under intersection")
    return fam
