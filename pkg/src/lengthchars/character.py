"""Characters: additive, right-exact-subadditive functions on objects.

A :class:`Character` is stored as its values on the catalog entries and is
extended to every object by additivity over Krull-Schmidt summands.  The
character of a module ``M`` sends ``X`` to the length of ``Hom(X, M)`` as a
module over ``End(M)``.

Axiom checking uses the reduced form ``chi(U) + chi(Y/U) >= chi(Y)`` for
every subobject ``U`` of ``Y``: given ``X -> Y -> Z -> 0`` put ``U`` the
image of ``X``; then ``Z = Y/U`` and ``chi(X) >= chi(U)`` because
``X -> U -> 0 -> 0`` is exact and ``chi(0) = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la
from .catalog import Catalog
from .homs import end_algebra, hom_basis, module_length
from .quiver import BudgetExceeded, Rep, direct_sum, quotient, regular_rep, submodule_bases, subrep

SPLITTING_LIMIT = 2**20


@dataclass(frozen=True, eq=False)
class Character:
    catalog: Catalog
    values: tuple[int, ...]
    label: str | None = None
    module: Rep | None = field(default=None, repr=False)

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if len(vals) != len(self.catalog.entries):
            raise ValueError(f"character needs {len(self.catalog.entries)} values, got {len(vals)}")
        if any(v < 0 for v in vals):
            raise ValueError("character values must be non-negative")
        object.__setattr__(self, "values", vals)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, Character) and other.catalog is self.catalog and other.values == self.values

    def __hash__(self):
        return hash((id(self.catalog), self.values))

    def __add__(self, other: "Character") -> "Character":
        return add(self, other)

    def __rmul__(self, n: int) -> "Character":
        return Character(self.catalog, tuple(n * v for v in self.values), label=f"{n}*{self.label}")

    def __le__(self, other: "Character") -> bool:
        return leq(self, other)

    def is_zero(self) -> bool:
        return not any(self.values)

    def __repr__(self):
        return f"Character({self.label or ''}{self.values})"


def _same_catalog(x: Character, y: Character) -> None:
    if x.catalog is not y.catalog:
        raise ValueError("characters over different catalogs")


def add(x: Character, y: Character) -> Character:
    _same_catalog(x, y)
    return Character(x.catalog, tuple(a + b for a, b in zip(x.values, y.values)), label="sum")


def leq(x: Character, y: Character) -> bool:
    """Pointwise order on catalog entries."""
    _same_catalog(x, y)
    return all(a <= b for a, b in zip(x.values, y.values))


def zero_character(c: Catalog) -> Character:
    return Character(c, (0,) * len(c.entries), label="0")


def char_of_module(m: Rep, c: Catalog, label: str | None = None) -> Character:
    """``X -> length over End(m) of Hom(X, m)``, tabulated on the catalog."""
    if m.is_zero():
        raise ValueError("the zero module has the zero character; refusing to build it here")
    if m.quiver != c.quiver or m.p != c.p:
        raise ValueError("module and catalog live over different quivers or fields")
    e = end_algebra(m)
    values = tuple(module_length(e, hom_basis(x, m)) for x in c.entries)
    if label is None:
        name = next((n for n, x in zip(c.names, c.entries) if x == m), None)
        label = f"chi_{name}" if name else f"chi{m.dims}"
    return Character(c, values, label=label, module=m)


def module_characters(c: Catalog) -> list[Character]:
    return [char_of_module(x, c, label=f"chi_{n}") for x, n in zip(c.entries, c.names)]


def evaluate(x: Character, m: Rep) -> int:
    """Value on an arbitrary object, summed over its indecomposable summands."""
    mult = x.catalog.multiplicities(m)
    return int(mult @ x.vector)


def degree(x: Character) -> int:
    """Sum of the values on the simple objects."""
    c = x.catalog
    if len(c.simple_indices) != len(c.quiver.vertices):
        raise ValueError("catalog does not contain every simple representation")
    return sum(x.values[i] for i in c.simple_indices)


def endolength(m: Rep, catalog: Catalog | None = None) -> int:
    """Length of ``m`` over End(m), i.e. the character of ``m`` at the regular module."""
    if m.is_zero():
        raise ValueError("endolength of the zero module is undefined here")
    if catalog is not None:
        return evaluate(char_of_module(m, catalog), regular_rep(catalog.quiver, catalog.p))
    return module_length(end_algebra(m), hom_basis(regular_rep(m.quiver, m.p), m))


# --- decomposition into irreducibles ------------------------------------


class NotDecomposableError(ValueError):
    def __init__(self, reason: str, coefficients: Sequence[Fraction] | None = None):
        msg = f"not decomposable over the given irreducibles: {reason}"
        if coefficients is not None:
            msg += f" (rational solution {[str(c) for c in coefficients]})"
        super().__init__(msg)
        self.reason = reason
        self.coefficients = None if coefficients is None else list(coefficients)


@dataclass(frozen=True)
class DecompositionResult:
    multiplicities: dict
    relative_to_truncation: bool = False

    @property
    def residual_zero(self) -> bool:
        return True

    def total(self, catalog: Catalog) -> Character:
        out = zero_character(catalog)
        for chi, n in self.multiplicities.items():
            out = out + n * chi
        return out


def decompose(x: Character, irreducibles: Sequence[Character] | None = None) -> DecompositionResult:
    """Write ``x`` as a non-negative integer combination of ``irreducibles``.

    Exact rational solve against the value matrix, then integrality and
    sign checks.
    """
    c = x.catalog
    irr = list(irreducibles) if irreducibles is not None else module_characters(c)
    for chi in irr:
        _same_catalog(x, chi)
    if x.is_zero():
        return DecompositionResult({}, not c.complete)
    mat = [[chi.values[j] for chi in irr] for j in range(len(c.entries))]
    try:
        coeffs = la.solve_exact(mat, list(x.values))
    except la.InconsistentSystemError:
        raise NotDecomposableError("no rational solution") from None
    if any(a.denominator != 1 for a in coeffs):
        raise NotDecomposableError("non-integral coefficients", coeffs)
    if any(a < 0 for a in coeffs):
        raise NotDecomposableError("non-negativity violation", coeffs)
    mult = {chi: int(a) for chi, a in zip(irr, coeffs) if a}
    return DecompositionResult(mult, not c.complete)


# --- axiom verification --------------------------------------------------


@dataclass(frozen=True)
class SequenceWitness:
    """``0 -> U -> Y -> Y/U -> 0`` recorded by catalog multiplicities."""

    sub: tuple[int, ...]
    quotient: tuple[int, ...]
    middle: tuple[int, ...]

    def describe(self, c: Catalog) -> str:
        return f"0->{_fmt(self.sub, c)}->{_fmt(self.middle, c)}->{_fmt(self.quotient, c)}->0"


def _fmt(mult: Sequence[int], c: Catalog) -> str:
    parts = []
    for n, m in zip(c.names, mult):
        if m:
            parts.append(n if m == 1 else f"{n}^{m}")
    return "+".join(parts) if parts else "0"


@dataclass
class SequenceTable:
    """Distinct multiplicity patterns of short exact sequences up to a total-dimension cap."""

    catalog: Catalog
    cap: int
    witnesses: list[SequenceWitness]
    objects_checked: int
    sequences_checked: int
    skipped: list[str]

    def __post_init__(self):
        n = len(self.catalog.entries)
        if self.witnesses:
            u = np.array([w.sub for w in self.witnesses], dtype=np.int64)
            z = np.array([w.quotient for w in self.witnesses], dtype=np.int64)
            y = np.array([w.middle for w in self.witnesses], dtype=np.int64)
            self.defect = u + z - y
        else:
            self.defect = np.zeros((0, n), dtype=np.int64)


def _multisets(c: Catalog, cap: int):
    dims = [e.total_dim for e in c.entries]
    n = len(dims)

    def rec(i: int, room: int, acc: list[int]):
        if i == n:
            yield tuple(acc)
            return
        for k in range(room // dims[i] + 1):
            acc.append(k)
            yield from rec(i + 1, room - k * dims[i], acc)
            acc.pop()

    for m in rec(0, cap, []):
        if any(m):
            yield m


_TABLES: dict = {}


def sequence_table(c: Catalog, cap: int, budget: int = 200_000) -> SequenceTable:
    """Enumerate every sub-object ``U`` of every sum of entries ``Y`` with dim Y <= cap."""
    key = (id(c), cap, budget)
    hit = _TABLES.get(key)
    if hit is not None and hit.catalog is c:
        return hit
    seen: dict[tuple, SequenceWitness] = {}
    objects = sequences = 0
    skipped = []
    for mult in _multisets(c, cap):
        y = c.sum_of(mult)
        try:
            subs = submodule_bases(y, budget)
            objects += 1
            for bases in subs:
                sequences += 1
                u, _ = subrep(y, bases)
                z, _ = quotient(y, bases)
                mu = tuple(int(v) for v in c.multiplicities(u))
                mz = tuple(int(v) for v in c.multiplicities(z))
                w = SequenceWitness(mu, mz, mult)
                seen.setdefault((mu, mz, mult), w)
        except BudgetExceeded as exc:
            skipped.append(f"{_fmt(mult, c)}: {exc}")
    table = SequenceTable(c, cap, list(seen.values()), objects, sequences, skipped)
    _TABLES[key] = table
    return table


@dataclass
class AxiomReport:
    character: Character
    cap: int
    objects_checked: int
    sequences_checked: int
    violations: list[SequenceWitness]
    skipped: list[str]
    additivity_ok: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations and self.additivity_ok

    def describe(self) -> list[str]:
        c = self.character.catalog
        x = self.character.vector
        out = []
        for w in self.violations:
            vu, vz, vy = (int(np.array(t) @ x) for t in (w.sub, w.quotient, w.middle))
            out.append(f"{w.describe(c)}: {vu} + {vz} < {vy}")
        return out


def verify_axioms(x: Character, dim_cap: int, budget: int = 200_000) -> AxiomReport:
    """Check subadditivity on every short exact sequence with middle term of total dim <= cap."""
    c = x.catalog
    table = sequence_table(c, dim_cap, budget)
    vec = x.vector
    bad = np.flatnonzero(table.defect @ vec < 0)
    violations = sorted((table.witnesses[i] for i in bad), key=lambda w: (sum(w.middle), w.middle, w.sub))
    additive = True
    for i, j in itertools.combinations_with_replacement(range(min(len(c.entries), 4)), 2):
        s = direct_sum([c.entries[i], c.entries[j]])
        if int(c.multiplicities(s) @ vec) != x.values[i] + x.values[j]:
            additive = False
    return AxiomReport(x, dim_cap, table.objects_checked, table.sequences_checked, violations, list(table.skipped), additive)


@dataclass(frozen=True)
class IrreducibilityVerdict:
    irreducible: bool
    cap: int
    witness: tuple[Character, Character] | None = None

    def __bool__(self):
        return self.irreducible

    def __str__(self):
        if self.irreducible:
            return f"irreducible-relative-to-cap({self.cap})"
        return f"reducible: {self.witness[0].values} + {self.witness[1].values}"


def is_irreducible(x: Character, dim_cap: int, budget: int = 200_000) -> IrreducibilityVerdict:
    """Search all splittings ``x = y + z`` into characters that pass the cap-bounded axioms."""
    if x.is_zero():
        raise ValueError("the zero character is not irreducible by definition")
    size = int(np.prod([v + 1 for v in x.values], dtype=object))
    if size > SPLITTING_LIMIT:
        raise BudgetExceeded("character splittings", size, SPLITTING_LIMIT)
    c = x.catalog
    d = sequence_table(c, dim_cap, budget).defect
    vec = x.vector
    ranges = [range(v + 1) for v in x.values]
    cands = itertools.product(*ranges)
    while True:
        chunk = np.array(list(itertools.islice(cands, 8192)), dtype=np.int64)
        if chunk.size == 0:
            break
        comp = vec - chunk
        ok = np.ones(len(chunk), dtype=bool)
        if d.size:
            ok &= ((d @ chunk.T) >= 0).all(axis=0)
            ok &= ((d @ comp.T) >= 0).all(axis=0)
        ok &= chunk.any(axis=1) & comp.any(axis=1)
        hits = np.flatnonzero(ok)
        if hits.size:
            y = chunk[hits[0]]
            return IrreducibilityVerdict(False, dim_cap, (Character(c, tuple(y), "y"), Character(c, tuple(vec - y), "z")))
    return IrreducibilityVerdict(True, dim_cap)
