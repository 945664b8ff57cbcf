"""Acceptance criteria at desk scale.

Each ``test_criterion_*`` prints (and records for the terminal summary) a
single ``PASS``/``FAIL`` line.  Wall-clock limits include catalog
construction, which the module fixtures time separately.
"""

import itertools
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, a2_quiver, a3_quiver, d4_quiver, kronecker_quiver
from lengthchars import (
    Character,
    NotDecomposableError,
    build_model,
    decompose,
    degree,
    direct_sum,
    direct_sum_morphisms,
    end_algebra,
    endolength,
    enumerate_catalog,
    is_isomorphic,
    krull_schmidt,
    verify_axioms,
)
from lengthchars.quiver import random_rep
from lengthchars.subcat import all_subclosed_sets, closure_of_indices, sub_chi, verify_sub_theorem
from lengthchars.ziegler import DISCRETE, chi_alpha, is_discrete, isolated_points, topology_report

STATED_A2_ENDOLENGTHS = (1, 2, 2)


def report(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


@pytest.fixture(scope="module")
def a2_built():
    return _timed(lambda: build_model(enumerate_catalog(a2_quiver(), 2, per_vertex=2)))


@pytest.fixture(scope="module")
def a3_built():
    return _timed(lambda: build_model(enumerate_catalog(a3_quiver(), 2, total=3)))


@pytest.fixture(scope="module")
def d4_built():
    return _timed(lambda: build_model(enumerate_catalog(d4_quiver(), 2, per_vertex=2)))


@pytest.fixture(scope="module")
def kron_built():
    return _timed(lambda: build_model(enumerate_catalog(kronecker_quiver(), 2, per_vertex=3)))


def _endolength_oracle(m):
    # End(M) = F_p for these modules, so the length over End(M) is the total dimension.
    assert end_algebra(m).dim == 1
    return m.total_dim


def test_criterion_1_a2(a2_built):
    (s, build) = a2_built
    t = time.perf_counter()
    c = s.catalog
    dims = {e.dims for e in c.entries}
    table = tuple(x.values for x in s.points)
    degrees = tuple(degree(x) for x in s.points)
    endo = tuple(endolength(e, c) for e in c.entries)
    certs, unresolved = isolated_points(s)
    verdict = is_discrete(s, (certs, unresolved))
    s2, p = c.index_of("S2"), c.index_of("M11")
    cert_s2 = next(k for k in certs if k.point == s.points[s2])
    alpha = cert_s2.morphism
    alpha_ok = c.index_of_rep(alpha.source) == s2 and c.index_of_rep(alpha.target) == p and alpha.is_mono()
    subs = [sub_chi(x, s) for x in s.points]
    elapsed = build + time.perf_counter() - t

    checks = {
        "3 entries": len(c.entries) == 3 and dims == {(1, 0), (0, 1), (1, 1)},
        "table": table == ((1, 0, 1), (0, 1, 0), (0, 1, 1)),
        "degrees": degrees == (1, 1, 1),
        "discrete 3/3": verdict.status == DISCRETE and verdict.certified == 3,
        "alpha S2->P": alpha_ok,
        "sub_chi distinct": subs == [{0}, {1}, {1, 2}] and len(set(subs)) == 3,
        "< 1 s": elapsed < 1.0,
    }
    endo_ok = endo == STATED_A2_ENDOLENGTHS
    failed = [k for k, v in checks.items() if not v]
    detail = f"A2/F2 {len(c.entries)} entries, discrete {verdict.certified}/3, endolengths {endo}"
    if not endo_ok:
        detail += f" (stated {STATED_A2_ENDOLENGTHS}; see the strict xfail below)"
    report(1, not failed and endo_ok, detail + f", {elapsed:.2f}s" + (f", failed: {failed}" if failed else ""))
    assert not failed, failed
    # The computed endolengths agree with an independent oracle.
    assert endo == tuple(_endolength_oracle(e) for e in c.entries) == (1, 1, 2)
    assert endo == tuple(x.values[c.index_of("S2")] + x.values[p] for x in s.points)  # chi_M(regular)


@pytest.mark.xfail(strict=True, reason="S2 is one-dimensional with End = F2, so its endolength is 1, not 2")
def test_criterion_1_stated_endolengths(a2_built):
    c = a2_built[0].catalog
    assert tuple(endolength(e, c) for e in c.entries) == STATED_A2_ENDOLENGTHS


def test_criterion_2_a3(a3_built):
    (s, build) = a3_built
    t = time.perf_counter()
    c = s.catalog
    reports = [verify_axioms(x, 6) for x in s.points]
    violations = sum(len(r.violations) for r in reports)
    verdict = is_discrete(s)
    sub = verify_sub_theorem(s)
    elapsed = build + time.perf_counter() - t
    ok = (
        len(c.entries) == 6
        and c.complete
        and all(r.ok and not r.skipped for r in reports)
        and verdict.status == DISCRETE
        and verdict.certified == 6
        and sub.injective
        and sub.pairs_checked == 15
        and elapsed < 30
    )
    report(
        2,
        ok,
        f"A3/F2 {len(c.entries)} entries, {violations} violations over {reports[0].sequences_checked} sequences at cap 6, "
        f"discrete {verdict.certified}/6, sub injective over {sub.pairs_checked} pairs, {elapsed:.1f}s",
    )
    assert ok


def test_criterion_3_d4(d4_built):
    (s, build) = d4_built
    t = time.perf_counter()
    c = s.catalog
    bad_degree = [c.names[i] for i, (x, e) in enumerate(zip(s.points, c.entries)) if degree(x) > endolength(e, c)]
    rng = np.random.default_rng(3)
    trips = 0
    for _ in range(100):
        coeffs = rng.integers(0, 6, size=len(s.points))
        x = Character(c, tuple(int(v) for v in coeffs @ np.array([p.values for p in s.points])))
        res = decompose(x)
        got = np.array([res.multiplicities.get(p, 0) for p in s.points])
        trips += bool((got == coeffs).all()) and not res.relative_to_truncation
    elapsed = build + time.perf_counter() - t
    ok = len(c.entries) == 12 and c.complete and not bad_degree and trips == 100 and elapsed < 300
    report(3, ok, f"D4/F2 {len(c.entries)} entries, degree <= endolength fails on {bad_degree}, {trips}/100 round trips, {elapsed:.1f}s")
    assert ok


def test_criterion_4_kronecker(kron_built):
    (s, build) = kron_built
    t = time.perf_counter()
    c = s.catalog
    count = {d: sum(e.dims == d for e in c.entries) for d in c.strata}
    want = {(1, 1): 3, (0, 1): 1, (1, 0): 1, (1, 2): 1, (2, 1): 1, (2, 3): 1, (3, 2): 1}
    strata_ok = all(count.get(d) == k for d, k in want.items()) and all(c.strata[d] == "exhaustive" for d in want)
    reports = [verify_axioms(x, 4) for x in s.points]
    topo = topology_report(s)
    lines = topo.lines(c)
    text = "\n".join(lines)
    topo_ok = (
        not c.complete
        and topo.verdict.status != DISCRETE
        and topo.unresolved
        and "not claimed to be non-isolated" in text
        and all(f"unresolved {x.label}" in lines for x in topo.unresolved)
        and "non-isolated:" not in text
    )
    elapsed = build + time.perf_counter() - t
    ok = strata_ok and all(r.ok and not r.skipped for r in reports) and topo_ok and elapsed < 300
    report(
        4,
        ok,
        f"Kronecker/F2 strata {[(d, count.get(d)) for d in want]}, axioms at cap 4 ok for "
        f"{sum(r.ok for r in reports)}/{len(reports)}, {len(topo.unresolved)} unresolved (incomplete catalog), {elapsed:.1f}s",
    )
    assert ok


def _same_multiset(xs, ys) -> bool:
    left = list(ys)
    if len(xs) != len(left):
        return False
    for x in xs:
        k = next((i for i, y in enumerate(left) if y.dims == x.dims and is_isomorphic(x, y)), None)
        if k is None:
            return False
        left.pop(k)
    return True


def test_criterion_5_properties(a2_built, a3_built, d4_built, kron_built):
    t = time.perf_counter()
    rng = np.random.default_rng(5)
    models = [a2_built[0], a3_built[0], d4_built[0], kron_built[0]]
    failures: list[str] = []

    # chi_alpha >= 0 on every evaluable pool morphism, plus direct evaluation on a sample.
    for s in models:
        if (s.values < 0).any():
            failures.append("negative chi_alpha")
        for k in rng.choice(len(s.evaluable), size=min(15, len(s.evaluable)), replace=False):
            f = s.pool.morphisms[s.evaluable[k]]
            vals = [chi_alpha(x, f) for x in s.points]
            if vals != [int(v) for v in s.values[k]]:
                failures.append("chi_alpha disagrees with the opens table")

    complete = models[:3]
    for _ in range(20):
        s = complete[rng.integers(len(complete))]
        c = s.catalog
        f = s.pool.morphisms[s.evaluable[rng.integers(len(s.evaluable))]]
        g = s.pool.morphisms[s.evaluable[rng.integers(len(s.evaluable))]]
        w = direct_sum([c.entries[i] for i in rng.integers(len(c.entries), size=rng.integers(1, 3))])
        fw = direct_sum_morphisms([f, w.identity()])
        fg = direct_sum_morphisms([f, g])
        for x in s.points:
            if chi_alpha(x, f) != chi_alpha(x, fw):
                failures.append("presentation invariance")
            if chi_alpha(x, fg) != chi_alpha(x, f) + chi_alpha(x, g):
                failures.append("additivity over sums of morphisms")

    quivers = [a3_quiver(), d4_quiver(), kronecker_quiver()]
    for _ in range(50):
        q = quivers[rng.integers(len(quivers))]
        dims = tuple(int(d) for d in rng.integers(0, 3, size=len(q.vertices)))
        if not any(dims):
            dims = (1,) + dims[1:]
        m = random_rep(q, dims, 2, rng)
        base = krull_schmidt(m)
        if tuple(np.sum([r.dims for r in base], axis=0)) != dims:
            failures.append("summand dims do not add up")
        for seed in (1, 2, 12345):
            if not _same_multiset(base, krull_schmidt(m, seed=seed)):
                failures.append(f"krull_schmidt depends on the seed for {dims}")

    for s in models[:2]:
        c = s.catalog
        n = len(c.entries)
        subsets = [frozenset(t) for r in range(n + 1) for t in itertools.combinations(range(n), r)]
        cl = {a: closure_of_indices(c, a).members for a in subsets}
        for a in subsets:
            if not a <= cl[a] or closure_of_indices(c, cl[a]).members != cl[a]:
                failures.append("closure not extensive or idempotent")
            for b in subsets:
                if a <= b and not cl[a] <= cl[b]:
                    failures.append("closure not monotone")
    fam = all_subclosed_sets(models[0].catalog)
    if len(fam) != 6 or not fam.intersection_closed():
        failures.append("A2 subclosed family")

    elapsed = time.perf_counter() - t
    ok = not failures and elapsed < 120
    report(5, ok, f"property suites on A2/A3/D4/Kronecker, {len(set(failures))} failing properties, {elapsed:.1f}s")
    assert ok, sorted(set(failures))


def test_criterion_6_negative_control(a2_built):
    (s, build) = a2_built
    t = time.perf_counter()
    c = s.catalog
    x = Character(c, (0, 0, 1))
    rep = verify_axioms(x, 2)
    witnesses = [w.describe(c) for w in rep.violations]
    with pytest.raises(NotDecomposableError) as exc:
        decompose(x)
    elapsed = build + time.perf_counter() - t
    ok = (
        not rep.ok
        and "0->S2->M11->S1->0" in witnesses
        and exc.value.reason == "non-negativity violation"
        and exc.value.coefficients == [0, -1, 1]
        and elapsed < 1.0
    )
    report(6, ok, f"(0,0,1) on A2 rejected with witness {witnesses[0] if witnesses else None}, decompose: {exc.value.reason} {[int(a) for a in exc.value.coefficients]}, {elapsed:.2f}s")
    assert ok
