from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lengthchars import linalg as la
from lengthchars.homs import (
    end_algebra,
    hom_basis,
    hom_dim,
    is_indecomposable,
    is_isomorphic,
    is_nilpotent,
    jacobson_radical,
    krull_schmidt,
    matrix_algebra_radical,
    module_length,
)
from lengthchars.quiver import Rep, direct_sum, projective_at, random_rep, regular_rep, simple_at

from conftest import a2_quiver, a3_quiver, kronecker_quiver


def _span(mats, p):
    """Every element of the span of ``mats``."""
    return [sum((c * m for c, m in zip(cs, mats)), np.zeros_like(mats[0])) % p for cs in product(range(p), repeat=len(mats))]


def brute_radical_dim(mats, p):
    """Oracle: rad = {x : y x is nilpotent for every y in the algebra}."""
    elems = _span(list(mats), p)
    rad = [x for x in elems if all(is_nilpotent((y @ x) % p, p) for y in elems)]
    k = 0
    while p**k < len(rad):
        k += 1
    assert p**k == len(rad)
    return k


def test_hom_examples(a2):
    s1, s2, p = simple_at(a2, "1"), simple_at(a2, "2"), projective_at(a2, "1")
    assert hom_basis(s1, p).dim == 0
    assert hom_basis(s2, p).dim == 1
    assert hom_basis(p, s1).dim == 1
    for x in (s1, s2, p):
        assert x.identity() in set(hom_basis(x, x).elements())


def test_end_algebra_examples(a2):
    s1, p = simple_at(a2, "1"), projective_at(a2, "1")
    e = end_algebra(p)
    assert e.dim == 1 and e.radical.shape[1] == 0
    e = end_algebra(direct_sum([s1, s1]))
    assert e.dim == 4 and e.radical.shape[1] == 0
    e = end_algebra(direct_sum([p, s1]))
    assert e.dim == 3 and e.radical.shape[1] == 1
    [r] = jacobson_radical(e)
    assert not r.is_zero()
    assert (r @ r).is_zero()
    assert jacobson_radical(end_algebra(s1)) == ()
    with pytest.raises(ValueError):
        end_algebra(Rep.zero(a2))


def test_radical_upper_triangular_toy():
    mats = [np.array([[1, 0], [0, 0]]), np.array([[0, 0], [0, 1]]), np.array([[0, 1], [0, 0]])]
    rad = matrix_algebra_radical(mats, 2)
    assert rad.shape[1] == 1
    assert rad[:, 0].tolist() == [0, 0, 1]


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("make", [a2_quiver, a3_quiver, kronecker_quiver])
@given(seed=st.integers(0, 10**6))
@settings(max_examples=6, deadline=None)
def test_radical_matches_brute_force(p, make, seed):
    q = make()
    rng = np.random.default_rng(seed)
    dims = tuple(int(d) for d in rng.integers(0, 3, size=len(q.vertices)))
    if sum(dims) == 0:
        dims = (1,) + dims[1:]
    m = random_rep(q, dims, p, rng)
    e = end_algebra(m)
    if p**e.dim > 4096:
        return
    assert e.radical.shape[1] == brute_radical_dim(e.mats, p)


def test_radical_is_nilpotent_ideal(a2):
    m = direct_sum([projective_at(a2, "1"), simple_at(a2, "1"), simple_at(a2, "2")])
    e = end_algebra(m)
    rad = list(jacobson_radical(e))
    power = rad
    for _ in range(e.dim):
        power = [a @ b for a in power for b in rad]
        power = [f for f in power if not f.is_zero()]
    assert not power
    for r in rad:
        for b in e.basis:
            for prod_ in (b @ r, r @ b):
                coords = e.coordinates(prod_.block_diagonal())
                rad_span = e.radical
                assert la.solve(rad_span, coords, 2) is not None


def test_indecomposable_examples(a2):
    s1, s2, p = simple_at(a2, "1"), simple_at(a2, "2"), projective_at(a2, "1")
    assert is_indecomposable(s1)
    assert is_indecomposable(p)
    res = is_indecomposable(direct_sum([s1, s2]))
    assert not res
    e = res.idempotent
    assert (e @ e) == e and not e.is_zero() and e != e.source.identity()


def test_krull_schmidt_examples(a2):
    s1, p = simple_at(a2, "1"), projective_at(a2, "1")
    assert krull_schmidt(Rep.zero(a2)) == []
    parts = krull_schmidt(direct_sum([s1, p, s1]))
    assert sorted(x.dims for x in parts) == [(1, 0), (1, 0), (1, 1)]
    # invertible arrow on (2,2) is two copies of P
    rng = np.random.default_rng(5)
    while True:
        a = rng.integers(0, 2, size=(2, 2))
        if la.is_invertible(a, 2):
            break
    parts = krull_schmidt(Rep(a2, (2, 2), (a,), 2))
    assert len(parts) == 2 and all(is_isomorphic(x, p) for x in parts)


def test_isomorphism_examples(a2, kronecker):
    s1, s2 = simple_at(a2, "1"), simple_at(a2, "2")
    assert is_isomorphic(s1, s1)
    assert not is_isomorphic(s1, s2)
    pts = [Rep(kronecker, (1, 1), (np.array([[a]]), np.array([[b]])), 2) for a, b in ((1, 0), (0, 1), (1, 1))]
    for i in range(3):
        for j in range(3):
            assert is_isomorphic(pts[i], pts[j]) == (i == j)


def test_isomorphism_after_base_change(kronecker):
    rng = np.random.default_rng(11)
    x = random_rep(kronecker, (2, 3), 2, rng)
    g1 = np.array([[1, 1], [0, 1]])
    g2 = np.array([[1, 0, 1], [0, 1, 1], [0, 0, 1]])
    y = Rep(kronecker, x.dims, tuple((g2 @ m @ la.inverse(g1, 2)) % 2 for m in x.maps), 2)
    assert is_isomorphic(x, y)


def test_module_length_examples(a2):
    s1, p = simple_at(a2, "1"), projective_at(a2, "1")
    e = end_algebra(p)
    assert module_length(e, hom_basis(p, p)) == 1
    assert module_length(end_algebra(s1), hom_basis(s1, s1)) == 1
    assert module_length(e, hom_basis(regular_rep(a2), p)) == 2


def test_module_length_matrix_algebra(a2):
    s1 = simple_at(a2, "1")
    m = direct_sum([s1, s1])
    e = end_algebra(m)
    # End(S1^2) = M_2(k): itself has length 2, Hom(S1, S1^2) is the simple column module
    assert module_length(e, hom_basis(m, m)) == 2
    assert module_length(e, hom_basis(s1, m)) == 1


def test_module_length_over_extension_field(kronecker):
    # End of this rep is F_4, so Hom(X, X) has length 1 and dim 2
    c = np.array([[0, 1], [1, 1]])
    x = Rep(kronecker, (2, 2), (la.identity(2), c), 2)
    e = end_algebra(x)
    assert e.dim == 2 and e.radical.shape[1] == 0
    assert is_indecomposable(x)
    assert module_length(e, hom_basis(x, x)) == 1


@given(seed=st.integers(0, 10**6))
@settings(max_examples=15, deadline=None)
def test_hom_additive(seed):
    q = kronecker_quiver()
    rng = np.random.default_rng(seed)
    xs = [random_rep(q, tuple(rng.integers(0, 3, size=2)), 2, rng) for _ in range(3)]
    x, x2, y = xs
    assert hom_dim(direct_sum([x, x2]), y) == hom_dim(x, y) + hom_dim(x2, y)


@given(seed=st.integers(0, 10**6))
@settings(max_examples=15, deadline=None)
def test_krull_schmidt_reassembles(seed):
    q = a3_quiver()
    rng = np.random.default_rng(seed)
    m = random_rep(q, tuple(rng.integers(0, 3, size=3)), 2, rng)
    parts = krull_schmidt(m)
    assert all(is_indecomposable(x) for x in parts)
    assert is_isomorphic(direct_sum(parts, quiver=q, p=2), m)


def test_fitting_on_catalog_entries(a3_cat):
    for x in a3_cat.entries:
        e = end_algebra(x)
        for f in hom_basis(x, x).elements():
            assert f.is_iso() or is_nilpotent(f.block_diagonal(), 2)
