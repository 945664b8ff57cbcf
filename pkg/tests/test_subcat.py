from itertools import combinations

import pytest

from lengthchars.subcat import (
    all_subclosed_sets,
    closure_of_indices,
    compare_orders,
    embeds_in_power,
    sub_chi,
    sub_closure,
    verify_sub_theorem,
)
from lengthchars.catalog import enumerate_catalog
from lengthchars.character import Character, leq
from lengthchars.quiver import Quiver


def _subsets(n):
    for r in range(n + 1):
        yield from combinations(range(n), r)


def test_embedding_examples(a2_cat):
    s1, s2, p = a2_cat.entries
    assert embeds_in_power(s2, p)
    assert not embeds_in_power(s1, p)
    for x in a2_cat.entries:
        assert embeds_in_power(x, x)


def test_closure_examples(a2_cat):
    s1, s2, p = a2_cat.entries
    assert sub_closure([p], a2_cat).names() == ["S2", "M11"]
    assert sub_closure([s1], a2_cat).names() == ["S1"]
    assert sub_closure(list(a2_cat.entries), a2_cat).names() == ["S1", "S2", "M11"]


def test_sub_chi_examples(a2_model):
    s1, s2, p = a2_model.points
    assert sub_chi(p, a2_model) == {1, 2}
    assert sub_chi(s1, a2_model) == {0}
    assert sub_chi(s2, a2_model) == {1}
    with pytest.raises(ValueError):
        sub_chi(Character(a2_model.catalog, (0, 0, 1)), a2_model)


@pytest.mark.parametrize("cat", ["a2_cat", "a3_cat"])
def test_closure_operator_laws(cat, request):
    c = request.getfixturevalue(cat)
    n = len(c.entries)
    closures = {s: closure_of_indices(c, s).members for s in _subsets(n)}
    for s, cl in closures.items():
        assert set(s) <= cl
        assert closure_of_indices(c, cl).members == cl
    for s in closures:
        for t in closures:
            if set(s) <= set(t):
                assert closures[s] <= closures[t]


def test_sub_theorem(a2_model, a3_model):
    r = verify_sub_theorem(a2_model)
    assert r.injective and r.pairs_checked == 3
    r = verify_sub_theorem(a3_model)
    assert r.injective and r.pairs_checked == 15


def test_sub_theorem_single_entry():
    from lengthchars.ziegler import build_model

    c = enumerate_catalog(Quiver.from_edges(["1"], []), 2, per_vertex=1)
    r = verify_sub_theorem(build_model(c))
    assert r.injective and r.pairs_checked == 0


def test_order_comparison(a2_model):
    rep = compare_orders(a2_model)
    table = {(i, j): (a, b) for i, j, a, b in rep.pairs}
    assert table[1, 2] == (True, True)
    assert table[0, 2] == (False, False)
    for i in range(3):
        assert table[i, i] == (True, True)
    assert rep.down_sets[2] == {1, 2}


def test_order_consistency(a3_model):
    sets = [sub_chi(x, a3_model) for x in a3_model.points]
    for i in range(len(sets)):
        for j in sets[i]:
            assert sets[j] <= sets[i]
    rep = compare_orders(a3_model)
    for j, down in enumerate(rep.down_sets):
        for i in down:
            for k in range(len(sets)):
                if leq(a3_model.points[k], a3_model.points[i]):
                    assert k in down


def test_all_subclosed_sets_a2(a2_cat):
    fam = all_subclosed_sets(a2_cat)
    assert [s.names() for s in fam] == [[], ["S1"], ["S2"], ["S1", "S2"], ["S2", "M11"], ["S1", "S2", "M11"]]
    assert fam.intersection_closed()
    assert [str(s) for s in fam.minimal_from(1)] == ["{S1}", "{S2}"]


def test_all_subclosed_sets_single_and_cap(a3_cat):
    c = enumerate_catalog(Quiver.from_edges(["1"], []), 2, per_vertex=1)
    assert [s.names() for s in all_subclosed_sets(c)] == [[], ["S1"]]
    with pytest.raises(ValueError):
        all_subclosed_sets(a3_cat, cap=8)
    fam = all_subclosed_sets(a3_cat)
    ms = fam.member_sets()
    assert frozenset() in ms and frozenset(range(6)) in ms and fam.intersection_closed()
