"""Subobject-closed sets and the invariant sub(x).

Distinct points have distinct sub(x), while sub-inclusion and the pointwise
order can disagree (D4 has one such pair).
"""

from lengthchars import Quiver, build_model, enumerate_catalog
from lengthchars.subcat import all_subclosed_sets, compare_orders, verify_sub_theorem

a2 = enumerate_catalog(Quiver.from_edges(["1", "2"], [("a", "1", "2")]), 2, per_vertex=2)
fam = all_subclosed_sets(a2)
print("A2 subobject-closed sets:", [str(s) for s in fam])
print("covering pairs:", fam.hasse())
print("intersection-closed:", fam.intersection_closed())

d4 = enumerate_catalog(Quiver.from_edges(["1", "2", "3", "4"], [("a", "1", "4"), ("b", "2", "4"), ("c", "3", "4")]), 2, per_vertex=2)
s = build_model(d4)
sub = verify_sub_theorem(s)
print(f"D4: sub(x) injective over {sub.pairs_checked} pairs: {sub.injective}")
print(f"D4: {len(all_subclosed_sets(d4))} subobject-closed sets")
orders = compare_orders(s)
for i, j, le, inc in orders.disagreements:
    print(f"  {orders.points[i]} <= {orders.points[j]}: {le}, sub inclusion: {inc}")
