"""Characters on the A2 quiver over F_2, end to end.

Run with ``python3 demos/a2_walkthrough.py``.
"""

import numpy as np

from lengthchars import Character, NotDecomposableError, Quiver, decompose, degree, endolength, enumerate_catalog, verify_axioms
from lengthchars.character import module_characters

q = Quiver.from_edges(["1", "2"], [("a", "1", "2")])
c = enumerate_catalog(q, 2, per_vertex=2)
print("entries:", dict(zip(c.names, (e.dims for e in c.entries))))
print("complete:", c.complete)
print("Hom dimensions (row X, column Y is dim Hom(X, Y)):")
print(c.hom_dims)

chars = module_characters(c)
for x, e in zip(chars, c.entries):
    print(f"{x.label:8s} values={x.values} degree={degree(x)} endolength={endolength(e, c)}")

# Any character is a non-negative combination of the chi_M.
x = Character(c, (1, 2, 3))
print("(1,2,3) =", {k.label: v for k, v in decompose(x).multiplicities.items()})

# (0,0,1) solves the linear system only with a negative coefficient, and it
# breaks subadditivity on 0 -> S2 -> P -> S1 -> 0.
bad = Character(c, (0, 0, 1))
try:
    decompose(bad)
except NotDecomposableError as exc:
    print("(0,0,1):", exc.reason, [int(a) for a in exc.coefficients])
print("\n".join(verify_axioms(bad, 2).describe()[:3]))

# Endolength is chi_M at the regular module, here S2 + P.
ends = np.array([x.values for x in chars]) @ np.array([0, 1, 1])
print("chi_M(regular):", ends.tolist())
