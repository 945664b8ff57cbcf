"""Isolated points on complete and truncated catalogs.

On a finite catalog a point is certified isolated when some basic open
``U_a`` is the singleton; the certificate is preferably a left almost
split map.  The Kronecker catalog is truncated, so some points stay
unresolved and nothing is claimed about them.
"""

from lengthchars import Quiver, build_model, enumerate_catalog
from lengthchars.ziegler import topology_report

QUIVERS = {
    "A3": (Quiver.from_edges(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")]), dict(total=3)),
    "D4": (Quiver.from_edges(["1", "2", "3", "4"], [("a", "1", "4"), ("b", "2", "4"), ("c", "3", "4")]), dict(per_vertex=2)),
    "Kronecker": (Quiver.from_edges(["1", "2"], [("a", "1", "2"), ("b", "1", "2")]), dict(per_vertex=3)),
}

for name, (q, bound) in QUIVERS.items():
    c = enumerate_catalog(q, 2, **bound)
    s = build_model(c)
    rep = topology_report(s)
    print(f"== {name}: {len(c.entries)} entries, pool of {len(s.pool)} morphisms")
    for line in rep.lines(c)[: 8 + len(c.entries)]:
        if not line.startswith("open "):
            print("  " + line)
