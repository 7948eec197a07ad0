"""Bounded-length words of unbounded relative area in Z x Z.

Relative to the cyclic subgroup <a>, every commutator [a^m, b] has length
four (a^m is a single letter), yet needs m relator cells.
"""
import sys

import relpres
from relpres.area import instantiate, relative_area
from relpres.diagrams import derivation_to_diagram, to_svg

p = relpres.load_fixture("zxz")
print(p.describe())

for m in range(1, 6):
    w = instantiate(p, "[a^m,b]", m)
    res = relative_area(p, w)
    print(f"m={m}: {relpres.render(w):32s} length {len(w)}  area {res.area}")

probe = relpres.well_definedness_probe(p, "[a^m,b]", horizon=5)
print(probe)

w = instantiate(p, "[a^m,b]", 3)
res = relative_area(p, w)
print("\n".join(res.witness.lines()))
d = derivation_to_diagram(res.witness, p)
print("cells:", d.census(), "V-E+F =", d.euler())
if len(sys.argv) > 1:
    with open(sys.argv[1], "w", encoding="utf-8") as fh:
        fh.write(to_svg(d, p))
    print("diagram written to", sys.argv[1])
