"""t-bands, domains and the two surgeries on the shipped diagrams.

fig1.vkd has two t-bands joined through a domain by a boundary arc lying in
K; fig2.vkd has a band three cells long whose bottom equals y in K.
"""
import sys
from pathlib import Path

import relpres
from relpres import diagrams as dg
from relpres.growth import GrowthTable

p = relpres.load_fixture("e1")
out = Path(sys.argv[1]) if len(sys.argv) > 1 else None


def show(title, d):
    bands = dg.find_t_bands(d, p)
    print(f"{title}: boundary {relpres.render(d.boundary_word())}, cells {d.census()}")
    for b in bands:
        kind = "annulus" if b.annular else "band"
        print(f"  {kind} {b.index}: length {b.length}, bottom {relpres.render(b.bottom_word)}")
    for dom in dg.domains(d, p, bands):
        print(f"  domain {dom.index}: {relpres.render(dom.word) or '1'}")
    for kp in dg.k_connected_pairs(d, p):
        print(f"  bands {kp.bands} K-connected: {kp.verdict}")
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{title}.svg").write_text(dg.to_svg(d, p), encoding="utf-8")


fig1 = dg.load(relpres.fixture_path("fig1.vkd"), p)
show("fig1", fig1)
show("fig1-rebuilt", dg.eliminate_k_connected(fig1, p))

fig2 = dg.load(relpres.fixture_path("fig2.vkd"), p)
show("fig2", fig2)
show("fig2-shortened", dg.shorten_bands(fig2, p))

# from a base-group diagram to one over E1, then count cells
w = p.parse("y y H1[x] H1[x^-1] y^-1 y^-1")
res = dg.lemma_pipeline(p, w)
show("pipeline", res.diagram)
rep = dg.census_audit(res.diagram, p, GrowthTable([0] * 18), stages=res)
print("\n".join(rep.lines()))
