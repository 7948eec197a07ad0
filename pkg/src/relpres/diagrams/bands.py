"""t-bands and the domains between them.

In a diagram over an HNN-extension every t-cell reads ``t^-1 y t ι(y)^-1``
up to rotation and inversion.  Cells sharing t-edges form t-bands; a band
whose t-edges all lie inside the diagram is a t-annulus.  Deleting the
non-annular bands leaves the domains.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..oracles import member
from ..words import render
from .core import OUTER, Diagram, DiagramError, delete_edge


@dataclass
class TBand:
    index: int
    cells: list            # face ids in order along the band
    bottom: list           # Y-letter darts inside the cells, as a path
    top: list              # H_ν-letter darts inside the cells
    t_darts: list          # t-darts of the cells (two per cell)
    ends: list             # boundary darts at the two ends (empty for annuli)
    annular: bool
    bottom_word: tuple = ()
    k: tuple = ()          # element of K read along the bottom

    @property
    def length(self) -> int:
        return len(self.cells)


def _cell_parts(d: Diagram, f: int, hnn):
    ts, ys, hs = [], [], []
    for x in d.face_darts(f):
        a = d.label[x]
        if a.kind == "t":
            ts.append(x)
        elif a.kind == "x" and a.name in hnn.y_gens:
            ys.append(x)
        elif a.kind == "h" and a.name == hnn.nu_id:
            hs.append(x)
        else:
            raise DiagramError(f"t-cell {f} has an unexpected letter {render((a,))}")
    if len(ts) != 2 or len(ys) != 1 or len(hs) != 1:
        raise DiagramError(f"t-cell {f} does not read t^-1 y t ι(y)^-1")
    return ts, ys[0], hs[0]


def find_t_bands(d: Diagram, p) -> list[TBand]:
    hnn = p.hnn
    if hnn is None:
        return []
    tcells = d.cells("T")
    parts = {f: _cell_parts(d, f, hnn) for f in tcells}
    vm = d.vertex_map() if d.twin else {}
    seen = set()
    bands = []

    def walk(start, via):
        order, entry = [start], via
        cur = start
        while True:
            ts = parts[cur][0]
            out = ts[1] if ts[0] == entry else ts[0]
            nb = d.face[d.twin[out]]
            if nb not in parts or nb == start:
                return order, out, nb == start
            order.append(nb)
            entry = d.twin[out]
            cur = nb

    # open bands start at a cell with a t-edge on the outer face
    starts = []
    for f in tcells:
        for x in parts[f][0]:
            if d.face[d.twin[x]] not in parts:
                starts.append((f, x))
    for f, x in sorted(starts, key=lambda s: s[1]):
        if f in seen:
            continue
        order, last, closed = walk(f, x)
        seen.update(order)
        bands.append((order, [d.twin[x], d.twin[last]], False))
    for f in tcells:
        if f in seen:
            continue
        order, _, _ = walk(f, parts[f][0][0])
        seen.update(order)
        bands.append((order, [], True))

    out = []
    for i, (order, ends, annular) in enumerate(bands):
        bottom = [parts[f][1] for f in order]
        top = [parts[f][2] for f in order]
        if len(bottom) > 1 and vm[d.twin[bottom[0]]] != vm[bottom[1]]:
            order, bottom, top = order[::-1], bottom[::-1], top[::-1]
            ends = ends[::-1]
        word = tuple(d.label[x] for x in bottom)
        k = ()
        for a in hnn.y_to_k(word):
            k = k + a.elem
        k = hnn.k_oracle.canon(k)
        tds = [x for f in order for x in parts[f][0]]
        out.append(TBand(i, order, bottom, top, tds, ends, annular, word, k))
    return out


@dataclass
class Domain:
    index: int
    cells: list
    boundary: list         # darts of ∂D, in order
    word: tuple
    bottoms: list          # bands whose bottom lies on ∂D
    tops: list
    outer_letters: int     # letters of ∂D on the diagram boundary
    band_sides: list = field(default_factory=list)


def domains(d: Diagram, p, bands: list[TBand] | None = None) -> list[Domain]:
    """Connected pieces left after deleting every non-annular t-band."""
    bands = find_t_bands(d, p) if bands is None else bands
    work = d.copy()
    band_cells = set()
    for b in bands:
        if not b.annular:
            band_cells.update(b.cells)
    kill = []
    for b in bands:
        if not b.annular:
            for x in b.t_darts:
                if work.twin[x] not in kill and x not in kill:
                    kill.append(x)
    for x in kill:
        if x in work.twin:
            delete_edge(work, x, new_face=OUTER)
    for f in band_cells:
        work.faces.pop(f, None)
    for x in work.face:
        if work.face[x] in band_cells:
            work.face[x] = OUTER

    parent = {x: x for x in work.twin}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in work.twin:
        for y in (work.twin[x], work.next[x]):
            parent[find(x)] = find(y)
    comps: dict = {}
    for x in work.twin:
        comps.setdefault(find(x), []).append(x)

    bottom_of = {x: b.index for b in bands if not b.annular for x in b.bottom}
    top_of = {x: b.index for b in bands if not b.annular for x in b.top}
    out = []
    for root in sorted(comps, key=lambda r: min(comps[r])):
        darts = comps[root]
        ext = [x for x in darts if work.face[x] == OUTER]
        cycles, seen = [], set()
        for x in sorted(ext):
            if x not in seen:
                c = work.cycle(x)
                seen.update(c)
                cycles.append(c)
        if len(cycles) != 1:
            raise DiagramError(f"domain has {len(cycles)} exterior cycles")
        cyc = cycles[0]
        # start at a band side when there is one, for stable output
        marks = [i for i, x in enumerate(cyc) if x in bottom_of or x in top_of]
        if marks:
            cyc = cyc[marks[0]:] + cyc[:marks[0]]
        cells = sorted({work.face[work.twin[x]] for x in darts} | {work.face[x] for x in darts}
                       - {OUTER})
        bots = sorted({bottom_of[x] for x in cyc if x in bottom_of})
        tops = sorted({top_of[x] for x in cyc if x in top_of})
        outer = sum(1 for x in cyc if d.face[x] == OUTER)
        out.append(Domain(len(out), cells, cyc, tuple(d.label[x] for x in cyc), bots, tops, outer))
    if not out:
        out.append(Domain(0, [], [], (), [], [], 0))
    return out


def _arc_after(cycle, first: list, second: list):
    """Darts of the cycle strictly between the end of ``first`` and the
    start of ``second`` (both contiguous in the cycle)."""
    pos = {x: i for i, x in enumerate(cycle)}
    n = len(cycle)
    j = (_last_index(first, pos, n) + 1) % n
    stop = _first_index(second, pos, n)
    out = []
    while j != stop:
        out.append(cycle[j])
        j = (j + 1) % n
    return out


def _first_index(xs, pos, n):
    idx = sorted(pos[x] for x in xs)
    for a in idx:
        if (a - 1) % n not in idx:
            return a
    return idx[0]


def _last_index(xs, pos, n):
    idx = sorted(pos[x] for x in xs)
    for a in idx:
        if (a + 1) % n not in idx:
            return a
    return idx[-1]


def bottom_arc(dom: Domain, b1: TBand, b2: TBand) -> list:
    """Darts of ∂D from the end of ``b1``'s bottom to the start of ``b2``'s."""
    return _arc_after(dom.boundary, b1.bottom, b2.bottom)


def k_member(p, word, budget: int = 200):
    """Three-valued test that a word over the HNN alphabet (no t) lies in K."""
    hnn = p.hnn
    src = hnn.y_to_k(word)
    return member(hnn.k_oracle, src, hnn.source, budget)


def k_connected(d: Diagram, p, dom: Domain, b1: TBand, b2: TBand, budget: int = 200):
    """True, False or None (undetermined within ``budget``)."""
    arc = bottom_arc(dom, b1, b2)
    word = tuple(d.label[x] for x in arc)
    return k_member(p, word, budget)


@dataclass
class KPair:
    domain: int
    bands: tuple
    verdict: bool | None
    arc: tuple


def k_connected_pairs(d: Diagram, p, budget: int = 200, bands=None, doms=None) -> list[KPair]:
    bands = find_t_bands(d, p) if bands is None else bands
    doms = domains(d, p, bands) if doms is None else doms
    out = []
    for dom in doms:
        for i, a in enumerate(dom.bottoms):
            for b in dom.bottoms[i + 1:]:
                arc = bottom_arc(dom, bands[a], bands[b])
                word = tuple(d.label[x] for x in arc)
                out.append(KPair(dom.index, (a, b), k_member(p, word, budget), word))
    return out
