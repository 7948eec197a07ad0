"""Diagram surgery over an HNN-extension.

``eliminate_k_connected`` rebuilds a diagram until no domain has two
t-bands whose bottoms are joined by a boundary arc lying in K.
``shorten_bands`` replaces every non-annular band by one whose length is
the Y-length of the element its bottom reads.  Both keep the boundary word
letter for letter, base dart included.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..oracles import find_member
from ..words import invert, render, stable
from .bands import domains, find_t_bands, k_connected_pairs
from .build import ProviderError, provider as default_provider
from .core import Diagram, cell_disk, delete_edge, fill_face, glue, spike


class SurgeryError(RuntimeError):
    pass


def band_disk(p, bottom) -> Diagram:
    """A t-band whose boundary reads ``t^-1 B t ι(B)^-1``."""
    hnn = p.hnn
    bottom = tuple(bottom)
    if not bottom:
        return spike(stable(-1))
    acc = None
    for i, a in enumerate(bottom):
        cell = cell_disk((stable(-1), a, stable(1), hnn.iota_letter(a.name, -a.sign)), "T",
                         _t_relator_index(p, a.name), p)
        if acc is None:
            acc = cell
            continue
        # acc reads t^-1 B' t T'^-1: glue its t to the new cell's t^-1
        acc = glue(acc, 1 + i, cell, 0, 1, p)
        acc.set_base_to(_band_word(p, bottom[:i + 1]))
    return acc


def _band_word(p, bottom) -> tuple:
    hnn = p.hnn
    top = tuple(hnn.iota_letter(a.name, a.sign) for a in bottom)
    return (stable(-1),) + tuple(bottom) + (stable(1),) + invert(top)


def _t_relator_index(p, y: str) -> int | None:
    target = p.hnn.t_relator(y)
    for i, r in enumerate(p.relators):
        if tuple(r) == target:
            return i
    return None


def iota_word(p, bottom) -> tuple:
    return tuple(p.hnn.iota_letter(a.name, a.sign) for a in bottom)


def k_element(p, word, budget: int = 200):
    """Element of K equal to ``word`` (over the HNN alphabet), or None."""
    hnn = p.hnn
    if any(a.kind == "t" for a in word):
        ok, k = find_member(hnn.k_oracle, word, p, budget, embed=hnn.embed_k)
    else:
        ok, k = find_member(hnn.k_oracle, hnn.y_to_k(word), hnn.source, budget)
    return k if ok else None


@dataclass
class SurgeryLog:
    rounds: int = 0
    events: list = field(default_factory=list)


def _positions(d: Diagram, darts) -> list[int]:
    bd = d.boundary_darts()
    pos = {x: i for i, x in enumerate(bd)}
    return [pos[x] for x in darts]


def _arc(word, a, b):
    n = len(word)
    out = []
    j = (a + 1) % n
    while j != b:
        out.append(word[j])
        j = (j + 1) % n
    return tuple(out)


def eliminate_k_connected(d: Diagram, p, build=None, budget: int = 200,
                          log: SurgeryLog | None = None, depth: int = 0) -> Diagram:
    """Rebuild ``d`` until no K-connected pair of t-bands remains.

    Pairs are handled innermost first: the pair whose two V-arcs carry the
    fewest t-letters.  Sub-diagrams come from ``build`` (word -> diagram).
    """
    build = default_provider(p) if build is None else build
    log = SurgeryLog() if log is None else log
    if depth > 64:
        raise SurgeryError("surgery recursion too deep")
    for _ in range(256):
        bands = find_t_bands(d, p)
        doms = domains(d, p, bands)
        pairs = [kp for kp in k_connected_pairs(d, p, budget, bands, doms) if kp.verdict is True]
        if not pairs:
            return d
        word = d.boundary_word()
        choices = []
        for kp in pairs:
            b1, b2 = bands[kp.bands[0]], bands[kp.bands[1]]
            qs = _positions(d, b1.ends + b2.ends)
            q = sorted(qs)
            same = {frozenset(_positions(d, b1.ends)), frozenset(_positions(d, b2.ends))}
            if frozenset((q[0], q[1])) in same:
                u_arcs, v_arcs = [(q[0], q[1]), (q[2], q[3])], [(q[1], q[2]), (q[3], q[0])]
            else:
                u_arcs, v_arcs = [(q[1], q[2]), (q[3], q[0])], [(q[0], q[1]), (q[2], q[3])]
            vt = sum(1 for a, b in v_arcs for x in _arc(word, a, b) if x.kind == "t")
            choices.append((vt, q, u_arcs, v_arcs, kp))
        choices.sort(key=lambda c: (c[0], c[1]))
        _, q, u_arcs, v_arcs, kp = choices[0]
        d = _rebuild(d, p, word, u_arcs, v_arcs, build, budget, log, depth)
        log.rounds += 1
        log.events.append(f"depth {depth}: removed K-connected pair {kp.bands} "
                          f"(arc {render(kp.arc) or '1'})")
    raise SurgeryError("surgery did not terminate")


def _rebuild(d, p, word, u_arcs, v_arcs, build, budget, log, depth):
    (a1, b1), (a2, b2) = v_arcs
    for a, b in ((a1, b1), (a2, b2)):
        if not (word[a] == stable(-1) and word[b] == stable(1)):
            raise SurgeryError("V-arcs are not framed as t^-1 V t")
    U1 = _arc(word, b2, a1)
    V1 = _arc(word, a1, b1)
    U2 = _arc(word, b1, a2)
    V2 = _arc(word, a2, b2)
    pieces = []
    for V in (V1, V2):
        k = k_element(p, V, budget)
        if k is None:
            raise SurgeryError(f"could not express {render(V)} as an element of K")
        B = p.hnn.embed_k(k)
        pieces.append((V, B, iota_word(p, B)))
    try:
        (V1, B1, T1), (V2, B2, T2) = pieces
        w0 = U1 + T1 + U2 + T2
        d0 = eliminate_k_connected(build(w0), p, build, budget, log, depth + 1) if w0 else Diagram()
        subs = []
        for V, B, T in pieces:
            if B:
                band = band_disk(p, B)
                sigma = build(invert(B) + V)
                di = glue(band, 1, sigma, 0, len(B), p)
                di.set_base_to((stable(-1),) + V + (stable(1),) + invert(T))
            else:
                di = build((stable(-1),) + V + (stable(1),))
            subs.append(eliminate_k_connected(di, p, build, budget, log, depth + 1))
    except ProviderError as e:
        raise SurgeryError(f"sub-diagram not available: {e}") from e
    xi = d0
    if not xi.twin:
        xi = Diagram()
    # xi reads U1 T1 U2 T2; attach the V-pieces along T1 then T2
    j1 = len(U1)
    sub1 = subs[0]
    if xi.twin:
        xi.set_base_to(w0)
    xi = glue(xi, j1, sub1, len(V1) + 2, len(T1), p)
    xi.set_base_to(U2 + T2 + U1 + (stable(-1),) + V1 + (stable(1),))
    xi = glue(xi, len(U2), subs[1], len(V2) + 2, len(T2), p)
    xi.set_base_to(word)
    return xi


def shorten_bands(d: Diagram, p, build=None, log: SurgeryLog | None = None) -> Diagram:
    """Replace each non-annular band longer than ``|k(τ)|_Y`` by a geodesic one."""
    build = default_provider(p) if build is None else build
    log = SurgeryLog() if log is None else log
    hnn = p.hnn
    word = d.boundary_word()
    for _ in range(1024):
        bands = find_t_bands(d, p)
        todo = None
        for b in bands:
            if b.annular:
                continue
            geo = hnn.embed_k(b.k)
            if b.length > len(geo):
                todo = (b, geo)
                break
        if todo is None:
            return d
        b, A = todo
        d = _replace_band(d, p, b, A, build)
        log.rounds += 1
        log.events.append(f"band of length {b.length} reading {render(b.bottom_word)} "
                          f"replaced by one of length {len(A)}")
        d.set_base_to(word)
    raise SurgeryError("band shortening did not terminate")


def _replace_band(d: Diagram, p, band, A, build) -> Diagram:
    d = d.copy()
    d.__post_init__()
    cells = list(band.cells)
    hole = cells[0]
    for f in cells[1:]:
        shared = [x for x in d.face_darts(hole) if d.face[d.twin[x]] == f and d.label[x].kind == "t"]
        if not shared:
            raise SurgeryError("band cells are not adjacent along a t-edge")
        delete_edge(d, shared[0], new_face=hole)
    d.faces[hole].tag = "hole"
    cyc = d.face_word(hole)
    # the filling disk must read the inverse of the hole's cycle
    z = invert(cyc)
    m = len(z)
    for r in range(m):
        w = z[r:] + z[:r]
        if w[0] == stable(-1):
            j = next((i for i in range(1, m) if w[i].kind == "t"), None)
            if j is not None and w[j] == stable(1) and all(a.kind == "x" for a in w[1:j]) \
                    and all(a.kind == "h" for a in w[j + 1:]):
                break
    else:
        raise SurgeryError(f"band reads {render(cyc)}, not of the form t^-1 B t T")
    B = w[1:j]
    Tpp = w[j + 1:]
    # the hole may read the bottom against the band's direction
    A = p.hnn.embed_k(p.hnn.k_oracle.canon(sum((a.elem for a in p.hnn.y_to_k(B)), ())))
    TA = iota_word(p, A)
    xi = band_disk(p, A)
    try:
        s2 = build(invert(A) + B)
        s1 = build(TA + Tpp)
    except ProviderError as e:
        raise SurgeryError(f"sub-diagram not available: {e}") from e
    xi = glue(xi, 1, s2, 0, len(A), p)
    xi.set_base_to((stable(1),) + invert(TA) + (stable(-1),) + B)
    xi = glue(xi, 1, s1, 0, len(A), p)
    xi.set_base_to(w)
    return fill_face(d, hole, xi, p)
