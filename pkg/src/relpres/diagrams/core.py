"""Van Kampen diagrams as half-edge maps.

A :class:`Diagram` is stored through two permutations of its darts
(half-edges): ``twin`` pairs the two darts of an edge and ``next`` gives the
following dart along the face to which a dart belongs.  Vertices are the
orbits of ``d -> next[twin[d]]`` and are never stored.  Face 0 is the outer
face; reading its cycle from the base dart gives the boundary word.  A dart
is labelled by the letter read when walking it from its origin to its head,
so ``label[twin[d]]`` is the inverse of ``label[d]``.

Every constructor here keeps the map a disk (Euler characteristic 2 when
the outer face is counted); trees and spikes are allowed.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..words import Letter, canonical_letter, letter_inverse, parse_word, render, render_letter

OUTER = 0


class DiagramError(ValueError):
    pass


def inverse_letter(a: Letter, context=None) -> Letter:
    """Canonical inverse of a letter (subgroup letters go through the oracle)."""
    b = letter_inverse(a)
    if a.kind != "h" or context is None:
        return b
    oracles = context if isinstance(context, dict) else context.all_oracles()
    c = canonical_letter(b, oracles) if a.name in oracles else b
    if c is None:
        raise DiagramError(f"letter {render_letter(a)} is trivial")
    return c


@dataclass
class Face:
    tag: str                 # "outer", "R", "T", "S:<λ>", "L", "Q"
    relator: int | None = None


@dataclass
class Diagram:
    twin: dict = field(default_factory=dict)
    next: dict = field(default_factory=dict)
    label: dict = field(default_factory=dict)
    face: dict = field(default_factory=dict)
    faces: dict = field(default_factory=lambda: {OUTER: Face("outer")})
    base: int | None = None
    _counter: itertools.count = field(default=None, repr=False)

    def __post_init__(self):
        start = max(list(self.twin) + list(self.faces) + [0]) + 1
        self._counter = itertools.count(start)

    # -- bookkeeping -----------------------------------------------------
    def fresh(self) -> int:
        return next(self._counter)

    def new_edge(self, a: Letter, a_inv: Letter, face_d: int = OUTER, face_e: int = OUTER):
        d, e = self.fresh(), self.fresh()
        self.twin[d], self.twin[e] = e, d
        self.label[d], self.label[e] = a, a_inv
        self.face[d], self.face[e] = face_d, face_e
        return d, e

    def new_face(self, tag: str, relator: int | None = None) -> int:
        f = self.fresh()
        self.faces[f] = Face(tag, relator)
        return f

    def copy(self) -> "Diagram":
        return Diagram(dict(self.twin), dict(self.next), dict(self.label), dict(self.face),
                       {k: Face(v.tag, v.relator) for k, v in self.faces.items()}, self.base)

    @property
    def darts(self):
        return self.twin.keys()

    def prev(self, d: int) -> int:
        x = d
        while self.next[x] != d:
            x = self.next[x]
        return x

    def cycle(self, d: int) -> list[int]:
        out = [d]
        x = self.next[d]
        while x != d:
            out.append(x)
            x = self.next[x]
        return out

    def face_cycles(self) -> dict[int, list[list[int]]]:
        seen = set()
        out: dict = {f: [] for f in self.faces}
        for d in sorted(self.twin):
            if d in seen:
                continue
            c = self.cycle(d)
            seen.update(c)
            out.setdefault(self.face[d], []).append(c)
        return out

    def face_darts(self, f: int) -> list[int]:
        cyc = self.face_cycles().get(f, [])
        if len(cyc) != 1:
            raise DiagramError(f"face {f} has {len(cyc)} boundary cycles")
        return cyc[0]

    def face_word(self, f: int) -> tuple:
        return tuple(self.label[d] for d in self.face_darts(f))

    def boundary_darts(self) -> list[int]:
        if self.base is None:
            return []
        return self.cycle(self.base)

    def boundary_word(self) -> tuple:
        return tuple(self.label[d] for d in self.boundary_darts())

    def vertex_map(self) -> dict[int, int]:
        """dart -> vertex id (its origin)."""
        vmap: dict = {}
        n = 0
        for d in sorted(self.twin):
            if d in vmap:
                continue
            x = d
            while x not in vmap:
                vmap[x] = n
                x = self.next[self.twin[x]]
            n += 1
        return vmap

    def head(self, d: int, vmap=None) -> int:
        vmap = self.vertex_map() if vmap is None else vmap
        return vmap[self.twin[d]]

    def counts(self) -> tuple[int, int, int]:
        """(V, E, F) with the outer face counted."""
        if not self.twin:
            return 1, 0, len(self.faces)
        V = len(set(self.vertex_map().values()))
        return V, len(self.twin) // 2, len(self.faces)

    def euler(self) -> int:
        V, E, F = self.counts()
        return V - E + F

    def cells(self, tag: str | None = None) -> list[int]:
        return sorted(f for f, x in self.faces.items()
                      if f != OUTER and (tag is None or x.tag == tag
                                         or (tag == "S" and x.tag.startswith("S:"))))

    def census(self) -> dict:
        out: dict = {}
        for f in self.cells():
            t = self.faces[f].tag
            out[t] = out.get(t, 0) + 1
        return out

    def costed_cells(self) -> int:
        """Cells labelled by relators (R, R' and t-cells)."""
        return len(self.cells("R")) + len(self.cells("T"))

    def area_cells(self) -> int:
        return self.costed_cells()

    def set_base_to(self, word, context=None) -> None:
        """Rotate the base dart so the boundary reads ``word`` exactly."""
        darts = self.boundary_darts()
        word = tuple(word)
        for r in range(max(len(darts), 1)):
            if tuple(self.label[d] for d in darts[r:] + darts[:r]) == word:
                if darts:
                    self.base = darts[r]
                return
        raise DiagramError(f"boundary {render(self.boundary_word())} is not a rotation of {render(word)}")

    # -- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        cyc = self.face_cycles()
        return {
            "darts": [{"id": d, "twin": self.twin[d], "next": self.next[d],
                       "label": render_letter(self.label[d])} for d in sorted(self.twin)],
            "faces": [{"id": f, "tag": x.tag, **({"relator": x.relator} if x.relator is not None else {}),
                       "darts": cyc[f][0] if cyc.get(f) else []}
                      for f, x in sorted(self.faces.items())],
            "outer": {"face": OUTER, "base": self.base},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")


def from_dict(data: dict, context=None) -> Diagram:
    d = Diagram()
    d._counter = None
    for rec in data["darts"]:
        i = int(rec["id"])
        d.twin[i] = int(rec["twin"])
        d.next[i] = int(rec["next"])
        w = parse_word(rec["label"], context)
        if len(w) != 1:
            raise DiagramError(f"dart {i}: label {rec['label']!r} is not a single letter")
        d.label[i] = w[0]
    d.faces = {}
    for rec in data["faces"]:
        f = int(rec["id"])
        d.faces[f] = Face(rec["tag"], rec.get("relator"))
        for x in rec["darts"]:
            d.face[int(x)] = f
    if OUTER not in d.faces:
        raise DiagramError("no outer face 0")
    missing = set(d.twin) - set(d.face)
    if missing:
        raise DiagramError(f"darts {sorted(missing)[:5]} are not assigned to a face")
    for i in d.twin:
        if d.twin.get(d.twin[i]) != i or d.twin[i] == i:
            raise DiagramError(f"twin is not a fixed-point-free involution at dart {i}")
        if d.next[i] not in d.twin:
            raise DiagramError(f"dart {i}: next points to unknown dart")
        if d.face[d.next[i]] != d.face[i]:
            raise DiagramError(f"dart {i}: next leaves face {d.face[i]}")
    base = data.get("outer", {}).get("base")
    d.base = None if base is None else int(base)
    d.__post_init__()
    if d.euler() != 2:
        raise DiagramError("not a disk diagram (Euler characteristic != 2); 0-refinement is not supported")
    return d


def load(path, context=None) -> Diagram:
    return from_dict(json.loads(Path(path).read_text(encoding="utf-8")), context)


# -- elementary disks -----------------------------------------------------------

def empty() -> Diagram:
    return Diagram()


def cell_disk(word, tag: str, relator: int | None = None, context=None) -> Diagram:
    """One cell whose outer boundary reads ``word`` (the cell reads its inverse)."""
    word = tuple(word)
    if not word:
        raise DiagramError("a cell needs a nonempty boundary")
    d = Diagram()
    f = d.new_face(tag, relator)
    outer, inner = [], []
    for a in word:
        o, i = d.new_edge(a, inverse_letter(a, context), OUTER, f)
        outer.append(o)
        inner.append(i)
    m = len(word)
    for j in range(m):
        d.next[outer[j]] = outer[(j + 1) % m]
        d.next[inner[j]] = inner[(j - 1) % m]
    d.base = outer[0]
    return d


def spike(a: Letter, context=None) -> Diagram:
    """Single edge; the boundary reads ``a a^-1``."""
    d = Diagram()
    x, y = d.new_edge(a, inverse_letter(a, context))
    d.next[x], d.next[y] = y, x
    d.base = x
    return d


# -- gluing -------------------------------------------------------------------------

def _identify(d: Diagram, pairs: list[tuple[int, int]]) -> None:
    """Remove paired darts ``(x, y)`` that run along the same segment in
    opposite directions, re-pairing their twins."""
    partner = {}
    for x, y in pairs:
        partner[x] = y
        partner[y] = x
    removed = set(partner)

    def resolve(z):
        seen = set()
        while z in removed:
            if z in seen:
                raise DiagramError("gluing closes up a sphere")
            seen.add(z)
            z = d.twin[partner[z]]
        return z

    updates = {}
    for z in d.twin:
        if z in removed:
            continue
        w = d.twin[z]
        if w in removed:
            updates[z] = resolve(w)
    for z, w in updates.items():
        d.twin[z] = w
    for z in removed:
        del d.twin[z], d.next[z], d.label[z], d.face[z]
    for z, w in d.twin.items():
        if d.twin.get(w) != z:
            raise DiagramError("gluing produced an inconsistent edge pairing")


def _letters_match(a: Letter, b: Letter, context) -> bool:
    """``b`` is the inverse of ``a``."""
    if a.kind != "h":
        return b == letter_inverse(a)
    if b.kind != "h" or b.name != a.name:
        return False
    if context is None:
        return b == letter_inverse(a)
    o = context.all_oracles()[a.name] if not isinstance(context, dict) else context[a.name]
    return o.is_identity(a.elem + b.elem) is True


def disjoint_union(d1: Diagram, d2: Diagram) -> tuple[Diagram, dict]:
    """Copy of ``d1`` plus renamed copy of ``d2``; returns the map of d2 ids.
    The two outer faces stay separate cycles sharing face id 0."""
    out = d1.copy()
    out.__post_init__()
    ren = {}
    for x in sorted(d2.twin):
        ren[x] = out.fresh()
    fren = {OUTER: OUTER}
    for f in sorted(d2.faces):
        if f != OUTER:
            fren[f] = out.fresh()
            out.faces[fren[f]] = Face(d2.faces[f].tag, d2.faces[f].relator)
    for x in d2.twin:
        out.twin[ren[x]] = ren[d2.twin[x]]
        out.next[ren[x]] = ren[d2.next[x]]
        out.label[ren[x]] = d2.label[x]
        out.face[ren[x]] = fren[d2.face[x]]
    return out, ren


def glue(d1: Diagram, i1: int, d2: Diagram, i2: int, m: int, context=None) -> Diagram:
    """Glue the boundary arc of ``d1`` of length ``m`` starting at index
    ``i1`` to the arc of ``d2`` starting at ``i2``; the second arc must read
    the inverse of the first.  ``m = 0`` joins the disks at a vertex.

    The new boundary is the rest of ``d1`` (from the end of its arc) followed
    by the rest of ``d2``.
    """
    b1, b2 = d1.boundary_darts(), d2.boundary_darts()
    if m > len(b1) or m > len(b2):
        raise DiagramError("arc longer than boundary")
    if not b1:
        out = d2.copy()
        out.__post_init__()
        if b2:
            out.base = b2[i2 % len(b2)]
        return out
    if not b2:
        out = d1.copy()
        out.__post_init__()
        out.base = b1[i1 % len(b1)]
        return out
    L1, L2 = len(b1), len(b2)
    arc1 = [b1[(i1 + j) % L1] for j in range(m)]
    arc2 = [b2[(i2 + j) % L2] for j in range(m)]
    for j in range(m):
        if not _letters_match(d1.label[arc1[m - 1 - j]], d2.label[arc2[j]], context):
            raise DiagramError(f"arc labels do not match: {render((d1.label[arc1[m - 1 - j]],))} "
                               f"vs {render((d2.label[arc2[j]],))}")
    rest1 = [b1[(i1 + m + j) % L1] for j in range(L1 - m)]
    rest2 = [b2[(i2 + m + j) % L2] for j in range(L2 - m)]
    out, ren = disjoint_union(d1, d2)
    arc2 = [ren[x] for x in arc2]
    rest2 = [ren[x] for x in rest2]
    if not rest1 and not rest2:
        raise DiagramError("gluing along the whole boundary of both disks closes a sphere")
    if rest1 and rest2:
        out.next[rest1[-1]] = rest2[0]
        out.next[rest2[-1]] = rest1[0]
    elif rest1:
        out.next[rest1[-1]] = rest1[0]
    else:
        out.next[rest2[-1]] = rest2[0]
    _identify(out, [(arc1[m - 1 - j], arc2[j]) for j in range(m)])
    out.base = (rest1 or rest2)[0]
    return out


def fill_face(d: Diagram, f: int, disk: Diagram, context=None) -> Diagram:
    """Replace inner face ``f`` by ``disk``, whose boundary must read the
    inverse of the face's cycle (up to rotation)."""
    hole = d.face_darts(f)
    rim = disk.boundary_darts()
    m = len(hole)
    if len(rim) != m:
        raise DiagramError(f"disk boundary has length {len(rim)}, face {f} has {m}")
    for r in range(m):
        if all(_letters_match(d.label[hole[(r + m - 1 - j) % m]], disk.label[rim[j]], context)
               for j in range(m)):
            break
    else:
        raise DiagramError(f"disk boundary {render(disk.boundary_word())} does not fit face "
                           f"{f} ({render(d.face_word(f))})")
    base = d.base
    out, ren = disjoint_union(d, disk)
    del out.faces[f]
    _identify(out, [(hole[(r + m - 1 - j) % m], ren[rim[j]]) for j in range(m)])
    out.base = base
    return out


def delete_edge(d: Diagram, x: int, new_face: int | None = None) -> None:
    """Erase edge ``{x, twin x}`` in place.  If its sides are different
    faces they merge (into ``new_face`` or the face of ``x``)."""
    e = d.twin[x]
    fx, fe = d.face[x], d.face[e]
    nx, ne = d.next[x], d.next[e]
    px, pe = d.prev(x), d.prev(e)
    if nx == e and ne == x:
        pass
    elif nx == e:
        d.next[px] = ne
    elif ne == x:
        d.next[pe] = nx
    else:
        d.next[px] = ne
        d.next[pe] = nx
    keep = fx if new_face is None else new_face
    if d.base in (x, e):
        cand = [y for y in (ne, nx, px, pe) if y not in (x, e)]
        d.base = cand[0] if cand else None
    for y in (x, e):
        del d.twin[y], d.next[y], d.label[y], d.face[y]
    if fx != fe:
        gone = fe if keep == fx else fx
        if gone == OUTER:
            gone, keep = keep, OUTER
        for y, g in list(d.face.items()):
            if g == gone:
                d.face[y] = keep
        d.faces.pop(gone, None)


def subdivide(d: Diagram, x: int, letters, context=None) -> list[int]:
    """Replace edge ``x`` by a path reading ``letters`` (same endpoints)."""
    letters = tuple(letters)
    if not letters:
        raise DiagramError("cannot subdivide into an empty path")
    e = d.twin[x]
    fx, fe = d.face[x], d.face[e]
    cycles = {}
    for y in (x, e):
        cycles[y] = d.cycle(y)
    fwd, bwd = [], []
    for a in letters:
        p, q = d.new_edge(a, inverse_letter(a, context), fx, fe)
        fwd.append(p)
        bwd.append(q)
    bwd.reverse()
    subst = {x: fwd, e: bwd}
    done = set()
    for y in (x, e):
        c = cycles[y]
        if y in done:
            continue
        new = []
        for z in c:
            new.extend(subst.get(z, [z]))
            if z in subst:
                done.add(z)
        for i, z in enumerate(new):
            d.next[z] = new[(i + 1) % len(new)]
    was_base = d.base
    for y in (x, e):
        del d.twin[y], d.next[y], d.label[y], d.face[y]
    if was_base == x:
        d.base = fwd[0]
    elif was_base == e:
        d.base = bwd[0]
    return fwd


def mirror(d: Diagram) -> Diagram:
    """Reflected diagram: every face reads the inverse word, boundary
    becomes the inverse of the original boundary."""
    out = d.copy()
    out.__post_init__()
    for x in d.twin:
        out.next[x] = d.twin[d.prev(d.twin[x])]
        out.face[x] = d.face[d.twin[x]]
    if d.base is not None:
        out.base = d.twin[d.boundary_darts()[-1]]
    return out


def rotate_base(d: Diagram, k: int) -> None:
    darts = d.boundary_darts()
    if darts:
        d.base = darts[k % len(darts)]
