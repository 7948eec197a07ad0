"""Checking a diagram against a presentation."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..words import cyclic_permutations, invert, letter_inverse, render
from .core import OUTER, Diagram


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    unknown: list = field(default_factory=list)
    boundary: tuple = ()
    counts: tuple = (0, 0, 0)
    census: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.unknown

    @property
    def verdict(self):
        """True, False, or None when only undetermined checks remain."""
        if self.violations:
            return False
        return None if self.unknown else True

    def lines(self) -> list[str]:
        V, E, F = self.counts
        out = [f"boundary: {render(self.boundary)}",
               f"V={V} E={E} F={F} cells={self.census}"]
        out += [f"violation: {v}" for v in self.violations]
        out += [f"undetermined: {u}" for u in self.unknown]
        out.append("valid" if self.ok else ("invalid" if self.violations else "undetermined"))
        return out


def _relator_table(p) -> set:
    rels = list(p.relators)
    if p.hnn is not None:
        rels += list(p.hnn.source.relators)
    out = set()
    for r in rels:
        for w in cyclic_permutations(r) + cyclic_permutations(invert(r)):
            out.add(w)
    return out


def _inverse_pair(a, b, oracles):
    """None when undetermined."""
    if a.kind != "h" or b.kind != "h":
        return b == letter_inverse(a)
    if a.name != b.name:
        return False
    o = oracles.get(a.name)
    if o is None:
        return b == letter_inverse(a)
    return o.is_identity(a.elem + b.elem)


def _subgroup_product(word, lam, oracles):
    """Trivial-in-H_λ check for a word of λ-letters; None when unknown."""
    elem = ()
    for a in word:
        elem = elem + a.elem
    return oracles[lam].is_identity(elem)


def validate(d: Diagram, p, expect=None) -> ValidationReport:
    """Structural, labelling and planarity checks.

    Cells tagged ``R`` or ``T`` must read a relator (up to rotation and
    inversion), ``S:λ`` cells a word of λ-letters trivial in H_λ, ``L``
    cells a trivial word of K-letters and ``Q`` cells a Y-word trivial in K
    (the last two only for HNN-extensions).
    """
    rep = ValidationReport()
    oracles = p.all_oracles()
    for x in d.twin:
        y = d.twin[x]
        if y == x or d.twin.get(y) != x:
            rep.violations.append(f"twin is not an involution at dart {x}")
        if d.next.get(x) not in d.twin:
            rep.violations.append(f"next of dart {x} is not a dart")
    if set(d.next.values()) != set(d.twin):
        rep.violations.append("next is not a permutation")
    if rep.violations:
        return rep
    for x in sorted(d.twin):
        y = d.twin[x]
        if x < y:
            v = _inverse_pair(d.label[x], d.label[y], oracles)
            if v is False:
                rep.violations.append(f"edge {x}/{y}: labels {render((d.label[x],))} and "
                                      f"{render((d.label[y],))} are not inverse")
            elif v is None:
                rep.unknown.append(f"edge {x}/{y}: inverse labels not decided")
    cycles = d.face_cycles()
    for f, cyc in cycles.items():
        if f not in d.faces:
            rep.violations.append(f"darts refer to unknown face {f}")
        elif len(cyc) != 1 and not (f == OUTER and not d.twin):
            rep.violations.append(f"face {f} has {len(cyc)} boundary cycles")
    if rep.violations:
        return rep
    rels = _relator_table(p)
    hnn = p.hnn
    for f in d.cells():
        tag = d.faces[f].tag
        w = d.face_word(f)
        if tag in ("R", "T"):
            if w not in rels:
                rep.violations.append(f"cell {f} ({tag}) reads {render(w)}, not a relator")
            elif tag == "T" and not any(a.kind == "t" for a in w):
                rep.violations.append(f"cell {f} tagged T has no t-letter")
        elif tag.startswith("S:") or tag == "L":
            lam = tag[2:] if tag != "L" else (hnn.k_id if hnn else None)
            if lam not in oracles:
                rep.violations.append(f"cell {f}: unknown subgroup {lam}")
                continue
            if any(a.kind != "h" or a.name != lam for a in w):
                rep.violations.append(f"cell {f} ({tag}) has letters outside {lam}: {render(w)}")
                continue
            v = _subgroup_product(w, lam, oracles)
            if v is False:
                rep.violations.append(f"cell {f} ({tag}) reads {render(w)}, nontrivial in {lam}")
            elif v is None:
                rep.unknown.append(f"cell {f} ({tag}): triviality not decided")
        elif tag == "Q":
            if hnn is None or any(a.kind != "x" or a.name not in hnn.y_gens for a in w):
                rep.violations.append(f"cell {f} (Q) reads {render(w)}, not a Y-word")
                continue
            k = hnn.y_to_k(w)
            v = _subgroup_product(k, hnn.k_id, oracles)
            if v is False:
                rep.violations.append(f"cell {f} (Q) reads {render(w)}, nontrivial in K")
            elif v is None:
                rep.unknown.append(f"cell {f} (Q): triviality not decided")
        else:
            rep.violations.append(f"cell {f} has unknown tag {tag!r}")
    if d.twin:
        parent = {x: x for x in d.twin}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x in d.twin:
            for y in (d.twin[x], d.next[x]):
                parent[find(x)] = find(y)
        if len({find(x) for x in d.twin}) != 1:
            rep.violations.append("diagram is not connected")
        if d.base is None or d.face.get(d.base) != OUTER:
            rep.violations.append("base dart is not on the outer face")
    rep.counts = d.counts()
    if d.euler() != 2:
        rep.violations.append(f"Euler characteristic {d.euler()} != 2")
    rep.census = d.census()
    rep.boundary = d.boundary_word() if not rep.violations else ()
    if expect is not None and rep.boundary != tuple(expect):
        rep.violations.append(f"boundary reads {render(rep.boundary)}, expected {render(expect)}")
    return rep
