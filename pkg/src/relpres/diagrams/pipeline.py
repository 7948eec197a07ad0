"""From a diagram over the base group to one over the HNN-extension.

For a word W over X ∪ Y ∪ H that is trivial in the HNN-extension, the
pipeline builds a minimal diagram over the base presentation (Y-letters
read as K-letters), merges neighbouring subgroup cells, expands every
K-edge into a geodesic Y-path and finally replaces each cell whose label
is a Y-word trivial in K by a t-annulus around a single H_ν-cell.  The
costed cells of the result are then counted against ``n + (M+1) γ(n)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..area import relative_area
from ..growth import GrowthTable, superadditive_closure
from ..words import invert, render, stable
from .bands import domains, find_t_bands
from .build import ProviderError, derivation_to_diagram
from .core import OUTER, Diagram, cell_disk, delete_edge, fill_face, glue, subdivide


def merge_cells(d: Diagram) -> Diagram:
    """Merge neighbouring subgroup cells of the same family across shared edges."""
    d = d.copy()
    d.__post_init__()
    changed = True
    while changed:
        changed = False
        for x in sorted(d.twin):
            y = d.twin[x]
            f, g = d.face[x], d.face[y]
            if f == g or OUTER in (f, g):
                continue
            tf, tg = d.faces[f].tag, d.faces[g].tag
            if tf == tg and (tf.startswith("S:") or tf == "L"):
                delete_edge(d, x, new_face=f)
                changed = True
                break
    return d


def expand_k_letters(d0: Diagram, p) -> Diagram:
    """Subdivide every K-labelled edge into a geodesic Y-path; cells of K
    become Y-word cells."""
    hnn = p.hnn
    d = d0.copy()
    d.__post_init__()
    todo = sorted(x for x in d.twin if x < d.twin[x]
                  and d.label[x].kind == "h" and d.label[x].name == hnn.k_id)
    for x in todo:
        subdivide(d, x, hnn.k_to_y(d.label[x].elem), p)
    for f in d.cells():
        if d.faces[f].tag in ("L", f"S:{hnn.k_id}"):
            d.faces[f].tag = "Q"
    return d


def q_annulus(p, q) -> Diagram:
    """Disk reading ``q`` (a Y-word trivial in K): a ring of t-cells around
    one H_ν-cell."""
    hnn = p.hnn
    q = tuple(q)
    m = len(q)
    if m < 2:
        raise ValueError("a trivial Y-word has length at least 2")
    iotas = [hnn.iota_letter(a.name, a.sign) for a in q]

    def tcell(a):
        return cell_disk((stable(-1), a, stable(1), hnn.iota_letter(a.name, -a.sign)), "T",
                         _t_index(p, a.name), p)

    acc = cell_disk(tuple(iotas), f"S:{hnn.nu_id}", None, p)
    acc = glue(acc, 0, tcell(q[0]), 3, 1, p)
    for j in range(1, m - 1):
        L = len(acc.boundary_darts())
        acc = glue(acc, L - 1, tcell(q[j]), 3, 2, p)
    L = len(acc.boundary_darts())
    acc = glue(acc, L - 1, tcell(q[-1]), 2, 3, p)
    acc.set_base_to(q)
    return acc


def _t_index(p, y):
    target = p.hnn.t_relator(y)
    return next((i for i, r in enumerate(p.relators) if tuple(r) == target), None)


def eliminate_q_cells(d1: Diagram, p) -> tuple[Diagram, int]:
    """Replace every Q-cell; returns the diagram and the sum of their perimeters."""
    d = d1
    total = 0
    for f in d1.cells("Q"):
        rho = d.face_word(f)
        total += len(rho)
        d = fill_face(d, f, q_annulus(p, invert(rho)), p)
    return d, total


@dataclass
class PipelineResult:
    word: tuple
    d0: Diagram
    d1: Diagram
    diagram: Diagram
    base_cells: int            # relator cells of the base-group diagram
    q_perimeter: int
    M: int


def source_diagram(p, word, max_area: int = 8, max_states: int = 200_000) -> Diagram:
    """Minimal diagram over the base presentation for ``word`` (Y as K)."""
    hnn = p.hnn
    src = hnn.source
    w = hnn.y_to_k(word)
    res = relative_area(src, w, max_area=max_area, max_states=max_states)
    if not res.found:
        raise ProviderError(f"no base-group derivation for {render(word)} ({res.reason or 'budget'})")
    d = derivation_to_diagram(res.witness, src)
    for f in d.cells():
        if d.faces[f].tag == f"S:{hnn.k_id}":
            d.faces[f].tag = "L"
    return d


def hnn_m(p) -> int:
    if "M" in p.meta:
        return int(p.meta["M"])
    return max((len(r) for r in p.relators if not any(a.kind == "t" for a in r)), default=0)


def lemma_pipeline(p, word, max_area: int = 8, max_states: int = 200_000) -> PipelineResult:
    word = tuple(word)
    if any(a.kind == "t" for a in word):
        raise ValueError("the pipeline takes words without t-letters")
    d0 = merge_cells(source_diagram(p, word, max_area, max_states))
    d1 = expand_k_letters(d0, p)
    d1.set_base_to(word)
    d, per = eliminate_q_cells(d1, p)
    d.set_base_to(word)
    return PipelineResult(word, d0, d1, d, d0.costed_cells(), per, hnn_m(p))


# -- census audit -------------------------------------------------------------

@dataclass
class AuditEntry:
    name: str
    lhs: int | None
    rhs: int | None
    status: str                # "holds" | "fails" | "undetermined"
    note: str = ""

    @property
    def slack(self):
        if self.lhs is None or self.rhs is None:
            return None
        return self.rhs - self.lhs

    def __str__(self):
        s = f"{self.name}: {self.lhs} <= {self.rhs} {self.status}"
        if self.slack is not None:
            s += f" (slack {self.slack})"
        return s + (f" [{self.note}]" if self.note else "")


@dataclass
class AuditReport:
    n: int
    M: int
    C: int
    entries: list = field(default_factory=list)
    c_cycles: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.status == "holds" for e in self.entries)

    @property
    def failed(self) -> list:
        return [e for e in self.entries if e.status == "fails"]

    def entry(self, name: str) -> AuditEntry:
        return next(e for e in self.entries if e.name == name)

    def lines(self) -> list[str]:
        out = [f"n={self.n} M={self.M} C={self.C} (evidence on one diagram)"]
        out += [str(e) for e in self.entries]
        out += [f"c_D[{i}] = {c}" for i, c in enumerate(self.c_cycles)]
        return out


def _entry(name, lhs, rhs, note=""):
    if lhs is None or rhs is None:
        return AuditEntry(name, lhs, rhs, "undetermined", note or "growth table does not cover the argument")
    return AuditEntry(name, lhs, rhs, "holds" if lhs <= rhs else "fails", note)


def _at(g: GrowthTable, n: int):
    return g(n) if g.covers(n) else None


def _mul(k, v):
    return None if v is None else k * v


def _add(*vs):
    return None if any(v is None for v in vs) else sum(vs)


def collapse_components(word, p) -> list[str]:
    """c_D: the cycle with every maximal run of one subgroup's letters
    (Y read as K) replaced by a single edge."""
    w = p.hnn.y_to_k(word) if p.hnn is not None else tuple(word)
    fam = [a.name if a.kind == "h" else None for a in w]
    n = len(w)
    if n == 0:
        return []
    if all(f is not None and f == fam[0] for f in fam):
        return [fam[0]]
    # start right after a run boundary so runs do not wrap
    start = next(i for i in range(n) if fam[i] is None or fam[i] != fam[i - 1])
    out = []
    for j in range(n):
        i = (start + j) % n
        if fam[i] is None:
            out.append(render((w[i],)))
        elif j == 0 or fam[(i - 1) % n] != fam[i]:
            out.append(fam[i])
    return out


def census_audit(d: Diagram, p, gamma: GrowthTable, M: int | None = None, C: int = 1,
                 stages: PipelineResult | None = None) -> AuditReport:
    """Evaluate both sides of each cell-count inequality on ``d``."""
    M = hnn_m(p) if M is None else M
    word = d.boundary_word()
    n = len(word)
    rep = AuditReport(n, M, C)
    gbar = superadditive_closure(gamma) if gamma.N else gamma
    total = d.costed_cells()
    g_n = _at(gamma, n)
    rep.entries.append(_entry("total cells <= n + (M+1)γ(n)", total, _add(n, _mul(M + 1, g_n))))
    if stages is not None:
        rep.entries.append(_entry("total cells <= base cells + Q perimeter", total,
                                  stages.base_cells + stages.q_perimeter))
        rep.entries.append(_entry("Q perimeter <= n + M·base cells", stages.q_perimeter,
                                  n + M * stages.base_cells))
        rep.entries.append(_entry("Q perimeter <= n + Mγ(n)", stages.q_perimeter,
                                  _add(n, _mul(M, g_n))))
    if p.hnn is None:
        return rep
    bands = find_t_bands(d, p)
    doms = domains(d, p, bands)
    open_bands = [b for b in bands if not b.annular]
    c_total = 0
    for dom in doms:
        c = collapse_components(dom.word, p)
        rep.c_cycles.append(" ".join(c))
        c_total += len(c)
        lhs = sum(bands[i].length for i in dom.bottoms)
        rep.entries.append(_entry(f"domain {dom.index}: band length <= Cγ(|c_D|)", lhs,
                                  _mul(C, _at(gamma, len(c)))))
    rep.entries.append(_entry("sum |c_D| <= 3n", c_total, 3 * n))
    band_total = sum(b.length for b in open_bands)
    gb3 = _at(gbar, 3 * n)
    rep.entries.append(_entry("band total <= Cγ̄(3n)", band_total, _mul(C, gb3)))
    rep.entries.append(_entry("sum |∂D| <= n + 2Cγ̄(3n)", sum(len(x.word) for x in doms),
                              _add(n, _mul(2 * C, gb3))))
    in_bands = {f for b in open_bands for f in b.cells}
    dom_cells = sum(1 for f in d.cells() if d.faces[f].tag in ("R", "T") and f not in in_bands)
    rhs = 0
    for dom in doms:
        L = len(dom.word)
        rhs = _add(rhs, L, _mul(M + 1, _at(gamma, L)))
    rep.entries.append(_entry("domain cells <= sum(|∂D| + (M+1)γ(|∂D|))", dom_cells, rhs))
    return rep
