"""Relative area, word problem, Dehn sampling and H_λ-component analysis.

The relative area of a word W that represents 1 is the least number of
conjugated relators whose product equals W in the free product
F = (∗ H_λ) ∗ F(X).  Subgroup relations are free, so the search works on
free-product normal forms and charges one unit per relator insertion.

:func:`relative_area` is a breadth-first (uniform-cost) search over cyclic
normal forms.  A move rotates the current word and appends a cyclic
permutation of R^{±1} that interacts with one of its neighbours, then
reduces cyclically.  States are capped in length (``max_len``); areas are
exact relative to that cap.
"""
from __future__ import annotations

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from ._lattice import in_lattice
from .growth import GrowthTable
from .words import (
    Letter,
    STABLE,
    WordSyntaxError,
    cyclic_canonical,
    cyclic_normalize,
    interacts,
    invert,
    normalize,
    render,
    stable,
    xgen,
)

log = logging.getLogger(__name__)


# -- abelianization certificates -------------------------------------------------

def _coords(p):
    idx = {}
    for x in p.x_gens:
        idx[("x", x)] = len(idx)
    idx[("t",)] = len(idx)
    for lam, o in sorted(p.subgroups.items()):
        for g in o.generators:
            idx[("h", lam, g)] = len(idx)
    return idx


def abelian_vector(p, w, idx=None) -> list[int]:
    idx = _coords(p) if idx is None else idx
    v = [0] * len(idx)
    for a in w:
        if a.kind == "x":
            v[idx[("x", a.name)]] += a.sign
        elif a.kind == "t":
            v[idx[("t",)]] += a.sign
        else:
            if a.name not in p.subgroups:
                if p.hnn is not None and a.name == p.hnn.k_id:
                    u = abelian_vector(p, p.hnn.embed_k(a.elem), idx)
                    v = [s + r for s, r in zip(v, u)]
                    continue
                raise KeyError(f"letter of unknown subgroup {a.name}")
            for g, e in a.elem:
                v[idx[("h", a.name, g)]] += e
    return v


def abelian_relations(p, idx=None) -> list[list[int]]:
    idx = _coords(p) if idx is None else idx
    rows = [abelian_vector(p, r, idx) for r in p.relators]
    for lam, o in sorted(p.subgroups.items()):
        for rel in o.abelian_relations():
            v = [0] * len(idx)
            for g, e in zip(o.generators, rel):
                v[idx[("h", lam, g)]] += e
            rows.append(v)
    return rows


def abelian_trivial(p, w) -> bool:
    """False certifies that ``w`` is nontrivial in G (its image in G^ab is)."""
    idx = _coords(p)
    return in_lattice(abelian_relations(p, idx), abelian_vector(p, w, idx))


def abelian_member(ambient, w, oracle, embed) -> bool:
    """False certifies that ``w`` lies outside ``embed(oracle)`` in G."""
    idx = _coords(ambient)
    rows = abelian_relations(ambient, idx)
    for g in oracle.generators:
        rows.append(abelian_vector(ambient, embed(((g, 1),)), idx))
    return in_lattice(rows, abelian_vector(ambient, w, idx))


# -- relative area search --------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    relator: int
    sign: int
    shift: int
    word: tuple


def relator_pieces(p) -> list[Piece]:
    """Distinct cyclic permutations of R^{±1}, in relator order."""
    seen = set()
    out = []
    for i, r in enumerate(p.relators):
        for sign, base in ((1, tuple(r)), (-1, invert(r))):
            for k in range(len(base)):
                w = base[k:] + base[:k]
                if w not in seen:
                    seen.add(w)
                    out.append(Piece(i, sign, k, w))
    return out


@dataclass
class Step:
    before: tuple
    position: int
    piece: Piece

    def after(self, p) -> tuple:
        c = self.before
        return cyclic_canonical(c[self.position:] + c[:self.position] + self.piece.word, p)


@dataclass
class Derivation:
    """Sequence of relator insertions taking a word to the empty word."""

    word: tuple
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def states(self, p) -> list[tuple]:
        out = [cyclic_canonical(self.word, p)]
        for s in self.steps:
            out.append(s.after(p))
        return out

    def replay(self, p) -> bool:
        """Re-execute every step; True iff the chain is consistent and ends empty."""
        cur = cyclic_canonical(self.word, p)
        for s in self.steps:
            if s.before != cur:
                return False
            cur = s.after(p)
        return cur == ()

    def lines(self) -> list[str]:
        out = []
        for i, s in enumerate(self.steps, 1):
            out.append(f"{i}: insert R{s.piece.relator}^{s.piece.sign:+d} shift {s.piece.shift} "
                       f"at {s.position} into [{render(s.before)}]")
        return out


@dataclass
class AreaResult:
    word: tuple
    area: int | None
    exact: bool
    witness: Derivation | None = None
    explored: int = 0
    lower_bound: int = 0
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.area is not None


class _Joiner:
    """Cyclic normal form of ``base + piece`` for already-normal inputs,
    with subgroup products memoized."""

    def __init__(self, p):
        self.oracles = p.all_oracles()
        self.memo: dict = {}

    def combine(self, a, b):
        key = (a, b)
        if key not in self.memo:
            o = self.oracles[a.name]
            elem = o.multiply(a.elem, b.elem)
            self.memo[key] = None if o.is_identity(elem) is True else Letter("h", a.name, 1, o.canon(elem))
        return self.memo[key]

    def __call__(self, base, piece) -> tuple:
        # only the tail of base can react with the piece: base[:top] stays put
        top = len(base)
        extra: list = []
        for a in piece:
            last = extra[-1] if extra else (base[top - 1] if top else None)
            if last is not None and interacts(last, a):
                if extra:
                    extra.pop()
                else:
                    top -= 1
                if a.kind == "h":
                    c = self.combine(last, a)
                    if c is not None:
                        extra.append(c)
            else:
                extra.append(a)
        w = base[:top] + tuple(extra)
        # cyclic reduction: fold the tail into the head until they stop
        # interacting; a merged letter cannot react with its new neighbours
        while len(w) >= 2 and interacts(w[-1], w[0]):
            c = self.combine(w[-1], w[0]) if w[0].kind == "h" else None
            w = ((c,) if c is not None else ()) + w[1:-1]
        if not w:
            return w
        m = min(w)
        return min(w[i:] + w[:i] for i in range(len(w)) if w[i] == m)


def _successors(c, pieces):
    L = len(c)
    seen_rot = set()
    for k in range(L):
        base = c[k:] + c[:k]
        if base in seen_rot:
            continue
        seen_rot.add(base)
        first, last = base[0], base[-1]
        for pc in pieces:
            if interacts(last, pc.word[0]) or interacts(pc.word[-1], first):
                yield k, pc, base


def relative_area(p, w, max_area: int = 8, max_states: int = 200_000,
                  max_len: int | None = None) -> AreaResult:
    """Minimal number of relator insertions reducing ``w`` to the empty word.

    Returns an :class:`AreaResult`; ``area`` is None when no derivation was
    found within ``max_area`` insertions, ``max_states`` visited states or
    states longer than ``max_len`` (default ``‖w‖ + 2M``).
    """
    start = cyclic_canonical(w, p)
    if not start:
        return AreaResult(tuple(w), 0, True, Derivation(tuple(w)), 1)
    pieces = relator_pieces(p)
    if not pieces:
        return AreaResult(tuple(w), None, True, None, 1, reason="no relators")
    M = p.max_relator_length
    cap = len(start) + 2 * M if max_len is None else max_len
    join = _Joiner(p)
    parent: dict = {start: None}
    frontier = [start]
    for level in range(max_area):
        nxt = []
        for c in frontier:
            for k, pc, base in _successors(c, pieces):
                u = join(base, pc.word)
                if u in parent or len(u) > cap:
                    continue
                parent[u] = (c, k, pc)
                if not u:
                    return _result(w, u, parent, level + 1)
                nxt.append(u)
                if len(parent) > max_states:
                    return AreaResult(tuple(w), None, False, None, len(parent), level + 1,
                                      reason=f"state budget {max_states} exhausted")
        if not nxt:
            return AreaResult(tuple(w), None, True, None, len(parent), level + 1,
                              reason="search space exhausted: no derivation within length cap")
        frontier = nxt
    return AreaResult(tuple(w), None, False, None, len(parent), max_area + 1,
                      reason=f"area exceeds {max_area}")


def _result(w, goal, parent, area):
    steps = []
    cur = goal
    while parent[cur] is not None:
        c, k, pc = parent[cur]
        steps.append(Step(c, k, pc))
        cur = c
    steps.reverse()
    return AreaResult(tuple(w), area, True, Derivation(tuple(w), steps), len(parent))


def quick_verdict(p, w) -> bool | None:
    """Certificates that need no search: normal form, model, abelianization."""
    wn = cyclic_normalize(w, p)
    if not wn:
        return True
    oracles = p.all_oracles()
    settled = all(a.kind != "h" or oracles[a.name].is_identity(a.elem) is False for a in wn)
    if p.model is not None and p.model.covers(wn):
        if not p.model.is_identity(wn):
            return False
        if p.model.faithful:
            return True
    if not p.relators:
        return False if settled else None
    try:
        if not abelian_trivial(p, wn):
            return False
    except KeyError:
        pass
    return None


def word_problem(p, w, budget: int = 2000, max_area: int = 8) -> bool | None:
    """Three-valued: True (w = 1 in G), False (certified ≠ 1), None (unknown)."""
    v = quick_verdict(p, w)
    if v is not None or not p.relators:
        return v
    res = relative_area(p, w, max_area=max_area, max_states=budget)
    return True if res.found else None


# -- relative Dehn function samples ----------------------------------------------

def alphabet(p, rho: int) -> list[Letter]:
    """Letters of length 1: X^{±1}, t^{±1} and H_λ-balls of radius ρ."""
    out = []
    for x in p.x_gens:
        out += [xgen(x, 1), xgen(x, -1)]
    if p.stable:
        out += [stable(1), stable(-1)]
    for lam, o in sorted(p.subgroups.items()):
        out += [Letter("h", lam, 1, e) for e in o.ball(rho)]
    return out


def enumerate_cyclic_words(p, n: int, rho: int, exact_length: bool = True) -> Iterator[tuple]:
    """Cyclically reduced normal forms that are least among their rotations."""
    letters = alphabet(p, rho)
    lo = n if exact_length else 1

    def rec(prefix):
        L = len(prefix)
        if L >= lo and (L == 1 or not interacts(prefix[-1], prefix[0])):
            if all(prefix[i:] + prefix[:i] >= prefix for i in range(1, L)):
                yield prefix
        if L == n:
            return
        for a in letters:
            if L and interacts(prefix[-1], a):
                continue
            if L and a < prefix[0]:
                continue
            yield from rec(prefix + (a,))

    for a in letters:
        yield from rec((a,))


@dataclass
class DehnEntry:
    n: int
    delta: int
    witness: tuple
    exact: bool


def _word_area(p, w, max_area, max_states):
    """``(area, exact)`` for a trivial or undecided word, None for a nontrivial one."""
    verdict = quick_verdict(p, w)
    if verdict is False:
        return None
    res = relative_area(p, w, max_area=max_area, max_states=max_states)
    if res.found:
        return res.area, True
    if verdict is None and res.exact:
        # exhausted search space: no derivation, so w is taken as nontrivial
        return None
    return res.lower_bound, False


def dehn_sample(p, n_max: int, rho: int, max_area: int = 8, max_states: int = 50_000,
                jobs: int = 1) -> GrowthTable:
    """Finite relative Dehn function δ_ρ(n), n = 1..n_max.

    ``witnesses[n-1]`` is a word realizing δ_ρ(n); ``exact[n-1]`` is False
    when some word of length ≤ n had an undecided word problem or area.
    """
    if not p.relators:
        return GrowthTable([0] * n_max, [True] * n_max, f"{p.name} (R empty)",
                           witnesses=[()] * n_max)
    per_len: list[tuple[int, tuple, bool]] = []
    for n in range(1, n_max + 1):
        words = list(enumerate_cyclic_words(p, n, rho))
        if p.model is not None and p.model.faithful:
            words = [w for w in words if p.model.covers(w) and p.model.is_identity(w)]

        def work(w):
            return w, _word_area(p, w, max_area, max_states)

        if jobs > 1:
            with ThreadPoolExecutor(jobs) as ex:
                results = list(ex.map(work, words))
        else:
            results = [work(w) for w in words]
        best, wit, ok = 0, (), True
        for w, r in results:
            if r is None:
                continue
            a, exact = r
            ok = ok and exact
            if a > best:
                best, wit = a, w
        per_len.append((best, wit, ok))
        log.info("n=%d: %d candidate words, max area %d", n, len(words), best)
    values, exact, wits = [], [], []
    run_best, run_wit, run_ok = 0, (), True
    for best, wit, ok in per_len:
        if best > run_best:
            run_best, run_wit = best, wit
        run_ok = run_ok and ok
        values.append(run_best)
        exact.append(run_ok)
        wits.append(run_wit)
    return GrowthTable(values, exact, f"delta_rho of {p.name} (rho={rho})", witnesses=wits)


# -- well-definedness probe ------------------------------------------------------

@dataclass
class ProbeResult:
    verdict: str          # "ill-defined-evidence" | "no-evidence"
    areas: list
    lengths: list
    words: list
    note: str = ""

    def __str__(self):
        return (f"{self.verdict}: lengths {self.lengths}, areas {self.areas} "
                f"(evidence at scale m={len(self.areas)})")


_TEMPLATE_TOKEN = re.compile(r"\s*(?:(\[)|(\])|(,)|([A-Za-z_][A-Za-z0-9_']*)(?:\^(-?(?:\d+|m)))?)")


def _resolve(p, name, exp):
    if name == STABLE and p.stable:
        return [stable(1 if exp > 0 else -1)] * abs(exp)
    if name in p.x_gens:
        return [xgen(name, 1 if exp > 0 else -1)] * abs(exp)
    owners = [lam for lam, o in p.subgroups.items() if name in o.generators]
    if len(owners) != 1:
        raise WordSyntaxError(f"cannot resolve {name!r} to a unique generator")
    return [Letter("h", owners[0], 1, ((name, exp),))] if exp else []


def instantiate(p, template: str, m: int) -> tuple:
    """Evaluate a template such as ``[a^m,b]`` (commutator u⁻¹ v⁻¹ u v)."""
    pos = 0

    def seq():
        nonlocal pos
        out = []
        while pos < len(template):
            tok = _TEMPLATE_TOKEN.match(template, pos)
            if not tok or tok.end() == pos:
                if template[pos:].strip() == "":
                    pos = len(template)
                    break
                raise WordSyntaxError("bad template", pos)
            if tok.group(2) or tok.group(3):
                break
            pos = tok.end()
            if tok.group(1):
                u = seq()
                if not _TEMPLATE_TOKEN.match(template, pos).group(3):
                    raise WordSyntaxError("expected ',' in commutator", pos)
                pos = _TEMPLATE_TOKEN.match(template, pos).end()
                v = seq()
                close = _TEMPLATE_TOKEN.match(template, pos)
                if not close or not close.group(2):
                    raise WordSyntaxError("expected ']'", pos)
                pos = close.end()
                out += list(invert(u)) + list(invert(v)) + u + v
            else:
                e = tok.group(5)
                exp = 1 if e is None else (m if e == "m" else -m if e == "-m" else int(e))
                out += _resolve(p, tok.group(4), exp)
        return out

    w = seq()
    if pos < len(template) and template[pos:].strip():
        raise WordSyntaxError("trailing text in template", pos)
    return normalize(w, p)


def well_definedness_probe(p, template: str = "[a^m,b]", horizon: int = 5,
                           max_area: int | None = None) -> ProbeResult:
    """Evidence that no function of length bounds relative area: a family of
    trivial words whose lengths stay bounded while areas strictly increase."""
    areas, lengths, words = [], [], []
    for m in range(1, horizon + 1):
        w = instantiate(p, template, m)
        if word_problem(p, w) is False:
            raise ValueError(f"instance m={m} ({render(w)}) does not represent 1")
        res = relative_area(p, w, max_area=max_area or m + 4)
        if not res.found:
            return ProbeResult("no-evidence", areas, lengths, words,
                               f"area of instance m={m} not found ({res.reason})")
        areas.append(res.area)
        lengths.append(len(w))
        words.append(w)
    bounded = horizon >= 2 and max(lengths) <= lengths[0]
    increasing = all(a < b for a, b in zip(areas, areas[1:]))
    verdict = "ill-defined-evidence" if bounded and increasing and horizon >= 2 else "no-evidence"
    return ProbeResult(verdict, areas, lengths, words)


# -- H_λ-components of cycles ----------------------------------------------------

@dataclass
class Component:
    index: int
    start: int
    stop: int           # exclusive, indices taken cyclically
    letters: tuple
    element: tuple


def decompose_components(q: Sequence[Letter], lam: str, p=None) -> list[Component]:
    """Maximal runs of H_λ-letters in the cyclic word ``q``."""
    q = tuple(q)
    L = len(q)
    if L == 0:
        return []
    mask = [a.kind == "h" and a.name == lam for a in q]
    if all(mask):
        runs = [(0, L)]
    else:
        first = next(i for i in range(L) if not mask[i])
        runs = []
        i = first
        end = first + L
        while i < end:
            if mask[i % L]:
                j = i
                while j < end and mask[j % L]:
                    j += 1
                runs.append((i % L, (i % L) + (j - i)))
                i = j
            else:
                i += 1
    oracle = p.all_oracles()[lam] if p is not None else None
    out = []
    for n, (s, e) in enumerate(runs):
        letters = tuple(q[i % L] for i in range(s, e))
        syl = tuple(x for a in letters for x in a.elem)
        out.append(Component(n, s, e, letters, oracle.canon(syl) if oracle else syl))
    return out


def between(q, c1: Component, c2: Component) -> tuple:
    """Label of the arc from the end of ``c1`` to the start of ``c2``."""
    L = len(q)
    out = []
    i = c1.stop
    while i % L != c2.start % L:
        out.append(q[i % L])
        i += 1
    return tuple(out)


@dataclass
class Classification:
    components: list
    classes: list
    isolated: dict
    undetermined: list


def classify_components(p, q, lam: str, budget: int = 200) -> Classification:
    """Group the H_λ-components of a cycle into connectivity classes."""
    from .oracles import member

    comps = decompose_components(q, lam, p)
    oracle = p.all_oracles()[lam]
    parent = list(range(len(comps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    unknown = []
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            arc = between(q, comps[i], comps[j])
            ans = member(oracle, arc, p, budget)
            if ans is True:
                parent[find(i)] = find(j)
            elif ans is None:
                unknown.append((i, j))
    groups: dict = {}
    for i in range(len(comps)):
        groups.setdefault(find(i), []).append(i)
    classes = sorted(groups.values())
    isolated = {}
    for i in range(len(comps)):
        if len(groups[find(i)]) > 1:
            isolated[i] = False
        elif any(i in pair for pair in unknown):
            isolated[i] = None
        else:
            isolated[i] = True
    return Classification(comps, classes, isolated, unknown)


@dataclass
class OmegaReport:
    status: str          # "holds" | "fails" | "undetermined"
    lhs: int | None
    rhs: int | None
    lengths: dict
    note: str = ""


def omega_check(p, q, lam: str, omega: Sequence, C: int, delta: GrowthTable,
                budget: int = 200) -> OmegaReport:
    """Check Σ |g_i|_Ω ≤ C·δ(l(q)) over isolated H_λ-components g_i of ``q``."""
    from .oracles import NotInSubgroup, OracleUnknown

    cls = classify_components(p, q, lam, budget)
    oracle = p.all_oracles()[lam]
    gens = {f"w{i}": tuple(s) for i, s in enumerate(omega)}
    lengths = {}
    undetermined = [i for i, v in cls.isolated.items() if v is None]
    for i, iso in cls.isolated.items():
        if not iso:
            continue
        g = cls.components[i].element
        try:
            lengths[i] = oracle.geodesic_length(g, gens) if gens else (0 if not g else None)
        except NotInSubgroup:
            lengths[i] = None
            return OmegaReport("fails", None, None, lengths,
                               f"component {i} is not in the subgroup generated by Ω")
        except OracleUnknown:
            undetermined.append(i)
        if lengths.get(i) is None and i not in undetermined:
            return OmegaReport("fails", None, None, lengths,
                               f"component {i} is not in the subgroup generated by Ω")
    n = len(q)
    if not delta.covers(n):
        return OmegaReport("undetermined", None, None, lengths, f"δ table does not cover {n}")
    lhs = sum(v for v in lengths.values() if v is not None)
    rhs = C * delta(n)
    if undetermined or not delta.is_exact(n):
        return OmegaReport("undetermined", lhs, rhs, lengths,
                           "isolation or Ω-lengths undetermined" if undetermined
                           else "δ entry is a lower bound")
    return OmegaReport("holds" if lhs <= rhs else "fails", lhs, rhs, lengths)


@dataclass
class CayleyCycle:
    """A closed path in the Cayley graph, given by its (trivial) label."""

    label: tuple
    base: tuple = ()

    @classmethod
    def from_label(cls, p, label, budget: int = 2000) -> "CayleyCycle":
        if word_problem(p, label, budget) is False:
            raise ValueError(f"{render(label)} does not represent 1; not a cycle")
        return cls(tuple(label))
