"""Diagrams from derivations.

A derivation ``c_0 -> c_1 -> ... -> ()`` inserts one relator piece per step
and renormalizes.  Replaying it backwards from the empty diagram, every
normalization move is undone on the boundary (a cancellation becomes a
spike, a subgroup merge becomes an S-triangle) and the inserted piece is
then pinched off as a new cell.
"""
from __future__ import annotations

from ..area import Derivation, relative_area
from ..words import canonical_letter, combine, interacts, min_rotation, render
from .core import OUTER, Diagram, DiagramError, inverse_letter


class ProviderError(RuntimeError):
    """No derivation found within the search budget."""


def trace_normalize(word, oracles, cyclic: bool = True):
    """Normal form of ``word`` plus the list of moves producing it.

    Moves: ``("drop", j, a)`` removes a trivial letter, ``("canon", j, a, b)``
    rewrites a letter to canonical form, ``("cancel", j, a, b)`` removes an
    interacting pair with trivial product, ``("merge", j, a, b, c)`` replaces
    a pair by its product and ``("rot", r)`` rotates left by ``r``.
    """
    ops = []
    stack: list = []
    rest = list(word)
    while rest:
        a = rest.pop(0)
        j = len(stack)
        c = canonical_letter(a, oracles)
        if c is None:
            ops.append(("drop", j, a))
            continue
        if c != a:
            ops.append(("canon", j, a, c))
            a = c
        if stack and interacts(stack[-1], a):
            b = stack.pop()
            m = combine(b, a, oracles)
            if m is None:
                ops.append(("cancel", j - 1, b, a))
            else:
                ops.append(("merge", j - 1, b, a, m))
                stack.append(m)
        else:
            stack.append(a)
    w = stack
    if not cyclic:
        return tuple(w), ops
    while len(w) >= 2 and interacts(w[-1], w[0]):
        ops.append(("rot", len(w) - 1))
        w = w[-1:] + w[:-1]
        b, a = w[0], w[1]
        m = combine(b, a, oracles)
        if m is None:
            ops.append(("cancel", 0, b, a))
            w = w[2:]
        else:
            ops.append(("merge", 0, b, a, m))
            w = [m] + w[2:]
    w, r = min_rotation(w)
    if r:
        ops.append(("rot", r))
    return tuple(w), ops


class _Builder:
    def __init__(self, p):
        self.p = p
        self.d = Diagram()
        self.bd: list[int] = []

    def sync(self):
        self.d.base = self.bd[0] if self.bd else None

    def undo(self, op):
        d, bd = self.d, self.bd
        kind = op[0]
        L = len(bd)
        if kind == "rot":
            r = op[1] % L if L else 0
            self.bd = bd[L - r:] + bd[:L - r]
        elif kind == "canon":
            d.label[bd[op[1]]] = op[2]
        elif kind in ("cancel",):
            j, a, b = op[1], op[2], op[3]
            x, y = d.new_edge(a, b)
            d.next[x] = y
            if L:
                d.next[bd[(j - 1) % L]] = x
                d.next[y] = bd[j % L]
            else:
                d.next[y] = x
            self.bd = bd[:j] + [x, y] + bd[j:]
        elif kind == "merge":
            j, a, b = op[1], op[2], op[3]
            e = bd[j]
            f = d.new_face(f"S:{a.name}")
            x1, y1 = d.new_edge(a, inverse_letter(a, self.p), OUTER, f)
            x2, y2 = d.new_edge(b, inverse_letter(b, self.p), OUTER, f)
            pred = bd[(j - 1) % L] if L > 1 else x2
            succ = d.next[e] if L > 1 else x1
            d.next[pred] = x1
            d.next[x1] = x2
            d.next[x2] = succ
            d.face[e] = f
            d.next[e] = y2
            d.next[y2] = y1
            d.next[y1] = e
            self.bd = bd[:j] + [x1, x2] + bd[j + 1:]
        elif kind == "drop":
            j, a = op[1], op[2]
            f = d.new_face(f"S:{a.name}")
            x, y = d.new_edge(a, a, OUTER, f)
            d.next[y] = y
            if L:
                d.next[bd[(j - 1) % L]] = x
                d.next[x] = bd[j % L]
            else:
                d.next[x] = x
            self.bd = bd[:j] + [x] + bd[j:]
        else:
            raise ValueError(kind)

    def pinch(self, lx: int, tag: str, relator: int):
        d, bd = self.d, self.bd
        X, P = bd[:lx], bd[lx:]
        if not P:
            raise DiagramError("empty relator piece")
        if X:
            vm = d.vertex_map()
            if vm[X[0]] == vm[P[0]]:
                raise DiagramError("derivation step is not reduced: the new cell would pinch a sphere")
            d.next[X[-1]] = X[0]
        d.next[P[-1]] = P[0]
        f = d.new_face(tag, relator)
        for x in P:
            d.face[x] = f
        self.bd = X


def _tag(piece) -> str:
    return "T" if any(a.kind == "t" for a in piece.word) else "R"


def derivation_to_diagram(der: Derivation, p) -> Diagram:
    """Diagram whose boundary reads ``der.word`` from its base dart, with one
    R- or T-cell per derivation step plus subgroup cells."""
    oracles = p.all_oracles()
    states = der.states(p)
    b = _Builder(p)
    for i in range(len(der.steps) - 1, -1, -1):
        s = der.steps[i]
        c = s.before
        k = s.position
        X = c[k:] + c[:k]
        raw = X + s.piece.word
        result, ops = trace_normalize(raw, oracles)
        if result != states[i + 1]:
            raise DiagramError(f"step {i + 1} does not reproduce {render(states[i + 1])}")
        for op in reversed(ops):
            b.undo(op)
        b.pinch(len(X), _tag(s.piece), s.piece.relator)
        L = len(b.bd)
        if L:
            b.bd = b.bd[L - k:] + b.bd[:L - k] if k else b.bd
    result, ops = trace_normalize(der.word, oracles)
    if result != states[0]:
        raise DiagramError("start word does not normalize to the first state")
    for op in reversed(ops):
        b.undo(op)
    b.sync()
    d = b.d
    d.__post_init__()
    if tuple(d.label[x] for x in d.boundary_darts()) != tuple(der.word):
        raise DiagramError("constructed boundary does not read the word")
    return d


def provider(p, max_area: int = 8, max_states: int = 200_000):
    """Function word -> minimal diagram over ``p`` (raises ProviderError)."""
    def build(word):
        word = tuple(word)
        res = relative_area(p, word, max_area=max_area, max_states=max_states)
        if not res.found:
            raise ProviderError(f"no derivation for {render(word)} ({res.reason or 'budget'})")
        return derivation_to_diagram(res.witness, p)
    return build
