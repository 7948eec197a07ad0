"""Subgroup oracles: word problem, arithmetic and geodesics for one subgroup.

Every subgroup H_λ (and the associated subgroup K of an HNN-extension) is
handled through a :class:`SubgroupOracle`.  Elements are passed around as
syllable tuples ``((gen, exp), ...)`` in the oracle's own generators, and
each backend defines its own canonical representative.

Three-valued answers use ``True``/``False``/``None`` where ``None`` means
"unknown at the configured ball radius".
"""
from __future__ import annotations

import threading
from typing import Mapping, Sequence

from .words import (
    Letter,
    normalize,
    invert,
    syllables_compress,
    syllables_expand,
    syllables_inverse,
)


class OracleError(Exception):
    pass


class OracleUnknown(OracleError):
    """The answer lies outside the oracle's enumerable ball."""


class NotInSubgroup(OracleError):
    pass


def _symmetrize(gens: Mapping[str, tuple]) -> list[tuple[tuple[str, int], tuple]]:
    """``[((name, ±1), syllables), ...]`` in the documented total order:
    names sorted, positive before negative."""
    out = []
    for name in sorted(gens):
        syl = tuple(gens[name])
        out.append(((name, 1), syl))
        out.append(((name, -1), syllables_inverse(syl)))
    return out


class SubgroupOracle:
    backend = "abstract"
    exact = True

    def __init__(self, id: str, generators: Sequence[str], ball_radius: int = 6,
                 omega=None, extra_gen_sets=None):
        self.id = id
        self.generators = tuple(generators)
        self.ball_radius = ball_radius
        self.omega = omega
        self.extra_gen_sets = dict(extra_gen_sets or {})
        self._lock = threading.Lock()
        self._ball_cache: dict[int, list] = {}

    def __repr__(self):
        return f"{type(self).__name__}({self.id!r}, {list(self.generators)})"

    # -- backend hooks -------------------------------------------------------
    def key(self, syl):
        """Hashable identifier of the element (exact for exact backends)."""
        raise NotImplementedError

    def canon(self, syl) -> tuple:
        raise NotImplementedError

    def is_identity(self, syl) -> bool | None:
        raise NotImplementedError

    def abelian_relations(self) -> list[list[int]]:
        """Generators of the relation lattice of the abelianization,
        as exponent vectors over ``self.generators``."""
        return []

    @property
    def finite(self) -> bool:
        return False

    def declaration(self) -> dict:
        d = {"backend": self.backend, "generators": list(self.generators)}
        if self.ball_radius != 6:
            d["ball_radius"] = self.ball_radius
        if self.omega is not None:
            d["omega"] = [_render_syl(s) for s in self.omega]
        if self.extra_gen_sets:
            d["extra_gen_sets"] = {
                k: {n: _render_syl(s) for n, s in v.items()} for k, v in self.extra_gen_sets.items()}
        return d

    # -- derived operations -------------------------------------------------
    def check_word(self, syl):
        bad = {g for g, _ in syl} - set(self.generators)
        if bad:
            raise ValueError(f"{sorted(bad)} are not generators of {self.id}")

    def multiply(self, a, b) -> tuple:
        return self.canon(tuple(a) + tuple(b))

    def inverse(self, a) -> tuple:
        return self.canon(syllables_inverse(a))

    def equal(self, a, b) -> bool | None:
        return self.is_identity(tuple(a) + syllables_inverse(b))

    def own_generating_set(self) -> dict:
        return {g: ((g, 1),) for g in self.generators}

    def generating_set(self, name: str | None) -> dict:
        if name is None:
            return self.own_generating_set()
        return self.extra_gen_sets[name]

    def ball(self, radius: int) -> list[tuple]:
        """Canonical nontrivial elements of word length ≤ radius, in BFS
        (shortlex) order."""
        with self._lock:
            if radius in self._ball_cache:
                return self._ball_cache[radius]
        seen = {self.key(()): ()}
        frontier = [()]
        out = []
        gens = _symmetrize(self.own_generating_set())
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for _, s in gens:
                    u = self.canon(w + s)
                    k = self.key(u)
                    if k not in seen:
                        seen[k] = u
                        nxt.append(u)
                        out.append(u)
            frontier = nxt
        with self._lock:
            self._ball_cache[radius] = out
        return out

    def geodesic(self, g, gens: Mapping[str, tuple] | None = None,
                 radius: int | None = None) -> tuple[int, tuple]:
        """Shortest word over ``gens`` (symmetrized) equal to ``g``.

        Returns ``(length, witness)`` with witness a tuple of ``(name, ±1)``;
        ties are broken shortlex over the symmetrized generator order.
        """
        gens = self.own_generating_set() if gens is None else gens
        radius = self.ball_radius if radius is None else radius
        target = self.key(self.canon(tuple(g)))
        if self.is_identity(tuple(g)) is True:
            return 0, ()
        sym = _symmetrize(gens)
        start = self.key(())
        parent = {start: None}
        frontier = [((), ())]
        for depth in range(1, radius + 1):
            nxt = []
            for elem, word in frontier:
                for label, s in sym:
                    u = self.canon(elem + s)
                    k = self.key(u)
                    if k in parent:
                        continue
                    parent[k] = True
                    w2 = word + (label,)
                    if k == target:
                        return depth, w2
                    nxt.append((u, w2))
            if not nxt:
                raise NotInSubgroup(f"{_render_syl(g)} is not in the subgroup generated by {sorted(gens)}")
            frontier = nxt
        raise OracleUnknown(f"no word of length ≤ {radius} found for {_render_syl(g)} in {self.id}")

    def geodesic_length(self, g, gens=None, radius=None) -> int:
        return self.geodesic(g, gens, radius)[0]

    def witness_syllables(self, witness, gens=None) -> tuple:
        gens = self.own_generating_set() if gens is None else gens
        out = []
        for name, s in witness:
            syl = gens[name]
            out.extend(syl if s > 0 else syllables_inverse(syl))
        return syllables_compress(syllables_expand(tuple(out)))


def _render_syl(syl) -> str:
    from .words import render_subword
    return render_subword(syl)


class FreeAbelian(SubgroupOracle):
    backend = "free_abelian"

    def _index(self):
        if not hasattr(self, "_idx"):
            self._idx = {g: i for i, g in enumerate(self.generators)}
        return self._idx

    def key(self, syl):
        idx = self._index()
        v = [0] * len(self.generators)
        for g, e in syl:
            v[idx[g]] += e
        return tuple(v)

    def canon(self, syl):
        v = self.key(syl)
        return tuple((g, e) for g, e in zip(self.generators, v) if e)

    def is_identity(self, syl):
        return not any(self.key(syl))


class Free(SubgroupOracle):
    backend = "free"

    def key(self, syl):
        return self.canon(syl)

    def canon(self, syl):
        return syllables_compress(syllables_expand(tuple(syl)))

    def is_identity(self, syl):
        return not self.canon(syl)


class FiniteTable(SubgroupOracle):
    """Finite group given by a multiplication table on ``0..n-1``."""

    backend = "finite_table"

    def __init__(self, id, generators, table, gen_elements, identity=0, **kw):
        super().__init__(id, generators, **kw)
        self.table = [list(r) for r in table]
        self.gen_elements = dict(gen_elements)
        self.identity = identity
        n = len(self.table)
        self._inv = [next(j for j in range(n) if self.table[i][j] == identity) for i in range(n)]
        self._words = self._shortlex_words()

    @property
    def finite(self):
        return True

    @property
    def order(self):
        return len(self.table)

    def _shortlex_words(self):
        gens = _symmetrize(self.own_generating_set())
        words = {self.identity: ()}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for e in frontier:
                for (name, s), _ in gens:
                    f = self.table[e][self._gen(name, s)]
                    if f not in words:
                        words[f] = words[e] + ((name, s),)
                        nxt.append(f)
            frontier = nxt
        return words

    def _gen(self, name, s):
        e = self.gen_elements[name]
        return e if s > 0 else self._inv[e]

    def evaluate(self, syl) -> int:
        e = self.identity
        for g, k in syl:
            step = self._gen(g, 1 if k > 0 else -1)
            for _ in range(abs(k)):
                e = self.table[e][step]
        return e

    def key(self, syl):
        return self.evaluate(syl)

    def canon(self, syl):
        e = self.evaluate(syl)
        if e not in self._words:
            raise NotInSubgroup(f"element {e} is not generated by {self.generators}")
        return syllables_compress(self._words[e])

    def is_identity(self, syl):
        return self.evaluate(syl) == self.identity

    def abelian_relations(self):
        idx = {g: i for i, g in enumerate(self.generators)}

        def vec(word):
            v = [0] * len(self.generators)
            for g, s in word:
                v[idx[g]] += s
            return v

        rows = []
        for e, w in self._words.items():
            for g in self.generators:
                f = self.table[e][self.gen_elements[g]]
                v = vec(w)
                v[idx[g]] += 1
                rows.append([a - b for a, b in zip(v, vec(self._words[f]))])
        return rows

    def declaration(self):
        d = super().declaration()
        d["table"] = self.table
        d["gen_elements"] = self.gen_elements
        if self.identity != 0:
            d["identity"] = self.identity
        return d


class FpBfs(SubgroupOracle):
    """Finitely presented subgroup; word problem by bounded breadth-first
    search over relator insertions.

    ``is_identity`` answers True when a derivation with at most
    ``ball_radius`` relator insertions is found, False when the
    abelianization separates the word from 1, and None otherwise.
    """

    backend = "fp_bfs"
    exact = False

    def __init__(self, id, generators, relators, ball_radius=6, max_states=20000, **kw):
        super().__init__(id, generators, ball_radius=ball_radius, **kw)
        self.relators = [tuple(r) for r in relators]
        self.max_states = max_states
        self._pieces = self._relator_pieces()
        self._cache: dict = {}

    def _relator_pieces(self):
        pieces = set()
        for r in self.relators:
            for w in (syllables_expand(r), syllables_expand(syllables_inverse(r))):
                for i in range(len(w)):
                    pieces.add(tuple(w[i:] + w[:i]))
        return sorted(pieces)

    def abelian_relations(self):
        idx = {g: i for i, g in enumerate(self.generators)}
        rows = []
        for r in self.relators:
            v = [0] * len(self.generators)
            for g, e in r:
                v[idx[g]] += e
            rows.append(v)
        return rows

    def _reduce(self, letters):
        return tuple(syllables_expand(syllables_compress(letters)))

    def is_identity(self, syl):
        w = self._reduce(syllables_expand(tuple(syl)))
        if not w:
            return True
        with self._lock:
            if w in self._cache:
                return self._cache[w]
        from ._lattice import in_lattice
        idx = {g: i for i, g in enumerate(self.generators)}
        v = [0] * len(self.generators)
        for g, s in w:
            v[idx[g]] += s
        if not in_lattice(self.abelian_relations(), v):
            ans = False
        else:
            ans = self._search(w)
        with self._lock:
            self._cache[w] = ans
        return ans

    def _search(self, w):
        cap = len(w) + max((len(p) for p in self._pieces), default=0)
        seen = {w}
        frontier = [w]
        for _ in range(self.ball_radius):
            nxt = []
            for u in frontier:
                for i in range(len(u) + 1):
                    for p in self._pieces:
                        v = self._reduce(u[:i] + p + u[i:])
                        if not v:
                            return True
                        if len(v) <= cap and v not in seen:
                            seen.add(v)
                            nxt.append(v)
                            if len(seen) > self.max_states:
                                return None
            frontier = nxt
        return None

    def key(self, syl):
        return self.canon(syl)

    def canon(self, syl):
        w = self._reduce(syllables_expand(tuple(syl)))
        if self.is_identity(w) is True:
            return ()
        # shortest representative found among shorter freely reduced words
        for cand in self._shorter_words(len(w)):
            if self.is_identity(cand + tuple((g, -s) for g, s in reversed(w))) is True:
                return syllables_compress(cand)
        return syllables_compress(w)

    def _shorter_words(self, n):
        letters = [(g, s) for g in self.generators for s in (1, -1)]
        level = [()]
        for _ in range(n):
            nxt = []
            for u in level:
                for a in letters:
                    if u and u[-1] == (a[0], -a[1]):
                        continue
                    v = u + (a,)
                    yield v
                    nxt.append(v)
            level = nxt

    def declaration(self):
        d = super().declaration()
        d["relators"] = [_render_syl(r) for r in self.relators]
        d["ball_radius"] = self.ball_radius
        return d


# -- membership in an ambient group ---------------------------------------------

def default_embed(oracle: SubgroupOracle):
    def embed(k):
        return (Letter("h", oracle.id, 1, tuple(k)),) if k else ()
    return embed


def find_member(oracle: SubgroupOracle, w, ambient, budget: int = 200, embed=None,
                radius: int | None = None):
    """Search for ``k`` in the oracle's ball with ``w = embed(k)`` in ``ambient``.

    Returns ``(verdict, k)``: ``(True, k)`` on success, ``(False, None)`` when
    non-membership is certain, ``(None, None)`` when the budget ran out.
    """
    from . import area

    if budget <= 0:
        return None, None
    own = embed is None
    embed = default_embed(oracle) if own else embed
    wn = normalize(w, ambient)
    if not wn:
        return True, ()
    if own and len(wn) == 1 and wn[0].kind == "h" and wn[0].name == oracle.id:
        return True, wn[0].elem
    if own and not ambient.relators:
        return False, None
    if not area.abelian_member(ambient, wn, oracle, embed):
        return False, None
    radius = oracle.ball_radius if radius is None else radius
    candidates = oracle.ball(radius)
    all_false = True
    for i, k in enumerate(candidates):
        if i >= budget:
            return None, None
        ans = area.word_problem(ambient, tuple(wn) + invert(embed(k)))
        if ans is True:
            return True, k
        if ans is None:
            all_false = False
    if all_false and oracle.finite and len(candidates) + 1 >= oracle.order:
        return False, None
    return None, None


def member(oracle, w, ambient, budget: int = 200, embed=None) -> bool | None:
    return find_member(oracle, w, ambient, budget, embed)[0]


BACKENDS = {c.backend: c for c in (FreeAbelian, Free, FiniteTable, FpBfs)}


def from_declaration(id: str, decl: Mapping) -> SubgroupOracle:
    from .words import parse_subword

    kind = decl["backend"]
    kw = {}
    if "ball_radius" in decl:
        kw["ball_radius"] = int(decl["ball_radius"])
    if decl.get("omega") is not None:
        kw["omega"] = [parse_subword(s) for s in decl["omega"]]
    if decl.get("extra_gen_sets"):
        kw["extra_gen_sets"] = {k: {n: parse_subword(s) for n, s in v.items()}
                                for k, v in decl["extra_gen_sets"].items()}
    gens = decl["generators"]
    if kind == "free_abelian":
        return FreeAbelian(id, gens, **kw)
    if kind == "free":
        return Free(id, gens, **kw)
    if kind == "finite_table":
        return FiniteTable(id, gens, decl["table"], decl["gen_elements"],
                           identity=decl.get("identity", 0), **kw)
    if kind == "fp_bfs":
        return FpBfs(id, gens, [parse_subword(r) for r in decl.get("relators", [])], **kw)
    raise ValueError(f"unknown oracle backend {kind!r}")
