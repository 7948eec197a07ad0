"""Letters and words over the mixed alphabet X ∪ H ∪ {t}.

A word is a plain tuple of :class:`Letter`.  Three kinds of letters exist:

* ``x`` -- a generator from the relative generating set, with a sign;
* ``h`` -- a nontrivial element of one of the subgroups, stored as a
  canonical syllable tuple ``((gen, exp), ...)`` in that subgroup's own
  generators;
* ``t`` -- the stable letter of an HNN-extension, with a sign.

Text form (the interchange format used by files and the CLI)::

    b H1[x^3] b^-1 t^-1 K[y] t
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping, NamedTuple, Sequence

STABLE = "t"

Syllables = tuple  # tuple[tuple[str, int], ...]


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class Letter(NamedTuple):
    kind: str
    name: str
    sign: int = 1
    elem: Syllables = ()

    def __repr__(self):
        return render((self,))


def xgen(name: str, sign: int = 1) -> Letter:
    return Letter("x", name, sign)


def stable(sign: int = 1) -> Letter:
    return Letter("t", STABLE, sign)


def sub(lam: str, elem) -> Letter:
    """Subgroup letter; ``elem`` is a syllable tuple or a text subword."""
    if isinstance(elem, str):
        elem = parse_subword(elem)
    return Letter("h", lam, 1, tuple(elem))


def is_sub(letter: Letter, lam: str | None = None) -> bool:
    return letter.kind == "h" and (lam is None or letter.name == lam)


def is_stable(letter: Letter) -> bool:
    return letter.kind == "t"


# -- syllable arithmetic (formal, no group knowledge) -----------------------

def syllables_inverse(syl: Syllables) -> Syllables:
    return tuple((g, -e) for g, e in reversed(syl))


def syllables_expand(syl: Syllables) -> list[tuple[str, int]]:
    """Spell a syllable tuple out as ``(gen, ±1)`` letters."""
    out = []
    for g, e in syl:
        s = 1 if e > 0 else -1
        out.extend([(g, s)] * abs(e))
    return out


def syllables_compress(letters: Iterable[tuple[str, int]]) -> Syllables:
    """Freely reduce ``(gen, exp)`` pairs and merge equal neighbours."""
    out: list[list] = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


def letter_inverse(letter: Letter) -> Letter:
    if letter.kind == "h":
        return letter._replace(elem=syllables_inverse(letter.elem))
    return letter._replace(sign=-letter.sign)


def invert(w: Sequence[Letter]) -> tuple:
    """Formal inverse: letters inverted, order reversed."""
    return tuple(letter_inverse(a) for a in reversed(w))


def cyclic_permutations(w: Sequence[Letter]) -> list[tuple]:
    w = tuple(w)
    if not w:
        return [()]
    return [w[i:] + w[:i] for i in range(len(w))]


# -- rendering and parsing ----------------------------------------------------

def render_subword(syl: Syllables) -> str:
    parts = []
    for g, e in syl:
        parts.append(g if e == 1 else f"{g}^{e}")
    return " ".join(parts)


def render_letter(a: Letter) -> str:
    if a.kind == "h":
        return f"{a.name}[{render_subword(a.elem)}]"
    return a.name if a.sign == 1 else f"{a.name}^-1"


def render(w: Sequence[Letter]) -> str:
    """Text form; runs of a repeated generator letter print as one power."""
    parts = []
    w = list(w)
    i = 0
    while i < len(w):
        a = w[i]
        j = i + 1
        if a.kind != "h":
            while j < len(w) and w[j] == a:
                j += 1
        n = (j - i) * a.sign
        parts.append(render_letter(a) if j - i == 1 else f"{a.name}^{n}")
        i = j
    return " ".join(parts)


_IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_TOKEN = re.compile(rf"\s*(?:({_IDENT})\s*\[([^\[\]]*)\]|({_IDENT})(?:\^(-?\d+))?)")
_SUBTOKEN = re.compile(rf"\s*({_IDENT})(?:\^(-?\d+))?")


def parse_subword(text: str) -> Syllables:
    """Parse ``x^3 y^-1`` into syllables (no reduction)."""
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _SUBTOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordSyntaxError(f"bad subword token in {text!r}", pos)
        exp = int(m.group(2)) if m.group(2) is not None else 1
        if exp != 0:
            out.append((m.group(1), exp))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tuple(out)


def _context_parts(context):
    if context is None:
        return None, {}, True
    if isinstance(context, Mapping):
        return None, context, True
    return (set(context.x_gens), context.all_oracles(), context.stable)


def parse_word(text: str, context=None) -> tuple:
    """Parse text into a word, exactly as written.

    ``context`` is a presentation (or a mapping of subgroup oracles); when
    given, identifiers are checked against it and subgroup elements are put
    in the oracle's canonical form.  Identity subgroup letters are rejected.
    """
    x_gens, oracles, allow_t = _context_parts(context)
    letters = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1) is not None:
            lam, inner = m.group(1), m.group(2)
            elem = parse_subword(inner)
            if context is not None:
                if lam not in oracles:
                    raise WordSyntaxError(f"undeclared subgroup {lam!r}", pos)
                o = oracles[lam]
                bad = {g for g, _ in elem} - set(o.generators)
                if bad:
                    raise WordSyntaxError(f"{sorted(bad)} are not generators of {lam}", pos)
                if o.is_identity(elem) is True:
                    raise WordSyntaxError(f"subgroup letter {lam}[{inner}] is the identity", pos)
                elem = o.canon(elem)
            elif not elem:
                raise WordSyntaxError("empty subgroup letter", pos)
            letters.append(Letter("h", lam, 1, elem))
        else:
            name = m.group(3)
            exp = int(m.group(4)) if m.group(4) is not None else 1
            if name == STABLE:
                if not allow_t:
                    raise WordSyntaxError("stable letter t used without an HNN context", pos)
                kind = "t"
            else:
                if x_gens is not None and name not in x_gens:
                    raise WordSyntaxError(f"undeclared generator {name!r}", pos)
                kind = "x"
            s = 1 if exp > 0 else -1
            letters.extend([Letter(kind, name, s)] * abs(exp))
        pos = m.end()
    return tuple(letters)


# -- free product normal form -------------------------------------------------

def _oracle_map(context) -> Mapping:
    if context is None:
        return {}
    if isinstance(context, Mapping):
        return context
    return context.all_oracles()


def interacts(a: Letter, b: Letter) -> bool:
    """True when ``a b`` is not reduced in the free product."""
    if a.kind == "h":
        return b.kind == "h" and a.name == b.name
    return b.kind == a.kind and b.name == a.name and b.sign == -a.sign


def combine(a: Letter, b: Letter, oracles: Mapping) -> Letter | None:
    """Product of two interacting letters; None when it is trivial."""
    if a.kind != "h":
        return None
    o = oracles[a.name]
    elem = o.multiply(a.elem, b.elem)
    if o.is_identity(elem) is True:
        return None
    return Letter("h", a.name, 1, o.canon(elem))


def canonical_letter(a: Letter, oracles: Mapping) -> Letter | None:
    if a.kind != "h":
        return a
    o = oracles[a.name]
    if o.is_identity(a.elem) is True:
        return None
    return a._replace(elem=o.canon(a.elem))


def normalize(w: Sequence[Letter], context=None) -> tuple:
    """Free-product normal form of ``w`` in (∗ H_λ) ∗ F(X) ∗ ⟨t⟩."""
    oracles = _oracle_map(context)
    stack: list[Letter] = []
    for a in w:
        a = canonical_letter(a, oracles)
        if a is None:
            continue
        if stack and interacts(stack[-1], a):
            c = combine(stack.pop(), a, oracles)
            if c is not None:
                stack.append(c)
        else:
            stack.append(a)
    return tuple(stack)


def cyclic_normalize(w: Sequence[Letter], context=None) -> tuple:
    """Normal form that is also cyclically reduced (not rotated)."""
    oracles = _oracle_map(context)
    w = list(normalize(w, oracles))
    while len(w) >= 2 and interacts(w[-1], w[0]):
        last = w.pop()
        first = w.pop(0)
        c = combine(last, first, oracles)
        if c is not None:
            w.insert(0, c)
        w = list(normalize(w, oracles))
    return tuple(w)


def min_rotation(w: Sequence[Letter]) -> tuple[tuple, int]:
    """Lexicographically least rotation and its offset."""
    w = tuple(w)
    if not w:
        return (), 0
    best, k = min((w[i:] + w[:i], i) for i in range(len(w)))
    return best, k


def cyclic_canonical(w: Sequence[Letter], context=None) -> tuple:
    return min_rotation(cyclic_normalize(w, context))[0]


def length(w: Sequence[Letter]) -> int:
    return len(w)
