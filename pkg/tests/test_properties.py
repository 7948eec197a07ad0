"""Generative property suites.

Every test runs 200 derandomized cases (profile registered in conftest).
``CASES`` counts executed bodies so the acceptance run can report them.
"""
from collections import Counter

from hypothesis import given, strategies as st

import relpres
from relpres.area import alphabet, relative_area
from relpres.diagrams import derivation_to_diagram, validate
from relpres.growth import (
    GrowthTable,
    _holds,
    compose_witnesses,
    is_superadditive,
    preceq_fit,
    superadditive_closure,
)
from relpres.words import cyclic_normalize, invert, normalize

CASES = Counter()

PRES = {n: relpres.load_fixture(n) for n in ("zxz", "z6", "e1")}
LETTERS = {n: alphabet(p, 2) for n, p in PRES.items()}


@st.composite
def words(draw, name=None, max_len=8):
    name = name or draw(st.sampled_from(sorted(PRES)))
    w = draw(st.lists(st.sampled_from(LETTERS[name]), max_size=max_len))
    return name, tuple(w)


@st.composite
def trivial_words(draw, max_conjugates=2):
    """Products of conjugates of relators: trivial with area at most the count."""
    name = draw(st.sampled_from(sorted(PRES)))
    p = PRES[name]
    out = ()
    k = draw(st.integers(1, max_conjugates))
    for _ in range(k):
        u = tuple(draw(st.lists(st.sampled_from(LETTERS[name]), max_size=2)))
        r = tuple(draw(st.sampled_from(p.relators)))
        if draw(st.booleans()):
            r = invert(r)
        out += u + r + invert(u)
    return name, normalize(out, p), k


def area(p, w, cap=None):
    res = relative_area(p, w, max_area=6, max_len=cap)
    assert res.found, res.reason
    return res.area


# -- words ------------------------------------------------------------------------

@given(words())
def test_normalize_idempotent(nw):
    name, w = nw
    p = PRES[name]
    once = normalize(w, p)
    assert normalize(once, p) == once
    c = cyclic_normalize(w, p)
    assert cyclic_normalize(c, p) == c
    assert len(once) <= len(w)
    CASES["normalize idempotence"] += 1


# -- area ------------------------------------------------------------------------

@given(trivial_words(), st.integers(0, 20))
def test_area_cyclic_and_inversion_invariant(nwk, shift):
    name, w, k = nwk
    p = PRES[name]
    a = area(p, w)
    assert a <= k
    if w:
        s = shift % len(w)
        assert area(p, w[s:] + w[:s]) == a
    assert area(p, invert(w)) == a
    CASES["area cyclic/inversion invariance"] += 1


@given(trivial_words(max_conjugates=1), trivial_words(max_conjugates=1))
def test_area_subadditive(a1, a2):
    name = a1[0]
    p = PRES[name]
    w1, w2 = a1[1], a2[1]
    if a2[0] != name:
        w2 = ()
    bound = area(p, w1) + area(p, w2)
    # the concatenated derivation only needs the longer of the two caps
    cap = len(w1) + len(w2) + 2 * p.max_relator_length
    assert area(p, w1 + w2, cap) <= bound
    CASES["area subadditivity"] += 1


# -- diagrams ------------------------------------------------------------------------

@given(trivial_words())
def test_diagram_euler(nwk):
    name, w, _ = nwk
    p = PRES[name]
    res = relative_area(p, w, max_area=6)
    d = derivation_to_diagram(res.witness, p)
    assert d.euler() == 2
    rep = validate(d, p, expect=w)
    assert rep.ok, rep.lines()
    assert d.costed_cells() == res.area
    CASES["diagram Euler check"] += 1


# -- growth ------------------------------------------------------------------------

tables = st.lists(st.integers(0, 20), min_size=1, max_size=12).map(GrowthTable)


@given(tables, tables)
def test_closure_idempotent_and_minimal(f, h):
    bar = superadditive_closure(f)
    assert superadditive_closure(bar).values == bar.values
    assert is_superadditive(bar)
    assert all(bar(n) >= f(n) for n in range(1, f.N + 1))
    # any superadditive majorant of f lies above the closure
    N = min(f.N, h.N)
    g = superadditive_closure(GrowthTable([max(f(n), h(n)) for n in range(1, N + 1)]))
    assert all(bar(n) <= g(n) for n in range(1, N + 1))
    CASES["closure idempotence and minimality"] += 1


@given(tables)
def test_preceq_reflexive(f):
    fit = preceq_fit(f, f, box=2)
    assert fit.status == "witness"
    assert fit.constants == (1, 1, 1)
    CASES["preceq reflexivity"] += 1


@st.composite
def chains(draw):
    """Tables f, g, h with f ⪯ g and g ⪯ h by construction."""
    w1 = tuple(draw(st.integers(1, 3)) for _ in range(3))
    w2 = tuple(draw(st.integers(1, 3)) for _ in range(3))
    N = draw(st.integers(1, 6))
    hN = N * w1[1] * w2[1]
    h = GrowthTable(draw(st.lists(st.integers(0, 15), min_size=hN, max_size=hN)))
    gN = N * w1[1]

    def below(bound):
        return max(0, bound - draw(st.integers(0, 5)))

    g = GrowthTable([below(w2[0] * h(w2[1] * n) + w2[2] * n) for n in range(1, gN + 1)])
    f = GrowthTable([below(w1[0] * g(w1[1] * n) + w1[2] * n) for n in range(1, N + 1)])
    return f, g, h, w1, w2


@given(chains())
def test_preceq_transitive(fgh):
    f, g, h, w1, w2 = fgh
    assert _holds(f, g, *w1) == 0
    assert _holds(g, h, *w2) == 0
    assert _holds(f, h, *compose_witnesses(w1, w2)) == 0
    # the same through the fitted (least) witnesses
    fit1 = preceq_fit(f, g, box=3)
    fit2 = preceq_fit(g, h, box=3)
    assert fit1.status == fit2.status == "witness"
    c = compose_witnesses(fit1.constants, fit2.constants)
    if h.covers(c[1] * f.N):
        assert _holds(f, h, *c) == 0
    CASES["preceq transitivity"] += 1
