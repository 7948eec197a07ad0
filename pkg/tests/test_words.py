import pytest

from relpres.words import (
    WordSyntaxError,
    cyclic_canonical,
    cyclic_normalize,
    cyclic_permutations,
    invert,
    min_rotation,
    normalize,
    parse_subword,
    parse_word,
    render,
    stable,
    sub,
    xgen,
)


def test_parse_render_roundtrip(e1):
    text = "y H1[x^3] y^-1 t^-1 y t H1[x^-1]"
    w = parse_word(text, e1)
    assert len(w) == 7
    assert render(w) == text


def test_powers_expand_to_letters():
    w = parse_word("b^3 a^-2")
    assert w == (xgen("b"),) * 3 + (xgen("a", -1),) * 2
    assert render(w) == "b^3 a^-2"


def test_subword_syllables():
    assert parse_subword("x^3 y^-1 x^0") == (("x", 3), ("y", -1))
    assert sub("H1", "a^2") == sub("H1", (("a", 2),))


@pytest.mark.parametrize("text", ["b $", "H1[]", "q", "H1[a] b H2[a]"])
def test_parse_errors(zxz, text):
    with pytest.raises(WordSyntaxError):
        parse_word(text, zxz)


def test_identity_subgroup_letter_rejected(z6):
    with pytest.raises(WordSyntaxError, match="identity"):
        parse_word("H1[s^6]", z6)


def test_stable_letter_needs_hnn(zxz):
    with pytest.raises(WordSyntaxError):
        parse_word("t b", zxz)
    assert parse_word("t^-1")[0] == stable(-1)


def test_free_reduction_and_merge(zxz, z6):
    assert normalize(parse_word("b b^-1 H1[a]", zxz), zxz) == parse_word("H1[a]", zxz)
    assert normalize(parse_word("H1[a] H1[a^-1] b", zxz), zxz) == parse_word("b", zxz)
    assert normalize(parse_word("H1[s^4] H1[s^2]", z6), z6) == ()
    assert normalize(parse_word("H1[a] b b^-1 H1[a]", zxz), zxz) == parse_word("H1[a^2]", zxz)


def test_cyclic_normal_form(zxz):
    w = parse_word("H1[a] b H1[a^-1] b^-1 H1[a^2]", zxz)
    c = cyclic_normalize(w, zxz)
    assert len(c) == 4
    assert cyclic_canonical(c, zxz) in cyclic_permutations(cyclic_canonical(w, zxz))


def test_invert_and_rotations():
    w = parse_word("a b t^-1")
    assert render(invert(w)) == "t b^-1 a^-1"
    assert invert(invert(w)) == w
    assert len(set(cyclic_permutations(w))) == 3
    rot, k = min_rotation(w)
    assert rot == w[k:] + w[:k]
