import pytest

from relpres.oracles import (
    FiniteTable,
    Free,
    FreeAbelian,
    FpBfs,
    NotInSubgroup,
    OracleUnknown,
    find_member,
    from_declaration,
    member,
)
from relpres.words import parse_word


def cyclic_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def test_free_abelian_canon_and_identity():
    o = FreeAbelian("H", ["a", "b"])
    assert o.canon((("b", 2), ("a", 1), ("b", -1))) == (("a", 1), ("b", 1))
    assert o.is_identity((("a", 2), ("a", -2)))
    assert o.equal((("a", 1), ("b", 1)), (("b", 1), ("a", 1)))


def test_free_reduces_freely():
    o = Free("K", ["x", "y"])
    assert o.canon((("x", 1), ("y", 1), ("y", -1), ("x", 2))) == (("x", 3),)
    assert o.is_identity((("x", 1), ("x", -1)))
    assert not o.is_identity((("x", 1), ("y", 1), ("x", -1), ("y", -1)))


def test_finite_table_z6():
    o = FiniteTable("H", ["s"], cyclic_table(6), {"s": 1})
    assert o.is_identity((("s", 6),))
    assert o.canon((("s", 5),)) == (("s", -1),)
    assert o.order == 6 and o.finite
    assert len(o.ball(3)) == 5


def test_fp_bfs_word_problem():
    o = FpBfs("H", ["a", "b"], [(("a", 1), ("b", 1), ("a", -1), ("b", -1))], ball_radius=3)
    assert o.is_identity((("a", 1), ("b", 1), ("a", -1), ("b", -1))) is True
    assert o.is_identity((("a", 1),)) is False
    assert not o.exact


def test_geodesic():
    o = FreeAbelian("H", ["a"])
    assert o.geodesic_length((("a", 3),)) == 3
    gens = {"u": (("a", 2),), "v": (("a", 1),)}
    assert o.geodesic_length((("a", 5),), gens) == 3
    with pytest.raises(OracleUnknown):
        o.geodesic((("a", 9),), radius=2)
    z6 = FiniteTable("H", ["s"], cyclic_table(6), {"s": 1})
    with pytest.raises(NotInSubgroup):
        z6.geodesic((("s", 1),), {"u": (("s", 2),)})


def test_declaration_roundtrip():
    decl = {"backend": "finite_table", "generators": ["s"], "table": cyclic_table(4),
            "gen_elements": {"s": 1}}
    o = from_declaration("H1", decl)
    assert o.declaration() == decl
    with pytest.raises(ValueError):
        from_declaration("H1", {"backend": "nope", "generators": []})


def test_membership_in_ambient(zxz, e1):
    h = zxz.subgroups["H1"]
    w = parse_word("b H1[a^2] b^-1", zxz)
    ok, k = find_member(h, w, zxz)
    assert ok is True and h.canon(k) == (("a", 2),)
    assert member(h, parse_word("b", zxz), zxz) is False
    hnn = e1.hnn
    w = parse_word("t^-1 y^2 t", e1)
    ok, k = find_member(hnn.nu_oracle, w, e1)
    assert ok is True and k == (("x", 2),)
