import json

import pytest

import relpres
from relpres.presentations import (
    PresentationError,
    amalgam,
    dumps,
    free_product,
    from_dict,
    hnn_extension,
    inclusion_then_retraction_is_identity,
    load,
    save,
    to_dict,
)
from relpres.words import parse_word, render


def base_dict():
    return {
        "x_gens": ["b"],
        "subgroups": {"H1": {"backend": "free_abelian", "generators": ["a"]}},
        "relators": ["H1[a] b H1[a^-1] b^-1"],
    }


@pytest.mark.parametrize("name", ["zxz", "z6", "f2-rel", "e1", "e1.golden.rpres"])
def test_fixture_roundtrip(tmp_path, name):
    p = relpres.load_fixture(name)
    path = tmp_path / "p.rpres"
    save(p, path)
    q = load(path)
    assert dumps(q) == dumps(p)
    assert [render(r) for r in q.relators] == [render(r) for r in p.relators]


def test_dumps_is_sorted_json(zxz):
    text = dumps(zxz)
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert text.endswith("\n")


@pytest.mark.parametrize("change, match", [
    (lambda d: d.pop("relators"), "missing key"),
    (lambda d: d.update(x_gens=["t"]), "reserved"),
    (lambda d: d.update(relators=["c b"]), "relator"),
    (lambda d: d.update(relators=["b b^-1"]), "trivial"),
    (lambda d: d["subgroups"].update(b={"backend": "free", "generators": ["c"]}), "clashes"),
    (lambda d: d["subgroups"]["H1"].pop("backend"), "declaration"),
])
def test_loader_rejects(change, match):
    d = base_dict()
    change(d)
    with pytest.raises(PresentationError, match=match):
        from_dict(d)


def test_model_must_satisfy_relators():
    d = base_dict()
    d["model"] = {"faithful": False, "x": {"b": [[1, 1], [0, 1]]},
                  "subgroups": {"H1": {"a": [[1, 0], [1, 1]]}}}
    with pytest.raises(PresentationError, match="model"):
        from_dict(d)


def test_declared_identities_are_checked():
    d = base_dict()
    d["identities"] = ["H1[a] b H1[a^-1] b^-1"]
    from_dict(d)
    d["identities"] = ["H1[a] b"]
    with pytest.raises(PresentationError, match="identity"):
        from_dict(d)


def test_hnn_extension_relators(f2rel):
    e = hnn_extension(f2rel, "K", "H1", {"y": "x"})
    assert e.stable
    assert "y" in e.x_gens
    assert [render(r) for r in e.relators] == ["t^-1 y t H1[x^-1]"]
    assert render(e.hnn.k_to_y((("y", -2),))) == "y^-2"
    with pytest.raises(PresentationError):
        hnn_extension(f2rel, "K", "K", {"y": "y"})
    with pytest.raises(PresentationError):
        hnn_extension(f2rel, "Q", "H1", {"y": "x"})


def test_hnn_rejects_noninjective_map(f2rel, z6):
    fp = free_product(f2rel, z6)
    with pytest.raises(PresentationError, match="trivial"):
        hnn_extension(fp, "K", "H1_2", {"y": "s^6"})
    # y^6 lies outside the default check ball of radius 3
    hnn_extension(fp, "K", "H1_2", {"y": "s"})
    with pytest.raises(PresentationError, match="monomorphism"):
        hnn_extension(fp, "K", "H1_2", {"y": "s"}, check_radius=6)


def test_free_product_renames(f2rel, zxz):
    fp = free_product(f2rel, zxz)
    assert fp.meta["renamed"]["subgroups"] == {"H1": "H1_2"}
    assert set(fp.subgroups) == {"H1", "K", "H1_2"}
    assert [render(r) for r in fp.relators] == ["H1_2[a] b H1_2[a^-1] b^-1"]
    w = parse_word("H1_2[a] b H1_2[a^-1] b^-1", fp)
    assert fp.model.is_identity(w)


def test_amalgam_and_retraction(f2rel, zxz):
    hnn, r = amalgam(f2rel, zxz, "K", "H1", {"y": "a"})
    assert hnn.stable and not r.target.stable
    assert [render(x) for x in r.target.relators] == [
        "H1_2[a] b H1_2[a^-1] b^-1", "y H1_2[a^-1]"]
    assert inclusion_then_retraction_is_identity(r)
    with pytest.raises(PresentationError):
        amalgam(f2rel, zxz, "H1_2", "H1", {"y": "a"})


def test_to_dict_records_hnn_source(e1):
    d = to_dict(e1)
    assert d["hnn"]["k"] == "K" and d["hnn"]["nu"] == "H1"
    assert d["hnn"]["iota"] == {"y": "x"}
