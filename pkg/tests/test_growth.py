import pytest

from relpres.growth import (
    GrowthTable,
    compose_bound,
    compose_witnesses,
    is_superadditive,
    pointwise_max,
    preceq_fit,
    superadditive_closure,
    theorem_bound_check,
)


def test_table_basics():
    t = GrowthTable([1, 3, 2])
    assert t.N == 3 and t(0) == 0 and t(2) == 3
    with pytest.raises(IndexError):
        t(4)
    with pytest.raises(ValueError):
        GrowthTable([1, -1])
    with pytest.raises(ValueError):
        GrowthTable([1, 2], [True])


def test_csv_roundtrip(tmp_path):
    t = GrowthTable([0, 1, 4], [True, True, False])
    path = tmp_path / "t.csv"
    t.save(path)
    u = GrowthTable.load(path)
    assert u.values == t.values and u.exact == t.exact
    dehn = "# comment\nn,delta,witness,exact_flag\n2,1,b,1\n1,0,,1\n"
    assert GrowthTable.from_csv(dehn).values == [0, 1]
    with pytest.raises(ValueError):
        GrowthTable.from_csv("n,value,exact\n1,0,1\n3,0,1\n")


def test_closure_examples():
    assert superadditive_closure(GrowthTable([1, 0, 0, 5])).values == [1, 2, 3, 5]
    assert superadditive_closure(GrowthTable([0, 3, 1])).values == [0, 3, 3]
    assert is_superadditive(GrowthTable([1, 2, 4, 8]))
    assert not is_superadditive(GrowthTable([2, 3]))


def test_closure_propagates_lower_bounds():
    bar = superadditive_closure(GrowthTable([1, 1, 1], [True, False, True]))
    assert bar.exact == [True, False, False]


def test_compose_bound_flags_overflow():
    g = GrowthTable([1, 4])
    b = compose_bound(g, n_max=3)
    # γ̄ = [1, 4]; γ̄(γ̄(1)) = γ̄(1) = 1, γ̄(2) = 4 lies outside the table
    assert b.values[0] == 1
    assert b.exact == [True, False, False]


def test_pointwise_max():
    m = pointwise_max(GrowthTable([1, 5, 2]), GrowthTable([3, 1]))
    assert m.values == [3, 5]


def test_fit_least_witness_and_failure():
    f = GrowthTable([2, 4, 6])
    g = GrowthTable([1] * 24)
    # 6 <= 1 + 3C needs C = 2
    assert preceq_fit(f, g, box=8).constants == (1, 1, 2)
    quad = GrowthTable([n * n for n in range(1, 9)])
    lin = GrowthTable(list(range(1, 65)))
    fit = preceq_fit(quad, lin, box=2)
    assert fit.status == "fails" and fit.violation is not None
    short = GrowthTable([1])
    assert preceq_fit(quad, short, box=2).status == "undetermined"
    assert "evidence at scale" in str(fit)


def test_compose_witnesses_formula():
    assert compose_witnesses((2, 3, 1), (1, 2, 4)) == (2, 6, 25)


def test_theorem_bound_modes():
    delta = GrowthTable([0, 0, 0, 1, 2, 2])
    gamma = GrowthTable([0] * 6)
    rep = theorem_bound_check(delta, gamma)
    assert rep.ok and rep.fit.constants == (1, 1, 1)
    rep = theorem_bound_check(delta, gamma, "amalgam", gamma2=GrowthTable([0, 1, 2, 3, 4, 5]))
    assert rep.ok and rep.mode == "amalgam"
    with pytest.raises(ValueError):
        theorem_bound_check(delta, gamma, "bogus")


def test_inconsistent_exact_tables_flagged():
    delta = GrowthTable([n * n * n for n in range(1, 7)])
    rep = theorem_bound_check(delta, GrowthTable([0] * 6), box=2)
    assert not rep.ok
    assert any("INCONSISTENT" in line for line in rep.lines)
