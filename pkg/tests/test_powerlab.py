import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bettistab.betti import GradedBettiTable, graded_betti
from bettistab.errors import ContractError, MalformedInputError, NotEquigeneratedError, PreconditionError
from bettistab.ideal import minimalize, power
from bettistab.io import report_to_json
from bettistab.powerlab import (
    CERTAINTY,
    LinearForm,
    ReesBettiData,
    ShapeSet,
    StabilizationReport,
    compare_verdict,
    conjecture_stab_compare,
    empirical_stabilization_index,
    eventual_linear_fit,
    random_edge_ideal,
    rees_bound,
    rees_bound_check,
    rees_coefficient,
    shape_changes,
    shape_of,
    square_cover_index,
    square_cover_index_exhaustive,
    stabilization_scan,
    unimodality_check,
    unimodality_from_shapes,
)

from .conftest import ideal, rees

EX13_D3_ROWS = {(0, 0), (1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2), (4, 2)}


def permute_ideal(ideal, var_perm, gen_perm):
    gens = [ideal.generators[k] for k in gen_perm]
    return minimalize([[g[var_perm[l]] for l in range(ideal.ring_dim)] for g in gens], ideal.ring_dim)


@pytest.fixture(scope="module")
def ex13_report(ex13):
    return stabilization_scan(ex13, 6)


# shapes

def test_shape_of_xy(xy):
    for d in range(1, 6):
        assert shape_of(graded_betti(power(xy, d)), 1, d).positions == {(0, 0), (1, 1)}


def test_shape_of_example13(ex13):
    # listed as (i, j - r*d - i), the row view of the normalized support
    assert shape_of(graded_betti(power(ex13, 3)), 3, 3).rows() == EX13_D3_ROWS
    s1 = shape_of(graded_betti(ex13), 3, 1)
    s2 = shape_of(graded_betti(power(ex13, 2)), 3, 2)
    assert s1 != s2


def test_shape_rejects_low_degree():
    with pytest.raises(MalformedInputError):
        shape_of(GradedBettiTable({(1, 2): 1}, 2), 2, 1)


@given(st.integers(0, 500), st.integers(1, 3))
def test_shape_denormalizes_to_support(seed, d):
    I = random_edge_ideal(5, random.Random(seed).randint(1, 10), seed)
    table = graded_betti(power(I, d))
    assert shape_of(table, 2, d).denormalize() == table.support()


# stabilization scans

def test_scan_example13(ex13_report):
    rep = ex13_report
    assert rep.empirical_stab == 3
    assert rep.regularity == {d: 3 * d + 2 for d in range(1, 7)}
    assert rep.linear_form == LinearForm(3, 2, 1)
    assert str(rep.linear_form) == "3d+2"
    assert all(rep.shapes[d] == rep.shapes[3] for d in range(3, 7))
    assert rep.shape_changes == [2, 3]
    assert rep.certainty == CERTAINTY
    assert not rep.partial


def test_scan_xy(xy):
    rep = stabilization_scan(xy, 10)
    assert rep.empirical_stab == 1
    assert rep.shape_changes == []


def test_scan_sturmfels(ex14):
    rep = stabilization_scan(ex14, 2)
    assert rep.shape_changes == [2]
    assert rep.empirical_stab == 2
    assert report_to_json(rep)["stab_status"] == "empirical"


def test_scan_preconditions(xy):
    with pytest.raises(PreconditionError):
        stabilization_scan(xy, 1)
    with pytest.raises(NotEquigeneratedError):
        stabilization_scan(minimalize([[1, 0], [0, 2]], 2), 3)


def test_scan_is_deterministic(ex14):
    a = report_to_json(stabilization_scan(ex14, 3))
    b = report_to_json(stabilization_scan(ex14, 3))
    c = report_to_json(stabilization_scan(ex14, 3, workers=2))
    assert a == b == c


def test_partial_report_on_lattice_limit(ex13):
    rep = stabilization_scan(ex13, 4, max_lattice=1000)
    assert rep.partial and "d=3" in rep.partial_reason
    assert sorted(rep.tables) == [1, 2]
    assert rep.empirical_stab == 2


def test_partial_report_on_time_budget(ex13):
    rep = stabilization_scan(ex13, 4, time_budget=0.0)
    assert rep.partial
    assert rep.completed <= 1


def test_empty_partial_report_has_no_stab():
    assert empirical_stabilization_index({}) is None
    rep = StabilizationReport("none", 2, 5, 32003, partial=True)
    assert report_to_json(rep)["stab_status"] == "not stabilized within horizon"


def test_regularity_eventually_constant_offset(ex13_report):
    norm = ex13_report.normalized_regularity()
    assert set(norm.values()) == {2}


# regularity fit

def test_linear_fit():
    assert eventual_linear_fit({1: 5, 2: 7, 3: 10, 4: 13, 5: 16}) == LinearForm(3, 1, 2)
    assert eventual_linear_fit({1: 5, 2: 7}) is None
    assert eventual_linear_fit({1: 1, 2: 5, 3: 6, 4: 9}) is None
    assert str(LinearForm(2, 0, 1)) == "2d" and str(LinearForm(2, -1, 1)) == "2d-1"


# unimodality

def test_unimodality_example13(ex13_report):
    findings = unimodality_check(ex13_report)
    assert not any(f.violation for f in findings)
    rows = {(f.position[0], f.position[1] - f.position[0]): f for f in findings}
    assert rows[(3, 2)].interval == (1, 6)


def test_unimodality_xy(xy):
    findings = unimodality_check(stabilization_scan(xy, 4))
    assert {f.position: f.interval for f in findings} == {(0, 0): (1, 4), (1, 1): (1, 4)}
    assert all(f.reaches_horizon for f in findings)


def test_unimodality_synthetic_gap():
    present, absent = ShapeSet({(0, 0), (1, 2)}, 2, 0), ShapeSet({(0, 0)}, 2, 0)
    findings = unimodality_from_shapes({1: present, 2: absent, 3: present})
    gapped = [f for f in findings if f.violation]
    assert len(gapped) == 1
    assert gapped[0].position == (1, 2) and gapped[0].gap == 2
    assert gapped[0].powers == (1, 3)


def test_shape_changes_helper():
    a, b = ShapeSet({(0, 0)}, 1, 1), ShapeSet({(0, 0), (1, 1)}, 1, 1)
    assert shape_changes({1: a, 2: b, 3: b, 4: a}) == [2, 4]
    assert empirical_stabilization_index({1: a, 2: b, 3: b, 4: a}) == 4
    assert empirical_stabilization_index({1: a, 2: b, 3: b}) == 2


# Rees-algebra bound

def test_rees_binomial_forms():
    for d in range(0, 12):
        for k in range(0, 5):
            assert rees_coefficient(d, k, d) == 1
            for m in range(0, d + 2):
                assert rees_coefficient(d, k, m) == rees_coefficient(d, k, m, "k")
    assert rees_coefficient(3, 1, 4) == 0
    with pytest.raises(ValueError):
        rees_coefficient(3, 1, 0, "other")


def test_rees_bound_principal():
    data = rees("principal")
    I = ideal("principal")
    for d in range(1, 8):
        result = rees_bound_check(I, d, data)
        assert result.ok
        assert result.at(0, 0).slack == 0 and result.at(0, 0).actual == 1


def test_rees_bound_xy(xy):
    data = rees("xy")
    for d in range(1, 11):
        result = rees_bound_check(xy, d, data)
        e = result.at(1, 1)
        assert (e.actual, e.bound, e.slack) == (d, d, 0)
        assert all(x.slack == 0 for x in result.entries)


@pytest.mark.parametrize("name", ["principal", "xy", "xyz"])
def test_rees_fixtures_hold_to_power_ten(name):
    I, data = ideal(name), rees(name)
    for d in range(1, 11):
        result = rees_bound_check(I, d, data)
        assert result.ok, result.violations
        for e in result.entries:
            assert e.bound == sum(
                comb(d + data.k - m, data.k) * v for (i, j, m), v in data.betti.items()
                if (i, j) == (e.i, e.j) and m <= d
            )


def test_rees_bound_reports_violations(xy):
    bad = ReesBettiData(1, 1, {(0, 0, 0): 1})
    result = rees_bound_check(xy, 3, bad)
    assert not result.ok
    assert [(e.i, e.j) for e in result.violations] == [(1, 1)]


def test_rees_bound_contract(xy, ex13):
    with pytest.raises(ContractError):
        rees_bound_check(ex13, 2, rees("xy"))
    with pytest.raises(ContractError):
        rees_bound_check(xy, 2, ReesBettiData(2, 1, {}))


def test_rees_data_validation():
    with pytest.raises(MalformedInputError):
        ReesBettiData(1, 1, {(0, 0, 0): 2})
    with pytest.raises(MalformedInputError):
        ReesBettiData(1, 1, {(1, 1, 1): 0})
    with pytest.raises(MalformedInputError):
        ReesBettiData(-1, 1, {})
    assert rees_bound(rees("xy"), 1, 1, 4) == 4


# square-cover index

def test_square_cover_examples(ex13):
    cases = [(ideal("edge"), 2), (ideal("triangle"), 3), (ex13, 6)]
    for I, expected in cases:
        assert square_cover_index(I) == expected
        assert square_cover_index_exhaustive(I) == expected


def test_square_cover_none_below_bound(ex13):
    assert square_cover_index(ex13, n_max=5) is None
    assert square_cover_index_exhaustive(ex13, n_max=5) is None


def test_square_cover_preconditions(xy):
    with pytest.raises(PreconditionError):
        square_cover_index(minimalize([[2, 0], [1, 1]], 2))
    with pytest.raises(PreconditionError):
        square_cover_index(minimalize([[1, 1, 0]], 3))


@given(st.integers(0, 10_000), st.integers(3, 7), st.randoms(use_true_random=False))
def test_square_cover_matches_oracle_and_is_symmetric(seed, n, rnd):
    pairs = n * (n - 1) // 2
    I = random_edge_ideal(n, random.Random(seed).randint(1, pairs), seed)
    covered = set().union(*(g.support for g in I.generators))
    if len(covered) < n:
        with pytest.raises(PreconditionError):
            square_cover_index(I)
        return
    value = square_cover_index(I)
    assert value == square_cover_index_exhaustive(I)
    var_perm = list(range(n))
    gen_perm = list(range(I.ngens))
    rnd.shuffle(var_perm)
    rnd.shuffle(gen_perm)
    assert square_cover_index(permute_ideal(I, var_perm, gen_perm)) == value


def test_square_cover_on_higher_degree():
    # two cubes covering five variables: x1x2x3, x3x4x5, x1x4, x2x5
    I = minimalize([[1, 1, 1, 0, 0], [0, 0, 1, 1, 1], [1, 0, 0, 1, 0], [0, 1, 0, 0, 1]], 5)
    assert square_cover_index(I) == square_cover_index_exhaustive(I)


# conjecture comparison

def test_conjecture_triangle():
    result = conjecture_stab_compare(ideal("triangle"), 5)
    assert result.square_cover_index == 3
    rep = stabilization_scan(ideal("triangle"), 5)
    assert result.empirical_stab == rep.empirical_stab
    assert result.verdict == compare_verdict(3, rep)


def test_conjecture_single_edge():
    result = conjecture_stab_compare(ideal("edge"), 4)
    assert (result.square_cover_index, result.empirical_stab, result.verdict) == (2, 1, "inconclusive")


def test_conjecture_example13(ex13, ex13_report):
    result = conjecture_stab_compare(ex13, 6, report=ex13_report)
    assert (result.square_cover_index, result.empirical_stab, result.verdict) == (6, 3, "inconclusive")
    assert result.certainty == CERTAINTY


def test_verdict_rules():
    a, b = ShapeSet({(0, 0)}, 1, 1), ShapeSet({(0, 0), (1, 1)}, 1, 1)

    def report(shapes):
        rep = StabilizationReport("t", 1, max(shapes), 32003, shapes=shapes)
        rep.empirical_stab = empirical_stabilization_index(shapes)
        rep.shape_changes = shape_changes(shapes)
        return rep

    assert compare_verdict(2, report({1: a, 2: b, 3: b})) == "consistent-so-far"
    assert compare_verdict(1, report({1: a, 2: b, 3: b})) == "inconsistent-at-horizon"
    assert compare_verdict(3, report({1: a, 2: b, 3: b})) == "inconclusive"
    assert compare_verdict(None, report({1: a, 2: a})) == "inconclusive"


# random edge ideals

def test_random_edge_ideal_contract():
    for seed in range(5):
        assert random_edge_ideal(3, 3, seed).generators == ideal("triangle").generators
    a, b = random_edge_ideal(5, 4, 1), random_edge_ideal(5, 4, 1)
    assert a == b
    assert a.ngens == 4
    assert all(g.is_squarefree() and g.degree == 2 for g in a.generators)
    assert len(set(a.generators)) == 4
    for bad in ((5, 0), (5, 11), (2, 2)):
        with pytest.raises(PreconditionError):
            random_edge_ideal(*bad, 0)
