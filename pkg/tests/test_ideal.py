from collections import Counter
from itertools import combinations_with_replacement

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bettistab.errors import (
    DimensionError,
    ExponentOverflowError,
    NotEquigeneratedError,
    UnitIdealError,
    ZeroIdealError,
)
from bettistab.ideal import (
    MAX_EXPONENT,
    Monomial,
    MonomialIdeal,
    divides,
    equigenerated_degree,
    lcm_of,
    minimalize,
    power,
    times,
    variable_ideal,
)


def M(*e):
    return Monomial(e)


def exponent_lists(n, min_size=1, max_size=8, max_exp=3):
    mono = st.lists(st.integers(0, max_exp), min_size=n, max_size=n).filter(any)
    return st.lists(mono, min_size=min_size, max_size=max_size)


def test_monomial_degree_and_support():
    m = M(2, 0, 1)
    assert m.degree == 3
    assert m.support == frozenset({0, 2})
    assert not m.is_squarefree()
    assert M(0, 0).is_unit
    assert m.to_string(["x", "y", "z"]) == "x^2*z"


def test_monomial_rejects_negative_and_huge():
    with pytest.raises(ValueError):
        M(-1, 0)
    with pytest.raises(ExponentOverflowError):
        M(MAX_EXPONENT + 1)


def test_lcm_divides_times_examples():
    # x^2 y, x z in (x, y, z)
    assert lcm_of(M(2, 1, 0), M(1, 0, 1)) == M(2, 1, 1)
    assert divides(M(1, 1), M(2, 2))
    assert not divides(M(2, 2), M(1, 1))
    assert times(M(1), M(1)) == M(2)


def test_length_mismatch_is_dimension_error():
    for op in (lcm_of, divides, times):
        with pytest.raises(DimensionError):
            op(M(1, 0), M(1, 0, 0))


def test_times_overflow_is_explicit():
    with pytest.raises(ExponentOverflowError):
        times(M(MAX_EXPONENT), M(1))


def test_minimalize_drops_multiples():
    ideal = minimalize([[2, 0], [3, 0], [1, 1]], 2)
    assert ideal.generators == (M(2, 0), M(1, 1))


def test_minimalize_errors():
    with pytest.raises(ZeroIdealError):
        minimalize([], 2)
    with pytest.raises(UnitIdealError):
        minimalize([[0, 0], [1, 0]], 2)
    with pytest.raises(DimensionError):
        minimalize([[1, 0, 0]], 2)


def test_constructor_enforces_canonical_form():
    with pytest.raises(ValueError):
        MonomialIdeal(2, (M(1, 0), M(2, 0)))
    with pytest.raises(ValueError):
        MonomialIdeal(2, (M(0, 1), M(1, 0)))  # wrong order
    assert MonomialIdeal(2, (M(1, 0), M(0, 1))).ngens == 2


def test_example13_generators(ex13):
    assert ex13.ngens == 5
    assert ex13.ring_dim == 9
    assert equigenerated_degree(ex13) == 3


def test_example13_pairwise_products_are_minimal(ex13):
    prods = [times(a, b) for a, b in combinations_with_replacement(ex13.generators, 2)]
    assert minimalize(prods, 9).ngens == 15


def test_power_examples(ex13, ex14, xy):
    assert power(xy, 2).generators == (M(2, 0), M(1, 1), M(0, 2))
    assert power(ex13, 1) == ex13
    assert power(ex13, 3).ngens == 35
    assert power(ex14, 2).ngens == 36


def test_power_rejects_nonpositive(xy):
    with pytest.raises(ValueError):
        power(xy, 0)


def test_power_overflow_is_explicit():
    big = minimalize([[MAX_EXPONENT // 2 + 1, 0]], 2)
    with pytest.raises(ExponentOverflowError):
        power(big, 2)


def test_equigenerated_degree_examples():
    assert equigenerated_degree(minimalize([[2, 0], [1, 1]], 2)) == 2
    with pytest.raises(NotEquigeneratedError) as info:
        equigenerated_degree(minimalize([[1, 0], [0, 2]], 2))
    assert Counter(info.value.degrees) == Counter({1: 1, 2: 1})


@pytest.mark.parametrize("d", range(1, 31))
def test_power_of_maximal_ideal_in_two_vars(d):
    assert power(variable_ideal(2), d).ngens == d + 1


@given(exponent_lists(3), st.randoms(use_true_random=False))
def test_minimalize_is_idempotent_and_order_free(gens, rnd):
    once = minimalize(gens, 3)
    again = minimalize([list(g) for g in once.generators], 3)
    assert once == again
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    assert minimalize(shuffled, 3) == once


@given(exponent_lists(3))
def test_minimalize_generates_the_same_ideal(gens):
    ideal = minimalize(gens, 3)
    for g in gens:
        assert ideal.contains(g)
    for a in ideal.generators:
        assert not any(divides(b, a) for b in ideal.generators if b != a)


@given(exponent_lists(3, max_size=4, max_exp=2), st.integers(1, 3), st.integers(1, 2))
def test_power_of_power(gens, a, b):
    ideal = minimalize(gens, 3)
    assert power(power(ideal, a), b) == power(ideal, a * b)


@given(st.integers(1, 3), st.integers(1, 4), st.integers(1, 4), st.randoms(use_true_random=False))
def test_power_of_equigenerated_is_equigenerated(r, count, d, rnd):
    gens = []
    for _ in range(count):
        e = [0, 0, 0]
        for _ in range(r):
            e[rnd.randrange(3)] += 1
        gens.append(e)
    ideal = minimalize(gens, 3)
    assert equigenerated_degree(power(ideal, d)) == r * d
