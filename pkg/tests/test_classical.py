from fractions import Fraction

import pytest

from hcgame.classical import (
    DeterministicStrategy,
    brute_force_classical_value,
    canonical_strategy,
    classical_value_formula,
    enumerate_strategies,
    strategy_value,
)
from hcgame.game import FacetAssignment, all_questions, parity_ok


def test_formula_values():
    assert classical_value_formula(2) == Fraction(3, 4)
    assert classical_value_formula(3) == Fraction(5, 8)
    assert classical_value_formula(10) == Fraction(513, 1024)
    with pytest.raises(ValueError):
        classical_value_formula(1)


def test_canonical_strategy_shape():
    s = canonical_strategy(2)
    assert s.choices[0][0].values == (1, 1)
    assert s.choices[0][1].values == (1, -1)
    assert s.choices[1][0].values == (1, 1)
    assert s.choices[1][1].values == (1, 1)


def test_canonical_strategy_parity_always_holds():
    for m in (2, 3, 4, 5):
        s = canonical_strategy(m)
        for q in all_questions(m):
            assert all(parity_ok(fa) for fa in s.answer(q).assignments)


def test_canonical_values():
    assert strategy_value(canonical_strategy(2)) == Fraction(3, 4)
    assert strategy_value(canonical_strategy(3)) == Fraction(5, 8)


def test_canonical_matches_formula_up_to_m10():
    for m in range(2, 11):
        assert strategy_value(canonical_strategy(m)) == classical_value_formula(m)


def test_all_plus_strategy_loses_parity_questions():
    m = 2
    choices = tuple(
        (FacetAssignment(m, p, 0, 0), FacetAssignment(m, p, 1, 0)) for p in (1, 2)
    )
    assert strategy_value(DeterministicStrategy(m, choices)) == Fraction(1, 2)


def test_strategy_value_dimension_check():
    with pytest.raises(ValueError):
        strategy_value(canonical_strategy(2), m=3)


def test_brute_force_m2():
    value, best = brute_force_classical_value(2, restrict_parity=False)
    assert value == Fraction(3, 4)
    assert strategy_value(best) == Fraction(3, 4)
    restricted, _ = brute_force_classical_value(2, restrict_parity=True)
    assert restricted == Fraction(3, 4)


def test_brute_force_m3():
    value, best = brute_force_classical_value(3)
    assert value == Fraction(5, 8)
    assert strategy_value(best) == Fraction(5, 8)


def test_brute_force_range_checks():
    with pytest.raises(ValueError):
        brute_force_classical_value(4)
    with pytest.raises(ValueError):
        brute_force_classical_value(3, restrict_parity=False)


def test_every_strategy_bounded_by_formula_m2():
    bound = classical_value_formula(2)
    best = Fraction(0)
    for s in enumerate_strategies(2):
        v = strategy_value(s)
        assert v <= bound
        best = max(best, v)
    assert best == bound
