"""Deterministic strategies and the exact classical game value.

All probabilities here are exact rationals; the best deterministic value
equals 1/2 + 1/2^m, and exhaustive search confirms it for m in {2, 3}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .game import (
    Answer,
    FacetAssignment,
    all_questions,
    answer_from_masks,
    predicate,
    validate_dimension,
)


@dataclass(frozen=True)
class DeterministicStrategy:
    """Per player, one facet labelling for each value of their question bit."""

    m: int
    choices: tuple[tuple[FacetAssignment, FacetAssignment], ...]

    def __post_init__(self):
        validate_dimension(self.m)
        if len(self.choices) != self.m:
            raise ValueError(f"expected choices for {self.m} players")
        for player, (f0, f1) in enumerate(self.choices, start=1):
            for bit, fa in ((0, f0), (1, f1)):
                if fa.m != self.m or fa.player != player or fa.question_bit != bit:
                    raise ValueError(
                        f"choice for player {player}, bit {bit} is mislabelled"
                    )

    def answer(self, q) -> Answer:
        return Answer(tuple(self.choices[i][q[i]] for i in range(self.m)))

    def masks(self) -> tuple[int, ...]:
        """Flat mask tuple (player 1 bit 0, player 1 bit 1, ...); the canonical key."""
        return tuple(fa.mask for pair in self.choices for fa in pair)


def canonical_strategy(m: int) -> DeterministicStrategy:
    """Everyone labels +1 everywhere, except player 1 puts -1 at (1,...,1) when q1 = 1."""
    validate_dimension(m)
    size = 1 << (m - 1)
    choices = []
    for player in range(1, m + 1):
        f0 = FacetAssignment(m, player, 0, 0)
        mask1 = 1 << (size - 1) if player == 1 else 0
        f1 = FacetAssignment(m, player, 1, mask1)
        choices.append((f0, f1))
    return DeterministicStrategy(m, tuple(choices))


def strategy_value(strategy: DeterministicStrategy, m: int | None = None) -> Fraction:
    """Exact winning probability: winning questions / 2^m."""
    if m is not None and m != strategy.m:
        raise ValueError(f"strategy is for m={strategy.m}, not m={m}")
    m = strategy.m
    wins = sum(predicate(strategy.answer(q), q) for q in all_questions(m))
    return Fraction(wins, 1 << m)


def classical_value_formula(m: int) -> Fraction:
    if m < 2:
        raise ValueError(f"dimension must be at least 2, got {m}")
    return Fraction(1, 2) + Fraction(1, 2 ** m)


def _assignment_masks(m: int, player: int, question_bit: int, restrict_parity: bool) -> list[int]:
    size = 1 << (m - 1)
    if not restrict_parity:
        return list(range(1 << size))
    required = question_bit if player == 1 else 0
    return [mask for mask in range(1 << size) if mask.bit_count() & 1 == required]


def brute_force_classical_value(
    m: int, restrict_parity: bool = True
) -> tuple[Fraction, DeterministicStrategy]:
    """Exact maximum of :func:`strategy_value` over enumerated strategies.

    With ``restrict_parity`` the search covers only labellings that satisfy
    the parity rule (an answer violating parity loses outright, so nothing
    is lost).  Ties break towards the smallest canonical mask tuple.

    The per-question winning table is computed once per question over the
    candidate labellings actually used by that question, then broadcast
    over the full strategy grid, so no strategy tuple is ever materialised.
    """
    if m not in (2, 3):
        raise ValueError(f"exhaustive search is supported for m in {{2, 3}}, got {m}")
    if m == 3 and not restrict_parity:
        raise ValueError("the m=3 search requires the parity restriction")

    candidates = [
        [_assignment_masks(m, player, bit, restrict_parity) for bit in (0, 1)]
        for player in range(1, m + 1)
    ]
    # strategy grid axes: (player 1 bit 0, player 1 bit 1, player 2 bit 0, ...)
    shape = tuple(len(candidates[p][b]) for p in range(m) for b in (0, 1))
    totals = np.zeros(shape, dtype=np.int32)

    for q in all_questions(m):
        used = [candidates[i][q[i]] for i in range(m)]
        table = np.zeros(tuple(len(u) for u in used), dtype=np.int32)
        for combo in np.ndindex(*table.shape):
            masks = tuple(used[i][combo[i]] for i in range(m))
            table[combo] = predicate(answer_from_masks(m, q, masks), q)
        view = [1] * len(shape)
        for i in range(m):
            view[2 * i + q[i]] = table.shape[i]
        totals += table.reshape(view)

    flat = int(np.argmax(totals))
    best = np.unravel_index(flat, shape)
    wins = int(totals[best])
    choices = tuple(
        (
            FacetAssignment(m, p + 1, 0, candidates[p][0][best[2 * p]]),
            FacetAssignment(m, p + 1, 1, candidates[p][1][best[2 * p + 1]]),
        )
        for p in range(m)
    )
    return Fraction(wins, 1 << m), DeterministicStrategy(m, choices)


def enumerate_strategies(m: int, restrict_parity: bool = False):
    """Yield every deterministic strategy; practical for m = 2 only."""
    if m != 2:
        raise ValueError("full strategy enumeration is exposed for m = 2 only")
    candidates = [
        [_assignment_masks(m, player, bit, restrict_parity) for bit in (0, 1)]
        for player in range(1, m + 1)
    ]
    pools = [
        [
            (FacetAssignment(m, p + 1, 0, m0), FacetAssignment(m, p + 1, 1, m1))
            for m0 in candidates[p][0]
            for m1 in candidates[p][1]
        ]
        for p in range(m)
    ]
    for combo in itertools.product(*pools):
        yield DeterministicStrategy(m, combo)
