"""Hypercube game board: vertices, facets, sign labellings, and the winning rules.

The board is the m-dimensional hypercube {0,1}^m.  Player i receives a
question bit q_i and must label every vertex of the facet {x : x_i = q_i}
with +1 or -1.  A round is won when each player's labels multiply to the
required parity (+1, except player 1 needs (-1)^q1) and any two players
agree on every vertex their facets share.

Signs are packed into bitmasks (bit set means -1) so parity reduces to a
popcount and exhaustive enumeration can walk plain integers; +/-1 tuples
appear only at the API surface.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

Bits = tuple[int, ...]

MIN_DIMENSION = 2
MAX_DIMENSION = 24
ENUMERATION_MAX_DIMENSION = 3


def validate_dimension(m: int) -> None:
    if not MIN_DIMENSION <= m <= MAX_DIMENSION:
        raise ValueError(
            f"dimension must be in [{MIN_DIMENSION}, {MAX_DIMENSION}], got {m}"
        )


def vertex_index(bits: Bits) -> int:
    """Big-endian integer encoding: (x1, ..., xm) -> sum of xk * 2^(m-k)."""
    index = 0
    for b in bits:
        index = (index << 1) | (b & 1)
    return index


def vertex_bits(index: int, m: int) -> Bits:
    """Inverse of :func:`vertex_index` for an m-bit vertex."""
    return tuple((index >> (m - k)) & 1 for k in range(1, m + 1))


def _validate_player(m: int, i: int) -> None:
    if not 1 <= i <= m:
        raise ValueError(f"player index must be in [1, {m}], got {i}")


def _validate_bit(b: int) -> None:
    if b not in (0, 1):
        raise ValueError(f"question bit must be 0 or 1, got {b}")


@lru_cache(maxsize=None)
def _facet_indices(m: int, i: int, q: int) -> tuple[int, ...]:
    validate_dimension(m)
    _validate_player(m, i)
    _validate_bit(q)
    shift = m - i
    return tuple(e for e in range(1 << m) if (e >> shift) & 1 == q)


@lru_cache(maxsize=None)
def _facet_position(m: int, i: int, q: int) -> dict[int, int]:
    return {e: k for k, e in enumerate(_facet_indices(m, i, q))}


@lru_cache(maxsize=None)
def _facet_indices_array(m: int, i: int, q: int) -> np.ndarray:
    arr = np.array(_facet_indices(m, i, q), dtype=np.int64)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def _intersection_indices(m: int, q1: int, i: int, q_i: int) -> tuple[int, ...]:
    validate_dimension(m)
    _validate_bit(q1)
    _validate_bit(q_i)
    if i < 2:
        raise ValueError(f"intersection partner must be a player index >= 2, got {i}")
    _validate_player(m, i)
    top = m - 1
    shift = m - i
    return tuple(
        e
        for e in range(1 << m)
        if (e >> top) & 1 == q1 and (e >> shift) & 1 == q_i
    )


def facet_vertices(m: int, i: int, q_i: int) -> list[Bits]:
    """The 2^(m-1) vertices with x_i = q_i, ascending by canonical encoding."""
    return [vertex_bits(e, m) for e in _facet_indices(m, i, q_i)]


def intersection_vertices(m: int, q1: int, i: int, q_i: int) -> list[Bits]:
    """The 2^(m-2) vertices shared by player 1's and player i's facets."""
    return [vertex_bits(e, m) for e in _intersection_indices(m, q1, i, q_i)]


@dataclass(frozen=True)
class FacetAssignment:
    """One player's +/-1 labels on their facet.

    ``mask`` bit k set means the k-th facet vertex (facet vertices sorted
    ascending by canonical encoding) carries -1.
    """

    m: int
    player: int
    question_bit: int
    mask: int

    def __post_init__(self):
        validate_dimension(self.m)
        _validate_player(self.m, self.player)
        _validate_bit(self.question_bit)
        if not 0 <= self.mask < (1 << self.size):
            raise ValueError(f"mask out of range for facet of size {self.size}")

    @property
    def size(self) -> int:
        return 1 << (self.m - 1)

    @classmethod
    def from_values(cls, m: int, player: int, question_bit: int, values) -> "FacetAssignment":
        values = tuple(values)
        if len(values) != 1 << (m - 1):
            raise ValueError(f"expected {1 << (m - 1)} signs, got {len(values)}")
        if any(v not in (1, -1) for v in values):
            raise ValueError("signs must be +1 or -1")
        mask = 0
        for k, v in enumerate(values):
            if v == -1:
                mask |= 1 << k
        return cls(m, player, question_bit, mask)

    @property
    def values(self) -> Bits:
        """Signs in facet order, as a tuple of +1/-1."""
        return tuple(1 - 2 * ((self.mask >> k) & 1) for k in range(self.size))

    @property
    def values_array(self) -> np.ndarray:
        nbytes = (self.size + 7) // 8
        raw = np.frombuffer(self.mask.to_bytes(nbytes, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[: self.size]
        return 1 - 2 * bits.astype(np.int8)

    def vertices(self) -> list[Bits]:
        return facet_vertices(self.m, self.player, self.question_bit)

    def value_at(self, vertex: Bits) -> int:
        pos = _facet_position(self.m, self.player, self.question_bit).get(
            vertex_index(vertex)
        )
        if pos is None:
            raise ValueError(f"vertex {vertex} is not on this facet")
        return 1 - 2 * ((self.mask >> pos) & 1)

    def sign_product(self) -> int:
        return 1 - 2 * (self.mask.bit_count() & 1)


@dataclass(frozen=True)
class Answer:
    """One facet labelling per player, all for the same question."""

    assignments: tuple[FacetAssignment, ...]

    def __post_init__(self):
        if not self.assignments:
            raise ValueError("answer needs at least one assignment")
        m = self.assignments[0].m
        for k, fa in enumerate(self.assignments, start=1):
            if fa.m != m:
                raise ValueError("assignments disagree on the dimension")
            if fa.player != k:
                raise ValueError(f"assignment {k} carries player index {fa.player}")
        if len(self.assignments) != m:
            raise ValueError(f"expected {m} assignments, got {len(self.assignments)}")

    @property
    def m(self) -> int:
        return self.assignments[0].m

    @property
    def question(self) -> Bits:
        return tuple(fa.question_bit for fa in self.assignments)


def answer_from_masks(m: int, q: Bits, masks) -> Answer:
    return Answer(
        tuple(
            FacetAssignment(m, i + 1, q[i], masks[i]) for i in range(m)
        )
    )


def _check_question(answer: Answer, q: Bits) -> None:
    if answer.question != tuple(q):
        raise ValueError(f"answer was given for question {answer.question}, not {tuple(q)}")


def parity_ok(assignment: FacetAssignment) -> bool:
    """Product of labels is (-1)^q1 for player 1 and +1 for everyone else."""
    required = assignment.question_bit if assignment.player == 1 else 0
    return (assignment.mask.bit_count() & 1) == required


def consistency_ok(answer: Answer, q: Bits) -> bool:
    """All pairs of players agree on every vertex their facets share."""
    _check_question(answer, q)
    m = answer.m
    grid = np.zeros((m, 1 << m), dtype=np.int8)
    for fa in answer.assignments:
        idx = _facet_indices_array(m, fa.player, fa.question_bit)
        grid[fa.player - 1, idx] = fa.values_array
    has_plus = (grid == 1).any(axis=0)
    has_minus = (grid == -1).any(axis=0)
    return not bool((has_plus & has_minus).any())


def predicate(answer: Answer, q: Bits) -> int:
    """1 iff every player's parity holds and all shared vertices agree."""
    _check_question(answer, q)
    if not all(parity_ok(fa) for fa in answer.assignments):
        return 0
    return int(consistency_ok(answer, q))


def product_over_intersection(
    assignment: FacetAssignment, q1: int, q_i: int, partner: int | None = None
) -> int:
    """Product of the assignment's labels over the vertices shared with player 1.

    For a player-1 assignment the intersection also depends on which other
    player is meant; pass ``partner`` (defaults to 2 when m == 2, required
    otherwise).
    """
    m = assignment.m
    if assignment.player == 1:
        if assignment.question_bit != q1:
            raise ValueError("facet is disjoint from the requested intersection")
        if partner is None:
            if m > 2:
                raise ValueError("partner player index required for player 1 when m > 2")
            partner = 2
        if not 2 <= partner <= m:
            raise ValueError(f"partner must be in [2, {m}], got {partner}")
        i = partner
    else:
        i = assignment.player
        if partner is not None and partner != i:
            raise ValueError("partner does not match the assignment's player")
        if assignment.question_bit != q_i:
            raise ValueError("facet is disjoint from the requested intersection")
    pos = _facet_position(m, assignment.player, assignment.question_bit)
    sign = 1
    for e in _intersection_indices(m, q1, i, q_i):
        sign *= 1 - 2 * ((assignment.mask >> pos[e]) & 1)
    return sign


def relaxed_predicate(answer: Answer, q: Bits) -> int:
    """1 iff player 1 and each player i agree on the *product* over shared vertices.

    Weaker than :func:`predicate`: vertexwise agreement implies equal
    products, not conversely.
    """
    _check_question(answer, q)
    m = answer.m
    a1 = answer.assignments[0]
    for i in range(2, m + 1):
        lhs = product_over_intersection(a1, q[0], q[i - 1], partner=i)
        rhs = product_over_intersection(answer.assignments[i - 1], q[0], q[i - 1])
        if lhs != rhs:
            return 0
    return 1


def chsh_bit_embedding(a1: int, a2: int, q: Bits) -> Answer:
    """Embed a one-bit-per-player answer into the two-player game.

    Player 1 labels {(q1,0),(q1,1)} with {s1, (-1)^q1 * s1} and player 2
    labels {(0,q2),(1,q2)} with {s2, s2}, where sk = (-1)^ak.  With this
    embedding the game is won exactly when a1 XOR a2 equals q1*q2.
    """
    q = tuple(q)
    if len(q) != 2:
        raise ValueError("bit embedding is defined for the two-player game only")
    _validate_bit(a1)
    _validate_bit(a2)
    s1 = 1 - 2 * a1
    s2 = 1 - 2 * a2
    first = FacetAssignment.from_values(2, 1, q[0], (s1, -s1 if q[0] else s1))
    second = FacetAssignment.from_values(2, 2, q[1], (s2, s2))
    return Answer((first, second))


def all_questions(m: int):
    """All 2^m questions in ascending canonical order."""
    return itertools.product((0, 1), repeat=m)


def all_answers(m: int, q: Bits):
    """Every possible answer for a question.  Exposed only for m <= 3.

    The answer space has (2^(2^(m-1)))^m elements, so exhaustive walks are
    capped where they stay cheap.
    """
    if m > ENUMERATION_MAX_DIMENSION:
        raise ValueError(
            f"exhaustive answer enumeration is limited to m <= {ENUMERATION_MAX_DIMENSION}"
        )
    size = 1 << (m - 1)
    for masks in itertools.product(range(1 << size), repeat=m):
        yield answer_from_masks(m, q, masks)


def question_to_json(q: Bits) -> list[int]:
    return [int(b) for b in q]


def answer_to_json(answer: Answer) -> dict:
    """JSON form: question bits as 0/1, labels as +1/-1 integers."""
    return {
        "m": answer.m,
        "q": question_to_json(answer.question),
        "assignments": [[int(v) for v in fa.values] for fa in answer.assignments],
    }


def answer_from_json(data: dict) -> Answer:
    m = int(data["m"])
    q = tuple(int(b) for b in data["q"])
    return Answer(
        tuple(
            FacetAssignment.from_values(m, i + 1, q[i], data["assignments"][i])
            for i in range(m)
        )
    )
