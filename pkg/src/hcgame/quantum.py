"""The shared-entanglement strategy: GHZ state, tilted-Z measurements, and
its winning probability by simulation, by operator identity, and in closed
form, plus the scalar maximisation giving the quantum game value.

Player i measures the reflection Z(theta) with theta = q1 * pi/2 for the
first player and (-1)^qi * alpha for the rest; outcomes are turned into
facet labels by pinning four distinguished vertices and filling the rest
with +1.  Averaged over questions the strategy wins with probability
[(1+cos a)^(m-1) + (1+sin a)^(m-1)] / 2^m, maximised over a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import game
from .game import Answer, Bits, FacetAssignment
from .linalg import apply_single_qubit

GHZ_MAX_QUBITS = 12
GRID_POINTS = 4096
THETA_INTERVAL_TOL = 1e-12
_DIRECT_POWER_MAX = 50
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def ghz_state(m: int) -> np.ndarray:
    """(|0...0> + |1...1>)/sqrt(2) as 2^m amplitudes."""
    if not 2 <= m <= GHZ_MAX_QUBITS:
        raise ValueError(f"state preparation supports 2 <= m <= {GHZ_MAX_QUBITS}, got {m}")
    psi = np.zeros(1 << m, dtype=complex)
    psi[0] = psi[-1] = 1.0 / math.sqrt(2.0)
    return psi


def z_theta(theta: float) -> np.ndarray:
    """[[cos t, sin t], [sin t, -cos t]]: real symmetric, squares to I."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]], dtype=complex)


def measurement_angle(player: int, question_bit: int, alpha: float) -> float:
    if question_bit not in (0, 1):
        raise ValueError(f"question bit must be 0 or 1, got {question_bit}")
    if player == 1:
        return question_bit * (math.pi / 2.0)
    return alpha if question_bit == 0 else -alpha


@dataclass(frozen=True)
class QuantumStrategy:
    """GHZ strategy parametrised by the measurement tilt of players 2..m."""

    m: int
    alpha: float

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"need at least two players, got {self.m}")
        if not 0.0 <= self.alpha <= math.pi / 2.0 + 1e-12:
            raise ValueError(f"alpha must lie in [0, pi/2], got {self.alpha}")

    def angle(self, player: int, question_bit: int) -> float:
        return measurement_angle(player, question_bit, self.alpha)

    def observable(self, player: int, question_bit: int) -> np.ndarray:
        return z_theta(self.angle(player, question_bit))


def outcome_probability(strategy: QuantumStrategy, q: Bits, o) -> float:
    """Probability of the +/-1 outcome tuple o under the question q."""
    m = strategy.m
    psi = ghz_state(m)
    current = psi
    eye = np.eye(2, dtype=complex)
    for player in range(1, m + 1):
        proj = (eye + o[player - 1] * strategy.observable(player, q[player - 1])) / 2.0
        current = apply_single_qubit(current, proj, player - 1)
    value = np.vdot(psi, current)
    assert abs(value.imag) < 1e-12
    return max(float(value.real), 0.0)


def outcome_distribution(strategy: QuantumStrategy, q: Bits) -> np.ndarray:
    """All 2^m outcome probabilities at once.

    Each qubit is rotated into the eigenbasis of its observable, so index
    bit k = 0 corresponds to outcome +1 for player k+1 (big-endian, same
    convention as vertex encodings).
    """
    m = strategy.m
    psi = ghz_state(m)
    for player in range(1, m + 1):
        half = strategy.angle(player, q[player - 1]) / 2.0
        c, s = math.cos(half), math.sin(half)
        basis = np.array([[c, s], [-s, c]], dtype=complex)
        psi = apply_single_qubit(psi, basis, player - 1)
    return np.abs(psi) ** 2


def _outcome_tuple(index: int, m: int) -> tuple[int, ...]:
    return tuple(1 - 2 * ((index >> (m - k)) & 1) for k in range(1, m + 1))


def _answer_for_outcome(m: int, q: Bits, o) -> Answer:
    """Facet labels induced by measurement outcomes.

    Player 1 pins (q1,0,...,0) and (q1,1,...,1); player i >= 2 pins the two
    vertices (x1, qi, ..., qi).  Everything else gets +1.  A repair slot is
    kept in case the pinned labels ever broke parity, but for these rules
    they never do.
    """
    if len(q) != m or len(o) != m:
        raise ValueError("question and outcome tuple must both have length m")
    assignments = []
    low_half = (1 << (m - 1)) - 1
    for player in range(1, m + 1):
        qb = q[player - 1]
        pos = game._facet_position(m, player, qb)
        size = 1 << (m - 1)
        values = [1] * size
        if player == 1:
            enc_low = qb << (m - 1)
            enc_high = (qb << (m - 1)) | low_half
            values[pos[enc_low]] = o[0]
            values[pos[enc_high]] = o[0] if qb == 0 else -o[0]
            pinned = {pos[enc_low], pos[enc_high]}
        else:
            tail = low_half if qb else 0
            values[pos[tail]] = o[player - 1]
            values[pos[(1 << (m - 1)) | tail]] = o[player - 1]
            pinned = {pos[tail], pos[(1 << (m - 1)) | tail]}
        fa = FacetAssignment.from_values(m, player, qb, values)
        if not game.parity_ok(fa):
            free = [k for k in range(size - 1, -1, -1) if k not in pinned]
            assert free, "no free vertex left to repair parity"
            values[free[0]] = -values[free[0]]
            fa = FacetAssignment.from_values(m, player, qb, values)
        assignments.append(fa)
    return Answer(tuple(assignments))


def outcome_to_answer(strategy: QuantumStrategy, q: Bits, o) -> Answer:
    return _answer_for_outcome(strategy.m, tuple(q), tuple(o))


@lru_cache(maxsize=None)
def _win_table(m: int, q: Bits) -> np.ndarray:
    table = np.zeros(1 << m, dtype=np.uint8)
    for index in range(1 << m):
        o = _outcome_tuple(index, m)
        answer = _answer_for_outcome(m, q, o)
        table[index] = game.predicate(answer, q)
    table.setflags(write=False)
    return table


def winning_probability_simulated(strategy: QuantumStrategy, q: Bits) -> float:
    """Sum over outcome tuples of outcome probability times the game predicate."""
    if strategy.m > GHZ_MAX_QUBITS:
        raise ValueError(f"simulation supports m <= {GHZ_MAX_QUBITS}")
    q = tuple(q)
    dist = outcome_distribution(strategy, q)
    return float(dist @ _win_table(strategy.m, q))


def winning_probability_operator(strategy: QuantumStrategy, q: Bits) -> float:
    """The same probability through the product-operator identity
    <prod_{i>=2} (1 + (-1)^(q1*qi) Z_1 Z_i)/2> on the shared state."""
    m = strategy.m
    if m > GHZ_MAX_QUBITS:
        raise ValueError(f"simulation supports m <= {GHZ_MAX_QUBITS}")
    q = tuple(q)
    psi = ghz_state(m)
    first = z_theta(strategy.angle(1, q[0]))
    acc = psi
    for i in range(2, m + 1):
        other = z_theta(strategy.angle(i, q[i - 1]))
        sign = -1.0 if q[0] & q[i - 1] else 1.0
        tmp = apply_single_qubit(acc, first, 0)
        tmp = apply_single_qubit(tmp, other, i - 1)
        acc = (acc + sign * tmp) / 2.0
    value = np.vdot(psi, acc)
    assert abs(value.imag) < 1e-12
    return float(value.real)


def average_win_analytic(m: int, alpha: float) -> float:
    """Closed form [(1+cos a)^(m-1) + (1+sin a)^(m-1)] / 2^m, evaluated in
    the normalised form ((1+cos a)/2)^(m-1)/2 + ... so large m cannot overflow."""
    if m < 2:
        raise ValueError(f"need at least two players, got {m}")
    ca = (1.0 + math.cos(alpha)) / 2.0
    sa = (1.0 + math.sin(alpha)) / 2.0
    return (ca ** (m - 1) + sa ** (m - 1)) / 2.0


def r_function(theta: float, power: int) -> float:
    """(1+cos t)^M + (1+sin t)^M; log-domain above M = 50."""
    if power < 1:
        raise ValueError(f"power must be positive, got {power}")
    c, s = math.cos(theta), math.sin(theta)
    if power <= _DIRECT_POWER_MAX:
        return (1.0 + c) ** power + (1.0 + s) ** power
    return math.exp(power * math.log1p(c)) + math.exp(power * math.log1p(s))


def r_function_scaled(theta: float, power: int) -> float:
    """r(theta, M) / 2^M, safe for arbitrarily large M."""
    if power < 1:
        raise ValueError(f"power must be positive, got {power}")
    ca = (1.0 + math.cos(theta)) / 2.0
    sa = (1.0 + math.sin(theta)) / 2.0
    return ca ** power + sa ** power


def r_excess_scaled(theta: float, power: int) -> float:
    """r(theta, M)/2^M - 1 - 2^-M without cancellation.

    For large M the interesting part of r sits many binary orders below its
    leading terms, so comparisons against the two-sided pinch bounds must
    happen in this form; direct double arithmetic rounds the signal away
    around M = 28.  Uses (1+cos t)/2 = cos^2(t/2) and log(cos h) =
    log1p(-2 sin^2(h/2)), which survives t as small as 2^(2-M).
    """
    if power < 1:
        raise ValueError(f"power must be positive, got {power}")
    half_sin = math.sin(0.25 * theta)
    first = math.expm1(2.0 * power * math.log1p(-2.0 * half_sin * half_sin))
    second = 0.5 ** power * math.expm1(power * math.log1p(math.sin(theta)))
    return first + second


class RMaximum(NamedTuple):
    theta_star: float
    r_star: float


@lru_cache(maxsize=None)
def maximize_r(power: int) -> RMaximum:
    """Maximise r(theta, M) over theta.

    Since r(theta) = r(pi/2 - theta), it suffices to search [0, pi/4].  A
    4096-point grid locates the global bump (the objective is not unimodal
    everywhere: for larger M a second maximum appears near 0), then golden
    section refinement narrows the bracket to 1e-12, continuing to 1e-6
    relative width for maximisers so close to 0 that an absolute interval
    cannot pin them (theta* shrinks like 2^(2-M)).
    """
    if power < 1:
        raise ValueError(f"power must be positive, got {power}")

    def f(t: float) -> float:
        # the constant offset drops out; the excess form keeps full relative
        # precision even when the bump is far below 1 ulp of r itself
        return r_excess_scaled(t, power)

    grid = np.linspace(0.0, math.pi / 4.0, GRID_POINTS)
    values = ((1.0 + np.cos(grid)) / 2.0) ** power + ((1.0 + np.sin(grid)) / 2.0) ** power
    k = int(np.argmax(values))
    a = float(grid[max(k - 1, 0)])
    b = float(grid[min(k + 1, GRID_POINTS - 1)])

    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(600):
        if b - a <= THETA_INTERVAL_TOL and b - a <= 1e-6 * b:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
    theta = 0.5 * (a + b)
    return RMaximum(theta, r_function(theta, power))


def quantum_value(m: int) -> float:
    """max_theta [(1+cos t)^(m-1) + (1+sin t)^(m-1)] / 2^m."""
    if m < 2:
        raise ValueError(f"need at least two players, got {m}")
    theta = maximize_r(m - 1).theta_star
    return r_function_scaled(theta, m - 1) / 2.0


def quantum_value_excess(m: int) -> float:
    """quantum_value(m) - 1/2 - 2^-m at full relative precision.

    This is the quantity the pinch bounds and the advantage column speak
    about; past m = 28 it falls below 1 ulp of the value itself.
    """
    if m < 2:
        raise ValueError(f"need at least two players, got {m}")
    theta = maximize_r(m - 1).theta_star
    return 0.5 * r_excess_scaled(theta, m - 1)


def quantum_value_bounds(m: int) -> tuple[float, float]:
    """Two-sided pinch 1/2 + 1/2^m + c(m-1)/4^m with c = 1 below and c = 8
    above (upper end clamped at 1)."""
    if m < 2:
        raise ValueError(f"need at least two players, got {m}")
    base = 0.5 + 0.5 ** m
    delta = (m - 1) * 0.25 ** m
    return base + delta, min(1.0, base + 8.0 * delta)
