"""Exact game values, best responses, equilibrium gap, and CFR training.

Verification runs in exact rational arithmetic: profile probabilities are
converted to `Fraction` (exact even for floats), expectations are taken
over the 24 equiprobable deals, and a profile is an equilibrium iff its
gap `epsilon` is exactly zero. Two independent routes compute the best
response value:

  * `best_response` walks the tree grouped by the responding seat's
    information sets, maximizing at each one with opponent-reach-weighted
    card posteriors (ties go to the passive action);
  * `pure_strategy_oracle` enumerates all 2^16 = 65,536 pure strategies
    for the seat over its 16 infosets and evaluates each one exactly.

`CfrTrainer` implements vanilla counterfactual regret minimization:
every iteration enumerates all 24 deals, updates all three seats'
regrets simultaneously under the regret-matching policy, and accumulates
the reach-weighted average strategy. The traversal is vectorized across
deals with numpy and is fully deterministic (there is no sampling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import game
from .game import CARDS, CARD_INDEX, DEALS, SEATS, InfoSetKey
from .strategy import StrategyProfile

ValueVector = tuple[Fraction, Fraction, Fraction]

_CHANCE = Fraction(1, len(DEALS))
_ZERO = Fraction(0)


def _prob(profile: StrategyProfile, key: InfoSetKey) -> Fraction:
    # Fraction(float) is exact, so float-valued profiles verify exactly too.
    return Fraction(profile.aggressive[key])


def _key_at(seat: int, deal: str, history: str) -> InfoSetKey:
    sit = game.situation_of(seat, history)
    return InfoSetKey(seat, deal[seat - 1], sit)


def expected_values(profile: StrategyProfile) -> ValueVector:
    """Exact per-seat expected net chips per hand under `profile`,
    over all 24 equiprobable deals. Components sum to zero."""
    totals = [_ZERO, _ZERO, _ZERO]

    def walk(deal: str, history: str, reach: Fraction) -> None:
        if reach == 0:
            return
        if game.is_terminal(history):
            pay = game.PAYOFF_TABLE[deal][history]
            for i in range(3):
                totals[i] += reach * pay[i]
            return
        seat = game.acting_seat(history)
        passive, aggressive = game.action_pair(history)
        p = _prob(profile, _key_at(seat, deal, history))
        walk(deal, history + passive, reach * (1 - p))
        walk(deal, history + aggressive, reach * p)

    for deal in DEALS:
        walk(deal, "", _CHANCE)
    return (totals[0], totals[1], totals[2])


@dataclass
class BestResponseResult:
    """A seat's best payoff against the other two seats' fixed strategies.

    `br_strategy` maps the seat's 16 infosets to a pure (0 or 1)
    aggressive probability. `infoset_values` holds the pair of
    opponent-reach-weighted action values (passive, aggressive) seen at
    each infoset during the expectimax; `evaluations` is set only by the
    brute-force oracle.
    """

    seat: int
    br_value: Fraction
    br_strategy: dict[InfoSetKey, Fraction]
    infoset_values: dict[InfoSetKey, tuple[Fraction, Fraction]] = field(
        default_factory=dict
    )
    evaluations: int | None = None


def best_response(profile: StrategyProfile, seat: int) -> BestResponseResult:
    """Expectimax best response for `seat` holding the other seats fixed.

    The recursion carries a frontier of (deal, reach) pairs that share a
    public history and the seat's own card; opponent decisions split the
    frontier with their strategy weights, own decisions maximize over the
    summed frontier value. Exact ties pick the passive action.
    """
    if seat not in SEATS:
        raise ValueError(f"seat must be one of {SEATS}, got {seat}")
    chosen: dict[InfoSetKey, Fraction] = {}
    infoset_values: dict[InfoSetKey, tuple[Fraction, Fraction]] = {}

    def walk(card: str, history: str, frontier: list[tuple[str, Fraction]]) -> Fraction:
        if game.is_terminal(history):
            return sum(
                (r * game.PAYOFF_TABLE[d][history][seat - 1] for d, r in frontier),
                _ZERO,
            )
        actor = game.acting_seat(history)
        passive, aggressive = game.action_pair(history)
        if actor != seat:
            value = _ZERO
            for action in (passive, aggressive):
                branch = []
                for d, r in frontier:
                    p = _prob(profile, _key_at(actor, d, history))
                    w = r * (p if action == aggressive else 1 - p)
                    if w != 0:
                        branch.append((d, w))
                if branch:
                    value += walk(card, history + action, branch)
            return value
        key = InfoSetKey(seat, card, game.situation_of(seat, history))
        v_passive = walk(card, history + passive, frontier)
        v_aggressive = walk(card, history + aggressive, frontier)
        infoset_values[key] = (v_passive, v_aggressive)
        take_aggressive = v_aggressive > v_passive
        chosen[key] = Fraction(1) if take_aggressive else Fraction(0)
        return v_aggressive if take_aggressive else v_passive

    total = _ZERO
    for card in CARDS:
        frontier = [(d, _CHANCE) for d in DEALS if d[seat - 1] == card]
        total += walk(card, "", frontier)

    # Unreachable infosets never enter the walk with weight; fill any the
    # recursion still missed (cannot happen structurally) passively.
    for key in _seat_keys(seat):
        chosen.setdefault(key, Fraction(0))
    return BestResponseResult(seat, total, chosen, infoset_values)


def _seat_keys(seat: int) -> tuple[InfoSetKey, ...]:
    return tuple(k for k in game.all_infoset_keys() if k.seat == seat)


def pure_strategy_oracle(profile: StrategyProfile, seat: int) -> BestResponseResult:
    """Brute-force best response: evaluate all 65,536 pure strategies.

    A pure strategy is 16 bits, one per (card, situation) of the seat;
    bit set means the aggressive action. The seat's expected value splits
    by its own card into four independent 4-bit tables, so each candidate
    is an exact four-term sum over a common denominator.
    """
    if seat not in SEATS:
        raise ValueError(f"seat must be one of {SEATS}, got {seat}")

    # tables[c][m] = value of playing 4-bit sub-strategy m when holding
    # card index c, summed over consistent deals and terminal histories.
    tables = [[_ZERO] * 16 for _ in CARDS]
    for deal in DEALS:
        card_slot = CARD_INDEX[deal[seat - 1]] - 1
        for terminal in game.TERMINAL_HISTORIES:
            weight = _CHANCE * game.PAYOFF_TABLE[deal][terminal][seat - 1]
            own_path: list[tuple[int, bool]] = []
            for i, token in enumerate(terminal):
                prefix = terminal[:i]
                actor = game.acting_seat(prefix)
                _, aggressive = game.action_pair(prefix)
                if actor == seat:
                    own_path.append(
                        (game.situation_of(seat, prefix), token == aggressive)
                    )
                else:
                    p = _prob(profile, _key_at(actor, deal, prefix))
                    weight *= p if token == aggressive else 1 - p
            if weight == 0:
                continue
            for m in range(16):
                if all(bool(m >> (sit - 1) & 1) == agg for sit, agg in own_path):
                    tables[card_slot][m] += weight

    denom = math.lcm(*(v.denominator for row in tables for v in row))
    ints = [[int(v * denom) for v in row] for row in tables]
    t_j, t_q, t_k, t_a = ints

    values = [
        t_j[m & 15] + t_q[m >> 4 & 15] + t_k[m >> 8 & 15] + t_a[m >> 12]
        for m in range(1 << 16)
    ]
    # max() keeps the first maximizer; ascending masks make that the
    # candidate with aggressive bits only where they are forced.
    best_mask = max(range(1 << 16), key=values.__getitem__)

    br_strategy = {}
    for card in CARDS:
        offset = 4 * (CARD_INDEX[card] - 1)
        for sit in (1, 2, 3, 4):
            bit = best_mask >> (offset + sit - 1) & 1
            br_strategy[InfoSetKey(seat, card, sit)] = Fraction(bit)
    return BestResponseResult(
        seat,
        Fraction(values[best_mask], denom),
        br_strategy,
        evaluations=1 << 16,
    )


def epsilon(profile: StrategyProfile) -> Fraction:
    """Largest unilateral gain any seat can get by deviating; exactly
    zero iff `profile` is a Nash equilibrium."""
    evs = expected_values(profile)
    return max(
        best_response(profile, seat).br_value - evs[seat - 1] for seat in SEATS
    )


@dataclass
class SeatGap:
    seat: int
    ev: Fraction
    br_value: Fraction
    gap: Fraction
    # infosets where the best response strictly beats the profile's own
    # mixture, with the local improvement (opponent-reach weighted).
    deviations: list[tuple[InfoSetKey, Fraction]]


@dataclass
class EpsilonReport:
    """Per-seat equilibrium diagnostics plus the overall gap."""

    seats: list[SeatGap]

    @property
    def epsilon(self) -> Fraction:
        return max(s.gap for s in self.seats)

    def render(self) -> str:
        # Exact fractions are printed only while they stay readable; the
        # huge denominators of float-valued profiles add nothing.
        def exact(v: Fraction) -> str:
            return f"{v} " if v.denominator <= 10**6 else ""

        lines = []
        for s in self.seats:
            lines.append(
                f"seat {s.seat}: ev = {exact(s.ev)}({float(s.ev):+.6f})  "
                f"best response = {exact(s.br_value)}({float(s.br_value):+.6f})  "
                f"gap = {exact(s.gap)}({float(s.gap):.3e})"
            )
            for key, gain in s.deviations:
                lines.append(
                    f"    deviate at seat {key.seat} card {key.card} "
                    f"situation {key.situation}: gain {exact(gain)}({float(gain):.3e})"
                )
        lines.append(f"epsilon = {exact(self.epsilon)}({float(self.epsilon):.3e})")
        return "\n".join(lines)


def epsilon_report(profile: StrategyProfile) -> EpsilonReport:
    """Where and by how much each seat could profit by deviating."""
    evs = expected_values(profile)
    seats = []
    for seat in SEATS:
        br = best_response(profile, seat)
        deviations = []
        for key, (v_passive, v_aggressive) in sorted(
            br.infoset_values.items(), key=lambda kv: kv[0].sort_index()
        ):
            p = _prob(profile, key)
            held = p * v_aggressive + (1 - p) * v_passive
            gain = max(v_passive, v_aggressive) - held
            if gain > 0:
                deviations.append((key, gain))
        seats.append(
            SeatGap(seat, evs[seat - 1], br.br_value, br.br_value - evs[seat - 1], deviations)
        )
    return EpsilonReport(seats)


# ---------------------------------------------------------------------------
# Counterfactual regret minimization
# ---------------------------------------------------------------------------

_KEYS = game.all_infoset_keys()
_KEY_INDEX = {key: i for i, key in enumerate(_KEYS)}
_N_KEYS = len(_KEYS)
_PASSIVE, _AGGRESSIVE = 0, 1


def _build_tree_tables():
    """Static per-history tables for the vectorized traversal: acting
    seat, per-deal infoset index, child histories, terminal payoffs."""
    nodes = {}
    for h in game.DECISION_HISTORIES:
        seat = game.acting_seat(h)
        sit = game.situation_of(seat, h)
        idx = np.array(
            [_KEY_INDEX[InfoSetKey(seat, d[seat - 1], sit)] for d in DEALS],
            dtype=np.intp,
        )
        passive, aggressive = game.action_pair(h)
        nodes[h] = (seat - 1, idx, h + passive, h + aggressive)
    payoffs = {
        h: np.array([game.PAYOFF_TABLE[d][h] for d in DEALS], dtype=np.float64)
        for h in game.TERMINAL_HISTORIES
    }
    return nodes, payoffs


_TREE_NODES, _TREE_PAYOFFS = _build_tree_tables()
_N_DEALS = len(DEALS)
_CHANCE_F = 1.0 / _N_DEALS


class CfrTrainer:
    """Vanilla CFR over the full game, one exhaustive sweep per iteration.

    State is the classic regret/average-strategy pair per infoset and
    action. The current policy is regret matching on the positive part of
    the cumulative regrets, uniform where none are positive. Training is
    deterministic; `seed` only labels the run (full deal enumeration
    leaves nothing to sample).
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.iteration_count = 0
        self.cumulative_regret = np.zeros((_N_KEYS, 2), dtype=np.float64)
        self.cumulative_strategy = np.zeros((_N_KEYS, 2), dtype=np.float64)

    def current_policy(self) -> np.ndarray:
        """(48, 2) action distribution per infoset via regret matching."""
        positive = np.maximum(self.cumulative_regret, 0.0)
        norms = positive.sum(axis=1, keepdims=True)
        uniform = np.full_like(positive, 0.5)
        with np.errstate(invalid="ignore"):
            matched = positive / norms
        return np.where(norms > 0, matched, uniform)

    def run(self, iterations: int) -> "CfrTrainer":
        if iterations < 0:
            raise ValueError("iterations must be nonnegative")
        for _ in range(iterations):
            self._sweep()
            self.iteration_count += 1
        return self

    def _sweep(self) -> None:
        policy = self.current_policy()
        pol_passive = policy[:, _PASSIVE]
        pol_aggressive = policy[:, _AGGRESSIVE]
        idx_parts = []
        updates = ([], [], [], [])  # regret pass/agg, strategy pass/agg

        def walk(history: str, reach: np.ndarray) -> np.ndarray:
            node = _TREE_NODES.get(history)
            if node is None:
                return _TREE_PAYOFFS[history]
            seat0, idx, h_passive, h_aggressive = node
            sp = pol_passive[idx]
            sa = pol_aggressive[idx]
            reach_p = reach.copy()
            reach_p[seat0] *= sp
            reach_a = reach.copy()
            reach_a[seat0] *= sa
            v_passive = walk(h_passive, reach_p)
            v_aggressive = walk(h_aggressive, reach_a)
            value = sp[:, None] * v_passive + sa[:, None] * v_aggressive
            counterfactual = _CHANCE_F * reach[seat0 - 1] * reach[seat0 - 2]
            own = _CHANCE_F * reach[seat0]
            idx_parts.append(idx)
            updates[0].append(counterfactual * (v_passive[:, seat0] - value[:, seat0]))
            updates[1].append(counterfactual * (v_aggressive[:, seat0] - value[:, seat0]))
            updates[2].append(own * sp)
            updates[3].append(own * sa)
            return value

        walk("", np.ones((3, _N_DEALS), dtype=np.float64))
        idx = np.concatenate(idx_parts)
        np.add.at(self.cumulative_regret[:, _PASSIVE], idx, np.concatenate(updates[0]))
        np.add.at(self.cumulative_regret[:, _AGGRESSIVE], idx, np.concatenate(updates[1]))
        np.add.at(self.cumulative_strategy[:, _PASSIVE], idx, np.concatenate(updates[2]))
        np.add.at(self.cumulative_strategy[:, _AGGRESSIVE], idx, np.concatenate(updates[3]))

    def average_profile(self) -> StrategyProfile:
        """Normalized average strategy; uniform at never-reached infosets
        (and everywhere after zero iterations)."""
        sums = self.cumulative_strategy
        norms = sums.sum(axis=1)
        aggressive = np.where(
            norms > 0, sums[:, _AGGRESSIVE] / np.where(norms > 0, norms, 1.0), 0.5
        )
        return StrategyProfile(
            {key: float(aggressive[i]) for i, key in enumerate(_KEYS)}
        )


def cfr_train(iterations: int, seed: int = 0) -> StrategyProfile:
    """Average profile of `iterations` vanilla-CFR sweeps; uniform when
    `iterations` is zero."""
    return CfrTrainer(seed).run(iterations).average_profile()
