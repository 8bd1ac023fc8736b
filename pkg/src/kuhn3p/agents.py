"""Decision-making agents for three-player Kuhn poker.

An agent is asked for one action at a time through ``act`` and shown each
completed hand through ``observe_result``.  One agent instance serves one
seat for the duration of one match; stateless agents may be shared
read-only.  Agents see only their own card, the public action history, and
whatever cards a showdown reveals -- never an opponent's mucked card.

The zoo covers the broad opponent categories a three-player Kuhn
tournament tends to attract: game-theoretic play backed by a fixed
strategy profile, naive rule-based play, uniform randomness, and a simple
opponent modeler.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple, Optional

from . import game
from . import strategy
from .game import Action, ActionHistory, Card, Seat
from .strategy import StrategyProfile


class Observation(NamedTuple):
    """Everything an agent may condition on when choosing an action."""

    seat: Seat
    private_card: Card
    history: ActionHistory
    hand_index: int


class Agent:
    """Base agent: subclasses override act; observe_result defaults to no-op."""

    name = "agent"

    def act(self, obs: Observation, rng) -> Action:
        raise NotImplementedError

    def observe_result(self, revealed: Mapping[Seat, Card],
                       history: ActionHistory,
                       payoffs: tuple[int, int, int]) -> None:
        """Called once per completed hand; revealed holds showdown cards only."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


class ProfileAgent(Agent):
    """Plays a fixed strategy profile: samples the aggressive action with the
    profile probability at the current information set."""

    def __init__(self, profile: StrategyProfile, name: str) -> None:
        self.profile = profile
        self.name = name
        # Float lookup table keeps the per-decision cost flat.
        self._prob = {key: float(p) for key, p in profile.aggressive.items()}

    def act(self, obs: Observation, rng) -> Action:
        key = game.infoset_key(obs.seat, obs.private_card, obs.history)
        passive, aggressive = game.action_pair(obs.history)
        return aggressive if rng.uniform() < self._prob[key] else passive


def build_honest_profile(king_bet: Fraction | float = Fraction(1, 2)) -> StrategyProfile:
    """Honest no-bluff play: bet A always and K with probability king_bet at
    the first opportunity, never bet J or Q, and call only with A."""
    aggressive = {}
    for key in game.all_infoset_keys():
        if key.situation == 1:
            if key.card == "A":
                aggressive[key] = Fraction(1)
            elif key.card == "K":
                aggressive[key] = Fraction(king_bet)
            else:
                aggressive[key] = Fraction(0)
        else:
            # Situations 2-4 all face an outstanding bet.
            aggressive[key] = Fraction(1) if key.card == "A" else Fraction(0)
    return StrategyProfile(aggressive)


class FrequencyModeler(Agent):
    """Opponent modeler: tracks per-seat, per-situation aggressive
    frequencies with additive smoothing and plays greedy expectimax against
    the modeled behavior.

    The model is card-independent, so observed opponent actions carry no
    information about hidden cards and the posterior over the unseen deals
    stays uniform; the expectimax below relies on that.
    """

    name = "FrequencyModeler"

    def __init__(self, smoothing: float = 1.0) -> None:
        if not smoothing > 0:
            raise ValueError(f"smoothing must be > 0, got {smoothing!r}")
        self.smoothing = float(smoothing)
        self._counts: dict[tuple[Seat, int], list[int]] = {}
        self._seat: Optional[Seat] = None

    def estimate(self, seat: Seat, situation: int) -> float:
        """Smoothed aggressive frequency for an opponent decision point."""
        passive, aggressive = self._counts.get((seat, situation), (0, 0))
        s = self.smoothing
        return (aggressive + s) / (passive + aggressive + 2 * s)

    def act(self, obs: Observation, rng) -> Action:
        self._seat = obs.seat
        deals = [d for d in game.DEALS if d[obs.seat - 1] == obs.private_card]
        passive, aggressive = game.action_pair(obs.history)
        v_passive = self._value(deals, obs.seat, obs.history + passive)
        v_aggressive = self._value(deals, obs.seat, obs.history + aggressive)
        # Ties break passive, matching the best-response convention.
        return aggressive if v_aggressive > v_passive else passive

    def _value(self, deals: list[str], seat: Seat, h: ActionHistory) -> float:
        # Expected payoff for seat over the uniform posterior on deals, with
        # opponents playing their modeled frequencies and this agent playing
        # greedily at its own future decision points.  Modeled frequencies do
        # not depend on the deal, so branch weights factor out of the frontier.
        if game.is_terminal(h):
            total = 0.0
            for d in deals:
                total += game.PAYOFF_TABLE[d][h][seat - 1]
            return total / len(deals)
        actor = game.acting_seat(h)
        passive, aggressive = game.action_pair(h)
        if actor == seat:
            return max(self._value(deals, seat, h + passive),
                       self._value(deals, seat, h + aggressive))
        f = self.estimate(actor, game.situation_of(actor, h))
        return ((1.0 - f) * self._value(deals, seat, h + passive)
                + f * self._value(deals, seat, h + aggressive))

    def observe_result(self, revealed: Mapping[Seat, Card],
                       history: ActionHistory,
                       payoffs: tuple[int, int, int]) -> None:
        # Count every public opponent action; own actions are skipped.  The
        # model keys on the acting seat, which identifies the opponent for
        # the duration of a match.  Mucked cards are never passed in, and the
        # card-independent model has no use for the revealed ones.
        if self._seat is None:
            return
        h = ""
        for token in history:
            actor = game.acting_seat(h)
            if actor != self._seat:
                situation = game.situation_of(actor, h)
                counts = self._counts.setdefault((actor, situation), [0, 0])
                _, aggressive = game.action_pair(h)
                counts[1 if token == aggressive else 0] += 1
            h += token


AGENT_KINDS = (
    "NashLB",
    "NashUB",
    "CFRTrained",
    "UniformRandom",
    "AlwaysAggressive",
    "AlwaysPassive",
    "HonestNoBluff",
    "FrequencyModeler",
)

# Accepted parameters per kind; every other kind takes none.
_PARAMETERS = {
    "CFRTrained": ("profile",),
    "HonestNoBluff": ("king_bet",),
    "FrequencyModeler": ("smoothing",),
}


@dataclass(frozen=True)
class AgentSpec:
    """Declarative agent description, as written in tournament configs."""

    kind: str
    parameters: Mapping[str, object] = field(default_factory=dict)


def _as_probability(value: object, name: str) -> Fraction | float:
    if isinstance(value, str):
        try:
            value = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{name} is not a number: {value!r}") from None
    if not isinstance(value, (int, float, Fraction)) or isinstance(value, bool):
        raise ValueError(f"{name} is not a number: {value!r}")
    if not 0 <= value <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def validate_spec(spec: AgentSpec) -> None:
    """Raise ValueError naming the offending field for any invalid spec."""
    if spec.kind not in AGENT_KINDS:
        raise ValueError(
            f"unknown agent kind {spec.kind!r}; valid kinds: {', '.join(AGENT_KINDS)}")
    allowed = _PARAMETERS.get(spec.kind, ())
    for key in spec.parameters:
        if key not in allowed:
            raise ValueError(f"{spec.kind} does not accept parameter {key!r}")
    if spec.kind == "CFRTrained":
        if "profile" not in spec.parameters:
            raise ValueError("CFRTrained requires parameter 'profile' (path to a profile file)")
        if not isinstance(spec.parameters["profile"], str):
            raise ValueError("CFRTrained parameter 'profile' must be a path string")
    if spec.kind == "HonestNoBluff" and "king_bet" in spec.parameters:
        _as_probability(spec.parameters["king_bet"], "king_bet")
    if spec.kind == "FrequencyModeler" and "smoothing" in spec.parameters:
        smoothing = spec.parameters["smoothing"]
        if not isinstance(smoothing, (int, float)) or isinstance(smoothing, bool) or not smoothing > 0:
            raise ValueError(f"smoothing must be a number > 0, got {smoothing!r}")


def make_agent(spec: AgentSpec) -> Agent:
    """Construct the agent an AgentSpec describes.  Deterministic."""
    validate_spec(spec)
    kind = spec.kind
    if kind == "NashLB" or kind == "NashUB":
        return ProfileAgent(strategy.nash_profile(kind[-2:]), kind)
    if kind == "CFRTrained":
        path = spec.parameters["profile"]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValueError(f"CFRTrained profile {path!r} is unreadable: {exc}") from exc
        return ProfileAgent(strategy.parse_profile(text), "CFRTrained")
    if kind == "UniformRandom":
        return ProfileAgent(strategy.constant_profile(Fraction(1, 2)), kind)
    if kind == "AlwaysAggressive":
        return ProfileAgent(strategy.constant_profile(Fraction(1)), kind)
    if kind == "AlwaysPassive":
        return ProfileAgent(strategy.constant_profile(Fraction(0)), kind)
    if kind == "HonestNoBluff":
        king_bet = _as_probability(spec.parameters.get("king_bet", 0.5), "king_bet")
        return ProfileAgent(build_honest_profile(king_bet), kind)
    assert kind == "FrequencyModeler"
    return FrequencyModeler(float(spec.parameters.get("smoothing", 1.0)))
