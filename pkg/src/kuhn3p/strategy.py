"""Strategy profiles over the 48 information sets.

A profile assigns each information set the probability of its aggressive
action (bet when checking is possible, call when facing a bet). Two exact
Nash equilibrium parameter tables ship with the package, named LB and UB
for the lower and upper bounds of the robust range of a known parametric
equilibrium family. Each table pins 27 of the 48 probabilities; the other
21 are forced by strict dominance and filled in by `complete_profile`:

  * holding J facing a bet: fold (J never wins a showdown),
  * holding A facing a bet: call (A always wins a showdown),
  * holding Q after a bet and a call: fold (beating both opponents would
    require two lower cards, and there is only one J in the deck).

Values are exact `Fraction`s where the source is exact and may be floats
for numerically trained profiles. The text format is line-oriented,
"seat card situation probability", sorted by (seat, card, situation),
with probabilities as decimals or "n/d" fractions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from . import game
from .game import CARDS, CARD_INDEX, InfoSetKey

Probability = Union[Fraction, float]

#: (seat, card index, situation) triples named by the parameter tables:
#: per seat, J in situation 1, Q in 1-3, K in 1-4, A in 1.
TABLED_ENTRIES = tuple(
    (seat, j, k)
    for seat in game.SEATS
    for j, ks in ((1, (1,)), (2, (1, 2, 3)), (3, (1, 2, 3, 4)), (4, (1,)))
    for k in ks
)

_F = Fraction

# The LB equilibrium table. Seat 1 rarely initiates: its only nonzero
# entry is calling a lone bet with K half the time. Seat 3 bluffs Q half
# the time and always bets A after two checks.
_LB_VALUES = {
    (1, 3, 3): _F(1, 2),
    (2, 3, 3): _F(1, 2),
    (3, 2, 1): _F(1, 2),
    (3, 3, 3): _F(1, 2),
    (3, 4, 1): _F(1),
}

# The UB table. Seat 2 opens J and Q as bluffs a quarter of the time,
# always bets A, and defends K aggressively; seat 3 stops calling with K
# against a lone bet and instead always overcalls.
_UB_VALUES = {
    (2, 1, 1): _F(1, 4),
    (2, 2, 1): _F(1, 4),
    (2, 3, 2): _F(1),
    (2, 3, 3): _F(7, 8),
    (2, 4, 1): _F(1),
    (1, 3, 3): _F(1, 2),
    (3, 2, 1): _F(1, 2),
    (3, 3, 4): _F(1),
    (3, 4, 1): _F(1),
}

VARIANTS = ("LB", "UB")


def load_table(variant: str) -> dict[tuple[int, int, int], Fraction]:
    """The 27 tabled probabilities of the chosen equilibrium variant,
    keyed by (seat, card index, situation)."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    values = _LB_VALUES if variant == "LB" else _UB_VALUES
    return {entry: values.get(entry, _F(0)) for entry in TABLED_ENTRIES}


@dataclass(frozen=True)
class StrategyProfile:
    """Probability of the aggressive action at each of the 48 information
    sets. Immutable once built; the passive action gets the complement."""

    aggressive: Mapping[InfoSetKey, Probability]

    def __post_init__(self):
        keys = frozenset(self.aggressive)
        expected = frozenset(game.all_infoset_keys())
        if keys != expected:
            missing = sorted(expected - keys)
            extra = sorted(keys - expected)
            raise ValueError(
                f"profile must cover all 48 infosets exactly "
                f"(missing {missing[:3]}..., extra {extra[:3]}...)"
            )
        for key, p in self.aggressive.items():
            if not 0 <= p <= 1:
                raise ValueError(f"probability {p!r} at {key} outside [0, 1]")

    def __getitem__(self, key: InfoSetKey) -> Probability:
        return self.aggressive[key]

    def replace(self, key: InfoSetKey, p: Probability) -> "StrategyProfile":
        """Copy of this profile with one entry overridden."""
        updated = dict(self.aggressive)
        updated[key] = p
        return StrategyProfile(updated)

    def seat_keys(self, seat: int) -> tuple[InfoSetKey, ...]:
        return tuple(k for k in game.all_infoset_keys() if k.seat == seat)


def aggressive_probability(profile: StrategyProfile, key: InfoSetKey) -> Probability:
    """Probability of B (no bet outstanding) or C (facing a bet) at `key`."""
    return profile.aggressive[key]


def uniform_profile() -> StrategyProfile:
    return StrategyProfile({k: _F(1, 2) for k in game.all_infoset_keys()})


def constant_profile(p: Probability) -> StrategyProfile:
    return StrategyProfile({k: p for k in game.all_infoset_keys()})


def _dominance_value(card: str, situation: int) -> Fraction:
    # Situations 2-4 all face a bet, so the decision is call vs fold.
    if card == "J":
        return _F(0)
    if card == "A":
        return _F(1)
    if card == "Q" and situation == 4:
        return _F(0)
    raise AssertionError(
        f"({card}, situation {situation}) is tabled, not dominance-filled"
    )


def complete_profile(table: Mapping[tuple[int, int, int], Fraction]) -> StrategyProfile:
    """Extend a 27-entry parameter table to a full 48-infoset profile.

    Tabled values are copied verbatim; the 21 absent entries (per seat:
    J in situations 2-4, Q in situation 4, A in situations 2-4) take
    their strictly dominant action.
    """
    if set(table) != set(TABLED_ENTRIES):
        raise ValueError(
            "parameter table must contain exactly the 27 tabled entries"
        )
    for entry, p in table.items():
        if not 0 <= p <= 1:
            raise ValueError(f"table value {p!r} at {entry} outside [0, 1]")
    tabled = set(TABLED_ENTRIES)
    aggressive = {}
    for key in game.all_infoset_keys():
        entry = (key.seat, CARD_INDEX[key.card], key.situation)
        if entry in tabled:
            aggressive[key] = _F(table[entry])
        else:
            aggressive[key] = _dominance_value(key.card, key.situation)
    return StrategyProfile(aggressive)


def dominance_filled_keys() -> tuple[InfoSetKey, ...]:
    """The 21 infosets whose probabilities come from dominance, not tables."""
    tabled = set(TABLED_ENTRIES)
    return tuple(
        k for k in game.all_infoset_keys()
        if (k.seat, CARD_INDEX[k.card], k.situation) not in tabled
    )


def nash_profile(variant: str) -> StrategyProfile:
    """Completed profile for the LB or UB equilibrium variant."""
    return complete_profile(load_table(variant))


class ProfileFormatError(ValueError):
    """Malformed strategy-profile text; carries the offending line number."""

    def __init__(self, lineno: int | None, message: str):
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(f"{where}{message}")


def _format_probability(p: Probability) -> str:
    if isinstance(p, Fraction):
        return str(p)  # "0", "1", "1/2", "7/8"
    return repr(float(p))  # shortest decimal that round-trips


def _parse_probability(text: str, lineno: int) -> Probability:
    try:
        if "/" in text:
            value: Probability = Fraction(text)
        elif "." in text or "e" in text or "E" in text:
            value = float(text)
        else:
            value = Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ProfileFormatError(lineno, f"bad probability {text!r}: {exc}")
    if not 0 <= value <= 1:
        raise ProfileFormatError(lineno, f"probability {text} outside [0, 1]")
    return value


def serialize_profile(profile: StrategyProfile, header: str = "") -> str:
    """Render a profile as text, one "seat card situation probability"
    line per infoset, sorted by (seat, card index, situation)."""
    lines = []
    if header:
        lines.extend(f"# {line}" for line in header.splitlines())
    for key in game.all_infoset_keys():
        p = profile.aggressive[key]
        lines.append(f"{key.seat} {key.card} {key.situation} {_format_probability(p)}")
    return "\n".join(lines) + "\n"


def parse_profile(text: str) -> StrategyProfile:
    """Inverse of `serialize_profile`; exact round trip for both fraction
    and float probabilities. Rejects missing, duplicate, or malformed
    entries with the line number."""
    aggressive: dict[InfoSetKey, Probability] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ProfileFormatError(
                lineno, f"expected 'seat card situation probability', got {raw!r}"
            )
        seat_s, card, sit_s, prob_s = parts
        if card not in CARD_INDEX:
            raise ProfileFormatError(lineno, f"unknown card {card!r}")
        try:
            seat, sit = int(seat_s), int(sit_s)
        except ValueError:
            raise ProfileFormatError(lineno, f"non-integer seat/situation in {raw!r}")
        if seat not in game.SEATS or sit not in (1, 2, 3, 4):
            raise ProfileFormatError(lineno, f"seat/situation out of range in {raw!r}")
        key = InfoSetKey(seat, card, sit)
        if key in aggressive:
            raise ProfileFormatError(lineno, f"duplicate entry for {key}")
        aggressive[key] = _parse_probability(prob_s, lineno)
    missing = set(game.all_infoset_keys()) - set(aggressive)
    if missing:
        raise ProfileFormatError(
            None, f"{len(missing)} infosets missing, e.g. {sorted(missing)[0]}"
        )
    return StrategyProfile(aggressive)
