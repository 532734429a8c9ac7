"""Timed Petri nets with localities and their max-enabled step firing.

Transitions carry a locality label and a delay. A step fires a maximal
enabled multiset of transitions: their input tokens are removed at once and
their output tokens travel for ``delay`` ticks before reaching the marking.
Localities are structural only; they never restrict firing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import exploration
from .const import DEFAULT_STATE_BUDGET, MAX_COUNT
from .exception import ModelValidationError, NotEnabled, NotMaximal
from .exploration import Policy, Trace, TraceGraph
from .maximal import is_maximal_vector, maximal_vectors, residual_after
from .multiset import InternTable, Multiset, Occurrences, Symbol

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True, order=True)
class Place(Symbol):
    """A place handle."""


@dataclass(frozen=True, slots=True, order=True)
class Transition(Symbol):
    """A transition handle."""


def place_table(names: Iterable[str]) -> InternTable[Place]:
    """Intern place names."""
    return InternTable(names, factory=Place, what="place")


def transition_table(names: Iterable[str]) -> InternTable[Transition]:
    """Intern transition names."""
    return InternTable(names, factory=Transition, what="transition")


@dataclass(frozen=True)
class TimedPetriNet:
    """A timed Petri net with localities.

    ``weights_in[t]`` is the preset of transition id ``t`` (place -> weight),
    ``weights_out[t]`` its postset. ``locality`` and ``delay`` are indexed by
    transition id as well. Every transition needs a non-empty preset.
    """

    places: InternTable[Place]
    transitions: InternTable[Transition]
    weights_in: tuple[Multiset[Place], ...]
    weights_out: tuple[Multiset[Place], ...]
    locality: tuple[int, ...]
    delay: tuple[int, ...]
    initial_marking: Multiset[Place] = field(default_factory=Multiset)
    _demands: tuple[dict, ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self) -> None:
        """Validate the net and precompute transition demands."""
        count = len(self.transitions)
        for what, column in (
            ("input weights", self.weights_in),
            ("output weights", self.weights_out),
            ("localities", self.locality),
            ("delays", self.delay),
        ):
            if len(column) != count:
                raise ModelValidationError(
                    f"Expected {count} {what}, got {len(column)}"
                )
        shared = set(self.places.names) & set(self.transitions.names)
        if shared:
            raise ModelValidationError(
                "Places and transitions must be disjoint: "
                + ", ".join(sorted(shared))
            )
        for transition in self.transitions:
            index = transition.id
            if not self.weights_in[index]:
                raise ModelValidationError(
                    f"Transition '{transition.name}' has an empty preset"
                )
            for label, value in (
                ("locality", self.locality[index]),
                ("delay", self.delay[index]),
            ):
                if isinstance(value, bool) or not 0 <= value <= MAX_COUNT:
                    raise ModelValidationError(
                        f"Transition '{transition.name}' has a {label} "
                        f"outside 0..{MAX_COUNT}"
                    )
            for weights in (self.weights_in[index], self.weights_out[index]):
                self._check_places(weights.support(), transition.name)
        self._check_places(self.initial_marking.support(), "the marking")
        demands = tuple(weights.as_dict() for weights in self.weights_in)
        object.__setattr__(self, "_demands", demands)

    def _check_places(self, places: Iterable[Place], where: str) -> None:
        for place in places:
            if not self.places.owns(place):
                raise ModelValidationError(
                    f"Place '{place.name}' used by {where} is not declared"
                )

    @classmethod
    def build(
        cls,
        places: Sequence[str],
        transitions: Sequence[str],
        *,
        pre: Mapping[str, Mapping[str, int]],
        post: Mapping[str, Mapping[str, int]] | None = None,
        locality: Mapping[str, int] | None = None,
        delay: Mapping[str, int] | None = None,
        marking: Mapping[str, int] | None = None,
    ) -> "TimedPetriNet":
        """Build a net from names; ``pre``/``post`` map transition to place weights."""
        post = post or {}
        locality = locality or {}
        delay = delay or {}
        place_handles = place_table(places)
        transition_handles = transition_table(transitions)
        for table in (pre, post, locality, delay):
            unknown = set(table) - set(transition_handles.names)
            if unknown:
                raise ModelValidationError(
                    f"Unknown transition '{sorted(unknown)[0]}'"
                )

        def weights(table: Mapping[str, Mapping[str, int]], name: str):
            return Multiset(
                (place_handles[place], count)
                for place, count in table.get(name, {}).items()
            )

        return cls(
            place_handles,
            transition_handles,
            tuple(weights(pre, t.name) for t in transition_handles),
            tuple(weights(post, t.name) for t in transition_handles),
            tuple(locality.get(t.name, 0) for t in transition_handles),
            tuple(delay.get(t.name, 0) for t in transition_handles),
            Multiset(
                (place_handles[place], count)
                for place, count in (marking or {}).items()
            ),
        )

    def place(self, name: str) -> Place:
        """Return the place called ``name``."""
        return self.places[name]

    def transition(self, name: str) -> Transition:
        """Return the transition called ``name``."""
        return self.transitions[name]

    def weight(
        self, source: Union[Place, Transition], target: Union[Place, Transition]
    ) -> int:
        """Return W(source, target); 0 when there is no arc."""
        if isinstance(source, Place) and isinstance(target, Transition):
            return self.weights_in[target.id].count(source)
        if isinstance(source, Transition) and isinstance(target, Place):
            return self.weights_out[source.id].count(target)
        raise ModelValidationError(
            "An arc joins a place and a transition, in either direction"
        )

    def arcs(self) -> list[tuple[Symbol, Symbol, int]]:
        """Return every arc ``(source, target, weight)`` in transition order."""
        found: list[tuple[Symbol, Symbol, int]] = []
        for transition in self.transitions:
            for place, weight in self.weights_in[transition.id].items():
                found.append((place, transition, weight))
            for place, weight in self.weights_out[transition.id].items():
                found.append((transition, place, weight))
        return found

    @property
    def max_delay(self) -> int:
        """Return the largest transition delay (0 without transitions)."""
        return max(self.delay, default=0)

    @property
    def demands(self) -> tuple[dict, ...]:
        """Return per-transition input demands keyed by place."""
        return self._demands

    def transition_name(self, index: int) -> str:
        """Return the name of transition ``index``."""
        return self.transitions.by_id(index).name

    def with_delays(self, delay: int = 0) -> "TimedPetriNet":
        """Return a copy where every transition has the given delay."""
        return TimedPetriNet(
            self.places,
            self.transitions,
            self.weights_in,
            self.weights_out,
            self.locality,
            tuple(delay for _ in self.delay),
            self.initial_marking,
        )


@dataclass(frozen=True, eq=False)
class PNState:
    """A marking, tokens in transit and the global clock ``gc``.

    ``pending[j]`` holds tokens that reach the marking at the end of the step
    taken ``j`` ticks from now.
    """

    marking: Multiset[Place]
    pending: Mapping[int, Multiset[Place]] = field(default_factory=dict)
    gc: int = 0

    @property
    def has_pending(self) -> bool:
        """Return True when some tokens are still in transit."""
        return any(self.pending.values())

    def in_transit(self) -> Multiset[Place]:
        """Return every token in transit regardless of remaining delay."""
        total: Multiset[Place] = Multiset()
        for tokens in self.pending.values():
            total = total + tokens
        return total

    def key(self) -> tuple:
        """Return the canonical identity (marking, pending, gc)."""
        pending = tuple(
            (delay, tokens)
            for delay, tokens in sorted(self.pending.items())
            if tokens
        )
        return (self.marking, pending, self.gc)

    def __eq__(self, other: object) -> bool:
        """Equal when canonical keys agree."""
        if not isinstance(other, PNState):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        """Hash the canonical key."""
        return hash(self.key())

    def describe(self, places: Iterable[Place]) -> str:
        """Render as ``a_1=1 a_2=0 gc=1`` over the given places."""
        counts = " ".join(
            f"{place.name}={self.marking.count(place)}" for place in places
        )
        return f"{counts} gc={self.gc}".strip()

    def describe_pending(self) -> str:
        """Render tokens in transit as ``place=count@remaining delay``."""
        return " ".join(
            f"{place.name}={count}@{delay}"
            for delay, tokens in sorted(self.pending.items())
            for place, count in tokens.items()
        )

    def describe_full(self, places: Iterable[Place]) -> str:
        """Render ``describe`` followed by the tokens in transit."""
        text = self.describe(places)
        if self.has_pending:
            text += f" pending {self.describe_pending()}"
        return text


class FiringChoice(Occurrences):
    """A multiset of transition occurrences keyed by transition id."""

    __slots__ = ()

    def describe_for(self, net: TimedPetriNet) -> str:
        """Render with transition names, e.g. ``{tr_r1_1:1, tr_r2_2:2}``."""
        return self.describe(net.transition_name)

    @classmethod
    def from_names(
        cls, net: TimedPetriNet, counts: Mapping[str, int]
    ) -> "FiringChoice":
        """Build from ``{transition name: count}`` as written by ``named``."""
        return cls((net.transitions[name].id, n) for name, n in counts.items())


def initial_state(net: TimedPetriNet) -> PNState:
    """Return the initial marking at gc 0."""
    return PNState(net.initial_marking, {}, 0)


def pre_of(net: TimedPetriNet, choice: FiringChoice, place: Place) -> int:
    """Return the weighted input demand of ``choice`` on ``place``."""
    return sum(
        times * net.weights_in[index].count(place)
        for index, times in choice.items()
    )


def _available(s: PNState) -> dict:
    return s.marking.as_dict()


def is_enabled(net: TimedPetriNet, s: PNState, choice: FiringChoice) -> bool:
    """Return True when every place holds the summed input demand."""
    vector = choice.vector(len(net.transitions))
    return residual_after(net.demands, _available(s), vector) is not None


def is_max_enabled(
    net: TimedPetriNet, s: PNState, choice: FiringChoice
) -> bool:
    """Return True when enabled and no further occurrence is enabled."""
    vector = choice.vector(len(net.transitions))
    return is_maximal_vector(net.demands, _available(s), vector)


def enumerate_max_enabled(
    net: TimedPetriNet, s: PNState
) -> tuple[FiringChoice, ...]:
    """Return all max-enabled choices in canonical order (the empty one if dead)."""
    vectors = maximal_vectors(net.demands, _available(s))
    return tuple(FiringChoice.from_vector(vector) for vector in vectors)


def fire(
    net: TimedPetriNet,
    s: PNState,
    choice: FiringChoice,
    *,
    check: bool = True,
) -> PNState:
    """Fire ``choice`` and advance ``gc`` by one.

    Args:
        net: The timed Petri net.
        s: The state to fire from.
        choice: Transition occurrences keyed by transition id.
        check: Verify that ``choice`` is enabled and maximal first.

    Returns:
        The next state. Tokens of zero-delay transitions and tokens due
        this tick are in its marking; the rest wait one tick less.

    Raises:
        NotEnabled: A place holds fewer tokens than ``choice`` consumes.
        NotMaximal: Another transition would still be enabled.
    """
    if check:
        if not is_enabled(net, s, choice):
            raise NotEnabled(
                f"{choice.describe_for(net)} is not enabled at "
                f"{s.describe(net.places)}"
            )
        if not is_max_enabled(net, s, choice):
            raise NotMaximal(
                f"{choice.describe_for(net)} is not maximal at "
                f"{s.describe(net.places)}"
            )

    marking = s.marking
    slots: dict[int, Multiset[Place]] = dict(s.pending)
    for index, times in choice.items():
        marking = marking - net.weights_in[index].scale(times)
        produced = net.weights_out[index].scale(times)
        if produced:
            delay = net.delay[index]
            slots[delay] = slots.get(delay, Multiset()) + produced
    ready = slots.pop(0, None)
    if ready:
        marking = marking + ready
    pending = {delay - 1: tokens for delay, tokens in slots.items() if tokens}
    return PNState(marking, pending, s.gc + 1)


def is_dead(net: TimedPetriNet, s: PNState) -> bool:
    """Return True when no transition is enabled and nothing is in transit."""
    if s.has_pending:
        return False
    available = _available(s)
    return not any(
        all(available.get(place, 0) >= need for place, need in demand.items())
        for demand in net.demands
    )


class PetriSemantics:
    """Exploration adapter for a timed Petri net."""

    def __init__(self, net: TimedPetriNet, start: Optional[PNState] = None):
        """Explore ``net`` from ``start`` (default: its initial state)."""
        self.net = net
        self.start = start or initial_state(net)

    def initial_state(self) -> PNState:
        """Return the starting state."""
        return self.start

    def branches(self, state: PNState) -> Sequence[FiringChoice]:
        """Return the max-enabled choices of ``state``."""
        return enumerate_max_enabled(self.net, state)

    def successor(self, state: PNState, choice: FiringChoice) -> PNState:
        """Fire a choice produced by ``branches``."""
        return fire(self.net, state, choice, check=False)

    def state_key(self, state: PNState) -> tuple:
        """Return the canonical key."""
        return state.key()

    def is_halting(self, state: PNState) -> bool:
        """Return True at dead states."""
        return is_dead(self.net, state)


def run(
    net: TimedPetriNet,
    steps: int,
    policy: Policy,
    budget: int = DEFAULT_STATE_BUDGET,
) -> Union[TraceGraph[PNState, FiringChoice], Trace[PNState, FiringChoice]]:
    """Run the net for ``steps`` ticks under ``policy``."""
    logger.debug("Running %d steps with policy %s", steps, policy)
    return exploration.run(PetriSemantics(net), steps, policy, budget)
