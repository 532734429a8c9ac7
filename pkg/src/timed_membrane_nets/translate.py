"""Constructive translations between the two formalisms.

- ``detime_psystem``: timed membrane system -> untimed one whose staged
  objects count down the execution time.
- ``detime_petri``: timed Petri net -> untimed one whose delay chains carry
  tokens in transit.
- ``psystem_to_petri``: timed membrane system -> timed Petri net with one
  place per (object, membrane) and one transition per rule.

Every translation returns a result object keeping the correspondence so
states and choices can be mapped between both sides.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Union

from .const import ENVIRONMENT
from .exception import TimedNetsError
from .multiset import Multiset, Symbol
from .petri import (
    FiringChoice,
    Place,
    PNState,
    TimedPetriNet,
    Transition,
    place_table,
    transition_table,
)
from .psystem import (
    PConfiguration,
    Rule,
    StepChoice,
    Target,
    TimedPSystem,
    resolve_target,
)
from .schemas import (
    ChainPlaceDocument,
    ChainTransitionDocument,
    DetimedNetMap,
    DetimedPSystemMap,
    PlaceOrigin,
    SizesDocument,
    StagedSymbolDocument,
    TransitionOrigin,
    TranslationMap,
)

logger = logging.getLogger(__name__)


def _fresh(wanted: str, taken: set[str]) -> str:
    name = wanted
    while name in taken:
        name += "_"
    taken.add(name)
    return name


# Detiming of membrane systems


@dataclass(frozen=True)
class DetimedPSystem:
    """An untimed membrane system plus the staged symbols it introduced.

    The alphabet extends the source alphabet, so original symbols keep their
    handles and projection only drops staged ones.
    """

    source: TimedPSystem
    system: TimedPSystem
    staged: dict[tuple[Symbol, int], Symbol]
    stagers: tuple[str, ...]

    @cached_property
    def staged_symbols(self) -> frozenset[Symbol]:
        """Return the symbols added by the construction."""
        return frozenset(self.staged.values())

    def project_symbol(self, symbol: Symbol) -> Optional[Symbol]:
        """Map a symbol back to the source alphabet; None for staged ones."""
        return None if symbol in self.staged_symbols else symbol

    def project(self, c: PConfiguration) -> tuple:
        """Return the contents of ``c`` restricted to the source alphabet."""
        return tuple(
            (
                label,
                c.contents[label].restrict(
                    lambda s: self.project_symbol(s) is not None
                ),
            )
            for label in sorted(c.contents)
        )

    @property
    def sizes(self) -> dict[str, int]:
        """Return the actual symbol and rule counts."""
        return {
            "symbols": len(self.system.alphabet),
            "rules": len(self.system.rules),
        }

    def to_document(self) -> DetimedPSystemMap:
        """Return the JSON correspondence document."""
        return DetimedPSystemMap(
            staged=[
                StagedSymbolDocument(name=symbol.name, base=base.name, stage=j)
                for (base, j), symbol in sorted(self.staged.items())
            ],
            stagers=list(self.stagers),
            sizes=SizesDocument(
                source={
                    "symbols": len(self.source.alphabet),
                    "rules": len(self.source.rules),
                },
                target=self.sizes,
            ),
        )


def _staging_depths(system: TimedPSystem) -> dict[Symbol, int]:
    """Return, per produced symbol, the largest delay it is produced with."""
    depths: dict[Symbol, int] = {}
    for rule in system.rules:
        if rule.delay == 0:
            continue
        for symbol in rule.produced.support():
            depths[symbol] = max(depths.get(symbol, 0), rule.delay)
    return depths


def detime_psystem(system: TimedPSystem) -> DetimedPSystem:
    """Replace execution times by staged objects ticking down each step.

    A rule with delay e > 0 produces ``a_{e-1}`` instead of ``a`` (same
    target). Every membrane receives the stagers ``a_j -> a_{j-1}`` and
    ``a_0 -> a`` for each staged symbol.

    Args:
        system: The timed membrane system; it is left unchanged.

    Returns:
        The untimed system with its source and the staged symbols, which
        ``DetimedPSystem.project`` erases again.
    """
    depths = _staging_depths(system)
    taken = set(system.alphabet.names)
    staged_names: dict[tuple[Symbol, int], str] = {}
    for symbol in system.alphabet:
        for stage in range(depths.get(symbol, 0)):
            staged_names[(symbol, stage)] = _fresh(
                f"{symbol.name}_{stage}", taken
            )
    alphabet = system.alphabet.extended(staged_names.values())
    staged = {key: alphabet[name] for key, name in staged_names.items()}

    rule_names = {rule.name for rule in system.rules}
    rules: list[Rule] = []
    for rule in system.rules:
        if rule.delay == 0:
            rules.append(rule)
            continue

        def stage(symbol: Symbol, e: int = rule.delay) -> Symbol:
            return staged[(symbol, e - 1)]

        rhs = tuple(
            (target, objects.map_keys(stage)) for target, objects in rule.rhs
        )
        rules.append(Rule(rule.name, rule.home, rule.lhs, rhs, 0))

    stagers: list[str] = []
    for label in system.structure.labels:
        for (base, j), symbol in staged.items():
            successor = base if j == 0 else staged[(base, j - 1)]
            name = _fresh(f"tick_{symbol.name}_{label}", rule_names)
            stagers.append(name)
            rules.append(
                Rule(
                    name,
                    label,
                    Multiset.of(symbol),
                    ((Target.here(), Multiset.of(successor)),),
                    0,
                )
            )
    result = TimedPSystem(
        alphabet, system.structure, system.initial, tuple(rules)
    )
    logger.info(
        "Detimed membrane system: %d -> %d symbols, %d -> %d rules",
        len(system.alphabet),
        len(alphabet),
        len(system.rules),
        len(result.rules),
    )
    return DetimedPSystem(system, result, staged, tuple(stagers))


# Detiming of Petri nets


@dataclass(frozen=True)
class DetimedNet:
    """An untimed net plus the delay chains it introduced.

    Place and transition tables extend the source tables, so original handles
    are preserved.
    """

    source: TimedPetriNet
    net: TimedPetriNet
    chain_places: dict[tuple[Place, Transition, int], Place]
    chain_transitions: dict[tuple[Transition, int], Transition]

    def project(self, s: PNState) -> Multiset[Place]:
        """Return the marking restricted to the source places."""
        original = set(self.source.places)
        return s.marking.restrict(lambda place: place in original)

    @property
    def sizes(self) -> dict[str, int]:
        """Return the actual place and transition counts."""
        return {
            "places": len(self.net.places),
            "transitions": len(self.net.transitions),
        }

    def to_document(self) -> DetimedNetMap:
        """Return the JSON correspondence document."""
        return DetimedNetMap(
            chain_places=[
                ChainPlaceDocument(
                    name=chain.name,
                    place=place.name,
                    transition=transition.name,
                    stage=j,
                )
                for (place, transition, j), chain in self.chain_places.items()
            ],
            chain_transitions=[
                ChainTransitionDocument(
                    name=chain.name, transition=transition.name, stage=j
                )
                for (transition, j), chain in self.chain_transitions.items()
            ],
            sizes=SizesDocument(
                source={
                    "places": len(self.source.places),
                    "transitions": len(self.source.transitions),
                },
                target=self.sizes,
            ),
        )


def detime_petri(net: TimedPetriNet) -> DetimedNet:
    """Replace delays by chains of places and unit transitions.

    For a transition ``tr`` with delay D > 0 and outputs, each output place
    ``p`` gets chain places ``p_tr_{D-1} .. p_tr_0``; ``tr`` now feeds the
    top of the chains and shared transitions ``tr_j`` move every chain one
    stage down, ``tr_0`` finally feeding ``p``. All chain transitions keep
    the locality of ``tr``.

    Args:
        net: The timed Petri net.

    Returns:
        The untimed net and its chain places and transitions.
    """
    taken = set(net.places.names) | set(net.transitions.names)
    chain_place_names: dict[tuple[Place, Transition, int], str] = {}
    chain_transition_names: dict[tuple[Transition, int], str] = {}
    for transition in net.transitions:
        delay = net.delay[transition.id]
        outputs = net.weights_out[transition.id]
        if delay == 0 or not outputs:
            continue
        for place in outputs.support():
            for j in range(delay):
                chain_place_names[(place, transition, j)] = _fresh(
                    f"{place.name}_{transition.name}_{j}", taken
                )
        for j in range(delay):
            chain_transition_names[(transition, j)] = _fresh(
                f"{transition.name}_{j}", taken
            )

    places = net.places.extended(chain_place_names.values())
    transitions = net.transitions.extended(chain_transition_names.values())
    chain_places = {
        key: places[name] for key, name in chain_place_names.items()
    }
    chain_transitions = {
        key: transitions[name] for key, name in chain_transition_names.items()
    }

    weights_in = list(net.weights_in)
    weights_out = list(net.weights_out)
    locality = list(net.locality)
    for transition in net.transitions:
        delay = net.delay[transition.id]
        outputs = net.weights_out[transition.id]
        if delay == 0 or not outputs:
            continue

        def chain(j: int, tr: Transition = transition) -> Multiset[Place]:
            return net.weights_out[tr.id].map_keys(
                lambda place: chain_places[(place, tr, j)]
            )

        weights_out[transition.id] = chain(delay - 1)
        for j in range(delay):
            weights_in.append(chain(j))
            weights_out.append(outputs if j == 0 else chain(j - 1))
            locality.append(net.locality[transition.id])

    result = TimedPetriNet(
        places,
        transitions,
        tuple(weights_in),
        tuple(weights_out),
        tuple(locality),
        tuple(0 for _ in transitions),
        net.initial_marking,
    )
    logger.info(
        "Detimed Petri net: %d -> %d places, %d -> %d transitions",
        len(net.places),
        len(places),
        len(net.transitions),
        len(transitions),
    )
    return DetimedNet(net, result, chain_places, chain_transitions)


# Membrane system -> Petri net


@dataclass(frozen=True)
class TranslatedNet:
    """The Petri net of a membrane system with both correspondences.

    Transition ids equal rule ids, so step choices and firing choices share
    their index space.
    """

    source: TimedPSystem
    net: TimedPetriNet
    places: dict[tuple[Symbol, int], Place]

    def place_of(self, symbol: Symbol, membrane: int) -> Place:
        """Return the place of ``symbol`` in ``membrane``."""
        return self.places[(symbol, membrane)]

    def origin_of(self, place: Place) -> tuple[Symbol, int]:
        """Return the (symbol, membrane) pair of ``place``."""
        for key, candidate in self.places.items():
            if candidate == place:
                return key
        raise KeyError(place.name)

    def transition_of(self, rule_index: int) -> Transition:
        """Return the transition of rule ``rule_index``."""
        return self.net.transitions.by_id(rule_index)

    def _in_membrane(
        self, objects: Multiset[Symbol], membrane: int
    ) -> Multiset[Place]:
        return objects.map_keys(lambda symbol: self.places[(symbol, membrane)])

    def config_to_state(self, c: PConfiguration) -> PNState:
        """Map contents to the marking, pending to pending and clock to gc."""
        marking: Multiset[Place] = Multiset()
        for label, objects in c.contents.items():
            marking = marking + self._in_membrane(objects, label)
        pending: dict[int, Multiset[Place]] = {}
        for label, slots in c.pending.items():
            for delay, objects in slots.items():
                pending[delay] = pending.get(
                    delay, Multiset()
                ) + self._in_membrane(objects, label)
        return PNState(
            marking,
            {delay: tokens for delay, tokens in pending.items() if tokens},
            c.clock,
        )

    def choice_to_firing(self, choice: StepChoice) -> FiringChoice:
        """Map a rule multiset R to its transition multiset U_R."""
        return FiringChoice(choice.items())

    def firing_to_choice(self, firing: FiringChoice) -> StepChoice:
        """Map a transition multiset back to its rule multiset."""
        return StepChoice(firing.items())

    def to_document(self) -> TranslationMap:
        """Return the JSON correspondence document."""
        return TranslationMap(
            places=[
                PlaceOrigin(place=place.name, symbol=symbol.name, membrane=label)
                for (symbol, label), place in self.places.items()
            ],
            transitions=[
                TransitionOrigin(
                    transition=self.transition_of(index).name,
                    rule=rule.name,
                    membrane=rule.home,
                )
                for index, rule in enumerate(self.source.rules)
            ],
        )


def psystem_to_petri(system: TimedPSystem) -> TranslatedNet:
    """Build the timed Petri net of a membrane system.

    Places are (object, membrane) pairs, object-major with labels ascending.
    Each rule becomes a transition located in its home membrane with the
    rule's execution time as delay. Objects sent out of the skin have no
    place and are dropped.

    Args:
        system: The timed membrane system.

    Returns:
        The net with the place of every (object, membrane) pair; it maps
        configurations and steps onto net states and firings.
    """
    labels = sorted(system.structure.labels)
    taken: set[str] = set()
    place_names: dict[tuple[Symbol, int], str] = {}
    for symbol in system.alphabet:
        for label in labels:
            place_names[(symbol, label)] = _fresh(
                f"{symbol.name}_{label}", taken
            )
    transition_names = [
        _fresh(f"tr_{rule.name}_{rule.home}", taken) for rule in system.rules
    ]
    places = place_table(place_names.values())
    transitions = transition_table(transition_names)
    handles = {key: places[name] for key, name in place_names.items()}

    def located(objects: Multiset[Symbol], label: int) -> Multiset[Place]:
        return objects.map_keys(lambda symbol: handles[(symbol, label)])

    weights_in = []
    weights_out = []
    for rule in system.rules:
        weights_in.append(located(rule.lhs, rule.home))
        produced: Multiset[Place] = Multiset()
        for target, objects in rule.rhs:
            destination = resolve_target(system.structure, rule.home, target)
            if destination != ENVIRONMENT:
                produced = produced + located(objects, destination)
        weights_out.append(produced)

    marking: Multiset[Place] = Multiset()
    for label, objects in system.initial.items():
        marking = marking + located(objects, label)
    net = TimedPetriNet(
        places,
        transitions,
        tuple(weights_in),
        tuple(weights_out),
        tuple(rule.home for rule in system.rules),
        tuple(rule.delay for rule in system.rules),
        marking,
    )
    logger.info(
        "Translated membrane system to a net with %d places, %d transitions",
        len(places),
        len(transitions),
    )
    return TranslatedNet(system, net, handles)


# Size accounting


def detimed_sizes(model: Union[TimedPSystem, TimedPetriNet]) -> dict[str, int]:
    """Return the element counts the detiming construction must produce."""
    if isinstance(model, TimedPSystem):
        staged = sum(_staging_depths(model).values())
        return {
            "symbols": len(model.alphabet) + staged,
            "rules": len(model.rules) + model.structure.n * staged,
        }
    chain_places = 0
    chain_transitions = 0
    for transition in model.transitions:
        outputs = model.weights_out[transition.id]
        if not outputs:
            continue
        delay = model.delay[transition.id]
        chain_places += delay * len(outputs.support())
        chain_transitions += delay
    return {
        "places": len(model.places) + chain_places,
        "transitions": len(model.transitions) + chain_transitions,
    }


Translation = Union[DetimedPSystem, DetimedNet, TranslatedNet]

DIRECTIONS: dict[tuple[str, str], Callable[..., Translation]] = {
    ("tps", "ps"): detime_psystem,
    ("tpn", "pn"): detime_petri,
    ("tps", "tpn"): psystem_to_petri,
}


def get_translation(source: str, target: str) -> Callable[..., Translation]:
    """Return the translation for ``source -> target``."""
    translation = DIRECTIONS.get((source, target))
    if translation is None:
        supported = ", ".join(f"{a}->{b}" for a, b in DIRECTIONS)
        raise TimedNetsError(
            f"Unsupported translation {source}->{target}; use one of {supported}"
        )
    return translation


def translate(
    model: Union[TimedPSystem, TimedPetriNet], target: str
) -> Translation:
    """Translate ``model`` to ``target`` (``ps``, ``pn`` or ``tpn``).

    Raises:
        TimedNetsError: No translation leads from the model kind to
            ``target``.
    """
    source = "tps" if isinstance(model, TimedPSystem) else "tpn"
    return get_translation(source, target)(model)
