"""Serialization helpers for JSON documents.

These convert domain values into the pydantic documents of ``schemas`` and
back. Decoding validates names against the model the document belongs to.
"""

from __future__ import annotations

import hashlib
from typing import Union

from .exception import ModelValidationError
from .multiset import Alphabet, InternTable, Multiset
from .petri import PNState, TimedPetriNet, place_table, transition_table
from .psystem import (
    MembraneStructure,
    PConfiguration,
    Rule,
    Target,
    TargetKind,
    TimedPSystem,
)
from .schemas import (
    CountMap,
    MessageDocument,
    PConfigurationDocument,
    PetriNetDocument,
    PNStateDocument,
    PSystemDocument,
    RuleDocument,
)

Model = Union[TimedPSystem, TimedPetriNet]


def counts(objects: Multiset) -> CountMap:
    """Return ``{name: count}`` in handle order."""
    return {str(key): count for key, count in objects.items()}


def from_counts(table: InternTable, values: CountMap) -> Multiset:
    """Build a multiset over ``table`` from ``{name: count}``."""
    return Multiset((table[name], count) for name, count in values.items())


def _message(target: Target, objects: Multiset) -> MessageDocument:
    return MessageDocument(
        target=target.kind.value, child=target.child, objects=counts(objects)
    )


def psystem_to_document(system: TimedPSystem) -> PSystemDocument:
    """Convert a membrane system to its JSON document."""
    return PSystemDocument(
        alphabet=list(system.alphabet.names),
        structure=dict(system.structure.parents),
        initial={
            label: counts(objects) for label, objects in system.initial.items()
        },
        rules=[
            RuleDocument(
                name=rule.name,
                home=rule.home,
                lhs=counts(rule.lhs),
                rhs=[_message(target, objects) for target, objects in rule.rhs],
                delay=rule.delay,
            )
            for rule in system.rules
        ],
    )


def psystem_from_document(document: PSystemDocument) -> TimedPSystem:
    """Build a validated membrane system from its JSON document."""
    alphabet = Alphabet(document.alphabet)
    structure = MembraneStructure.from_parents(document.structure)
    rules = tuple(
        Rule(
            rule.name,
            rule.home,
            from_counts(alphabet, rule.lhs),
            tuple(
                (
                    Target(TargetKind(message.target), message.child),
                    from_counts(alphabet, message.objects),
                )
                for message in rule.rhs
            ),
            rule.delay,
        )
        for rule in document.rules
    )
    initial = {
        label: from_counts(alphabet, values)
        for label, values in document.initial.items()
    }
    return TimedPSystem(alphabet, structure, initial, rules)


def petri_to_document(net: TimedPetriNet) -> PetriNetDocument:
    """Convert a Petri net to its JSON document."""
    names = net.transitions.names
    return PetriNetDocument(
        places=list(net.places.names),
        transitions=list(names),
        weights_in={
            name: counts(net.weights_in[index])
            for index, name in enumerate(names)
        },
        weights_out={
            name: counts(net.weights_out[index])
            for index, name in enumerate(names)
            if net.weights_out[index]
        },
        locality=dict(zip(names, net.locality)),
        delay=dict(zip(names, net.delay)),
        initial_marking=counts(net.initial_marking),
    )


def petri_from_document(document: PetriNetDocument) -> TimedPetriNet:
    """Build a validated Petri net from its JSON document."""
    places = place_table(document.places)
    transitions = transition_table(document.transitions)
    for table in (
        document.weights_in,
        document.weights_out,
        document.locality,
        document.delay,
    ):
        unknown = set(table) - set(transitions.names)
        if unknown:
            raise ModelValidationError(
                f"Unknown transition '{sorted(unknown)[0]}'"
            )
    names = transitions.names
    return TimedPetriNet(
        places,
        transitions,
        tuple(from_counts(places, document.weights_in.get(n, {})) for n in names),
        tuple(from_counts(places, document.weights_out.get(n, {})) for n in names),
        tuple(document.locality.get(n, 0) for n in names),
        tuple(document.delay.get(n, 0) for n in names),
        from_counts(places, document.initial_marking),
    )


def model_to_document(model: Model) -> Union[PSystemDocument, PetriNetDocument]:
    """Convert either model kind."""
    if isinstance(model, TimedPSystem):
        return psystem_to_document(model)
    return petri_to_document(model)


def model_from_document(
    document: Union[PSystemDocument, PetriNetDocument],
) -> Model:
    """Build either model kind."""
    if isinstance(document, PSystemDocument):
        return psystem_from_document(document)
    return petri_from_document(document)


def model_hash(model: Model) -> str:
    """Return a stable digest of the model's canonical JSON document."""
    payload = model_to_document(model).model_dump_json().encode("utf-8")
    return hashlib.sha256(payload).hexdigest()[:16]


def configuration_to_document(c: PConfiguration) -> PConfigurationDocument:
    """Convert a membrane configuration to its JSON document."""
    return PConfigurationDocument(
        contents={label: counts(c.contents[label]) for label in sorted(c.contents)},
        pending={
            label: {
                delay: counts(objects)
                for delay, objects in sorted(slots.items())
                if objects
            }
            for label, slots in sorted(c.pending.items())
            if any(slots.values())
        },
        clock=c.clock,
        environment=counts(c.environment),
    )


def configuration_from_document(
    system: TimedPSystem, document: PConfigurationDocument
) -> PConfiguration:
    """Rebuild a configuration of ``system``.

    Raises:
        ModelValidationError: A membrane label or object name is not part
            of ``system``.
    """
    alphabet = system.alphabet
    labels = system.structure.labels
    for label in (*document.contents, *document.pending):
        if label not in labels:
            raise ModelValidationError(f"Unknown membrane {label} in state")
    contents = {label: Multiset() for label in labels}
    for label, values in document.contents.items():
        contents[label] = from_counts(alphabet, values)
    pending = {
        label: {
            delay: from_counts(alphabet, values)
            for delay, values in slots.items()
        }
        for label, slots in document.pending.items()
    }
    return PConfiguration(
        contents,
        pending,
        document.clock,
        from_counts(alphabet, document.environment),
    )


def pn_state_to_document(s: PNState) -> PNStateDocument:
    """Convert a net state to its JSON document; pending is per place."""
    pending: dict[str, dict[int, int]] = {}
    for delay, tokens in sorted(s.pending.items()):
        for place, count in tokens.items():
            pending.setdefault(place.name, {})[delay] = count
    return PNStateDocument(marking=counts(s.marking), pending=pending, gc=s.gc)


def pn_state_from_document(
    net: TimedPetriNet, document: PNStateDocument
) -> PNState:
    """Rebuild a state of ``net``."""
    slots: dict[int, list] = {}
    for name, per_delay in document.pending.items():
        place = net.places[name]
        for delay, count in per_delay.items():
            slots.setdefault(delay, []).append((place, count))
    pending = {delay: Multiset(pairs) for delay, pairs in slots.items()}
    return PNState(
        from_counts(net.places, document.marking),
        {delay: tokens for delay, tokens in pending.items() if tokens},
        document.gc,
    )


def state_to_document(
    state: Union[PConfiguration, PNState],
) -> Union[PConfigurationDocument, PNStateDocument]:
    """Convert either state kind."""
    if isinstance(state, PConfiguration):
        return configuration_to_document(state)
    return pn_state_to_document(state)
