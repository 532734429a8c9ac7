"""Seeded random instances and exhaustive small-instance sweeps.

Right hand sides never exceed their left hand side by more than
``max_growth`` objects (tokens), so with the default of 0 the number of
objects never grows and bounded exploration stays small.
"""

from __future__ import annotations

import itertools
import random
import string
from typing import Iterator, Union

from pydantic import Field, ValidationInfo, field_validator

from ..multiset import Alphabet, Multiset, Symbol
from ..petri import Place, TimedPetriNet, place_table, transition_table
from ..psystem import (
    MembraneStructure,
    Rule,
    Target,
    TimedPSystem,
)
from ..schemas import Document

Seed = Union[int, random.Random]


def _rng(seed: Seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


class PSystemGeneratorParams(Document):
    """Shape bounds of random membrane systems."""

    membranes: int = Field(2, ge=1, le=8)
    symbols: int = Field(3, ge=1, le=26)
    rules: int = Field(4, ge=0, le=16)
    max_lhs: int = Field(2, ge=1, le=6)
    max_rhs: int = Field(2, ge=0, le=6)
    max_delay: int = Field(3, ge=0, le=10)
    token_budget: int = Field(4, ge=0, le=32)
    max_growth: int = Field(0, ge=0, le=4)


class PetriGeneratorParams(Document):
    """Shape bounds of random Petri nets."""

    places: int = Field(4, ge=1, le=26)
    transitions: int = Field(3, ge=0, le=16)
    max_weight: int = Field(2, ge=1, le=4)
    max_arcs: int = Field(2, ge=1, le=6)
    max_delay: int = Field(3, ge=0, le=10)
    max_locality: int = Field(3, ge=0, le=16)
    token_budget: int = Field(8, ge=0, le=64)
    max_growth: int = Field(0, ge=0, le=4)

    @field_validator("max_arcs")
    def _arcs_fit(cls, value: int, info: ValidationInfo) -> int:
        places = info.data.get("places")
        if places is not None and value > places:
            return places
        return value


def _names(count: int) -> list[str]:
    return list(string.ascii_lowercase[:count])


def _random_multiset(
    rng: random.Random, pool: list, size: int
) -> Multiset:
    return Multiset.of(*(rng.choice(pool) for _ in range(size)))


def random_psystem(
    seed: Seed, params: PSystemGeneratorParams | None = None
) -> TimedPSystem:
    """Return a random timed membrane system.

    Membrane ``i > 1`` hangs below a random smaller label, so every ``in``
    target names a real child.
    """
    params = params or PSystemGeneratorParams()
    rng = _rng(seed)
    parents: dict[int, int | None] = {1: None}
    for label in range(2, params.membranes + 1):
        parents[label] = rng.randint(1, label - 1)
    structure = MembraneStructure.from_parents(parents)
    alphabet = Alphabet(_names(params.symbols))
    symbols: list[Symbol] = list(alphabet)
    labels = structure.labels

    rules = []
    for index in range(params.rules):
        home = rng.choice(labels)
        lhs_size = rng.randint(1, params.max_lhs)
        rhs_size = rng.randint(
            0, min(params.max_rhs, lhs_size + params.max_growth)
        )
        targets = [Target.here(), Target.out()] + [
            Target.into(child) for child in structure.children(home)
        ]
        rhs = [
            (rng.choice(targets), Multiset.of(rng.choice(symbols)))
            for _ in range(rhs_size)
        ]
        rules.append(
            Rule(
                f"r{index + 1}",
                home,
                _random_multiset(rng, symbols, lhs_size),
                tuple(rhs),
                rng.randint(0, params.max_delay),
            )
        )

    initial: dict[int, Multiset[Symbol]] = {label: Multiset() for label in labels}
    for _ in range(rng.randint(0, params.token_budget)):
        label = rng.choice(labels)
        initial[label] = initial[label] + Multiset.of(rng.choice(symbols))
    return TimedPSystem(alphabet, structure, initial, tuple(rules))


def random_petri(
    seed: Seed, params: PetriGeneratorParams | None = None
) -> TimedPetriNet:
    """Return a random timed Petri net; every transition has a preset."""
    params = params or PetriGeneratorParams()
    rng = _rng(seed)
    places = place_table(f"p{index}" for index in range(params.places))
    transitions = transition_table(
        f"t{index}" for index in range(params.transitions)
    )
    pool: list[Place] = list(places)

    weights_in = []
    weights_out = []
    for _ in transitions:
        inputs = rng.sample(pool, rng.randint(1, params.max_arcs))
        pre = Multiset(
            (place, rng.randint(1, params.max_weight)) for place in inputs
        )
        limit = pre.size + params.max_growth
        post: Multiset[Place] = Multiset()
        for place in rng.sample(pool, rng.randint(0, params.max_arcs)):
            room = limit - post.size
            if room <= 0:
                break
            post = post + Multiset(
                [(place, rng.randint(1, min(params.max_weight, room)))]
            )
        weights_in.append(pre)
        weights_out.append(post)

    marking = _random_multiset(
        rng, pool, rng.randint(0, params.token_budget)
    )
    return TimedPetriNet(
        places,
        transitions,
        tuple(weights_in),
        tuple(weights_out),
        tuple(rng.randint(0, params.max_locality) for _ in transitions),
        tuple(rng.randint(0, params.max_delay) for _ in transitions),
        marking,
    )


def _contents(symbols: list[Symbol], total: int) -> Iterator[Multiset[Symbol]]:
    for size in range(total + 1):
        for picked in itertools.combinations_with_replacement(symbols, size):
            yield Multiset.of(*picked)


def sweep_psystems(
    max_membranes: int = 2,
    symbols: int = 2,
    max_rules: int = 3,
    max_delay: int = 2,
    max_tokens: int = 4,
) -> Iterator[TimedPSystem]:
    """Yield every small system with single-object rules.

    Left hand sides, homes and initial contents range exhaustively; the
    right hand side of a rule is fixed to the next symbol, sent in to the
    first child, out of a non-skin membrane, or kept here. Delays cycle
    through ``0..max_delay``.
    """
    alphabet = Alphabet(_names(symbols))
    pool: list[Symbol] = list(alphabet)
    for membranes in range(1, max_membranes + 1):
        parents = {
            label: None if label == 1 else label - 1
            for label in range(1, membranes + 1)
        }
        structure = MembraneStructure.from_parents(parents)
        labels = structure.labels
        shapes = [(symbol, home) for home in labels for symbol in pool]
        per_membrane = [list(_contents(pool, max_tokens)) for _ in labels]
        for count in range(max_rules + 1):
            for picked in itertools.combinations_with_replacement(shapes, count):
                rules = tuple(
                    _sweep_rule(index, symbol, home, structure, pool, max_delay)
                    for index, (symbol, home) in enumerate(picked)
                )
                for contents in itertools.product(*per_membrane):
                    if sum(objects.size for objects in contents) > max_tokens:
                        continue
                    yield TimedPSystem(
                        alphabet,
                        structure,
                        dict(zip(labels, contents)),
                        rules,
                    )


def _sweep_rule(
    index: int,
    symbol: Symbol,
    home: int,
    structure: MembraneStructure,
    pool: list[Symbol],
    max_delay: int,
) -> Rule:
    produced = pool[(pool.index(symbol) + 1) % len(pool)]
    children = structure.children(home)
    if children:
        target = Target.into(children[0])
    elif structure.parent_of(home) is not None:
        target = Target.out()
    else:
        target = Target.here()
    return Rule(
        f"r{index + 1}",
        home,
        Multiset.of(symbol),
        ((target, Multiset.of(produced)),),
        index % (max_delay + 1),
    )


def _right_hand_sides(
    symbol: Symbol, home: int, structure: MembraneStructure, pool: list[Symbol]
) -> list[tuple[tuple[Target, Multiset[Symbol]], ...]]:
    produced = pool[(pool.index(symbol) + 1) % len(pool)]
    one = Multiset.of(produced)
    sides: list[tuple[tuple[Target, Multiset[Symbol]], ...]] = [
        (),
        ((Target.here(), one),),
        ((Target.out(), one),),
    ]
    for child in structure.children(home)[:1]:
        sides.append(((Target.into(child), one),))
    sides.append(((Target.here(), Multiset.of(produced, symbol)),))
    sides.append(((Target.here(), Multiset.of(symbol)), (Target.out(), one)))
    return sides


def sweep_rule_shapes(
    max_rules: int = 3,
    symbols: int = 2,
    max_delay: int = 0,
    copies: int = 2,
) -> Iterator[TimedPSystem]:
    """Yield every system of up to ``max_rules`` rules from a shape menu.

    A rule consumes one object and produces nothing, one object here, out
    (to the environment from the skin) or into the child, two objects
    here, or one object here and one out. Delays range over
    ``0..max_delay`` independently per rule. Structures are a lone skin
    and a skin with one child; every membrane starts with ``copies`` of
    every symbol.
    """
    alphabet = Alphabet(_names(symbols))
    pool: list[Symbol] = list(alphabet)
    contents = Multiset((symbol, copies) for symbol in pool)
    for parents in ({1: None}, {1: None, 2: 1}):
        structure = MembraneStructure.from_parents(parents)
        initial = {label: contents for label in structure.labels}
        shapes = [
            (symbol, home, rhs, delay)
            for home in structure.labels
            for symbol in pool
            for rhs in _right_hand_sides(symbol, home, structure, pool)
            for delay in range(max_delay + 1)
        ]
        for count in range(max_rules + 1):
            for picked in itertools.combinations_with_replacement(shapes, count):
                rules = tuple(
                    Rule(f"r{index + 1}", home, Multiset.of(symbol), rhs, delay)
                    for index, (symbol, home, rhs, delay) in enumerate(picked)
                )
                yield TimedPSystem(alphabet, structure, initial, rules)


def sweep_petri_nets(
    max_transitions: int = 3, max_tokens: int = 4, max_delay: int = 2
) -> Iterator[TimedPetriNet]:
    """Yield every small two-place net over a fixed menu of presets."""
    places = place_table(["p", "q"])
    p, q = list(places)
    presets = [
        Multiset.of(p),
        Multiset.of(q),
        Multiset.of(p, p),
        Multiset.of(p, q),
    ]
    for count in range(max_transitions + 1):
        transitions = transition_table(f"t{index}" for index in range(count))
        for picked in itertools.combinations_with_replacement(presets, count):
            outputs = tuple(
                Multiset.of(q if pre.count(p) else p) for pre in picked
            )
            for tokens_p in range(max_tokens + 1):
                for tokens_q in range(max_tokens + 1 - tokens_p):
                    yield TimedPetriNet(
                        places,
                        transitions,
                        tuple(picked),
                        outputs,
                        tuple(1 for _ in picked),
                        tuple(index % (max_delay + 1) for index in range(count)),
                        Multiset([(p, tokens_p), (q, tokens_q)]),
                    )
