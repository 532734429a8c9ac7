"""Brute-force reference implementations.

These enumerate every count vector bounded by per-rule capacity and filter
by applicability and maximality, without the component decomposition or
pruning of ``maximal``. They are slow on purpose and refuse instances whose
vector space exceeds ``ORACLE_MAX_VECTORS``.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

from ..const import ENVIRONMENT, ORACLE_MAX_VECTORS
from ..exception import CapacityExceeded
from ..multiset import Multiset, Symbol
from ..petri import FiringChoice, Place, PNState, TimedPetriNet
from ..psystem import (
    PConfiguration,
    StepChoice,
    TimedPSystem,
    lhs_of,
    resolve_target,
)


def _vectors(capacities: Sequence[int]) -> itertools.product:
    total = math.prod(capacity + 1 for capacity in capacities)
    if total > ORACLE_MAX_VECTORS:
        raise CapacityExceeded(
            f"Oracle would enumerate {total} vectors, "
            f"the cap is {ORACLE_MAX_VECTORS}"
        )
    return itertools.product(*(range(capacity + 1) for capacity in capacities))


def oracle_maximal_psystem(
    system: TimedPSystem, c: PConfiguration
) -> set[StepChoice]:
    """Return every maximal applicable rule multiset of ``c``."""
    capacities = [
        c.content_of(rule.home).fits(rule.lhs) for rule in system.rules
    ]
    labels = system.structure.labels
    found: set[StepChoice] = set()
    for vector in _vectors(capacities):
        choice = StepChoice.from_vector(vector)
        residual = {}
        for label in labels:
            demand = lhs_of(system, choice, label)
            if not demand.leq(c.content_of(label)):
                break
            residual[label] = c.content_of(label) - demand
        else:
            if not any(
                rule.lhs.leq(residual[rule.home]) for rule in system.rules
            ):
                found.add(choice)
    return found


def oracle_maximal_petri(net: TimedPetriNet, s: PNState) -> set[FiringChoice]:
    """Return every max-enabled transition multiset of ``s``."""
    capacities = [s.marking.fits(weights) for weights in net.weights_in]
    found: set[FiringChoice] = set()
    for vector in _vectors(capacities):
        demand: Multiset[Place] = Multiset()
        for weights, times in zip(net.weights_in, vector):
            demand = demand + weights.scale(times)
        if not demand.leq(s.marking):
            continue
        residual = s.marking - demand
        if not any(weights.leq(residual) for weights in net.weights_in):
            found.add(FiringChoice.from_vector(vector))
    return found


def untimed_step_psystem(
    system: TimedPSystem, c: PConfiguration, choice: StepChoice
) -> PConfiguration:
    """Apply ``choice`` as a classic untimed step, ignoring execution times.

    Products land directly in their target membranes. The configuration must
    have nothing pending.
    """
    if c.has_pending:
        raise ValueError("The untimed step needs a configuration with no pending")
    consumed = {
        label: c.content_of(label) - lhs_of(system, choice, label)
        for label in system.structure.labels
    }
    produced: dict[int, Multiset[Symbol]] = {
        label: Multiset() for label in system.structure.labels
    }
    environment = c.environment
    for index, times in choice.items():
        rule = system.rules[index]
        for target, objects in rule.rhs:
            destination = resolve_target(system.structure, rule.home, target)
            if destination == ENVIRONMENT:
                environment = environment + objects.scale(times)
            else:
                produced[destination] = produced[destination] + objects.scale(
                    times
                )
    contents = {
        label: consumed[label] + produced[label] for label in consumed
    }
    return PConfiguration(contents, {}, c.clock + 1, environment)


def untimed_step_petri(
    net: TimedPetriNet, s: PNState, choice: FiringChoice
) -> PNState:
    """Fire ``choice`` as a classic untimed step, ignoring delays."""
    if s.has_pending:
        raise ValueError("The untimed step needs a state with no pending")
    marking = s.marking
    for index, times in choice.items():
        marking = marking - net.weights_in[index].scale(times)
    for index, times in choice.items():
        marking = marking + net.weights_out[index].scale(times)
    return PNState(marking, {}, s.gc + 1)
