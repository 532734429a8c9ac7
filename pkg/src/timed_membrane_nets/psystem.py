"""Timed membrane systems and their maximal-parallel timed steps.

A step picks a maximal multiset of rule occurrences, removes their left hand
sides, deposits every produced object at its target membrane in a pending
buffer keyed by the rule's execution time, delivers the buffer slot that
reaches zero, shifts the remaining slots down by one and ticks the clock.
Rules with execution time 0 therefore deliver within the same step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import exploration
from .const import DEFAULT_STATE_BUDGET, ENVIRONMENT, MAX_COUNT, MAX_NESTING
from .exception import (
    ModelValidationError,
    NoSuchChild,
    NotApplicable,
    NotMaximal,
)
from .exploration import Policy, Trace, TraceGraph
from .maximal import is_maximal_vector, maximal_vectors, residual_after
from .multiset import Alphabet, Multiset, Occurrences, Symbol, check_name

logger = logging.getLogger(__name__)


class TargetKind(str, Enum):
    """Where a produced object goes."""

    HERE = "here"
    IN = "in"
    OUT = "out"


@dataclass(frozen=True, order=True)
class Target:
    """A target indication; ``child`` is set only for ``in``."""

    kind: TargetKind
    child: Optional[int] = None

    def __post_init__(self) -> None:
        """Check that only ``in`` targets name a membrane."""
        if self.kind is TargetKind.IN:
            if self.child is None or self.child < 1:
                raise ModelValidationError(
                    "An 'in' target needs a positive membrane label"
                )
        elif self.child is not None:
            raise ModelValidationError(
                f"A '{self.kind.value}' target cannot name a membrane"
            )

    @classmethod
    def here(cls) -> "Target":
        """Stay in the rule's membrane."""
        return cls(TargetKind.HERE)

    @classmethod
    def out(cls) -> "Target":
        """Go to the parent membrane (or leave the skin)."""
        return cls(TargetKind.OUT)

    @classmethod
    def into(cls, child: int) -> "Target":
        """Go to the child membrane ``child``."""
        return cls(TargetKind.IN, child)

    def __str__(self) -> str:
        """Render as ``here``, ``out`` or ``in j``."""
        if self.kind is TargetKind.IN:
            return f"in {self.child}"
        return self.kind.value


@dataclass(frozen=True)
class MembraneStructure:
    """A rooted tree of membranes given by ``(label, parent)`` pairs.

    The skin is the only membrane whose parent is None.
    """

    parents: tuple[tuple[int, Optional[int]], ...]

    def __post_init__(self) -> None:
        """Normalize the pairs and check the tree shape."""
        pairs = tuple(sorted(self.parents, key=lambda item: item[0]))
        object.__setattr__(self, "parents", pairs)
        labels = [label for label, _ in pairs]
        if not labels:
            raise ModelValidationError("A membrane structure needs a skin")
        if len(set(labels)) != len(labels):
            raise ModelValidationError("Membrane labels must be unique")
        for label in labels:
            if isinstance(label, bool) or not isinstance(label, int):
                raise ModelValidationError("Membrane labels must be integers")
            if not 1 <= label <= MAX_COUNT:
                raise ModelValidationError(
                    f"Membrane label {label} must be positive "
                    f"and at most {MAX_COUNT}"
                )
        parent_of = dict(pairs)
        roots = [label for label, parent in pairs if parent is None]
        if len(roots) != 1:
            raise ModelValidationError(
                f"Exactly one skin membrane is required, found {len(roots)}"
            )
        for label, parent in pairs:
            if parent is not None and parent not in parent_of:
                raise ModelValidationError(
                    f"Membrane {label} names unknown parent {parent}"
                )
        for label in labels:
            seen = {label}
            current = parent_of[label]
            while current is not None:
                if current in seen:
                    raise ModelValidationError(
                        f"Membrane {label} is part of a cycle"
                    )
                seen.add(current)
                current = parent_of[current]
            if len(seen) > MAX_NESTING:
                raise ModelValidationError(
                    f"Membrane {label} is nested deeper than {MAX_NESTING}"
                )

    @classmethod
    def from_parents(
        cls, parents: Mapping[int, Optional[int]]
    ) -> "MembraneStructure":
        """Build from a ``label -> parent`` mapping."""
        return cls(tuple(parents.items()))

    @classmethod
    def single(cls, label: int = 1) -> "MembraneStructure":
        """Return a structure made of the skin only."""
        return cls(((label, None),))

    @property
    def n(self) -> int:
        """Return the number of membranes."""
        return len(self.parents)

    @property
    def skin(self) -> int:
        """Return the skin label."""
        return next(label for label, parent in self.parents if parent is None)

    def parent_of(self, label: int) -> Optional[int]:
        """Return the parent label, or None for the skin."""
        for candidate, parent in self.parents:
            if candidate == label:
                return parent
        raise ModelValidationError(f"Unknown membrane {label}")

    def children(self, label: int) -> list[int]:
        """Return the child labels in ascending order."""
        return [child for child, parent in self.parents if parent == label]

    def __contains__(self, label: object) -> bool:
        """Membership by label."""
        return any(candidate == label for candidate, _ in self.parents)

    def is_child(self, child: int, of: int) -> bool:
        """Return True when ``child`` is a direct child of ``of``."""
        return child in self and self.parent_of(child) == of

    @property
    def labels(self) -> list[int]:
        """Return labels in depth-first order (children ascending)."""
        order: list[int] = []
        stack = [self.skin]
        while stack:
            label = stack.pop()
            order.append(label)
            stack.extend(reversed(self.children(label)))
        return order

    def __str__(self) -> str:
        """Render in bracket notation, e.g. ``[[ ]2]1``."""

        def render(label: int) -> str:
            inner = "".join(render(child) for child in self.children(label))
            return f"[{inner or ' '}]{label}"

        return render(self.skin)


Messages = Union[
    Mapping[Target, Multiset[Symbol]], Iterable[tuple[Target, Multiset[Symbol]]]
]


def merge_messages(
    messages: Messages,
) -> tuple[tuple[Target, Multiset[Symbol]], ...]:
    """Merge messages with the same target into one, dropping empty ones."""
    pairs = messages.items() if isinstance(messages, Mapping) else messages
    merged: dict[Target, Multiset[Symbol]] = {}
    for target, objects in pairs:
        merged[target] = merged.get(target, Multiset()) + objects
    return tuple(
        (target, merged[target]) for target in sorted(merged) if merged[target]
    )


@dataclass(frozen=True)
class Rule:
    """An evolution rule ``lhs -> rhs`` homed in one membrane.

    ``delay`` is the execution time: objects produced at tick k become
    available at the end of tick k + delay.
    """

    name: str
    home: int
    lhs: Multiset[Symbol]
    rhs: tuple[tuple[Target, Multiset[Symbol]], ...] = ()
    delay: int = 0

    def __post_init__(self) -> None:
        """Merge targets and check the rule shape."""
        object.__setattr__(self, "rhs", merge_messages(self.rhs))
        check_name(self.name, "rule")
        if not self.lhs:
            raise ModelValidationError(
                f"Rule '{self.name}' has an empty left hand side"
            )
        if isinstance(self.delay, bool) or self.delay < 0:
            raise ModelValidationError(
                f"Rule '{self.name}' has a negative execution time"
            )
        if self.delay > MAX_COUNT:
            raise ModelValidationError(
                f"Rule '{self.name}' has an execution time above {MAX_COUNT}"
            )

    @property
    def produced(self) -> Multiset[Symbol]:
        """Return all produced objects regardless of target."""
        total: Multiset[Symbol] = Multiset()
        for _, objects in self.rhs:
            total = total + objects
        return total

    def symbols(self) -> set[Symbol]:
        """Return every symbol mentioned by the rule."""
        found = set(self.lhs.support())
        for _, objects in self.rhs:
            found.update(objects.support())
        return found

    def describe_rhs(self) -> str:
        """Render the right hand side as ``(b, in 2)(a, here)`` or ``eps``."""
        if not self.rhs:
            return "eps"
        return " ".join(f"({objects}, {target})" for target, objects in self.rhs)

    def __str__(self) -> str:
        """Render as ``name: lhs -> rhs @delay``."""
        return f"{self.name}: {self.lhs} -> {self.describe_rhs()} @{self.delay}"


@dataclass(frozen=True)
class TimedPSystem:
    """A timed membrane system: alphabet, tree, initial contents, rules.

    Rules are kept in canonical order: by the depth-first position of their
    home membrane, then in the order given. Indices into ``rules`` are the
    rule ids used by step choices.
    """

    alphabet: Alphabet
    structure: MembraneStructure
    initial: Mapping[int, Multiset[Symbol]]
    rules: tuple[Rule, ...] = ()
    _demands: tuple[dict, ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self) -> None:
        """Validate the model and precompute rule demands."""
        labels = self.structure.labels
        for label in self.initial:
            if label not in self.structure:
                raise ModelValidationError(
                    f"Contents given for unknown membrane {label}"
                )
        initial = {
            label: self.initial.get(label, Multiset()) for label in labels
        }
        for label, objects in initial.items():
            self._check_symbols(objects.support(), f"membrane {label}")
        object.__setattr__(self, "initial", initial)

        position = {label: index for index, label in enumerate(labels)}
        names: set[str] = set()
        for rule in self.rules:
            if rule.name in names:
                raise ModelValidationError(f"Duplicate rule name '{rule.name}'")
            names.add(rule.name)
            if rule.home not in self.structure:
                raise ModelValidationError(
                    f"Rule '{rule.name}' lives in unknown membrane {rule.home}"
                )
            self._check_symbols(rule.symbols(), f"rule '{rule.name}'")
            for target, _ in rule.rhs:
                if target.kind is TargetKind.IN:
                    resolve_target(self.structure, rule.home, target)
        ordered = tuple(
            sorted(self.rules, key=lambda rule: position[rule.home])
        )
        object.__setattr__(self, "rules", ordered)
        demands = tuple(
            {(rule.home, symbol): count for symbol, count in rule.lhs.items()}
            for rule in ordered
        )
        object.__setattr__(self, "_demands", demands)

    def _check_symbols(self, symbols: Iterable[Symbol], where: str) -> None:
        for symbol in symbols:
            if not self.alphabet.owns(symbol):
                raise ModelValidationError(
                    f"Symbol '{symbol.name}' in {where} is not in the alphabet"
                )

    @property
    def max_delay(self) -> int:
        """Return the largest execution time over all rules (0 if none)."""
        return max((rule.delay for rule in self.rules), default=0)

    def rules_of(self, label: int) -> list[tuple[int, Rule]]:
        """Return ``(rule id, rule)`` pairs homed in membrane ``label``."""
        return [
            (index, rule)
            for index, rule in enumerate(self.rules)
            if rule.home == label
        ]

    def rule_index(self, name: str) -> int:
        """Return the id of the rule called ``name``."""
        for index, rule in enumerate(self.rules):
            if rule.name == name:
                return index
        raise KeyError(name)

    def rule_name(self, index: int) -> str:
        """Return the name of rule ``index``."""
        return self.rules[index].name

    @property
    def demands(self) -> tuple[dict, ...]:
        """Return per-rule demands keyed by ``(membrane, symbol)``."""
        return self._demands

    def with_delays(self, delay: int = 0) -> "TimedPSystem":
        """Return a copy where every rule has the given execution time."""
        return TimedPSystem(
            self.alphabet,
            self.structure,
            self.initial,
            tuple(
                Rule(rule.name, rule.home, rule.lhs, rule.rhs, delay)
                for rule in self.rules
            ),
        )


PendingBuffer = Mapping[int, Mapping[int, Multiset[Symbol]]]


@dataclass(frozen=True, eq=False)
class PConfiguration:
    """Contents per membrane, pending deliveries and the global clock.

    ``pending[i][j]`` holds objects that arrive in membrane ``i`` at the end
    of the step taken ``j`` ticks from now. ``environment`` accumulates
    objects sent out of the skin; it is accounting only and takes no part in
    state identity.
    """

    contents: Mapping[int, Multiset[Symbol]]
    pending: PendingBuffer = field(default_factory=dict)
    clock: int = 0
    environment: Multiset[Symbol] = field(default_factory=Multiset)

    def content_of(self, label: int) -> Multiset[Symbol]:
        """Return the contents of membrane ``label``."""
        return self.contents.get(label, Multiset())

    def pending_of(self, label: int) -> Mapping[int, Multiset[Symbol]]:
        """Return the pending slots of membrane ``label``."""
        return self.pending.get(label, {})

    @property
    def has_pending(self) -> bool:
        """Return True when some delivery is still on its way."""
        return any(
            objects for slots in self.pending.values() for objects in slots.values()
        )

    def key(self) -> tuple:
        """Return the canonical identity (contents, pending, clock)."""
        contents = tuple(
            (label, self.contents[label]) for label in sorted(self.contents)
        )
        pending = tuple(
            (label, delay, objects)
            for label in sorted(self.pending)
            for delay, objects in sorted(self.pending[label].items())
            if objects
        )
        return (contents, pending, self.clock)

    def visible_key(self) -> tuple:
        """Return the contents only, for projections that erase time."""
        return tuple(
            (label, self.contents[label]) for label in sorted(self.contents)
        )

    def __eq__(self, other: object) -> bool:
        """Equal when canonical keys agree."""
        if not isinstance(other, PConfiguration):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        """Hash the canonical key."""
        return hash(self.key())

    def describe(self) -> str:
        """Render as ``(a b, a^2 b, 0)`` with membranes in label order."""
        parts = [str(self.contents[label]) for label in sorted(self.contents)]
        return f"({', '.join(parts)}, {self.clock})"

    def describe_pending(self) -> str:
        """Render objects in transit as ``membrane:objects@remaining delay``."""
        return " ".join(
            f"{label}:{objects}@{delay}"
            for label in sorted(self.pending)
            for delay, objects in sorted(self.pending[label].items())
            if objects
        )

    def describe_full(self) -> str:
        """Render ``describe`` plus pending objects and the environment."""
        text = self.describe()
        if self.has_pending:
            text += f" pending {self.describe_pending()}"
        if self.environment:
            text += f" env {self.environment}"
        return text


class StepChoice(Occurrences):
    """A multiset of rule occurrences keyed by rule id."""

    __slots__ = ()

    def describe_for(self, system: TimedPSystem) -> str:
        """Render with rule names, e.g. ``{r1:1, r2:2}``."""
        return self.describe(system.rule_name)

    @classmethod
    def from_names(
        cls, system: TimedPSystem, counts: Mapping[str, int]
    ) -> "StepChoice":
        """Build from ``{rule name: count}`` as written by ``named``."""
        try:
            return cls((system.rule_index(name), n) for name, n in counts.items())
        except KeyError as exc:
            raise ModelValidationError(f"Unknown rule {exc}") from None


def initial_configuration(system: TimedPSystem) -> PConfiguration:
    """Return the configuration at clock 0 with nothing pending."""
    return PConfiguration(dict(system.initial), {}, 0, Multiset())


def resolve_target(
    structure: MembraneStructure, home: int, target: Target
) -> int:
    """Return the destination membrane of ``target`` for a rule in ``home``.

    ``out`` from the skin resolves to the ENVIRONMENT sink.
    """
    if target.kind is TargetKind.HERE:
        return home
    if target.kind is TargetKind.OUT:
        parent = structure.parent_of(home)
        return ENVIRONMENT if parent is None else parent
    assert target.child is not None
    if not structure.is_child(target.child, home):
        raise NoSuchChild(
            f"Membrane {target.child} is not a child of membrane {home}"
        )
    return target.child


def _available(c: PConfiguration) -> dict:
    return {
        (label, symbol): count
        for label, objects in c.contents.items()
        for symbol, count in objects.items()
    }


def lhs_of(
    system: TimedPSystem, choice: StepChoice, membrane: int
) -> Multiset[Symbol]:
    """Return the summed left hand sides of the choice homed in ``membrane``."""
    total: Multiset[Symbol] = Multiset()
    for index, times in choice.items():
        rule = system.rules[index]
        if rule.home == membrane:
            total = total + rule.lhs.scale(times)
    return total


def is_applicable(
    system: TimedPSystem, c: PConfiguration, choice: StepChoice
) -> bool:
    """Return True when every membrane holds its summed left hand sides."""
    return all(
        lhs_of(system, choice, label).leq(c.content_of(label))
        for label in system.structure.labels
    )


def is_maximal(
    system: TimedPSystem, c: PConfiguration, choice: StepChoice
) -> bool:
    """Return True when applicable and no further occurrence of any rule fits."""
    vector = choice.vector(len(system.rules))
    return is_maximal_vector(system.demands, _available(c), vector)


def enumerate_maximal(
    system: TimedPSystem, c: PConfiguration
) -> tuple[StepChoice, ...]:
    """Return all maximal applicable choices in canonical order.

    Args:
        system: The membrane system.
        c: The configuration to step from; pending objects play no part.

    Returns:
        Choices sorted by descending count vector. The empty choice is the
        single result when no rule is applicable.
    """
    vectors = maximal_vectors(system.demands, _available(c))
    return tuple(StepChoice.from_vector(vector) for vector in vectors)


def apply_step(
    system: TimedPSystem,
    c: PConfiguration,
    choice: StepChoice,
    *,
    check: bool = True,
) -> PConfiguration:
    """Fire ``choice`` and advance the clock by one tick.

    Left hand sides leave their home membranes at once. Products of a rule
    with delay e wait e ticks in the buffer of their target membrane;
    products sent out of the skin reach the environment immediately.
    Buffers due this tick are delivered, the rest move one tick closer.

    Args:
        system: The membrane system.
        c: The configuration to step from.
        choice: Rule occurrences keyed by rule id.
        check: Verify that ``choice`` is applicable and maximal first.

    Returns:
        The successor configuration at ``c.clock + 1``.

    Raises:
        NotApplicable: Some membrane lacks the objects ``choice`` consumes.
        NotMaximal: Another rule occurrence would still fit.
    """
    if check:
        if not is_applicable(system, c, choice):
            raise NotApplicable(
                f"{choice.describe_for(system)} is not applicable at "
                f"{c.describe()}"
            )
        if not is_maximal(system, c, choice):
            raise NotMaximal(
                f"{choice.describe_for(system)} is not maximal at "
                f"{c.describe()}"
            )

    labels = system.structure.labels
    contents = {label: c.content_of(label) for label in labels}
    slots = {label: dict(c.pending_of(label)) for label in labels}
    environment = c.environment
    for index, times in choice.items():
        rule = system.rules[index]
        contents[rule.home] = contents[rule.home] - rule.lhs.scale(times)
        for target, objects in rule.rhs:
            destination = resolve_target(system.structure, rule.home, target)
            produced = objects.scale(times)
            if destination == ENVIRONMENT:
                environment = environment + produced
                continue
            slot = slots[destination]
            slot[rule.delay] = slot.get(rule.delay, Multiset()) + produced

    pending: dict[int, dict[int, Multiset[Symbol]]] = {}
    for label in labels:
        slot = slots[label]
        ready = slot.pop(0, None)
        if ready:
            contents[label] = contents[label] + ready
        shifted = {delay - 1: objects for delay, objects in slot.items() if objects}
        if shifted:
            pending[label] = shifted
    return PConfiguration(contents, pending, c.clock + 1, environment)


def is_halting(system: TimedPSystem, c: PConfiguration) -> bool:
    """Return True when only the empty step is maximal and nothing is pending."""
    if c.has_pending:
        return False
    return not any(
        residual_after(system.demands, _available(c), vector) is not None
        for vector in _single_occurrences(len(system.rules))
    )


def _single_occurrences(count: int) -> Iterable[tuple[int, ...]]:
    for index in range(count):
        vector = [0] * count
        vector[index] = 1
        yield tuple(vector)


class PSystemSemantics:
    """Exploration adapter for a timed membrane system."""

    def __init__(
        self, system: TimedPSystem, start: PConfiguration | None = None
    ) -> None:
        """Explore ``system`` from ``start`` (default: its initial state)."""
        self.system = system
        self.start = start or initial_configuration(system)

    def initial_state(self) -> PConfiguration:
        """Return the starting configuration."""
        return self.start

    def branches(self, state: PConfiguration) -> Sequence[StepChoice]:
        """Return the maximal choices of ``state``."""
        return enumerate_maximal(self.system, state)

    def successor(
        self, state: PConfiguration, choice: StepChoice
    ) -> PConfiguration:
        """Fire a choice produced by ``branches``."""
        return apply_step(self.system, state, choice, check=False)

    def state_key(self, state: PConfiguration) -> tuple:
        """Return the canonical key."""
        return state.key()

    def is_halting(self, state: PConfiguration) -> bool:
        """Return True at halting configurations."""
        return is_halting(self.system, state)


def run(
    system: TimedPSystem,
    steps: int,
    policy: Policy,
    budget: int = DEFAULT_STATE_BUDGET,
) -> Union[
    TraceGraph[PConfiguration, StepChoice], Trace[PConfiguration, StepChoice]
]:
    """Run the system for ``steps`` ticks under ``policy``."""
    logger.debug("Running %d steps with policy %s", steps, policy)
    return exploration.run(PSystemSemantics(system), steps, policy, budget)
