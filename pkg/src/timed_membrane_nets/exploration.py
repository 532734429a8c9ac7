"""Step policies, single traces and bounded reachability graphs.

The same exploration code drives membrane systems and Petri nets. Each
formalism supplies a small ``Semantics`` adapter: its initial state, the
canonically ordered branching set of a state, the successor function and a
canonical identity key.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Generic, Hashable, Iterator, Protocol, Sequence, TypeVar

import networkx as nx

from .const import DEFAULT_STATE_BUDGET
from .exception import StateBudgetExceeded

logger = logging.getLogger(__name__)

S = TypeVar("S")
C = TypeVar("C")


class Semantics(Protocol[S, C]):
    """What the explorer needs to know about a formalism."""

    def initial_state(self) -> S:
        """Return the initial state."""

    def branches(self, state: S) -> Sequence[C]:
        """Return all maximal choices at ``state`` in canonical order."""

    def successor(self, state: S, choice: C) -> S:
        """Return the state reached by firing ``choice``."""

    def state_key(self, state: S) -> Hashable:
        """Return the canonical identity of ``state``."""

    def is_halting(self, state: S) -> bool:
        """Return True when only the empty step remains and nothing is pending."""


class PolicyKind(str, Enum):
    """How a run resolves nondeterminism."""

    EXHAUSTIVE = "exhaustive"
    FIRST = "first"
    SEEDED = "seed"


@dataclass(frozen=True)
class Policy:
    """A step policy; seeded policies carry their seed."""

    kind: PolicyKind
    seed: int | None = None

    def __post_init__(self) -> None:
        """Require a seed exactly for the seeded policy."""
        if (self.kind is PolicyKind.SEEDED) != (self.seed is not None):
            raise ValueError("A seed is required for, and only for, seed=S")

    @classmethod
    def exhaustive(cls) -> "Policy":
        """Explore every maximal choice."""
        return cls(PolicyKind.EXHAUSTIVE)

    @classmethod
    def first(cls) -> "Policy":
        """Always take the first choice in canonical order."""
        return cls(PolicyKind.FIRST)

    @classmethod
    def seeded(cls, seed: int) -> "Policy":
        """Pick choices with ``random.Random(seed)``."""
        return cls(PolicyKind.SEEDED, seed)

    @classmethod
    def parse(cls, text: str) -> "Policy":
        """Parse ``exhaustive``, ``first`` or ``seed=S``."""
        value = text.strip().lower()
        if value == PolicyKind.EXHAUSTIVE.value:
            return cls.exhaustive()
        if value == PolicyKind.FIRST.value:
            return cls.first()
        if value.startswith("seed="):
            raw = value[len("seed=") :]
            try:
                return cls.seeded(int(raw))
            except ValueError as exc:
                raise ValueError(f"Invalid seed '{raw}'") from exc
        raise ValueError(
            f"Unknown policy '{text}'; use exhaustive, first or seed=S"
        )

    def __str__(self) -> str:
        """Render in the same form ``parse`` accepts."""
        if self.kind is PolicyKind.SEEDED:
            return f"seed={self.seed}"
        return self.kind.value


@dataclass
class Trace(Generic[S, C]):
    """One path: ``states[i]`` steps to ``states[i + 1]`` via ``choices[i]``."""

    states: list[S] = field(default_factory=list)
    choices: list[C] = field(default_factory=list)
    halted: bool = False

    @property
    def final(self) -> S:
        """Return the last state."""
        return self.states[-1]

    def __len__(self) -> int:
        """Return the number of steps taken."""
        return len(self.choices)


class TraceGraph(Generic[S, C]):
    """Bounded reachability graph: canonical states and maximal-step edges.

    Node identity is the semantics' canonical key. Each node stores its state
    and its depth (clock offset from the initial state); each edge stores the
    choice that produced it. Distinct choices reaching the same state are
    parallel edges.
    """

    def __init__(self) -> None:
        """Create an empty graph."""
        self.graph: nx.MultiDiGraph = nx.MultiDiGraph()
        self._layers: list[list[Hashable]] = []
        self.root: Hashable | None = None

    def add_state(self, key: Hashable, state: S, depth: int) -> bool:
        """Add a node; return False when the key is already present."""
        if key in self.graph:
            return False
        self.graph.add_node(key, state=state, depth=depth)
        while len(self._layers) <= depth:
            self._layers.append([])
        self._layers[depth].append(key)
        if self.root is None:
            self.root = key
        return True

    def add_edge(self, source: Hashable, choice: C, target: Hashable) -> None:
        """Add a step edge labelled with its choice."""
        self.graph.add_edge(source, target, choice=choice)

    def state(self, key: Hashable) -> S:
        """Return the state stored at ``key``."""
        return self.graph.nodes[key]["state"]

    def depth(self, key: Hashable) -> int:
        """Return the depth of ``key``."""
        return self.graph.nodes[key]["depth"]

    @property
    def max_depth(self) -> int:
        """Return the deepest populated layer."""
        return len(self._layers) - 1

    def keys_at(self, depth: int) -> list[Hashable]:
        """Return node keys at ``depth`` in discovery order."""
        if depth >= len(self._layers):
            return []
        return list(self._layers[depth])

    def states_at(self, depth: int) -> list[S]:
        """Return states at ``depth`` in discovery order."""
        return [self.state(key) for key in self.keys_at(depth)]

    def successors(self, key: Hashable) -> list[tuple[C, Hashable]]:
        """Return ``(choice, target)`` pairs leaving ``key``."""
        return [
            (data["choice"], target)
            for _, target, data in self.graph.out_edges(key, data=True)
        ]

    def path_to(self, key: Hashable) -> list[C]:
        """Return the choices along a path from the root to ``key``.

        Every path to a node has its depth as length; between two nodes the
        smallest parallel choice is taken.
        """
        nodes = nx.shortest_path(self.graph, self.root, key)
        return [
            min(data["choice"] for data in self.graph[source][target].values())
            for source, target in zip(nodes, nodes[1:])
        ]

    def edges(self) -> Iterator[tuple[Hashable, C, Hashable]]:
        """Iterate ``(source, choice, target)`` triples."""
        for source, target, data in self.graph.edges(data=True):
            yield source, data["choice"], target

    @property
    def node_count(self) -> int:
        """Return the number of states."""
        return self.graph.number_of_nodes()

    @property
    def edge_count(self) -> int:
        """Return the number of step edges."""
        return self.graph.number_of_edges()


def explore_graph(
    semantics: Semantics[S, C],
    steps: int,
    budget: int = DEFAULT_STATE_BUDGET,
) -> TraceGraph[S, C]:
    """Build the reachability graph up to ``steps`` maximal steps.

    Raises StateBudgetExceeded once more than ``budget`` nodes exist.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    graph: TraceGraph[S, C] = TraceGraph()
    initial = semantics.initial_state()
    graph.add_state(semantics.state_key(initial), initial, 0)
    frontier: deque[Hashable] = deque(graph.keys_at(0))
    for depth in range(steps):
        logger.debug("Expanding depth %d, frontier %d", depth, len(frontier))
        next_frontier: deque[Hashable] = deque()
        while frontier:
            key = frontier.popleft()
            state = graph.state(key)
            for choice in semantics.branches(state):
                successor = semantics.successor(state, choice)
                target = semantics.state_key(successor)
                if graph.add_state(target, successor, depth + 1):
                    if graph.node_count > budget:
                        raise StateBudgetExceeded(budget, depth + 1)
                    next_frontier.append(target)
                graph.add_edge(key, choice, target)
        frontier = next_frontier
    logger.debug(
        "Explored %d states and %d steps", graph.node_count, graph.edge_count
    )
    return graph


def run_trace(
    semantics: Semantics[S, C], steps: int, policy: Policy
) -> Trace[S, C]:
    """Follow one path of ``steps`` maximal steps chosen by ``policy``."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if policy.kind is PolicyKind.EXHAUSTIVE:
        raise ValueError("run_trace needs the first or a seeded policy")
    rng = random.Random(policy.seed)
    state = semantics.initial_state()
    trace: Trace[S, C] = Trace(states=[state])
    for _ in range(steps):
        options = semantics.branches(state)
        if policy.kind is PolicyKind.FIRST:
            choice = options[0]
        else:
            choice = options[rng.randrange(len(options))]
        state = semantics.successor(state, choice)
        trace.states.append(state)
        trace.choices.append(choice)
    trace.halted = semantics.is_halting(state)
    return trace


def run(
    semantics: Semantics[S, C],
    steps: int,
    policy: Policy,
    budget: int = DEFAULT_STATE_BUDGET,
) -> TraceGraph[S, C] | Trace[S, C]:
    """Run under ``policy``: a graph when exhaustive, otherwise one trace."""
    if policy.kind is PolicyKind.EXHAUSTIVE:
        return explore_graph(semantics, steps, budget)
    return run_trace(semantics, steps, policy)
