"""Bounded checks of the translation correspondences.

- ``check_prop1``: a membrane system and its detimed version reach the same
  visible contents at every depth.
- ``check_prop2``: a Petri net and its detimed version reach the same
  markings on the original places at every depth.
- ``check_prop3``: a membrane system and its Petri net move in lockstep,
  rule multisets matching transition multisets one to one and full states
  (pending and clocks included) corresponding after every step.
- ``check_untimed_inclusion``: with every delay set to 0 the timed step
  functions agree with the classic untimed step.

All checks explore up to a depth and a node budget; exceeding the budget
raises StateBudgetExceeded rather than passing. Failed verdicts carry a
counterexample that ``replay`` re-runs on ``witness_model``.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import Callable, Hashable, Iterable, Mapping, Sequence, Union

from ..const import DEFAULT_STATE_BUDGET
from ..exception import StateBudgetExceeded
from ..exploration import TraceGraph, explore_graph
from ..petri import (
    FiringChoice,
    PetriSemantics,
    PNState,
    TimedPetriNet,
    enumerate_max_enabled,
    fire,
    initial_state,
)
from ..psystem import (
    PConfiguration,
    PSystemSemantics,
    StepChoice,
    TimedPSystem,
    apply_step,
    enumerate_maximal,
    initial_configuration,
)
from ..serializers import Model, configuration_to_document, state_to_document
from ..translate import detime_petri, detime_psystem, psystem_to_petri
from .oracle import untimed_step_petri, untimed_step_psystem
from .verdict import Counterexample, Verdict

logger = logging.getLogger(__name__)

NameOf = Callable[[int], str]


def _render_contents(projection: tuple) -> str:
    return "(" + ", ".join(str(objects) for _, objects in projection) + ")"


def _trail(graph: TraceGraph, key: Hashable, name_of: NameOf) -> dict:
    return {
        "path": [choice.named(name_of) for choice in graph.path_to(key)],
        "state": state_to_document(graph.state(key)),
    }


def _first_key(
    graph: TraceGraph, depth: int, project: Callable, wanted: set
) -> Hashable:
    return next(
        key
        for key in graph.keys_at(depth)
        if project(graph.state(key)) in wanted
    )


def _compare_layers(
    check: str,
    reference: TraceGraph,
    candidate: TraceGraph,
    depth: int,
    project_reference: Callable[[object], Hashable],
    project_candidate: Callable[[object], Hashable],
    render: Callable[[Hashable], str],
    names: tuple[NameOf, NameOf],
) -> Verdict:
    explored = reference.node_count + candidate.node_count
    for k in range(depth + 1):
        expected = {project_reference(s) for s in reference.states_at(k)}
        actual = {project_candidate(s) for s in candidate.states_at(k)}
        if expected != actual:
            logger.info("%s fails at depth %d", check, k)
            missing, extra = expected - actual, actual - expected
            # Witness on the side that reaches the unmatched projection.
            if missing:
                key = _first_key(reference, k, project_reference, missing)
                side, trail = "source", _trail(reference, key, names[0])
            else:
                key = _first_key(candidate, k, project_candidate, extra)
                side, trail = "target", _trail(candidate, key, names[1])
            return Verdict.failed(
                check,
                depth,
                explored,
                Counterexample(
                    depth=k,
                    reason="projected state sets differ",
                    missing=sorted(render(p) for p in missing),
                    extra=sorted(render(p) for p in extra),
                    side=side,
                    **trail,
                ),
            )
    logger.info("%s holds up to depth %d (%d states)", check, depth, explored)
    return Verdict.passed(check, depth, explored)


def check_prop1(
    system: TimedPSystem, depth: int, budget: int = DEFAULT_STATE_BUDGET
) -> Verdict:
    """Compare visible contents of a system and its detimed version.

    Both systems are explored exhaustively. At every depth up to ``depth``
    the set of timed contents must equal the set of detimed contents with
    staged objects erased.

    Args:
        system: The timed membrane system.
        depth: Number of maximal steps to explore.
        budget: Node limit per reachability graph.

    Returns:
        The verdict; on failure its counterexample names the first depth
        whose projections differ.

    Raises:
        StateBudgetExceeded: A graph grew past ``budget`` nodes.
    """
    detimed = detime_psystem(system)
    timed_graph = explore_graph(PSystemSemantics(system), depth, budget)
    untimed_graph = explore_graph(
        PSystemSemantics(detimed.system), depth, budget
    )
    return _compare_layers(
        "prop1",
        timed_graph,
        untimed_graph,
        depth,
        lambda c: c.visible_key(),
        detimed.project,
        _render_contents,
        (system.rule_name, detimed.system.rule_name),
    )


def check_prop2(
    net: TimedPetriNet, depth: int, budget: int = DEFAULT_STATE_BUDGET
) -> Verdict:
    """Compare markings of a net and its detimed version on original places.

    Args:
        net: The timed Petri net.
        depth: Number of maximal steps to explore.
        budget: Node limit per reachability graph.

    Returns:
        The verdict of the layer-by-layer comparison.

    Raises:
        StateBudgetExceeded: A graph grew past ``budget`` nodes.
    """
    detimed = detime_petri(net)
    timed_graph = explore_graph(PetriSemantics(net), depth, budget)
    untimed_graph = explore_graph(PetriSemantics(detimed.net), depth, budget)
    return _compare_layers(
        "prop2",
        timed_graph,
        untimed_graph,
        depth,
        lambda s: s.marking,
        detimed.project,
        str,
        (net.transition_name, detimed.net.transition_name),
    )


def check_prop3(
    system: TimedPSystem, depth: int, budget: int = DEFAULT_STATE_BUDGET
) -> Verdict:
    """Explore a system and its Petri net in lockstep.

    Every reachable configuration is paired with the net state it
    translates to. At each pair the maximal steps must map one to one onto
    the max-enabled firings, and matched steps must lead to corresponding
    pairs again.

    Args:
        system: The timed membrane system.
        depth: Number of maximal steps to explore.
        budget: Limit on distinct configurations.

    Returns:
        The verdict. Counterexamples always live on the membrane system.

    Raises:
        StateBudgetExceeded: More than ``budget`` configurations were seen.
    """
    translated = psystem_to_petri(system)
    net = translated.net
    start = initial_configuration(system)
    pairs: deque[tuple[PConfiguration, PNState, int, tuple[StepChoice, ...]]]
    pairs = deque([(start, translated.config_to_state(start), 0, ())])
    seen = {start.key()}

    def failure(
        k: int,
        reason: str,
        c: PConfiguration,
        path: tuple[StepChoice, ...],
        **fields,
    ) -> Verdict:
        logger.info("prop3 fails at depth %d: %s", k, reason)
        return Verdict.failed(
            "prop3",
            depth,
            len(seen),
            Counterexample(
                depth=k,
                reason=reason,
                states=[c.describe_full()],
                path=[choice.named(system.rule_name) for choice in path],
                state=configuration_to_document(c),
                **fields,
            ),
        )

    while pairs:
        c, s, k, path = pairs.popleft()
        if translated.config_to_state(c) != s:
            return failure(
                k,
                "net state does not correspond",
                c,
                path,
                extra=[s.describe_full(net.places)],
            )
        if k == depth:
            continue
        rule_steps = enumerate_maximal(system, c)
        firings = enumerate_max_enabled(net, s)
        mapped = {translated.choice_to_firing(R): R for R in rule_steps}
        if len(mapped) != len(rule_steps) or set(mapped) != set(firings):
            return failure(
                k,
                "maximal steps are not in bijection",
                c,
                path,
                missing=sorted(
                    f.describe_for(net) for f in set(mapped) - set(firings)
                ),
                extra=sorted(
                    f.describe_for(net) for f in set(firings) - set(mapped)
                ),
            )
        for firing, rule_step in mapped.items():
            c_next = apply_step(system, c, rule_step, check=False)
            s_next = fire(net, s, firing, check=False)
            if translated.config_to_state(c_next) != s_next:
                return failure(
                    k,
                    "successors do not correspond",
                    c,
                    path,
                    choice=rule_step.describe_for(system),
                    step=rule_step.named(system.rule_name),
                    missing=[c_next.describe_full()],
                    extra=[s_next.describe_full(net.places)],
                )
            if c_next.key() not in seen:
                seen.add(c_next.key())
                if len(seen) > budget:
                    raise StateBudgetExceeded(budget, k + 1)
                pairs.append((c_next, s_next, k + 1, path + (rule_step,)))
    logger.info("prop3 holds up to depth %d (%d pairs)", depth, len(seen))
    return Verdict.passed("prop3", depth, len(seen))


def _edge_mismatch(
    check: str,
    graph: TraceGraph,
    step: Callable[[object, object], object],
    reference: Callable[[object, object], object],
    same: Callable[[object, object], bool],
    describe_state: Callable[[object], str],
    name_of: NameOf,
    depth: int,
) -> Verdict:
    for source, choice, _ in graph.edges():
        state = graph.state(source)
        expected = reference(state, choice)
        actual = step(state, choice)
        if not same(expected, actual):
            return Verdict.failed(
                check,
                depth,
                graph.node_count,
                Counterexample(
                    depth=graph.depth(source),
                    reason="timed step differs from the untimed step",
                    states=[describe_state(state)],
                    choice=choice.describe(name_of),
                    missing=[describe_state(expected)],
                    extra=[describe_state(actual)],
                    side="target",
                    step=choice.named(name_of),
                    **_trail(graph, source, name_of),
                ),
            )
    return Verdict.passed(check, depth, graph.node_count)


def check_untimed_inclusion(
    model: Union[TimedPSystem, TimedPetriNet],
    depth: int,
    budget: int = DEFAULT_STATE_BUDGET,
) -> Verdict:
    """With all delays 0, compare every explored edge with the untimed step.

    Environments are compared too, so membrane systems must agree on what
    left the skin.

    Args:
        model: A membrane system or a net; its delays are replaced by 0.
        depth: Number of maximal steps to explore.
        budget: Node limit for the reachability graph.

    Returns:
        The verdict. Counterexamples live on the zero-delay copy.

    Raises:
        StateBudgetExceeded: The graph grew past ``budget`` nodes.
    """
    if isinstance(model, TimedPSystem):
        system = model.with_delays(0)
        graph = explore_graph(PSystemSemantics(system), depth, budget)
        return _edge_mismatch(
            "inclusion",
            graph,
            lambda c, R: apply_step(system, c, R),
            lambda c, R: untimed_step_psystem(system, c, R),
            lambda a, b: a == b and a.environment == b.environment,
            lambda c: c.describe_full(),
            system.rule_name,
            depth,
        )
    net = model.with_delays(0)
    graph = explore_graph(PetriSemantics(net), depth, budget)
    return _edge_mismatch(
        "inclusion",
        graph,
        lambda s, U: fire(net, s, U),
        lambda s, U: untimed_step_petri(net, s, U),
        lambda a, b: a == b,
        lambda s: s.describe_full(net.places),
        net.transition_name,
        depth,
    )


_DERIVED: dict[str, Callable[[Model], Model]] = {
    "prop1": lambda system: detime_psystem(system).system,
    "prop2": lambda net: detime_petri(net).net,
    "prop3": lambda system: psystem_to_petri(system).net,
    "inclusion": lambda model: model.with_delays(0),
}


def witness_model(check: str, model: Model, side: str) -> Model:
    """Return the model a counterexample of ``check`` replays on.

    Args:
        check: The verdict's check name, e.g. ``prop1`` or ``inclusion``.
        model: The model the check was run on.
        side: The counterexample's ``side``.

    Returns:
        ``model`` itself for the source side, otherwise the model the check
        derived from it.

    Raises:
        ValueError: ``check`` or ``side`` is unknown.
    """
    if check not in _DERIVED:
        raise ValueError(f"Unknown check '{check}'")
    if side == "source":
        return model
    if side != "target":
        raise ValueError(f"Unknown side '{side}'")
    return _DERIVED[check](model)


def replay(
    model: Model, path: Sequence[Mapping[str, int]]
) -> Union[PConfiguration, PNState]:
    """Fire a recorded path from the initial state of ``model``.

    Args:
        model: The membrane system or net the path was recorded on.
        path: One ``{rule or transition name: count}`` choice per step.

    Returns:
        The state after the last choice.

    Raises:
        ModelValidationError: A choice names an unknown rule or transition.
        NotApplicable: A membrane system step does not fit.
        NotEnabled: A firing is not enabled.
        NotMaximal: A choice could be extended.
    """
    if isinstance(model, TimedPSystem):
        c = initial_configuration(model)
        for counts in path:
            c = apply_step(model, c, StepChoice.from_names(model, counts))
        return c
    s = initial_state(model)
    for counts in path:
        s = fire(model, s, FiringChoice.from_names(model, counts))
    return s


CHECKS: dict[str, Callable[..., Verdict]] = {
    "1": check_prop1,
    "2": check_prop2,
    "3": check_prop3,
    "inclusion": check_untimed_inclusion,
}


def checks_for(kind: str) -> Iterable[str]:
    """Return the check names applicable to a model kind."""
    if kind == "psystem":
        return ("1", "3", "inclusion")
    return ("2", "inclusion")
