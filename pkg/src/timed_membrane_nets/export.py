"""Graphviz DOT rendering of nets and membrane systems.

Nets: places are ellipses labelled with their initial token count,
transitions are boxes labelled ``name@delay`` grouped in one cluster per
locality, arcs carry their weight. Membrane systems: one nested cluster per
membrane listing its contents and rules.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Union

import pydot

from .petri import TimedPetriNet
from .psystem import TimedPSystem

logger = logging.getLogger(__name__)


def _place_id(index: int) -> str:
    return f"p{index}"


def _transition_id(index: int) -> str:
    return f"t{index}"


def petri_to_dot(net: TimedPetriNet, name: str = "net") -> pydot.Dot:
    """Return the DOT graph of a timed Petri net."""
    graph = pydot.Dot(name, graph_type="digraph", rankdir="LR")
    for place in net.places:
        graph.add_node(
            pydot.Node(
                _place_id(place.id),
                label=f'"{place.name}\\n{net.initial_marking.count(place)}"',
                shape="ellipse",
            )
        )
    clusters: dict[int, pydot.Cluster] = {}
    for transition in net.transitions:
        locality = net.locality[transition.id]
        cluster = clusters.get(locality)
        if cluster is None:
            cluster = pydot.Cluster(
                f"locality_{locality}",
                label=f'"locality {locality}"',
                style="dashed",
            )
            clusters[locality] = cluster
        cluster.add_node(
            pydot.Node(
                _transition_id(transition.id),
                label=f'"{transition.name}@{net.delay[transition.id]}"',
                shape="box",
            )
        )
    for locality in sorted(clusters):
        graph.add_subgraph(clusters[locality])
    for transition in net.transitions:
        node = _transition_id(transition.id)
        for place, weight in net.weights_in[transition.id].items():
            graph.add_edge(
                pydot.Edge(_place_id(place.id), node, label=str(weight))
            )
        for place, weight in net.weights_out[transition.id].items():
            graph.add_edge(
                pydot.Edge(node, _place_id(place.id), label=str(weight))
            )
    return graph


def psystem_to_dot(system: TimedPSystem, name: str = "psystem") -> pydot.Dot:
    """Return the membrane tree as nested clusters."""
    graph = pydot.Dot(name, graph_type="digraph")

    def membrane(label: int) -> pydot.Cluster:
        cluster = pydot.Cluster(
            f"membrane_{label}", label=f'"membrane {label}"'
        )
        lines = [f"contents {system.initial[label]}"]
        lines += [str(rule) for _, rule in system.rules_of(label)]
        text = "\\l".join(lines) + "\\l"
        cluster.add_node(
            pydot.Node(f"m{label}", label=f'"{text}"', shape="plaintext")
        )
        for child in system.structure.children(label):
            cluster.add_subgraph(membrane(child))
        return cluster

    graph.add_subgraph(membrane(system.structure.skin))
    return graph


def to_dot(model: Union[TimedPSystem, TimedPetriNet]) -> str:
    """Return DOT text for either model kind."""
    if isinstance(model, TimedPSystem):
        return psystem_to_dot(model).to_string()
    return petri_to_dot(model).to_string()


def write_dot(model: Union[TimedPSystem, TimedPetriNet], path: Path) -> None:
    """Write DOT text for ``model`` to ``path``."""
    path.write_text(to_dot(model), encoding="utf-8")
    logger.info("Wrote DOT to %s", path)
