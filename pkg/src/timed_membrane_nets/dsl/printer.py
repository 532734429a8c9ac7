"""Canonical text for both model formats."""

from __future__ import annotations

from typing import Union

from ..petri import TimedPetriNet
from ..psystem import TimedPSystem

INDENT = "  "


def print_psystem(system: TimedPSystem) -> str:
    """Render a membrane system; every rule carries its ``@delay``."""
    lines = ["psystem {"]
    alphabet = " ".join(system.alphabet.names)
    lines.append(f"{INDENT}alphabet {alphabet};".replace(" ;", ";"))

    def membrane(label: int, depth: int) -> None:
        pad = INDENT * depth
        lines.append(f"{pad}membrane {label} {{")
        lines.append(f"{pad}{INDENT}contents {system.initial[label]};")
        for _, rule in system.rules_of(label):
            lines.append(f"{pad}{INDENT}rule {rule};")
        for child in system.structure.children(label):
            membrane(child, depth + 1)
        lines.append(f"{pad}}}")

    membrane(system.structure.skin, 1)
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_petri(net: TimedPetriNet) -> str:
    """Render a Petri net with explicit weights, delays and localities."""
    lines = ["petri {"]
    if len(net.places):
        lines.append(f"{INDENT}place {' '.join(net.places.names)};")
    for transition in net.transitions:
        lines.append(
            f"{INDENT}transition {transition.name} "
            f"@{net.delay[transition.id]} loc={net.locality[transition.id]};"
        )
    for source, target, weight in net.arcs():
        lines.append(f"{INDENT}{source.name} -{weight}-> {target.name};")
    marking = " ".join(
        f"{place.name}={count}" for place, count in net.initial_marking.items()
    )
    lines.append(f"{INDENT}marking {marking};".replace(" ;", ";"))
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_model(model: Union[TimedPSystem, TimedPetriNet]) -> str:
    """Render either model kind."""
    if isinstance(model, TimedPSystem):
        return print_psystem(model)
    return print_petri(model)
