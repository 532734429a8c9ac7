"""Bounded verification of the translations and reference oracles."""

from .checks import (
    CHECKS,
    check_prop1,
    check_prop2,
    check_prop3,
    check_untimed_inclusion,
    checks_for,
    replay,
    witness_model,
)
from .generate import (
    PetriGeneratorParams,
    PSystemGeneratorParams,
    random_petri,
    random_psystem,
    sweep_petri_nets,
    sweep_psystems,
    sweep_rule_shapes,
)
from .oracle import (
    oracle_maximal_petri,
    oracle_maximal_psystem,
    untimed_step_petri,
    untimed_step_psystem,
)
from .verdict import Counterexample, Verdict

__all__ = [
    "CHECKS",
    "Counterexample",
    "PSystemGeneratorParams",
    "PetriGeneratorParams",
    "Verdict",
    "check_prop1",
    "check_prop2",
    "check_prop3",
    "check_untimed_inclusion",
    "checks_for",
    "oracle_maximal_petri",
    "oracle_maximal_psystem",
    "random_petri",
    "random_psystem",
    "replay",
    "sweep_petri_nets",
    "sweep_psystems",
    "sweep_rule_shapes",
    "untimed_step_petri",
    "untimed_step_psystem",
    "witness_model",
]
