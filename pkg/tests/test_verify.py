"""Tests for the bounded checks, the brute-force oracles and the generators."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timed_membrane_nets.exception import (
    CapacityExceeded,
    ModelValidationError,
    NotMaximal,
    StateBudgetExceeded,
)
from timed_membrane_nets.exploration import explore_graph
from timed_membrane_nets.petri import (
    PetriSemantics,
    TimedPetriNet,
    enumerate_max_enabled,
    fire,
    initial_state,
)
from timed_membrane_nets.psystem import (
    PSystemSemantics,
    StepChoice,
    apply_step,
    enumerate_maximal,
    initial_configuration,
)
from timed_membrane_nets.serializers import configuration_from_document
from timed_membrane_nets.translate import DetimedPSystem, TranslatedNet
from timed_membrane_nets.verify import (
    CHECKS,
    Counterexample,
    PetriGeneratorParams,
    PSystemGeneratorParams,
    Verdict,
    check_prop1,
    check_prop2,
    check_prop3,
    check_untimed_inclusion,
    checks_for,
    oracle_maximal_petri,
    oracle_maximal_psystem,
    random_petri,
    random_psystem,
    replay,
    sweep_petri_nets,
    sweep_psystems,
    sweep_rule_shapes,
    untimed_step_psystem,
    witness_model,
)
from timed_membrane_nets.verify import checks as checks_module

SEEDS = range(100)


def _agrees_with_oracle_psystem(system, depth: int) -> bool:
    graph = explore_graph(PSystemSemantics(system), depth)
    return all(
        set(enumerate_maximal(system, c)) == oracle_maximal_psystem(system, c)
        for k in range(depth + 1)
        for c in graph.states_at(k)
    )


def _agrees_with_oracle_petri(net, depth: int) -> bool:
    graph = explore_graph(PetriSemantics(net), depth)
    return all(
        set(enumerate_max_enabled(net, s)) == oracle_maximal_petri(net, s)
        for k in range(depth + 1)
        for s in graph.states_at(k)
    )


class TestVerdict:
    """Test verdict documents."""

    def test_failed_verdict_needs_witness(self):
        """Test a failing verdict without counterexample is invalid."""
        with pytest.raises(ValueError):
            Verdict(check="prop1", ok=False, depth=3)

    def test_passing_verdict_has_no_witness(self):
        """Test a passing verdict cannot carry a counterexample."""
        with pytest.raises(ValueError):
            Verdict(
                check="prop1",
                ok=True,
                depth=3,
                counterexample=Counterexample(depth=0, reason="x"),
            )

    def test_registry(self):
        """Test checks are registered per model kind."""
        assert set(CHECKS) == {"1", "2", "3", "inclusion"}
        assert tuple(checks_for("psystem")) == ("1", "3", "inclusion")
        assert tuple(checks_for("petri")) == ("2", "inclusion")


class TestFixedModels:
    """Test the checks on the worked examples."""

    def test_prop1_on_examples(self, timed_psystem, branching_psystem):
        """Test detimed membrane systems project onto the timed ones."""
        assert check_prop1(timed_psystem, 6).ok
        assert check_prop1(branching_psystem, 4).ok

    def test_prop2_on_examples(self, timed_net, branching_net):
        """Test detimed nets agree on the original places."""
        assert check_prop2(timed_net, 6).ok
        assert check_prop2(branching_net, 4).ok

    def test_prop3_on_examples(self, timed_psystem, branching_psystem):
        """Test membrane systems and their nets move in lockstep."""
        verdict = check_prop3(timed_psystem, 6)
        assert verdict.ok
        assert verdict.explored == 7
        assert check_prop3(branching_psystem, 4).ok

    def test_inclusion_on_examples(self, timed_psystem, timed_net):
        """Test zero-delay steps equal classic untimed steps."""
        assert check_untimed_inclusion(timed_psystem, 4).ok
        assert check_untimed_inclusion(timed_net, 4).ok

    def test_budget_exceeded(self, branching_psystem):
        """Test a tiny budget is reported, never passed."""
        with pytest.raises(StateBudgetExceeded):
            check_prop1(branching_psystem, 3, budget=1)
        with pytest.raises(StateBudgetExceeded):
            check_prop3(branching_psystem, 3, budget=1)


class TestCounterexamples:
    """Test that broken translations are caught."""

    def test_prop1_detects_lost_delays(self, monkeypatch, timed_psystem):
        """Test dropping execution times breaks the projection."""

        def broken(system):
            return DetimedPSystem(system, system.with_delays(0), {}, ())

        monkeypatch.setattr(checks_module, "detime_psystem", broken)
        verdict = check_prop1(timed_psystem, 3)
        assert not verdict.ok
        assert verdict.counterexample.depth == 1
        assert verdict.counterexample.missing == ["(a, b^2)"]
        assert verdict.counterexample.extra == ["(a^3, b^2)"]
        witness = verdict.counterexample
        assert witness.side == "source"
        assert witness.path == [{"r1": 1, "r2": 2}]
        c1 = replay(timed_psystem, witness.path)
        assert c1 == configuration_from_document(timed_psystem, witness.state)
        assert c1.describe() == "(a, b^2, 1)"

    def test_prop3_detects_wrong_delays(self, monkeypatch, timed_psystem):
        """Test a net with the wrong delays fails the correspondence."""
        original = checks_module.psystem_to_petri

        def broken(system):
            translated = original(system.with_delays(0))
            return TranslatedNet(system, translated.net, translated.places)

        monkeypatch.setattr(checks_module, "psystem_to_petri", broken)
        verdict = check_prop3(timed_psystem, 3)
        assert not verdict.ok
        assert verdict.counterexample.reason == "successors do not correspond"
        assert verdict.counterexample.choice == "{r1:1, r2:2}"

    def test_prop3_witness_replays(self, monkeypatch, timed_psystem):
        """Test the recorded state and step reproduce the mismatch."""
        original = checks_module.psystem_to_petri

        def broken(system):
            translated = original(system.with_delays(0))
            return TranslatedNet(system, translated.net, translated.places)

        monkeypatch.setattr(checks_module, "psystem_to_petri", broken)
        verdict = check_prop3(timed_psystem, 3)
        verdict = Verdict.model_validate_json(verdict.model_dump_json())
        witness = verdict.counterexample
        assert (witness.side, witness.path) == ("source", [])
        assert witness.step == {"r1": 1, "r2": 2}

        model = witness_model(verdict.check, timed_psystem, witness.side)
        c = replay(model, witness.path)
        assert c == configuration_from_document(timed_psystem, witness.state)
        step = StepChoice.from_names(timed_psystem, witness.step)
        translated = broken(timed_psystem)
        c_next = apply_step(timed_psystem, c, step)
        s_next = fire(
            translated.net,
            translated.config_to_state(c),
            translated.choice_to_firing(step),
        )
        assert translated.config_to_state(c_next) != s_next
        assert witness.missing == [c_next.describe_full()]
        assert witness.extra == [s_next.describe_full(translated.net.places)]

    def test_inclusion_witness_on_zero_delay_copy(
        self, monkeypatch, timed_psystem
    ):
        """Test edge witnesses replay on the model with delays set to 0."""
        monkeypatch.setattr(
            checks_module, "untimed_step_psystem", lambda system, c, R: c
        )
        verdict = check_untimed_inclusion(timed_psystem, 2)
        witness = verdict.counterexample
        assert not verdict.ok
        assert witness.side == "target"
        model = witness_model(verdict.check, timed_psystem, witness.side)
        assert model.max_delay == 0
        c = replay(model, witness.path)
        assert c == configuration_from_document(model, witness.state)
        c_next = apply_step(model, c, StepChoice.from_names(model, witness.step))
        assert witness.extra == [c_next.describe_full()]

    def test_exhaustive_paths_replay(self, branching_psystem):
        """Test every node of a graph is reached by replaying its path."""
        graph = explore_graph(PSystemSemantics(branching_psystem), 3)
        for k in range(4):
            for key in graph.keys_at(k):
                path = [
                    choice.named(branching_psystem.rule_name)
                    for choice in graph.path_to(key)
                ]
                assert len(path) == k
                assert replay(branching_psystem, path) == graph.state(key)

    def test_replay_rejects_bad_paths(self, timed_psystem, timed_net):
        """Test unknown names and non-maximal choices fail loudly."""
        with pytest.raises(ModelValidationError, match="Unknown rule"):
            replay(timed_psystem, [{"r9": 1}])
        with pytest.raises(NotMaximal):
            replay(timed_psystem, [{"r1": 1}])
        with pytest.raises(ModelValidationError):
            replay(timed_net, [{"tr_x": 1}])
        with pytest.raises(ValueError):
            witness_model("prop7", timed_psystem, "source")


class TestSeededRuns:
    """Test the properties on seeded random models."""

    @pytest.mark.parametrize("seed", SEEDS)
    def test_prop1(self, seed):
        """Test detiming of random membrane systems."""
        assert check_prop1(random_psystem(seed), 5).ok

    @pytest.mark.parametrize("seed", SEEDS)
    def test_prop2(self, seed):
        """Test detiming of random nets."""
        assert check_prop2(random_petri(seed), 5).ok

    @pytest.mark.parametrize("seed", SEEDS)
    def test_prop3(self, seed):
        """Test the net translation of random membrane systems."""
        assert check_prop3(random_psystem(seed), 5).ok

    def test_rule_shape_sweep(self):
        """Test both correspondences over every pair of delayed rule shapes."""
        for system in sweep_rule_shapes(max_rules=2, symbols=1, max_delay=2):
            assert check_prop1(system, 3).ok, system
            assert check_prop3(system, 3).ok, system

    def test_rule_shape_menu(self):
        """Test the sweep covers every target, output size and delay."""
        rules = [
            rule
            for system in sweep_rule_shapes(max_rules=1, max_delay=2)
            for rule in system.rules
        ]
        kinds = {target.kind.value for rule in rules for target, _ in rule.rhs}
        assert kinds == {"here", "out", "in"}
        assert {rule.produced.size for rule in rules} == {0, 1, 2}
        assert {len(rule.rhs) for rule in rules} == {0, 1, 2}
        assert {rule.delay for rule in rules} == {0, 1, 2}
        assert any(
            rule.home == 1 and any(t.kind.value == "out" for t, _ in rule.rhs)
            for rule in rules
        )

    def test_generators_replay(self):
        """Test a seed always yields the same model."""
        assert random_psystem(11) == random_psystem(11)
        assert random_petri(11) == random_petri(11)

    def test_generator_params_validated(self):
        """Test shape bounds are checked."""
        with pytest.raises(ValueError):
            PSystemGeneratorParams(membranes=0)
        assert PetriGeneratorParams(places=1, max_arcs=4).max_arcs == 1


class TestOracles:
    """Test the maximal-step search against brute force."""

    def test_psystem_sweep(self):
        """Test every small membrane system."""
        for system in sweep_psystems():
            assert _agrees_with_oracle_psystem(system, 1), system

    def test_petri_sweep(self):
        """Test every small net."""
        for net in sweep_petri_nets():
            assert _agrees_with_oracle_petri(net, 2), net

    def test_rule_shape_sweep(self):
        """Test every pair of rule shapes with independent delays."""
        for system in sweep_rule_shapes(max_rules=2, max_delay=1):
            assert _agrees_with_oracle_psystem(system, 2), system

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_random_psystems(self, seed):
        """Test random membrane systems."""
        params = PSystemGeneratorParams(membranes=3, rules=5, max_growth=1)
        assert _agrees_with_oracle_psystem(random_psystem(seed, params), 2)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_random_nets(self, seed):
        """Test random nets."""
        params = PetriGeneratorParams(transitions=5, max_growth=1)
        assert _agrees_with_oracle_petri(random_petri(seed, params), 2)

    def test_oracle_refuses_large_instances(self):
        """Test the brute force caps its vector space."""
        names = [f"t{index}" for index in range(16)]
        net = TimedPetriNet.build(
            ["p"],
            names,
            pre={name: {"p": 1} for name in names},
            marking={"p": 3},
        )
        with pytest.raises(CapacityExceeded):
            oracle_maximal_petri(net, initial_state(net))

    def test_untimed_step_refuses_pending(self, timed_psystem):
        """Test the reference step only runs from settled configurations."""
        c0 = initial_configuration(timed_psystem)
        (choice,) = enumerate_maximal(timed_psystem, c0)
        c1 = apply_step(timed_psystem, c0, choice)
        with pytest.raises(ValueError):
            untimed_step_psystem(timed_psystem, c1, choice)


class TestInclusion:
    """Test zero-delay steps against the classic step on every small model."""

    def test_psystem_sweep(self):
        """Test every small membrane system."""
        for system in sweep_psystems(max_rules=3):
            assert check_untimed_inclusion(system, 2).ok, system

    def test_rule_shape_sweep(self):
        """Test every set of three rules over targets and output sizes."""
        checked = 0
        for system in sweep_rule_shapes(max_rules=3):
            assert check_untimed_inclusion(system, 2).ok, system
            checked += 1
        assert checked > 2000

    def test_petri_sweep(self):
        """Test every small net."""
        for net in sweep_petri_nets():
            assert check_untimed_inclusion(net, 2).ok, net
