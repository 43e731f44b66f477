"""Per-instant solver: prediction, explanation criteria, enumeration.

The expected candidate sets in these tests come from evaluating the fixture
rules by hand over all 15 pump/container assignments.
"""

import itertools

import numpy as np
import pytest

from tempdiag import (
    ExplanationCriterion,
    ModeAssignment,
    Observation,
    SystemModel,
    is_explanation,
    predicted_manifestations,
    solve_atemporal,
)
from tempdiag.errors import SearchSpaceError

from propsuites import observation_from_assignment, random_assignment, random_model

ABDUCTIVE = ExplanationCriterion.ABDUCTIVE
CONSISTENCY = ExplanationCriterion.CONSISTENCY_BASED


def assignment(t=0, **modes):
    return ModeAssignment.from_mapping(t, modes)


class TestPredictedManifestations:
    def test_occluded_pump(self, hydraulic):
        w = assignment(P="occluded", C="correct")
        assert predicted_manifestations(w, hydraulic) == {"no_flow_out(P)"}

    def test_all_correct(self, hydraulic):
        w = assignment(P="correct", C="correct")
        assert predicted_manifestations(w, hydraulic) == {
            "flow_out(P)", "level_normal(C)"}

    def test_empty_rule_set(self, pump, container):
        model = SystemModel((pump, container), ())
        w = assignment(P="broken", C="punctured")
        assert predicted_manifestations(w, model) == frozenset()


class TestIsExplanation:
    def test_abductive_covers_present(self, hydraulic):
        w = assignment(P="occluded", C="correct")
        assert is_explanation(w, {"no_flow_out(P)"}, set(), ABDUCTIVE,
                              hydraulic)

    def test_abductive_rejects_uncovered(self, hydraulic):
        w = assignment(P="correct", C="correct")
        assert not is_explanation(w, {"no_flow_out(P)"}, set(), ABDUCTIVE,
                                  hydraulic)

    def test_consistency_vacuous_observation(self, pump, container):
        model = SystemModel((pump, container), hydraulic_rules_no_exclusive())
        for combo in itertools.product(pump.modes, container.modes):
            w = assignment(P=combo[0], C=combo[1])
            assert is_explanation(w, set(), set(), CONSISTENCY, model)

    def test_absent_prediction_contradicts(self, hydraulic):
        w = assignment(P="correct", C="punctured")
        assert not is_explanation(w, set(), {"water_loss(C)"}, CONSISTENCY,
                                  hydraulic)

    def test_exclusive_partner_contradicts(self, hydraulic):
        # flow_out(P) observed, but the assignment predicts its declared
        # exclusive alternative no_flow_out(P)
        w = assignment(P="broken", C="correct")
        assert not is_explanation(w, {"flow_out(P)"}, set(), CONSISTENCY,
                                  hydraulic)


def hydraulic_rules_no_exclusive():
    from conftest import hydraulic_rules
    return hydraulic_rules()


class TestSolveAtemporal:
    def test_blocked_pump_dry_container(self, hydraulic):
        obs = Observation(0, {"no_flow_out(P)"}, {"water_loss(C)"})
        got = solve_atemporal(hydraulic, obs, ABDUCTIVE)
        assert {w.as_dict()["P"] for w in got} == {"occluded", "broken"}
        assert all(w.as_dict()["C"] == "correct" for w in got)

    def test_vacuous_observation_keeps_everything(self, pump, container):
        model = SystemModel((pump, container), hydraulic_rules_no_exclusive())
        obs = Observation(0, set(), set())
        got = solve_atemporal(model, obs, CONSISTENCY)
        assert len(got) == 15

    def test_contradictory_presents_unsatisfiable(self, hydraulic):
        obs = Observation(0, {"flow_out(P)", "no_flow_out(P)"}, set())
        assert solve_atemporal(hydraulic, obs, ABDUCTIVE) == []

    def test_output_order_deterministic(self, pump, container):
        # components sorted by id (C before P), each component's modes in
        # declared order, enumerated lexicographically
        model = SystemModel((pump, container), hydraulic_rules_no_exclusive())
        obs = Observation(0, set(), set())
        got = solve_atemporal(model, obs, CONSISTENCY)
        expected = [
            assignment(C=c_mode, P=p_mode)
            for c_mode in container.modes
            for p_mode in pump.modes
        ]
        assert got == expected

    def test_candidate_cap(self, hydraulic):
        obs = Observation(0, set(), set())
        with pytest.raises(SearchSpaceError):
            solve_atemporal(hydraulic, obs, ABDUCTIVE, candidate_cap=10)

    def test_assignment_time_stamped(self, hydraulic):
        obs = Observation(7, {"flow_out(P)"}, set())
        got = solve_atemporal(hydraulic, obs, ABDUCTIVE)
        assert got and all(w.t == 7 for w in got)


def brute_force_solve(model, obs, criterion):
    """Independent re-derivation: evaluate every rule against every full
    assignment without going through the solver's helpers."""
    comps = sorted(model.components, key=lambda c: c.id)
    out = []
    for combo in itertools.product(*(c.modes for c in comps)):
        chosen = dict(zip((c.id for c in comps), combo))
        fired = set()
        for rule in model.rules:
            if all(chosen.get(cid) == mode for cid, mode in rule.body):
                fired.add(rule.head)
        ok = not (fired & obs.absent)
        if ok:
            for pair in model.exclusive:
                a, b = tuple(pair)
                if (a in obs.present and b in fired) or \
                        (b in obs.present and a in fired):
                    ok = False
                    break
        if ok and criterion is ABDUCTIVE:
            ok = obs.present <= fired
        if ok:
            out.append(ModeAssignment.from_mapping(obs.t, chosen))
    return out


def test_oracle_equivalence_on_random_models():
    rng = np.random.default_rng(99)
    for _ in range(300):
        model = random_model(rng)
        if rng.random() < 0.5:
            w = random_assignment(rng, model, 0)
            obs = observation_from_assignment(rng, model, w)
        else:
            heads = sorted(model.manifestations)
            chosen = {h for h in heads if rng.random() < 0.4}
            present = frozenset(h for h in chosen if rng.random() < 0.5)
            obs = Observation(0, present, frozenset(chosen) - present)
        for criterion in (ABDUCTIVE, CONSISTENCY):
            assert solve_atemporal(model, obs, criterion) == \
                brute_force_solve(model, obs, criterion)


def test_abductive_monotone_in_present(hydraulic):
    # adding a present atom never enlarges the abductive solution set
    base = Observation(0, {"no_flow_out(P)"}, set())
    more = Observation(0, {"no_flow_out(P)", "water_loss(C)"}, set())
    assert set(solve_atemporal(hydraulic, more, ABDUCTIVE)) <= \
        set(solve_atemporal(hydraulic, base, ABDUCTIVE))
