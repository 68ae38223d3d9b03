import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from profilernet import (
    EvidenceError,
    ImpossibleEvidenceError,
    Posterior,
    VariableDef,
    joint_probability,
    make_network,
    posterior_by_enumeration,
    posterior_ve,
    predict,
    sample_case,
    SampleSeed,
)

from conftest import random_network


def impossible_net():
    """A=1 has prior probability zero, so evidence A=1 is impossible."""
    return make_network(
        [VariableDef("A", states=("a", "b")), VariableDef("B", states=("a", "b"))],
        [("A", "B")],
        {
            "A": ((), [[1.0, 0.0]]),
            "B": (("A",), [[0.3, 0.7], [0.5, 0.5]]),
        },
    )


class TestJointProbability:
    def test_demo_chain_rule(self, demo_net):
        # P(X1=x1_1) * P(X2=x2_1 | x1_1) * P(X3 | x1_1): 0.2 * 0.2 * {0.7, 0.3}
        assert joint_probability(demo_net, {"X1": 0, "X2": 0, "X3": 0}) == pytest.approx(0.2 * 0.2 * 0.7)
        assert joint_probability(demo_net, {"X1": 0, "X2": 0, "X3": 1}) == pytest.approx(0.2 * 0.2 * 0.3)

    def test_total_mass_is_one(self, demo_net):
        total = sum(
            joint_probability(demo_net, {"X1": a, "X2": b, "X3": c})
            for a in range(3) for b in range(2) for c in range(2)
        )
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_zero_entry_zero_joint(self):
        net = impossible_net()
        assert joint_probability(net, {"A": 1, "B": 0}) == 0.0

    def test_incomplete_assignment_rejected(self, demo_net):
        with pytest.raises(ValueError) as err:
            joint_probability(demo_net, {"X1": 0})
        assert "X2" in str(err.value)


class TestEnumeration:
    def test_prior_marginal(self, demo_net):
        post = posterior_by_enumeration(demo_net, {}, "X1")
        np.testing.assert_allclose(post.probs, [0.2, 0.5, 0.3], atol=1e-12)

    def test_conditional_from_cpt_row(self, demo_net):
        post = posterior_by_enumeration(demo_net, {"X1": 0}, "X2")
        np.testing.assert_allclose(post.probs, [0.2, 0.8], atol=1e-12)

    def test_bayes_inversion_hand_checked(self, demo_net):
        # P(X1 | X2=x2_1) by hand: prior * likelihood
        #   [0.2*0.2, 0.5*0.9, 0.3*0.5] = [0.04, 0.45, 0.15], Z = 0.64
        #   -> [0.0625, 0.703125, 0.234375]   (X3 sums out)
        post = posterior_by_enumeration(demo_net, {"X2": 0}, "X1")
        np.testing.assert_allclose(post.probs, [0.0625, 0.703125, 0.234375], atol=1e-12)

    def test_impossible_evidence_is_error_not_nan(self):
        with pytest.raises(ImpossibleEvidenceError):
            posterior_by_enumeration(impossible_net(), {"A": 1}, "B")

    def test_variable_count_guard(self):
        rng = np.random.default_rng(3)
        net = random_network(rng, 25, edge_prob=0.1)
        with pytest.raises(ValueError):
            posterior_by_enumeration(net, {}, "v0")

    def test_unknown_query(self, demo_net):
        with pytest.raises(EvidenceError):
            posterior_by_enumeration(demo_net, {}, "X9")


class TestVariableElimination:
    def test_matches_oracle_on_demo_everywhere(self, demo_net):
        ids = demo_net.var_ids
        for ev_var in ids:
            for ev_state in range(demo_net.cardinality(ev_var)):
                for query in ids:
                    try:
                        expected = posterior_by_enumeration(demo_net, {ev_var: ev_state}, query)
                    except ImpossibleEvidenceError:
                        with pytest.raises(ImpossibleEvidenceError):
                            posterior_ve(demo_net, {ev_var: ev_state}, query)
                        continue
                    got = posterior_ve(demo_net, {ev_var: ev_state}, query)
                    np.testing.assert_allclose(got.probs, expected.probs, atol=1e-9)

    def test_query_in_evidence_degenerate(self, demo_net):
        post = posterior_ve(demo_net, {"X2": 1}, "X2")
        np.testing.assert_array_equal(post.probs, [0.0, 1.0])

    def test_random_networks_match_oracle(self):
        rng = np.random.default_rng(404)
        for trial in range(25):
            net = random_network(rng, int(rng.integers(2, 9)), edge_prob=0.5)
            case = sample_case(net, SampleSeed(trial).substream(0))
            n_ev = int(rng.integers(0, len(net.variables)))
            ev_vars = list(rng.choice(net.var_ids, size=n_ev, replace=False))
            evidence = {v: case.values[v] for v in ev_vars}
            query = str(rng.choice([v for v in net.var_ids if v not in evidence]))
            expected = posterior_by_enumeration(net, evidence, query)
            got = posterior_ve(net, evidence, query)
            assert np.max(np.abs(got.probs - expected.probs)) < 1e-9

    def test_conditioning_consistency(self, demo_net):
        # P(q | ev) must equal the joint-enumeration ratio.
        evidence = {"X3": 1}
        post = posterior_ve(demo_net, evidence, "X2")
        num = np.zeros(2)
        denom = 0.0
        for a, b in itertools.product(range(3), range(2)):
            p = joint_probability(demo_net, {"X1": a, "X2": b, "X3": 1})
            num[b] += p
            denom += p
        np.testing.assert_allclose(post.probs, num / denom, atol=1e-9)

    def test_impossible_evidence_same_error(self):
        with pytest.raises(ImpossibleEvidenceError):
            posterior_ve(impossible_net(), {"A": 1}, "B")

    def test_posteriors_normalized_nonnegative(self):
        rng = np.random.default_rng(77)
        for _ in range(10):
            net = random_network(rng, 6, edge_prob=0.4)
            post = posterior_ve(net, {"v0": 0}, "v5")
            assert np.all(post.probs >= 0)
            assert post.probs.sum() == pytest.approx(1.0, abs=1e-9)

    def test_evidence_validation(self, demo_net):
        with pytest.raises(EvidenceError) as err:
            posterior_ve(demo_net, {"nope": 0}, "X1")
        assert err.value.code == "unknown_variable"
        with pytest.raises(EvidenceError) as err:
            posterior_ve(demo_net, {"X1": 7}, "X2")
        assert err.value.code == "bad_state"


class TestPredict:
    def test_argmax(self):
        pred = predict(Posterior("X2", np.array([0.2, 0.8])))
        assert pred.predicted_state == 1
        assert pred.confidence == pytest.approx(0.8)

    def test_tie_breaks_low(self):
        pred = predict(Posterior("q", np.array([0.5, 0.5])))
        assert pred.predicted_state == 0
        assert pred.confidence == 0.5

    def test_certain(self):
        pred = predict(Posterior("q", np.array([1.0, 0.0])))
        assert pred.predicted_state == 0
        assert pred.confidence == 1.0

    @given(
        raw=st.lists(st.floats(0.001, 1.0), min_size=2, max_size=5),
        scale=st.floats(0.1, 100.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_invariant_under_rescaling(self, raw, scale):
        p = np.asarray(raw) / np.sum(raw)
        rescaled = p * scale
        renormalized = rescaled / rescaled.sum()
        assert predict(Posterior("q", p)).predicted_state == \
            predict(Posterior("q", renormalized)).predicted_state
