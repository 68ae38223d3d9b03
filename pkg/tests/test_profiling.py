import numpy as np
import pytest

from profilernet import (
    Dataset,
    EvidenceError,
    PipelineConfig,
    SampleSeed,
    VariableDef,
    evaluate,
    evidence_from_case,
    make_network,
    posterior_by_enumeration,
    predict_profile,
    run_pipeline,
    simulate_dataset,
)


def leaf_output_net():
    """Input A drives leaf output V: with A observed, V's posterior is its
    CPT row (V has no observed descendants)."""
    return make_network(
        [
            VariableDef("A", states=("a0", "a1"), role="input"),
            VariableDef("V", states=("v0", "v1"), role="output"),
        ],
        [("A", "V")],
        {
            "A": ((), [[0.6, 0.4]]),
            "V": (("A",), [[0.9, 0.1], [0.25, 0.75]]),
        },
    )


class TestPredictProfile:
    def test_empty_evidence_prior_argmax(self, demo_net):
        preds = predict_profile(demo_net, {})
        assert [p.variable_id for p in preds] == ["X2", "X3"]
        for pred in preds:
            oracle = posterior_by_enumeration(demo_net, {}, pred.variable_id)
            assert pred.predicted_state == int(np.argmax(oracle.probs))
            assert pred.confidence == pytest.approx(float(oracle.probs.max()), abs=1e-9)

    def test_observed_parents_reduce_to_cpt_row(self):
        net = leaf_output_net()
        for a in (0, 1):
            (pred,) = predict_profile(net, {"A": a})
            row = net.cpt("V").rows[a]
            assert pred.predicted_state == int(np.argmax(row))
            assert pred.confidence == pytest.approx(float(row.max()), abs=1e-9)

    def test_output_as_evidence_rejected(self, demo_net):
        with pytest.raises(EvidenceError):
            predict_profile(demo_net, {"X2": 0})

    def test_inverted_query_matches_oracle(self):
        # Treat X1 as the output and condition on X2: the prediction must be
        # the argmax of the enumerated Bayes posterior.
        net = make_network(
            [
                VariableDef("X1", states=("x1_1", "x1_2", "x1_3"), role="output"),
                VariableDef("X2", states=("x2_1", "x2_2"), role="input"),
                VariableDef("X3", states=("x3_1", "x3_2"), role="input"),
            ],
            [("X1", "X2"), ("X1", "X3")],
            {
                "X1": ((), [[0.2, 0.5, 0.3]]),
                "X2": (("X1",), [[0.2, 0.8], [0.9, 0.1], [0.5, 0.5]]),
                "X3": (("X1",), [[0.7, 0.3], [0.4, 0.6], [0.1, 0.9]]),
            },
        )
        (pred,) = predict_profile(net, {"X2": 0})
        oracle = posterior_by_enumeration(net, {"X2": 0}, "X1")
        # hand: [0.04, 0.45, 0.15] / 0.64 -> argmax state 1
        assert pred.predicted_state == int(np.argmax(oracle.probs)) == 1
        assert pred.confidence == pytest.approx(0.703125, abs=1e-9)


class TestEvidenceFromCase:
    def test_only_input_roles(self, fixture_net):
        values = {v: 0 for v in fixture_net.var_ids}
        evidence = evidence_from_case(fixture_net, values)
        assert set(evidence) == set(fixture_net.input_ids)


class TestEvaluate:
    def test_single_correct_case(self):
        net = leaf_output_net()
        # A=1 -> V posterior [0.25, 0.75], prediction v1; observed V=1 matches.
        data = Dataset(("A", "V"), np.array([[1, 1]], dtype=np.int16))
        report = evaluate(net, data)
        e = report.per_variable["V"]
        assert e.n_cases == 1 and e.accuracy == 1.0
        assert report.macro_accuracy == 1.0
        assert e.confusion[1, 1] == 1

    def test_degenerate_output(self):
        net = make_network(
            [
                VariableDef("A", states=("a0", "a1"), role="input"),
                VariableDef("V", states=("v0", "v1"), role="output"),
            ],
            [],
            {
                "A": ((), [[0.5, 0.5]]),
                "V": ((), [[1.0, 0.0]]),
            },
        )
        data = Dataset(("A", "V"), np.array([[0, 0], [1, 0]], dtype=np.int16))
        report = evaluate(net, data)
        e = report.per_variable["V"]
        assert e.accuracy == 1.0 and e.mean_confidence == 1.0

    def test_no_label_leakage(self, fixture_net):
        data = simulate_dataset(fixture_net, 60, SampleSeed(101))
        report = evaluate(fixture_net, data)

        corrupted = data.codes.copy()
        out_cols = [data.variables.index(v) for v in fixture_net.output_ids]
        corrupted[:, out_cols] = 1 - corrupted[:, out_cols]
        report2 = evaluate(fixture_net, Dataset(data.variables, corrupted))

        for v in fixture_net.output_ids:
            # predicted-state marginals (confusion row sums) must be identical
            np.testing.assert_array_equal(
                report.per_variable[v].confusion.sum(axis=1),
                report2.per_variable[v].confusion.sum(axis=1),
            )

    def test_confusion_sums_to_cases(self, fixture_net):
        data = simulate_dataset(fixture_net, 40, SampleSeed(102))
        report = evaluate(fixture_net, data)
        for e in report.per_variable.values():
            assert e.confusion.sum() == e.n_cases == report.n_cases

    def test_impossible_cases_counted_and_excluded(self):
        variables = [
            VariableDef("A", states=("a0", "a1"), role="input"),
            VariableDef("V", states=("v0", "v1"), role="output"),
        ]
        # Trained with MLE on data where A is always 0: P(A=1) = 0.
        net = make_network(
            variables,
            [],
            {"A": ((), [[1.0, 0.0]]), "V": ((), [[0.8, 0.2]])},
        )
        data = Dataset(("A", "V"), np.array([[0, 0], [1, 0]], dtype=np.int16))
        report = evaluate(net, data)
        assert report.n_impossible == 1
        assert report.n_cases == 1
        assert report.per_variable["V"].n_cases == 1

    def test_incomplete_validation_rejected(self, demo_net):
        from profilernet import CaseDataError, MISSING

        codes = np.array([[0, MISSING, 0]], dtype=np.int16)
        with pytest.raises(CaseDataError):
            evaluate(demo_net, Dataset(demo_net.var_ids, codes))


class TestRunPipeline:
    def test_deterministic(self, fixture_net):
        data = simulate_dataset(fixture_net, 400, SampleSeed(55))
        config = PipelineConfig(structure=fixture_net.structure, seed=8)
        net_a, rep_a = run_pipeline(data, fixture_net.variables, config)
        net_b, rep_b = run_pipeline(data, fixture_net.variables, config)
        assert net_a == net_b
        assert rep_a.to_dict() == rep_b.to_dict()

    def test_seeds_recorded(self, fixture_net):
        data = simulate_dataset(fixture_net, 200, SampleSeed(56))
        config = PipelineConfig(structure=fixture_net.structure, seed=9, train_fraction=0.75)
        _, report = run_pipeline(data, fixture_net.variables, config)
        assert report.metadata["seed"] == "9"
        assert report.metadata["train_fraction"] == "0.75"
        assert report.metadata["n_train"] == "150"

    def test_empty_validation_side_errors(self, demo_net):
        data = simulate_dataset(demo_net, 10, SampleSeed(57))
        config = PipelineConfig(structure=demo_net.structure, train_fraction=0.99)
        with pytest.raises(ValueError):
            run_pipeline(data, demo_net.variables, config)

    def test_needs_structure_or_learning(self, demo_net):
        data = simulate_dataset(demo_net, 50, SampleSeed(58))
        with pytest.raises(ValueError):
            run_pipeline(data, demo_net.variables, PipelineConfig())

    def test_beats_majority_baseline(self, fixture_net):
        data = simulate_dataset(fixture_net, 1000, SampleSeed(59))
        config = PipelineConfig(structure=fixture_net.structure, seed=10)
        from profilernet import split_dataset

        _, v = split_dataset(data, config.train_fraction, config.seed)
        _, report = run_pipeline(data, fixture_net.variables, config)
        for var_id in fixture_net.output_ids:
            col = v.column(var_id)
            majority = max((col == s).mean() for s in range(fixture_net.cardinality(var_id)))
            assert report.per_variable[var_id].accuracy >= majority - 0.05
