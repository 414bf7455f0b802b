import numpy as np
import pytest
from dataclasses import replace

from cvp.errors import InvalidGraphError
from cvp.graph import CausalGraph
from cvp.logistic import FeatureMask, TrainConfig, train
from cvp.rng import CounterRng
from cvp.shift import (
    ExperimentReport,
    ShiftExperimentConfig,
    SyntheticDataset,
    dataset_csv,
    generate,
    report_csv,
    report_to_obj,
    run_experiment,
    shift_world_graph,
    sweep,
)

CFG = ShiftExperimentConfig()


class TestGenerate:
    def test_shape_and_names(self):
        ds = generate(CFG, +1, 100, "train")
        assert ds.feature_names == ("x_c", "x_s")
        assert ds.rows.shape == (100, 2)
        assert ds.env_sign == 1

    def test_construction_correlation_positive(self):
        cfg = replace(CFG, flip_prob=0.0, spurious_strength=1.0, spurious_noise_sd=1e-6)
        ds = generate(cfg, +1, 2000, "t")
        signed = 2 * ds.labels - 1
        assert (np.sign(ds.rows[:, 1]) == signed).mean() > 0.999
        assert np.corrcoef(ds.rows[:, 1], signed)[0, 1] > 0.999

    def test_construction_correlation_negative(self):
        cfg = replace(CFG, flip_prob=0.0, spurious_strength=1.0, spurious_noise_sd=1e-6)
        ds = generate(cfg, -1, 2000, "t")
        assert np.corrcoef(ds.rows[:, 1], 2 * ds.labels - 1)[0, 1] < -0.999

    def test_flip_rate_near_nominal(self):
        ds = generate(CFG, +1, 5000, "train")
        y_raw = (ds.rows[:, 0] > 0).astype(int)
        flip_rate = (ds.labels != y_raw).mean()
        assert 0.04 <= flip_rate <= 0.06

    def test_deterministic(self):
        a = generate(CFG, +1, 500, "train")
        b = generate(CFG, +1, 500, "train")
        assert np.array_equal(a.rows, b.rows) and np.array_equal(a.labels, b.labels)

    def test_train_test_streams_independent(self):
        a = generate(CFG, +1, 500, "train")
        b = generate(CFG, +1, 500, "test")
        assert not np.array_equal(a.rows[:, 0], b.rows[:, 0])

    def test_labels_depend_on_causal_sign(self):
        ds = generate(CFG, +1, 5000, "train")
        agree = ((ds.rows[:, 0] > 0).astype(int) == ds.labels).mean()
        assert agree > 0.9  # 1 - flip_prob up to sampling noise


class TestRunExperiment:
    def test_report_contents(self):
        report = run_experiment(CFG, shift_world_graph())
        assert {m.name for m in report.models} == {"Associative", "CausalAnchored"}
        for m in report.models:
            assert 0.0 <= m.train_accuracy <= 1.0
            assert 0.0 <= m.test_accuracy <= 1.0
        assert len(report.generator_digest) == 64
        assert report.error is None

    def test_anchored_masks_spurious_weight(self):
        report = run_experiment(CFG, shift_world_graph())
        anchored = report.model("CausalAnchored")
        assert anchored.mask.included == (True, False)
        assert anchored.weights.weights[1] == 0.0
        assoc = report.model("Associative")
        assert assoc.mask.included == (True, True)
        assert assoc.weights.weights[1] != 0.0

    def test_missing_node_rejected(self):
        graph = CausalGraph.build(nodes=["C", "S"])
        with pytest.raises(InvalidGraphError):
            run_experiment(CFG, graph)

    def test_deterministic_reports(self):
        r1 = run_experiment(CFG, shift_world_graph())
        r2 = run_experiment(CFG, shift_world_graph())
        assert r1.generator_digest == r2.generator_digest
        for m1, m2 in zip(r1.models, r2.models):
            assert m1.train_accuracy == m2.train_accuracy
            assert m1.test_accuracy == m2.test_accuracy
            assert m1.weights.bias == m2.weights.bias
            assert np.array_equal(m1.weights.weights, m2.weights.weights)

    def test_environment_symmetry(self):
        mirrored = replace(CFG, train_env_sign=-1, test_env_sign=+1)
        report = run_experiment(mirrored, shift_world_graph())
        assoc = report.model("Associative")
        anchored = report.model("CausalAnchored")
        assert (assoc.train_accuracy - assoc.test_accuracy) * 100 >= 15
        assert abs(anchored.train_accuracy - anchored.test_accuracy) * 100 <= 2.0

    def test_anchored_weights_invariant_to_spurious_column(self):
        train_ds = generate(CFG, +1, CFG.n_train, "train")
        mask = FeatureMask((True, False))
        w1 = train(train_ds, mask, CFG.trainer)
        noise = CounterRng(999, "fresh-noise").normals(0, CFG.n_train)
        rows = train_ds.rows.copy()
        rows[:, 1] = noise
        replaced = SyntheticDataset(rows, train_ds.labels, train_ds.env_sign)
        w2 = train(replaced, mask, CFG.trainer)
        assert w1.bias == w2.bias
        assert np.array_equal(w1.weights, w2.weights)

    def test_coin_labels_break_causal_model_only(self):
        # At flip 0.5 the label is a coin toss with respect to x_c, so the
        # anchored model lands at chance on both sides.  x_s still tracks the
        # observed label by construction, so the associative model stays far
        # from chance: high on train, far below 50 on the sign-flipped test.
        cfg = replace(CFG, flip_prob=0.5)
        report = run_experiment(cfg, shift_world_graph())
        anchored = report.model("CausalAnchored")
        assert abs(anchored.test_accuracy - 0.5) * 100 <= 2.0
        assert abs(anchored.train_accuracy - 0.5) * 100 <= 2.0
        assoc = report.model("Associative")
        assert assoc.train_accuracy > 0.6
        assert assoc.test_accuracy < 0.4

    def test_null_spurious_strength(self):
        cfg = replace(CFG, spurious_strength=0.0)
        report = run_experiment(cfg, shift_world_graph())
        assoc = report.model("Associative")
        anchored = report.model("CausalAnchored")
        assert abs(assoc.test_accuracy - anchored.test_accuracy) * 100 <= 2.5


class TestSweep:
    def test_empty_values(self):
        assert sweep(CFG, "spurious_strength", []) == []

    def test_seed_path_consistency(self):
        [report] = sweep(CFG, "spurious_strength", [CFG.spurious_strength])
        direct = run_experiment(CFG, shift_world_graph())
        assert report.generator_digest == direct.generator_digest
        for a, b in zip(report.models, direct.models):
            assert (a.train_accuracy, a.test_accuracy) == (b.train_accuracy, b.test_accuracy)

    def test_seeds_vary_per_point(self):
        reports = sweep(CFG, "flip_prob", [0.05, 0.05])
        assert reports[0].config.seed == CFG.seed
        assert reports[1].config.seed == CFG.seed + 1
        assert reports[0].generator_digest != reports[1].generator_digest

    def test_gap_monotone_in_spurious_strength(self):
        values = [0.0, 0.5, 1.0]
        gaps = np.zeros(len(values))
        for base_seed in (1, 2, 3):
            reports = sweep(replace(CFG, seed=base_seed), "spurious_strength", values)
            for i, r in enumerate(reports):
                assoc = r.model("Associative")
                gaps[i] += assoc.train_accuracy - assoc.test_accuracy
        gaps /= 3
        assert gaps[0] <= gaps[1] + 1e-9 and gaps[1] <= gaps[2] + 1e-9

    def test_errors_recorded_in_report(self):
        reports = sweep(CFG, "spurious_noise_sd", [-1.0, 0.7])
        assert reports[0].error is not None and reports[0].models == ()
        assert reports[1].error is None and len(reports[1].models) == 2

    def test_unknown_parameter(self):
        with pytest.raises(ValueError):
            sweep(CFG, "seed", [1])


class TestExport:
    def test_csv_shape(self):
        report = run_experiment(CFG, shift_world_graph())
        lines = report_csv(report).splitlines()
        assert lines[0] == "model,env,accuracy"
        assert len(lines) == 5
        assert lines[1].startswith("Associative,train,0.")
        assert lines[4].startswith("CausalAnchored,test,0.")

    def test_dataset_csv(self):
        ds = generate(CFG, +1, 3, "train")
        lines = dataset_csv(ds).splitlines()
        assert lines[0] == "x_c,x_s,y"
        assert len(lines) == 4
        x_c = float(lines[1].split(",")[0])
        assert x_c == ds.rows[0, 0]

    def test_report_obj_round_trips_config(self):
        report = run_experiment(CFG, shift_world_graph())
        obj = report_to_obj(report)
        assert obj["config"]["seed"] == 42
        assert obj["config"]["trainer"]["max_iterations"] == 500
        assert set(obj["models"]) == {"Associative", "CausalAnchored"}
        assert obj["models"]["CausalAnchored"]["weights"]["mask"] == [True, False]


def test_config_validation():
    with pytest.raises(ValueError):
        ShiftExperimentConfig(flip_prob=0.6)
    with pytest.raises(ValueError):
        ShiftExperimentConfig(spurious_noise_sd=0.0)
    with pytest.raises(ValueError):
        ShiftExperimentConfig(n_train=0)
    with pytest.raises(ValueError):
        ShiftExperimentConfig(train_env_sign=2)
