"""Acceptance suite: one test per release criterion, each printing a
PASS line (run with ``pytest tests/test_acceptance.py -v -s`` to see them).
"""

import math
import time

import numpy as np

from iec import ann, ensemble
from iec.ann import TrainConfig, classify, forward, hidden_neuron_count, init_model
from iec.cli import main, run_benchmark
from iec.data import CATEGORICAL, CONTINUOUS, Dataset, FeatureSpec, synth_generate
from iec.hddt import (TreeConfig, best_split_categorical, best_split_numeric,
                      grow_tree, hellinger_split_score)
from iec.metrics import ConfusionMatrix, confusion, mean_report, report
from oracles import (brute_force_numeric, finite_difference_gradients,
                     hd_reference, max_relative_error, strip_counts)


def announce(name, detail):
    print(f"PASS  {name}: {detail}")


def test_criterion_split_score_oracle_equivalence():
    """Split criterion matches an independent transcription on random nodes."""
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        k = int(rng.choice([2, 3, 4]))
        parts = [(int(rng.integers(1, 21)), int(rng.integers(1, 21)))
                 for _ in range(k)]
        worst = max(worst, abs(hellinger_split_score(parts) - hd_reference(parts)))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-12
    assert elapsed < 1.0
    announce("split-score-oracle", f"1000 nodes, max|diff|={worst:.2e}, {elapsed:.2f}s (<1s)")


def test_criterion_split_search_oracle():
    """Threshold search agrees with exhaustive enumeration on argmax and score."""
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    checked = 0
    while checked < 200:
        n = int(rng.integers(2, 13))
        if rng.uniform() < 0.5:
            values = [float(v) for v in rng.integers(0, 5, size=n)]  # many ties
        else:
            values = [float(v) for v in rng.uniform(0, 1, size=n)]
        labels = [int(v) for v in rng.integers(0, 2, size=n)]
        if len(set(labels)) < 2:
            continue
        expected = brute_force_numeric(values, labels)
        cand = best_split_numeric(values, labels)
        if expected is None:
            assert cand is None
        else:
            assert cand.threshold == expected[0]
            assert abs(cand.hd_score - expected[1]) <= 1e-12
        checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    announce("split-search-oracle", f"200 instances, {elapsed:.2f}s (<5s)")


def _random_mixed_dataset(rng):
    n = int(rng.integers(16, 31))
    cont = rng.normal(size=(n, 2))
    cat = rng.integers(0, 3, size=(n, 1)).astype(float)
    rows = np.hstack([cont, cat])
    while True:
        labels = (rng.uniform(size=n) < 0.25).astype(int)
        pos = labels.sum()
        if 1 <= pos < n - pos:
            return Dataset(
                (FeatureSpec("a", CONTINUOUS), FeatureSpec("b", CONTINUOUS),
                 FeatureSpec("c", CATEGORICAL, ("u", "v", "w"))),
                rows, labels)


def _root_scores(dataset):
    scores = []
    for j, spec in enumerate(dataset.specs):
        if spec.kind == CONTINUOUS:
            cand = best_split_numeric(dataset.rows[:, j], dataset.labels, j)
        else:
            cand = best_split_categorical(dataset.rows[:, j], dataset.labels,
                                          len(spec.categories), j)
        scores.append(None if cand is None else cand.hd_score)
    return scores


def test_criterion_skew_insensitivity():
    """Minority replication changes neither split scores nor the grown tree."""
    rng = np.random.default_rng(303)
    start = time.perf_counter()
    for _ in range(50):
        d = _random_mixed_dataset(rng)
        base_scores = _root_scores(d)
        base_shape = strip_counts(grow_tree(d).root)
        minority_rows = d.rows[d.labels == 1]
        for c in (2, 5, 10):
            extra = np.repeat(minority_rows, c - 1, axis=0)
            rep = Dataset(d.specs, np.vstack([d.rows, extra]),
                          np.concatenate([d.labels, np.ones(len(extra), int)]))
            for a, b in zip(base_scores, _root_scores(rep)):
                if a is None:
                    assert b is None
                else:
                    assert abs(a - b) <= 1e-12
            assert strip_counts(grow_tree(rep).root) == base_shape
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    announce("skew-insensitivity", f"50 datasets x c in (2,5,10), {elapsed:.2f}s (<30s)")


def test_criterion_gradient_check():
    """Backprop gradient matches central finite differences on random nets."""
    rng = np.random.default_rng(404)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(1, 5))
        k = int(rng.integers(1, 4))
        n = int(rng.integers(2, 9))
        model = init_model(d, k, seed=int(rng.integers(1 << 30)), init_scale=1.0)
        x = rng.uniform(0, 1, size=(n, d))
        y = rng.integers(0, 2, size=n).astype(float)
        worst = max(worst, max_relative_error(
            ann.mse_gradients(model, x, y),
            finite_difference_gradients(model, x, y, h=1e-5)))
    elapsed = time.perf_counter() - start
    assert worst < 1e-5
    assert elapsed < 10.0
    announce("gradient-check", f"100 networks, max rel err={worst:.2e}, {elapsed:.2f}s (<10s)")


def test_criterion_decision_threshold():
    """Output of exactly one half classifies as the negative class."""
    zero = ann.MlpModel(2, 1, np.zeros((1, 2)), np.zeros(1), np.zeros(1), 0.0)
    assert forward(zero, np.array([0.3, 0.9])) == 0.5
    assert classify(zero, np.array([0.3, 0.9])) == 0
    high = ann.MlpModel(2, 1, np.zeros((1, 2)), np.zeros(1), np.zeros(1),
                        math.log(9.0))
    assert classify(high, np.array([0.0, 0.0])) == 1
    announce("decision-threshold", "forward==0.5 -> class 0; 0.9 -> class 1")


def test_criterion_hidden_count_formula():
    """Hidden-layer sizing matches independent evaluation on the whole grid."""
    for n in (100, 1000, 10000):
        for d in (2, 6, 18):
            independent = max(1, math.floor(math.sqrt(n / (d * math.log(n))) + 0.5))
            assert hidden_neuron_count(n, d) == independent
    announce("hidden-count-formula", "exact on n in {100,1000,10000} x d in {2,6,18}")


def test_criterion_metrics_arithmetic():
    """Pinned confusion-matrix arithmetic plus the all-negative baseline."""
    rep = report(ConfusionMatrix(tp=40, fn=10, tn=30, fp=20))
    assert abs(rep.sensitivity - 0.8) <= 1e-12
    assert abs(rep.specificity - 0.6) <= 1e-12
    assert abs(rep.auc - 0.7) <= 1e-12
    assert abs(rep.g_mean - math.sqrt(0.48)) <= 1e-12
    assert abs(rep.accuracy - 0.7) <= 1e-12
    assert abs(rep.f_measure - 8.0 / 11.0) <= 1e-12

    pred = np.zeros(100, dtype=int)
    actual = np.concatenate([np.zeros(80, int), np.ones(20, int)])
    base = report(confusion(pred, actual))
    assert abs(base.accuracy - 0.8) <= 1e-12
    assert base.g_mean == 0.0
    announce("metrics-arithmetic", "pinned matrix and 80:20 constant baseline")


def test_criterion_directional_benchmark():
    """Mean AUC ordering mirrors the expected pattern: IEC >= HDDT-0.01 > ANN."""
    start = time.perf_counter()
    dataset = synth_generate(2000, 8, 8, 0.2, seed=42)
    results = run_benchmark(dataset, repetitions=5, train_fraction=0.7, seed=0,
                            tree_config=TreeConfig(), train_config=TrainConfig())
    means = {name: mean_report(reports) for name, reports in results.items()}
    elapsed = time.perf_counter() - start
    assert means["IEC"].auc >= means["HDDT"].auc - 0.01
    assert means["IEC"].auc > means["ANN"].auc
    assert elapsed < 300.0
    announce("directional-benchmark",
             "mean AUC IEC=%.3f HDDT=%.3f ANN=%.3f, %.1fs (<300s)"
             % (means["IEC"].auc, means["HDDT"].auc, means["ANN"].auc, elapsed))


def test_criterion_benchmark_determinism(tmp_path, capsys):
    """The benchmark command is byte-for-byte reproducible."""
    data = tmp_path / "bench.csv"
    assert main(["synth", "--n", "200", "--minority", "0.2", "--seed", "11",
                 "--out", str(data)]) == 0
    capsys.readouterr()
    argv = ["benchmark", "--data", str(data), "--repetitions", "2",
            "--epochs", "200", "--seed", "5"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    print()
    announce("benchmark-determinism", "two runs, identical stdout bytes")


def test_criterion_end_to_end_separable():
    """A one-feature-separable dataset trains to perfect accuracy."""
    rng = np.random.default_rng(77)
    n = 40
    labels = (rng.uniform(size=n) < 0.3).astype(int)
    rows = np.column_stack([labels * 4.0 + rng.uniform(0, 1, n), np.full(n, 1.0)])
    d = Dataset((FeatureSpec("signal", CONTINUOUS), FeatureSpec("flat", CONTINUOUS)),
                rows, labels)
    model = ensemble.fit(d, train_config=TrainConfig(epochs=2000, learning_rate=0.5))
    assert model.selected_features == (0,)
    preds = ensemble.predict(model, d.rows)
    accuracy = report(confusion(preds, d.labels)).accuracy
    assert accuracy == 1.0
    announce("end-to-end-separable", "training accuracy 1.0, selection = (signal,)")
