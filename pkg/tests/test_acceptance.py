"""Acceptance suite: one test per release criterion, each printing a
PASS line with its runtime. Tolerances are fixed here, not configurable.

Run with `pytest tests/test_acceptance.py -v -s`.
"""

import time

import numpy as np
import pytest

from emobaseline.errors import PlanError
from emobaseline.eval import (
    ablation_skt,
    binarize_labels,
    compare_classifiers,
    cross_validate,
    oob_evaluate,
)
from emobaseline.features.extract import FEATURE_NAMES, extract_features
from emobaseline.features.windows import Window, WindowConfig, cut_windows
from emobaseline.labels import (
    Channel,
    EmotionLabel,
    NEGATIVE_EMOTIONS,
    POSITIVE_EMOTIONS,
)
from emobaseline.learn import (
    DecisionTreeClassifier,
    NeuralNetClassifier,
    RandomForestClassifier,
    SvmClassifier,
    loss_and_gradients,
)
from emobaseline.pipeline import dataset_from_signals
from emobaseline.protocol import (
    PlanConstraints,
    Ranking,
    generate_session,
    ingest_ranking,
    make_random_pool,
    neutral_questionnaire,
    run_simulation,
    seed_profile,
    true_tag_weights,
    validate_plan,
)
from emobaseline.signal import Segment, SessionSchedule, label_stream, median_filter, TimeSeries

from conftest import make_grid, synth_signals
from oracles import (
    finite_difference_gradients,
    naive_features,
    naive_median_filter,
    svm_decision_recompute,
)

SEGMENT_LENGTHS = {
    EmotionLabel.REST: 7680,
    EmotionLabel.FEAR: 4128,
    EmotionLabel.SAD_ANGER: 3906,
    EmotionLabel.AWE_REV: 5058,
    EmotionLabel.DISGUST: 3488,
    EmotionLabel.JOY_AMUS: 4768,
    EmotionLabel.CONTENT: 3840,
}
EXPECTED_COUNTS = {0: 240, 1: 129, 2: 122, 3: 158, 4: 109, 5: 149, 6: 120}
EXPECTED_MINUTES = {0: 128.0, 1: 68.8, 2: 65.1, 3: 84.3, 4: 58.1, 5: 79.5, 6: 64.0}


@pytest.fixture(scope="module", autouse=True)
def warm_numba():
    """Compile the tree kernels once so criterion timings measure the work."""
    rng = np.random.default_rng(0)
    RandomForestClassifier(n_trees=2, seed=0).fit(
        rng.normal(size=(30, 3)), rng.integers(0, 2, size=30)
    )


def report(name: str, t0: float, budget_s: float, detail: str = ""):
    elapsed = time.perf_counter() - t0
    print(f"[PASS] {name}: {detail} ({elapsed:.1f}s, budget {budget_s:.0f}s)")
    assert elapsed <= budget_s, f"{name} exceeded its {budget_s}s runtime budget"


def test_table1_round_trip():
    """Window counts and duration arithmetic reproduce the reference table."""
    t0 = time.perf_counter()
    total = sum(SEGMENT_LENGTHS.values())
    grid = make_grid(total, seed=0)
    segments, t = [], 0
    for label in EmotionLabel:
        clip = None if label == EmotionLabel.REST else f"clip-{label.name}"
        segments.append(Segment(t, t + SEGMENT_LENGTHS[label], label, clip_id=clip))
        t += SEGMENT_LENGTHS[label]
    signals = label_stream(
        grid, SessionSchedule(session_id="t1", segments=tuple(segments)), trim_s=0
    )
    windows = cut_windows(signals, WindowConfig(w=32))
    counts: dict[int, int] = {}
    for win in windows:
        counts[int(win.label)] = counts.get(int(win.label), 0) + 1
    assert counts == EXPECTED_COUNTS
    assert sum(counts.values()) == 1027
    for code, count in counts.items():
        assert count * 32 / 60 == pytest.approx(EXPECTED_MINUTES[code], abs=0.1)
    report("table1-round-trip", t0, 1.0, "counts 240/129/122/158/109/149/120 exact")


def test_feature_oracle_1000_windows():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        w = int(rng.integers(2, 64))
        win = Window(
            channels={ch: rng.normal(size=w) for ch in Channel},
            label=EmotionLabel.FEAR,
            session_id="s",
            window_start_s=0.0,
        )
        got = extract_features(win)
        want = naive_features({ch.value: win.channels[ch].tolist() for ch in Channel})
        worst = max(worst, float(np.max(np.abs(got - np.asarray(want)))))
    assert worst <= 1e-9
    report("feature-oracle", t0, 5.0, f"1000 windows, max |err| {worst:.1e}")


def test_median_filter_oracle_1000_series():
    t0 = time.perf_counter()
    rng = np.random.default_rng(102)
    for _ in range(1000):
        n = int(rng.integers(1, 50))
        order = int(rng.integers(1, 14))
        vals = rng.normal(size=n)
        series = TimeSeries(
            channel=Channel.GSR,
            timestamps_ms=np.arange(n, dtype=float) * 1000.0,
            values=vals,
        )
        got = median_filter(series, order).values
        want = naive_median_filter(vals.tolist(), order)
        assert np.array_equal(got, np.asarray(want))
    report("median-filter-oracle", t0, 5.0, "1000 series, exact equality")


def test_binary_collapse_theorem():
    t0 = time.perf_counter()
    rng = np.random.default_rng(103)
    for _ in range(100):
        n = int(rng.integers(5, 300))
        y_true = rng.integers(1, 7, size=n)
        y_pred = rng.integers(1, 7, size=n)
        six_error = float(np.mean(y_true != y_pred))
        bin_error = float(
            np.mean(binarize_labels(y_true) != binarize_labels(y_pred))
        )
        assert bin_error <= six_error
    report("binary-collapse", t0, 5.0, "collapse never increases error, 100 sets")


@pytest.fixture(scope="module")
def ml_corpus():
    """~2016 instances, moderate separability, for the OOB/CV criteria."""
    signals = synth_signals(
        n_sessions=28, emotion_block_s=384, separability=0.5, seed=31
    )
    return dataset_from_signals(signals, w=32)


def test_oob_matches_cross_validation(ml_corpus):
    t0 = time.perf_counter()
    data = ml_corpus
    assert 1800 <= len(data) <= 2200
    oob_errors, gaps = [], []
    for seed in range(5):
        oob = oob_evaluate(data, RandomForestClassifier(n_trees=100), seed=seed).mean_error
        cv = cross_validate(
            data, RandomForestClassifier(n_trees=100, seed=seed), k=10, seed=seed
        ).mean_error
        oob_errors.append(oob)
        gaps.append(abs(oob - cv))
    assert max(gaps) <= 0.05, f"max |OOB - CV| = {max(gaps):.4f}"
    spread = max(oob_errors) - min(oob_errors)
    assert spread <= 0.03, f"OOB spread = {spread:.4f}"
    report(
        "oob-vs-cv", t0, 120.0,
        f"max gap {100 * max(gaps):.2f} pts, spread {100 * spread:.2f} pts over 5 seeds",
    )


def test_importance_sanity_injected_feature():
    t0 = time.perf_counter()
    hits = 0
    for seed in range(20):
        rng = np.random.default_rng(500 + seed)
        X = rng.normal(size=(500, 5))
        y = (X[:, 3] > 0).astype(int)
        rf = RandomForestClassifier(n_trees=60, seed=seed).fit(X, y)
        hits += int(np.argmax(rf.importances_) == 3)
    assert hits >= 19  # >= 95% of 20 runs
    report("importance-sanity", t0, 60.0, f"informative feature ranked #1 in {hits}/20 runs")


def test_skt_leak_reproduction():
    t0 = time.perf_counter()
    leak = synth_signals(
        n_sessions=12, emotion_block_s=160, separability=0.5, seed=41, skt_mode="leak"
    )
    data_leak = dataset_from_signals(leak, w=32, mask=tuple(FEATURE_NAMES))
    ab = ablation_skt(
        data_leak, RandomForestClassifier(n_trees=60), seeds=tuple(range(10)), method="oob"
    )
    pairs = list(zip(ab.with_skt, ab.without_skt))
    assert all(w.mean_error < wo.mean_error for w, wo in pairs), (
        "leak-mode SKT must strictly lower the error in every seed"
    )

    noise = synth_signals(
        n_sessions=12, emotion_block_s=160, separability=0.5, seed=41, skt_mode="noise"
    )
    data_noise = dataset_from_signals(noise, w=32, mask=tuple(FEATURE_NAMES))
    ab_noise = ablation_skt(
        data_noise, RandomForestClassifier(n_trees=60), seeds=tuple(range(10)), method="oob"
    )
    assert abs(ab_noise.delta) <= 0.03
    report(
        "skt-leak", t0, 120.0,
        f"leak {100 * ab.mean_error_with:.1f}% < {100 * ab.mean_error_without:.1f}% "
        f"(10/10 seeds); noise |delta| {100 * abs(ab_noise.delta):.2f} pts",
    )


def test_ann_gradient_check_20_networks():
    t0 = time.perf_counter()
    worst = 0.0
    for seed in range(20):
        rng = np.random.default_rng(700 + seed)
        activation = "logistic" if seed % 2 == 0 else "gaussian-rbf"
        weights = [
            rng.normal(0, 0.5, size=(6, 10)),
            rng.normal(0, 0.1, size=10),
            rng.normal(0, 0.5, size=(10, 3)),
            rng.normal(0, 0.1, size=3),
        ]
        X = rng.normal(size=(8, 6))
        y_onehot = np.eye(3)[rng.integers(0, 3, size=8)]
        _, grads = loss_and_gradients(tuple(weights), X, y_onehot, activation)

        def loss_fn():
            return loss_and_gradients(tuple(weights), X, y_onehot, activation)[0]

        numeric = finite_difference_gradients(loss_fn, weights, h=1e-5)
        for g_a, g_n in zip(grads, numeric):
            rel = np.abs(g_a - g_n) / np.maximum(np.abs(g_a) + np.abs(g_n), 1e-8)
            worst = max(worst, float(rel.max()))
    assert worst <= 1e-6
    report("ann-gradient", t0, 10.0, f"20 networks, max relative error {worst:.1e}")


def test_svm_kkt_expansion_and_xor():
    t0 = time.perf_counter()
    # KKT residuals on random two-class problems
    worst_kkt = 0.0
    worst_exp = 0.0
    for seed in range(5):
        rng = np.random.default_rng(800 + seed)
        X = np.vstack(
            [rng.normal(-0.7, 1.0, size=(35, 3)), rng.normal(0.7, 1.0, size=(35, 3))]
        )
        y = np.array([0] * 35 + [1] * 35)
        model = SvmClassifier(C=10.0, gamma=0.1, tol=1e-3, seed=seed).fit(X, y)
        for machine in model.machines_:
            assert np.all(machine.alpha >= 0) and np.all(machine.alpha <= machine.C)
            worst_kkt = max(worst_kkt, machine.kkt_violation())
            probes = rng.normal(size=(5, 3))
            got = machine.decision_function(probes)
            for k in range(5):
                want = svm_decision_recompute(
                    machine.X, machine.y, machine.alpha, machine.b, machine.gamma, probes[k]
                )
                worst_exp = max(worst_exp, abs(got[k] - want))
    assert worst_kkt <= 1e-3
    assert worst_exp <= 1e-9

    xor_X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
    xor_y = np.array([0, 0, 1, 1])
    model = SvmClassifier(C=10.0, gamma=1.0, seed=0).fit(xor_X, xor_y)
    assert np.array_equal(model.predict(xor_X), xor_y)
    report(
        "svm-kkt", t0, 10.0,
        f"KKT max {worst_kkt:.1e}, expansion max {worst_exp:.1e}, XOR exact",
    )


def test_classifier_comparison_harness(ml_corpus):
    t0 = time.perf_counter()
    data = ml_corpus
    rng = np.random.default_rng(900)
    sample = rng.choice(len(data.instances), size=400, replace=False)
    from emobaseline.features.dataset import Dataset
    from emobaseline.eval import binarize_dataset

    small = Dataset(
        instances=[data.instances[i] for i in sorted(sample)],
        feature_mask=data.feature_mask,
    )
    binary = binarize_dataset(small)
    trainers = {
        "tree": DecisionTreeClassifier(seed=0),
        "ann": NeuralNetClassifier(epochs=150, seed=0),
        "svm": SvmClassifier(seed=0),
        "rf": RandomForestClassifier(n_trees=60, seed=0),
    }
    first = compare_classifiers(binary, trainers, k=10, seed=3)
    text = first.to_text()
    assert len(first.reports) == 4
    for name in ("Decision Tree", "Artificial Neural Network",
                 "Support Vector Machines", "Random Forests"):
        assert name in text
    again = compare_classifiers(binary, trainers, k=10, seed=3)
    assert {n: r.mean_error for n, r in first.reports.items()} == {
        n: r.mean_error for n, r in again.reports.items()
    }
    errors = ", ".join(
        f"{n.split()[0]} {100 * r.mean_error:.1f}%" for n, r in first.reports.items()
    )
    report("classifier-comparison", t0, 120.0, f"binary errors: {errors}")


def test_protocol_validator_and_adaptive_selection():
    t0 = time.perf_counter()
    # 500 generated sessions across randomized pools, all valid
    total_plans = 0
    for pool_seed in range(50):
        pool = make_random_pool(seed=3000 + pool_seed, clips_per_emotion=60)
        profile = seed_profile(neutral_questionnaire(pool))
        for _ in range(10):
            plan = generate_session(profile, pool)
            violations = validate_plan(plan, pool, profile)
            assert violations == [], f"pool {pool_seed}: {violations}"
            profile.record_plan(
                plan.session_id,
                [b.clip_id for b in plan.clip_blocks],
                plan.emotions_covered,
                plan.majority_negative,
            )
            total_plans += 1
    assert total_plans == 500

    # supernatural-exclusion scenario: two off-target strikes remove the tag
    pool = make_random_pool(seed=77, clips_per_emotion=60)
    profile = seed_profile(neutral_questionnaire(pool))
    targets = [
        c for c in pool
        if c.target_emotion == EmotionLabel.FEAR and "supernatural" in c.tags
    ][:2]
    for k, clip in enumerate(targets):
        ingest_ranking(
            profile,
            Ranking(clip_id=clip.clip_id, session_id=f"s{k}", score=2,
                    evoked_emotion=EmotionLabel.JOY_AMUS),
            clip,
        )
    assert ("supernatural", int(EmotionLabel.FEAR)) in profile.excluded
    plan = generate_session(
        profile, pool, emotions=[EmotionLabel.FEAR, EmotionLabel.JOY_AMUS]
    )
    index = {c.clip_id: c for c in pool}
    fear_blocks = [b for b in plan.clip_blocks if b.target_emotion == EmotionLabel.FEAR]
    assert fear_blocks and all(
        "supernatural" not in index[b.clip_id].tags for b in fear_blocks
    )

    # adaptive simulation: non-decreasing session means in >= 90% of 50 runs
    neg = sorted(NEGATIVE_EMOTIONS)
    pos = sorted(POSITIVE_EMOTIONS)
    constraints = PlanConstraints(min_clips_per_emotion=4, max_clips_per_emotion=4)
    non_decreasing = 0
    for seed in range(50):
        pool = make_random_pool(
            seed=seed, clips_per_emotion=120,
            single_tag_fraction=0.7, duration_range=(180, 330),
        )
        weights = true_tag_weights(seed=1000 + seed)
        emotions = [neg[seed % 3], pos[seed % 3], pos[(seed + 1) % 3]]
        _, _, means = run_simulation(
            pool, weights, n_sessions=3, constraints=constraints, emotions=emotions
        )
        non_decreasing += all(b >= a for a, b in zip(means, means[1:]))
    assert non_decreasing >= 45
    report(
        "protocol-validator", t0, 60.0,
        f"500/500 plans valid; exclusion reproduced; "
        f"adaptivity non-decreasing in {non_decreasing}/50 simulations",
    )
