"""
Monte-Carlo acceptance checks (slow; run with `pytest -m slow`)
"""

import numpy as np
import pytest

from pwtest.core import PwConfig, RngSeed, SampleSet, estimate_pw, generate, penalty_gap_probe, pw_grid_oracle_k1
from pwtest.core.datasets import DatasetSpec, h0_pair, h1_pair
from pwtest.core.tester import calibrate, convergence_medians, convergence_probe, evaluate_roc, run_test

pytestmark = pytest.mark.slow


def angle_to(direction, target):
    """Angle in degrees between two lines through the origin"""
    cosine = abs(float(np.dot(direction, target))) / (np.linalg.norm(direction) * np.linalg.norm(target))
    return float(np.degrees(np.arccos(min(1.0, cosine))))


# ============================================================
# Optimizer against brute force
# ============================================================

class TestOptimizerAgainstOracle:
    def test_recovers_known_direction(self, oracle_pair):
        X, Y = oracle_pair
        target, _ = pw_grid_oracle_k1(X, Y)
        hits = 0
        for seed in range(10):
            estimate = estimate_pw(X, Y, PwConfig(seed=seed, log_every=0))
            close = abs(estimate.value - target) <= 0.02 * target
            aligned = angle_to(estimate.projector.direction(), [0.0, 1.0]) <= 5.0
            hits += close and aligned
        assert hits >= 8

    def test_random_start_recovers_known_direction(self, oracle_pair):
        X, Y = oracle_pair
        hits = 0
        for seed in range(10):
            estimate = estimate_pw(X, Y, PwConfig(seed=seed, init="random", log_every=0))
            hits += abs(estimate.value - 2.0) <= 0.04
        assert hits >= 8

    def test_gaussian_shift_direction(self, rng):
        shift = np.array([0.0, 0.0, 2.0])
        X = SampleSet(rng.normal(size=(200, 3)))
        Y = SampleSet(rng.normal(size=(200, 3)) + shift)
        target, direction = pw_grid_oracle_k1(X, Y, grid_size=2000)
        estimate = estimate_pw(X, Y, PwConfig(seed=1, log_every=0))
        assert estimate.value >= 0.9 * target
        assert abs(direction[2]) > 0.9
        assert angle_to(estimate.projector.direction(), shift) <= 15.0

    def test_penalty_shrinks_defect(self, oracle_pair):
        lambdas = [1.0, 10.0, 100.0]
        defects = np.array([
            [row.defect for row in penalty_gap_probe(*oracle_pair, PwConfig(seed=seed, log_every=0), lambdas)]
            for seed in range(10)
        ])
        medians = np.median(defects, axis=0)
        assert medians[1] <= medians[0]
        assert medians[2] <= medians[1]
        assert medians[2] <= 0.5 * medians[0]


# ============================================================
# Behaviour under H0
# ============================================================

class TestNullBehaviour:
    def test_threshold_test_is_conservative(self):
        result = calibrate(DatasetSpec("gauss-var", "mu", 5), method="pw", n=100, trials=200,
                           method_config=PwConfig(iterations=300, log_every=0), sigmoid=True)
        assert result.trials == 200
        assert result.rate <= 0.05

    def test_statistic_decays_with_n(self):
        rows = convergence_probe(DatasetSpec("blob", "mu", 2), sizes=[400, 1600], seeds=20,
                                 cfg=PwConfig(log_every=0))
        medians = convergence_medians(rows).set_index("n")["statistic"]
        assert medians[1600] <= 0.7 * medians[400]

    def test_permutation_pvalues_are_calibrated(self):
        spec = DatasetSpec("blob", "mu", 2)
        root = RngSeed(2024)
        small = 0
        for i in range(200):
            X = generate(spec, 100, root.derive(f"x/{i}"))
            Y = generate(spec, 100, root.derive(f"y/{i}"))
            verdict = run_test(X, Y, method="mmd", mode="permutation", permutations=199,
                               seed=root.derive(f"split/{i}"))
            small += verdict.p_value <= 0.05
        assert small / 200 <= 0.08

    def test_exchangeable_classes_give_chance_auc(self):
        spec = DatasetSpec("gauss-var", "mu", 5)
        curve = evaluate_roc(h0_pair(spec), h0_pair(spec), method="mmd", trials=100, n=50, seed=RngSeed(1))
        assert abs(curve.auc - 0.5) <= 0.1


# ============================================================
# Power against the kernel baseline
# ============================================================

class TestPower:
    def test_laplace_shift_high_dimension(self):
        spec = DatasetSpec("laplace-shift", "mu", 400)
        pair_h0, pair_h1 = h0_pair(spec), h1_pair(spec)
        mmd_curve = evaluate_roc(pair_h0, pair_h1, method="mmd", trials=100, n=200, seed=RngSeed(0))
        pw_curve = evaluate_roc(pair_h0, pair_h1, method="pw", trials=100, n=200, seed=RngSeed(0),
                                method_config=PwConfig(log_every=0))
        assert 0.75 <= mmd_curve.auc <= 0.92
        assert pw_curve.auc >= 0.95
        assert pw_curve.auc > mmd_curve.auc

    def test_gaussian_variance_moderate_dimension(self):
        spec = DatasetSpec("gauss-var", "mu", 50)
        pair_h0, pair_h1 = h0_pair(spec), h1_pair(spec)
        mmd_curve = evaluate_roc(pair_h0, pair_h1, method="mmd", trials=100, n=40, seed=RngSeed(0))
        pw_curve = evaluate_roc(pair_h0, pair_h1, method="pw", trials=100, n=40, seed=RngSeed(0),
                                method_config=PwConfig(log_every=0))
        assert pw_curve.auc >= 0.90
        assert pw_curve.auc > mmd_curve.auc
