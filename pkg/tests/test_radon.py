import numpy as np
import pytest

from gaussradon import (
    RBF,
    AffineConditioning,
    BrownianMin,
    CustomKernel,
    FunctionalSpec,
    ValidationError,
    grt_linear,
    grt_mc,
    predict,
    predicted_sup_vs_sup_of_predictions,
    ridge_fit,
)
from gaussradon.radon import grt_linear_many

UNIT_KERNEL = CustomKernel(fn=lambda p, q: 1.0, name="unit")


def random_conditioning(rng, n_train=4):
    pts = rng.uniform(-1.5, 1.5, size=(n_train, 1))
    y = rng.normal(size=n_train)
    lam = float(rng.uniform(0.05, 1.0))
    return AffineConditioning(kernel=RBF(scale=1.0), train_points=pts, targets=y, lam=lam)


class TestGrtLinear:
    def test_bridge_prediction(self):
        cond = AffineConditioning(kernel=BrownianMin(horizon=1.0), train_points=[[1.0]],
                                  targets=[2.0], lam=0.0)
        assert grt_linear(cond, [0.5]) == pytest.approx(1.0, abs=1e-12)

    def test_unit_kernel_scalar(self):
        cond = AffineConditioning(kernel=UNIT_KERNEL, train_points=[[0.0]], targets=[1.0], lam=1.0)
        assert grt_linear(cond, [0.0]) == pytest.approx(0.5, abs=1e-12)

    def test_zero_targets_everywhere_zero(self):
        cond = AffineConditioning(kernel=RBF(), train_points=[[0.0], [1.0]],
                                  targets=[0.0, 0.0], lam=0.3)
        for p in ([-1.0], [0.2], [3.0]):
            assert grt_linear(cond, p) == pytest.approx(0.0, abs=1e-15)

    def test_empty_conditioning_is_centered(self):
        cond = AffineConditioning(kernel=RBF(), train_points=[], targets=[], lam=0.0)
        assert grt_linear(cond, [0.7]) == 0.0

    def test_matches_ridge_prediction(self):
        rng = np.random.default_rng(127)
        cond = random_conditioning(rng, n_train=6)
        from gaussradon import Dataset
        model = ridge_fit(Dataset(points=cond.train_points, targets=cond.targets),
                          cond.kernel, cond.lam)
        grid = rng.uniform(-2, 2, size=(9, 1))
        assert np.abs(grt_linear_many(cond, grid) - predict(model, grid)).max() <= 1e-9


class TestGrtMc:
    def test_eval_matches_linear_within_monte_carlo_error(self):
        rng = np.random.default_rng(131)
        hits = 0
        trials = 100
        for i in range(trials):
            cond = random_conditioning(rng)
            p = rng.uniform(-2, 2, size=(1,))
            est = grt_mc(cond, FunctionalSpec.eval_at(p), samples=2000, seed=1000 + i)
            exact = grt_linear(cond, p)
            if abs(est.value - exact) <= 4.0 * est.std_error:
                hits += 1
        assert hits >= 95

    def test_sup_over_singleton_equals_eval(self):
        rng = np.random.default_rng(137)
        cond = random_conditioning(rng)
        p = np.array([0.4])
        est_sup = grt_mc(cond, FunctionalSpec.sup([p]), samples=4000, seed=8)
        est_eval = grt_mc(cond, FunctionalSpec.eval_at(p), samples=4000, seed=8)
        assert est_sup.value == est_eval.value  # identical draws, identical functional
        exact = grt_linear(cond, p)
        assert abs(est_sup.value - exact) <= 4.0 * est_sup.std_error

    def test_brownian_maximum_small_grid(self):
        # Continuum mean of the running maximum is sqrt(2/pi) ~ 0.7979; a
        # 100-point grid biases low by about 0.58 * sqrt(1/100) ~ 0.06.
        cond = AffineConditioning(kernel=BrownianMin(horizon=1.0), train_points=[], targets=[], lam=0.0)
        grid = np.linspace(0.01, 1.0, 100).reshape(-1, 1)
        est = grt_mc(cond, FunctionalSpec.sup(grid), samples=5000, seed=21)
        assert 0.70 <= est.value <= 0.78

    def test_deterministic_for_fixed_seed(self):
        rng = np.random.default_rng(139)
        cond = random_conditioning(rng)
        grid = np.linspace(-1, 1, 7).reshape(-1, 1)
        a = grt_mc(cond, FunctionalSpec.sup(grid), samples=500, seed=3)
        b = grt_mc(cond, FunctionalSpec.sup(grid), samples=500, seed=3)
        assert (a.value, a.std_error) == (b.value, b.std_error)

    def test_std_error_scales_as_inverse_sqrt(self):
        rng = np.random.default_rng(149)
        cond = random_conditioning(rng)
        grid = np.linspace(-1, 1, 11).reshape(-1, 1)
        se1 = grt_mc(cond, FunctionalSpec.sup(grid), samples=4000, seed=5).std_error
        se2 = grt_mc(cond, FunctionalSpec.sup(grid), samples=16000, seed=5).std_error
        ratio = se2 / se1
        assert 0.5 * 0.8 <= ratio <= 0.5 * 1.2

    def test_exceed_in_unit_interval_and_antitone(self):
        rng = np.random.default_rng(151)
        cond = random_conditioning(rng)
        grid = np.linspace(-1, 1, 9).reshape(-1, 1)
        values = []
        for level in (-2.0, -0.5, 0.0, 0.5, 2.0):
            est = grt_mc(cond, FunctionalSpec.exceed(level, grid), samples=2000, seed=17)
            assert 0.0 <= est.value <= 1.0
            values.append(est.value)
        # same seed, same draws: exceedance sets are nested, so exactly antitone
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_grid_monotonicity_under_nesting(self):
        rng = np.random.default_rng(157)
        cond = random_conditioning(rng)
        small = np.linspace(-1, 1, 6).reshape(-1, 1)
        large = np.linspace(-1, 1, 21).reshape(-1, 1)  # superset-ish refinement
        est_small = grt_mc(cond, FunctionalSpec.sup(small), samples=4000, seed=29)
        est_large = grt_mc(cond, FunctionalSpec.sup(large), samples=4000, seed=29)
        slack = 4.0 * (est_small.std_error + est_large.std_error)
        assert est_large.value >= est_small.value - slack

    def test_mean_functional(self):
        # Posterior means are exact; the mean functional averages them.
        rng = np.random.default_rng(163)
        cond = random_conditioning(rng)
        grid = np.linspace(-1, 1, 5).reshape(-1, 1)
        est = grt_mc(cond, FunctionalSpec.mean(grid), samples=20000, seed=31)
        exact = float(np.mean(grt_linear_many(cond, grid)))
        assert abs(est.value - exact) <= 4.0 * est.std_error

    def test_inf_functional_is_negated_sup_of_negated_process(self):
        cond = AffineConditioning(kernel=BrownianMin(horizon=1.0), train_points=[], targets=[], lam=0.0)
        grid = np.linspace(0.1, 1.0, 10).reshape(-1, 1)
        est_inf = grt_mc(cond, FunctionalSpec.inf(grid), samples=4000, seed=41)
        est_sup = grt_mc(cond, FunctionalSpec.sup(grid), samples=4000, seed=41)
        # the centered process is symmetric, so E[inf] = -E[sup]
        assert abs(est_inf.value + est_sup.value) <= 4.0 * (est_inf.std_error + est_sup.std_error)

    def test_preconditions(self):
        cond = AffineConditioning(kernel=RBF(), train_points=[], targets=[], lam=0.0)
        with pytest.raises(ValidationError):
            grt_mc(cond, FunctionalSpec.eval_at([0.0]), samples=50, seed=1)
        big = np.linspace(0, 1, 10_001).reshape(-1, 1)
        with pytest.raises(ValidationError):
            grt_mc(cond, FunctionalSpec.sup(big), samples=100, seed=1)


class TestPredictedSupVsSupOfPredictions:
    def test_zero_variance_grid_agrees(self):
        # Grid inside the training set with exact interpolation: no randomness left.
        kernel = RBF(scale=1.0)
        train = np.array([[0.0], [1.0]])
        cond = AffineConditioning(kernel=kernel, train_points=train, targets=[1.0, -1.0], lam=0.0)
        est, sup_means = predicted_sup_vs_sup_of_predictions(cond, train, samples=2000, seed=7)
        assert abs(est.value - sup_means) <= max(4.0 * est.std_error, 1e-9)

    def test_singleton_grid_agrees(self):
        rng = np.random.default_rng(167)
        cond = random_conditioning(rng)
        est, sup_means = predicted_sup_vs_sup_of_predictions(cond, [[0.3]], samples=4000, seed=11)
        assert abs(est.value - sup_means) <= 4.0 * est.std_error

    def test_bridge_gap_is_large(self):
        # Pin the endpoint at zero: every prediction is 0 but the path max is
        # almost surely positive, so the functional prediction clears zero.
        cond = AffineConditioning(kernel=BrownianMin(horizon=1.0), train_points=[[1.0]],
                                  targets=[0.0], lam=0.0)
        grid = np.linspace(0.005, 0.995, 199).reshape(-1, 1)
        est, sup_means = predicted_sup_vs_sup_of_predictions(cond, grid, samples=20000, seed=13)
        assert sup_means == pytest.approx(0.0, abs=1e-12)
        assert est.value - sup_means >= 5.0 * est.std_error

    def test_jensen_inequality_on_random_conditionings(self):
        rng = np.random.default_rng(173)
        for i in range(25):
            cond = random_conditioning(rng)
            grid = rng.uniform(-2, 2, size=(12, 1))
            est, sup_means = predicted_sup_vs_sup_of_predictions(cond, grid, samples=2000, seed=500 + i)
            assert est.value >= sup_means - 4.0 * est.std_error
