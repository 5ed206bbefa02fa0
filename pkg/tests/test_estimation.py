import json

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import stats

from negacopula import copula, estimation, marginals, sampling
from negacopula.bivariate import BivariateModel
from negacopula.marginals import Gamma


class TestPairedData:
    def test_from_columns_drops_incomplete(self):
        x = np.array([1.0, np.nan, 3.0, 4.0, 5.0])
        y = np.array([2.0, 2.0, np.nan, 1.0, 0.5])
        data = estimation.PairedData.from_columns(x, y)
        assert data.n == 3
        assert data.dropped == 2
        assert_allclose(data.x, [1.0, 4.0, 5.0])
        assert_allclose(data.y, [2.0, 1.0, 0.5])

    def test_fixture_counts(self, airquality):
        assert airquality.n == 116
        assert airquality.dropped == 37

    def test_too_few_pairs_rejected(self):
        with pytest.raises(ValueError):
            estimation.PairedData(np.array([1.0, 2.0]), np.array([2.0, 1.0]))

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError):
            estimation.PairedData.from_columns(np.arange(4.0), np.arange(5.0))


class TestRankStatistics:
    def test_pseudo_observations_frozen(self):
        data = estimation.PairedData(np.array([3.0, 1.0, 2.0]), np.array([1.0, 2.0, 3.0]))
        u, v = estimation.pseudo_observations(data)
        assert_allclose(u, [0.75, 0.25, 0.5])
        assert_allclose(v, [0.25, 0.5, 0.75])

    def test_pseudo_observations_ties(self):
        data = estimation.PairedData(np.array([1.0, 1.0, 2.0]), np.array([3.0, 2.0, 1.0]))
        u, _ = estimation.pseudo_observations(data)
        assert_allclose(u, [0.375, 0.375, 0.75])

    def test_countermonotone(self):
        x = np.arange(1.0, 21.0)
        data = estimation.PairedData(x, -x + 30.0)
        assert estimation.empirical_rho(data) == pytest.approx(-1.0)
        assert estimation.empirical_tau(data) == pytest.approx(-1.0)

    def test_fixture_values(self, airquality):
        assert estimation.empirical_rho(airquality) == pytest.approx(-0.59, abs=0.005)
        assert estimation.empirical_tau(airquality) == pytest.approx(-0.43, abs=0.005)

    def test_monte_carlo_rho(self):
        batch = sampling.sample_copula(100000, 1.0, seed=17)
        data = estimation.PairedData(batch.u, batch.v)
        assert estimation.empirical_rho(data) == pytest.approx(-2.0 / 3.0, abs=0.01)

    def test_constant_column(self):
        data = estimation.PairedData(np.ones(5), np.arange(5.0))
        with pytest.raises(estimation.ConstantColumn):
            estimation.empirical_rho(data)


class TestEstimateTheta:
    def test_fixture_theta(self, airquality):
        assert estimation.estimate_theta(airquality) == pytest.approx(0.765, abs=0.005)

    def test_round_trip_invariant(self, airquality):
        theta = estimation.estimate_theta(airquality)
        assert copula.spearman_rho(theta) == pytest.approx(
            estimation.empirical_rho(airquality), abs=1e-10
        )

    def test_tau_method(self, airquality):
        theta = estimation.estimate_theta(airquality, method="tau_inversion")
        assert copula.kendall_tau(theta) == pytest.approx(
            estimation.empirical_tau(airquality), abs=1e-10
        )

    def test_rank_invariance(self, airquality):
        transformed = estimation.PairedData(
            np.exp(airquality.x / 10.0), airquality.y**3, dropped=airquality.dropped
        )
        assert estimation.estimate_theta(transformed) == pytest.approx(
            estimation.estimate_theta(airquality), abs=1e-12
        )

    def test_positive_dependence_rejected(self):
        x = np.arange(1.0, 21.0)
        data = estimation.PairedData(x, x + np.sin(x))
        with pytest.raises(estimation.PositiveDependence):
            estimation.estimate_theta(data)

    def test_unknown_method(self, airquality):
        with pytest.raises(ValueError):
            estimation.estimate_theta(airquality, method="mle")


class TestKsBootstrap:
    def test_statistic_matches_scipy(self, airquality):
        fit = marginals.mle_fit("gamma", airquality.x)
        ours = estimation.ks_statistic(airquality.x, fit.model)
        reference = stats.kstest(
            airquality.x, lambda q: np.asarray(fit.model.cdf(q))
        ).statistic
        assert ours == pytest.approx(reference, abs=1e-12)

    def test_deterministic_given_seed(self, airquality):
        fit = marginals.mle_fit("gamma", airquality.x)
        a = estimation.ks_test_bootstrap(airquality.x, fit.model, 200, seed=11)
        b = estimation.ks_test_bootstrap(airquality.x, fit.model, 200, seed=11)
        assert a == b

    def test_p_value_in_unit_interval(self, airquality):
        fit = marginals.mle_fit("gamma", airquality.y)
        stat, p = estimation.ks_test_bootstrap(airquality.y, fit.model, 150, seed=0)
        assert 0.0 <= p <= 1.0
        assert stat > 0.0

    def test_guards(self, airquality):
        fit = marginals.mle_fit("gamma", airquality.x)
        with pytest.raises(ValueError):
            estimation.ks_test_bootstrap(airquality.x, fit.model, 50, seed=0)
        with pytest.raises(ValueError):
            estimation.ks_test_bootstrap(airquality.x, fit.model, 200, seed=0, compare_to="cdf")


@pytest.fixture(scope="module")
def quick_report(airquality):
    config = estimation.FitConfig(bootstrap_B=200, seed=42, conditioning_x=(5.7, 9.7))
    return estimation.fit_pipeline(airquality, config)


class TestFitPipeline:
    def test_marginals_and_theta(self, quick_report):
        assert quick_report.marginal_x.model.family == "gamma"
        assert quick_report.marginal_y.model.family == "gamma"
        assert quick_report.theta_hat == pytest.approx(0.765, abs=0.005)
        assert quick_report.n == 116
        assert quick_report.dropped == 37

    def test_model_property(self, quick_report):
        model = quick_report.model
        assert isinstance(model, BivariateModel)
        assert model.theta == quick_report.theta_hat

    def test_report_serializes_against_schema(self, quick_report):
        import importlib.resources

        import jsonschema

        schema = json.loads(
            (importlib.resources.files("negacopula") / "schemas" / "fit_report.schema.json").read_text()
        )
        payload = json.loads(json.dumps(quick_report.to_dict()))
        jsonschema.validate(payload, schema)
        assert list(payload["conditional_curves"]["cdf_by_x"]) == ["5.7", "9.7"]

    def test_self_consistency_on_synthetic_data(self):
        truth = BivariateModel(Gamma(7.171, 1.375), Gamma(1.7, 24.775), theta=0.765)
        x, y = sampling.sample_bivariate(10000, truth, seed=100)
        data = estimation.PairedData(x, y)
        assert estimation.estimate_theta(data) == pytest.approx(0.765, abs=0.05)

    def test_distinct_streams_per_margin(self):
        # the two margins must get genuinely independent bootstrap streams
        seed_x, seed_y = sampling.child_seed_sequences(0, 2)
        draws_x = np.random.default_rng(seed_x).random(8)
        draws_y = np.random.default_rng(seed_y).random(8)
        assert not np.array_equal(draws_x, draws_y)
