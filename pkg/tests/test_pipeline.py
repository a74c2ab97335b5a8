import math

import numpy as np
import pytest

from qdap.classifiers import FullQdaRule, LdaRule, OneDimQdaRule, fit_one_dim_qda
from qdap.core import Direction, GaussianPairModel, LabeledDataset, project_params
from qdap.error_function import classification_error
from qdap.exceptions import EstimationError, ModelFormatError
from qdap.model_io import dumps, load_model, loads, save_model
from qdap.optimizer import DescentConfig
from qdap.pipeline import (
    QdapModel,
    evaluate,
    fit_lda,
    fit_oracle,
    fit_qda,
    fit_qdap,
    predict_qdap,
    qdap_from_model,
)
from qdap.simulation import sample

from conftest import monte_carlo_rate

TIGHT = DescentConfig(tol=1e-15, max_iters=5000)


@pytest.fixture(scope="module")
def separated():
    m = GaussianPairModel([0.0, 0.0], [12.0, 0.0], np.eye(2), np.eye(2))
    return m, sample(m, 100, seed=3)


class TestFitQdap:
    def test_rule_matches_projection(self, separated):
        _, data = separated
        fitted = fit_qdap(data)
        want = fit_one_dim_qda(project_params(fitted.source_model, fitted.direction))
        assert fitted.rule == want

    def test_separable_training_error(self, separated):
        _, data = separated
        assert evaluate(fit_qdap(data), data) == 0.0

    def test_single_observation_class(self):
        data = LabeledDataset.from_classes([[0.0, 1.0]], [[0.0, 1.0], [2.0, 3.0]])
        with pytest.raises(EstimationError):
            fit_qdap(data)

    def test_deterministic(self, models):
        data = sample(models[3], 150, seed=4)
        a, b = fit_qdap(data), fit_qdap(data)
        np.testing.assert_array_equal(a.direction.v, b.direction.v)
        assert a.rule == b.rule

    def test_model4_test_error(self, models):
        fitted = fit_qdap(sample(models[4], 200, seed=21))
        err = evaluate(fitted, sample(models[4], 500, seed=22))
        assert 0.10 <= err <= 0.20


class TestPredictQdap:
    def test_class_center(self, separated):
        _, data = separated
        fitted = fit_qdap(data)
        assert predict_qdap(fitted, fitted.source_model.mu0) == 0

    def test_boundary_point(self):
        rule = OneDimQdaRule("threshold", cut=1.5, left_label=1)
        model = QdapModel(Direction([1.0, 0.0]), rule)
        assert predict_qdap(model, [1.5, 7.0]) == 0
        assert predict_qdap(model, [1.0, 7.0]) == 1

    def test_feature_scaling_invariance(self, models):
        m = GaussianPairModel([0, 0, 0], [1.5, 0.5, 0], np.diag([1.0, 2.0, 0.5]),
                              np.array([[3.0, 0.4, 0], [0.4, 1.0, 0.2], [0, 0.2, 0.7]]))
        data, test = sample(m, 200, seed=8), sample(m, 500, seed=9)
        a = fit_qdap(data, TIGHT)
        b = fit_qdap(data.transform(2 * np.eye(3), np.zeros(3)), TIGHT)
        np.testing.assert_array_equal(a.predict(test.x), b.predict(2 * test.x))


class TestEvaluate:
    def test_perfect(self, separated):
        _, data = separated
        assert evaluate(lambda x: data.y, data) == 0.0

    def test_constant_predictor(self, separated):
        _, data = separated
        assert evaluate(lambda x: np.zeros(len(x), dtype=int), data) == 0.5

    def test_oracle_model1(self, models):
        err = evaluate(fit_oracle(models[1]), sample(models[1], 500, seed=12))
        assert abs(err - 0.119) <= 0.031


class TestOracle:
    def test_homoscedastic_matches_lda(self, rng):
        a = rng.standard_normal((3, 3))
        s = a @ a.T + np.eye(3)
        m = GaussianPairModel(np.zeros(3), np.ones(3), s, s)
        x = 3 * rng.standard_normal((500, 3))
        np.testing.assert_array_equal(fit_oracle(m).predict(x), LdaRule(m).predict(x))

    @pytest.mark.parametrize("model_id,expected", [(1, 0.1193), (4, 0.1005)])
    def test_large_test_set(self, models, model_id, expected):
        rate, se = monte_carlo_rate(fit_oracle(models[model_id]).predict, models[model_id], 100_000,
                                    np.random.default_rng(model_id))
        assert abs(rate - expected) <= 3 * se + 1e-4


class TestErrorChain:
    @pytest.mark.parametrize("model_id", [1, 3, 4, 5])
    def test_population_chain(self, models, model_id):
        m = models[model_id]
        fitted = qdap_from_model(m)
        e_qdap = classification_error(m, fitted.direction)
        oracle, se = monte_carlo_rate(fit_oracle(m).predict, m, 100_000, np.random.default_rng(3))
        assert e_qdap >= oracle - 3 * se
        beta = np.linalg.solve(0.5 * (m.sigma0 + m.sigma1), m.mu0 - m.mu1)
        if np.linalg.norm(beta) > 0:
            assert e_qdap <= classification_error(m, beta) + 1e-12


class TestBaselines:
    def test_qda_singular_fails(self):
        rng = np.random.default_rng(0)
        data = LabeledDataset.from_classes(rng.standard_normal((4, 6)), rng.standard_normal((4, 6)))
        from qdap.exceptions import SingularCovarianceError
        with pytest.raises(SingularCovarianceError):
            fit_qda(data)
        fit_lda(data)  # ridge keeps LDA usable


class TestSerialization:
    @pytest.mark.parametrize("kind", ["interval", "threshold", "constant"])
    def test_rule_round_trip(self, kind):
        rule = {
            "interval": OneDimQdaRule("interval", lower=-0.1 / 3, upper=math.pi, inside_label=1),
            "threshold": OneDimQdaRule("threshold", cut=1 / 7, left_label=1),
            "constant": OneDimQdaRule("constant", label=0),
        }[kind]
        model = QdapModel(Direction([0.3, -1.0 / 3, 2.0]), rule)
        back = loads(dumps(model))
        np.testing.assert_array_equal(back.direction.v, model.direction.v)
        assert back.rule == rule

    def test_fitted_round_trip(self, tmp_path, models):
        data, test = sample(models[3], 150, seed=1), sample(models[3], 200, seed=2)
        for fitted in (fit_qdap(data), fit_lda(data), fit_qda(data)):
            path = tmp_path / "m.txt"
            save_model(fitted, path)
            back = load_model(path)
            assert type(back) is type(fitted)
            np.testing.assert_array_equal(back.predict(test.x), fitted.predict(test.x))

    def test_header(self):
        text = dumps(QdapModel(Direction([1.0]), OneDimQdaRule("constant")))
        assert text.splitlines()[0] == "qdap-model 1"

    def test_17_digits(self):
        text = dumps(QdapModel(Direction([1.0, 1.0]), OneDimQdaRule("threshold", cut=0.1, left_label=0)))
        assert "0.10000000000000001" in text

    @pytest.mark.parametrize("text", ["", "qdap-model 2\n", "qdap-model 1\nmethod qdap\np 2\n",
                                      "qdap-model 1\nmethod svm\np 1\n"])
    def test_malformed(self, text):
        with pytest.raises(ModelFormatError):
            loads(text)
