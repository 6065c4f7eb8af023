import dataclasses
import json
import os
import tempfile
import unittest

import numpy as np

from pmoe.errors import DataFormatError, UnknownScenario, ValidationError
from pmoe.models import least_squares, with_intercept
from pmoe.scenarios import (
    LinearPredictor,
    Scenario,
    available,
    generate,
    generate_raw,
    get_scenario,
)


class BuiltinTests(unittest.TestCase):
    """
    tests for the built-in simulation scenarios
    """

    def test_available(self):
        self.assertEqual(available(), ["a2", "a3s1", "a3s2", "a3s3", "s1", "s2"])
        self.assertEqual(get_scenario("a3s1").r, 550)
        self.assertTrue(get_scenario("a2").orthogonalize)
        with self.assertRaises(UnknownScenario) as cm:
            get_scenario("s9")
        self.assertEqual(cm.exception.exit_code, 2)

    def test_generate_is_deterministic(self):
        """
        tests that the same seed draws the same dataset
        """
        a = generate(get_scenario("s2"), 50, 7)
        b = generate(get_scenario("s2"), 50, 7)
        c = generate(get_scenario("s2"), 50, 8)
        np.testing.assert_array_equal(a.x, b.x)
        np.testing.assert_array_equal(a.d, b.d)
        np.testing.assert_array_equal(a.y, b.y)
        self.assertFalse(np.array_equal(a.y, c.y))
        self.assertEqual(a.column_names[0], "x1")
        self.assertEqual(a.column_names[-1], "x100")
        self.assertTrue(set(np.unique(a.d)) <= {0.0, 1.0})

    def test_too_small(self):
        with self.assertRaises(ValidationError):
            generate(get_scenario("s1"), 5, 0)

    def test_covariate_law(self):
        s1 = dataclasses.replace(get_scenario("s1"), r=8)
        x, _, _ = generate_raw(s1, 20000, 1)
        np.testing.assert_allclose(x.mean(axis=0), 1.0, atol=0.05)
        np.testing.assert_allclose(x.var(axis=0, ddof=1), 4.0, atol=0.15)

    def test_treatment_share(self):
        """
        tests the share of treated units under s1
        """
        s1 = dataclasses.replace(get_scenario("s1"), r=8)
        x, d, _ = generate_raw(s1, 200000, 2)
        self.assertAlmostEqual(d.mean(), s1.treatment_probability(x).mean(), delta=0.01)

    def test_outcome_model(self):
        s1 = dataclasses.replace(get_scenario("s1"), r=8)
        x, d, y = generate_raw(s1, 200000, 3)
        coef = least_squares(with_intercept(np.column_stack([d, x])), y)
        self.assertAlmostEqual(coef[1], 1.0, delta=0.05)
        np.testing.assert_allclose(
            coef[2:], [2.0, 0.5, 5.0, 5.0, 0.0, 0.0, 0.0, 0.0], atol=0.05
        )

    def test_nonlinear_scenarios(self):
        for name in ("a3s2", "a3s3"):
            ds = generate(get_scenario(name), 100, 4)
            self.assertEqual(ds.r, 550)
            self.assertTrue(np.all(np.isfinite(ds.y)))

    def test_correlated_covariates(self):
        """
        tests the AR(1) correlation of the covariates
        """
        scenario = Scenario(
            "ar", 3, 0.0, 1.0, LinearPredictor({}), LinearPredictor({}, effect=1.0),
            1.0, true_support=(0,), rho=0.5,
        )
        x, _, _ = generate_raw(scenario, 50000, 5)
        c = np.corrcoef(x, rowvar=False)
        self.assertAlmostEqual(c[0, 1], 0.5, delta=0.02)
        self.assertAlmostEqual(c[0, 2], 0.25, delta=0.02)

    def test_validation(self):
        with self.assertRaises(ValidationError):
            Scenario("bad", 3, 0.0, 1.0, LinearPredictor({}), LinearPredictor({}), 1.0, rho=1.0)
        with self.assertRaises(ValidationError):
            Scenario("bad", 3, 0.0, 1.0, LinearPredictor({}), LinearPredictor({}), 1.0)
        with self.assertRaises(ValidationError):
            Scenario(
                "bad", 3, 0.0, -1.0, LinearPredictor({}), LinearPredictor({}), 1.0,
                true_support=(0,),
            )


class LinearPredictorTests(unittest.TestCase):
    """
    tests for linear predictors of scenarios
    """

    def test_evaluate(self):
        p = LinearPredictor({0: 2.0, 2: -1.0}, intercept=0.5, effect=3.0)
        x = np.array([[1.0, 5.0, 2.0], [0.0, 0.0, 1.0]])
        np.testing.assert_allclose(p(x), [0.5, -0.5])
        np.testing.assert_allclose(p(x, np.array([1.0, 0.0])), [3.5, -0.5])
        self.assertEqual(repr(p), "3*d + 2*x1 + -1*x3")


class ScenarioFileTests(unittest.TestCase):
    """
    tests for scenarios loaded from JSON files
    """

    def setUp(self):
        self.dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.dir.cleanup()

    def write(self, content) -> str:
        path = os.path.join(self.dir.name, "scenario.json")
        with open(path, "w") as f:
            f.write(content if isinstance(content, str) else json.dumps(content))
        return path

    def test_load(self):
        path = self.write(
            {
                "name": "mine",
                "r": 5,
                "treatment_coef": {"1": 0.5, "4": -1},
                "outcome_coef": {"1": 1, "2": 2},
                "noise_sd": 0.5,
                "true_theta": 2,
            }
        )
        scenario = Scenario.from_file(path)
        self.assertEqual(scenario.name, "mine")
        self.assertEqual(scenario.true_support, (0, 1))
        self.assertEqual(scenario.true_theta, 2.0)
        self.assertEqual(scenario.treatment_formula.coef, {0: 0.5, 3: -1.0})
        self.assertEqual(scenario.to_dict()["true_support"], [1, 2])
        ds = generate(scenario, 30, 0)
        self.assertEqual(ds.r, 5)

    def test_errors(self):
        """
        tests that malformed scenario files are rejected
        """
        for content in (
            "{not json",
            {"name": "x"},
            {"r": 3, "outcome_coef": {"4": 1}},
            {"r": 3, "outcome_coef": [1, 2]},
        ):
            with self.assertRaises(DataFormatError):
                Scenario.from_file(self.write(content))
        with self.assertRaises(DataFormatError):
            Scenario.from_file(os.path.join(self.dir.name, "missing.json"))
