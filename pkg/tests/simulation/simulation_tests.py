import os
import json
import tempfile
import unittest

import numpy as np
import pandas as pd

from pmoe import simulation
from pmoe.config import PmoeConfig
from pmoe.errors import InvalidConfig, SimulationAborted
from pmoe.methods import OracleMethod, PmoeMethod, YFitMethod
from pmoe.scenarios import LinearPredictor, Scenario
from pmoe.simulation import Draw, run, summarize

TINY = Scenario(
    "tiny",
    6,
    0.0,
    1.0,
    LinearPredictor({0: 0.5, 1: 0.5}),
    LinearPredictor({0: 1.0, 2: 1.0}, effect=1.0),
    1.0,
    true_support=(0, 2),
)


def methods():
    return [OracleMethod(), YFitMethod(), PmoeMethod(PmoeConfig(n_lambdas=10))]


class SummarizeTests(unittest.TestCase):
    """
    tests for the per-method summary of a simulation
    """

    def test_statistics(self):
        """
        tests bias, S.D, MSE and the zero counts
        """
        draws = [
            Draw(0, "m", 1.5, (0, 1)),
            Draw(1, "m", 0.5, (0,)),
            Draw(2, "m", 1.3, (0, 1, 3)),
        ]
        row = summarize("m", draws, 1.0, 4, (0, 1))
        thetas = np.array([1.5, 0.5, 1.3])
        self.assertAlmostEqual(row.bias, thetas.mean() - 1.0, delta=1e-12)
        self.assertAlmostEqual(row.sd, thetas.std(ddof=1), delta=1e-12)
        self.assertAlmostEqual(row.mse, np.mean((thetas - 1.0) ** 2), delta=1e-12)
        self.assertAlmostEqual(row.mse, row.mse_decomposed, delta=1e-12)
        # zeros outside (0, 1): {2, 3}, {2, 3}, {2}
        self.assertAlmostEqual(row.mean_correct_zeros, 5 / 3, delta=1e-12)
        self.assertAlmostEqual(row.mean_incorrect_zeros, 1 / 3, delta=1e-12)
        self.assertEqual((row.successes, row.failures), (3, 0))

    def test_single_draw_has_no_sd(self):
        row = summarize("m", [Draw(0, "m", 1.2, ())], 1.0, 2, (0,))
        self.assertIsNone(row.sd)
        self.assertAlmostEqual(row.mse, 0.04, delta=1e-12)

    def test_too_many_failures(self):
        """
        tests that a method failing in more than 10% of replications is an error
        """
        draws = [Draw(i, "m", 1.0, ()) for i in range(18)]
        draws += [Draw(18, "m", None, None, "x"), Draw(19, "m", None, None, "y")]
        with self.assertRaises(SimulationAborted):
            summarize("m", draws, 1.0, 2, ())
        row = summarize("m", draws[:19] + [Draw(19, "m", 1.0, ())], 1.0, 2, ())
        self.assertEqual(row.failures, 1)


class RunTests(unittest.TestCase):
    """
    tests for running replications of a scenario
    """

    def test_report(self):
        report = run(TINY, 200, 4, methods(), seed=3)
        self.assertEqual([row.method for row in report.rows], ["Oracle", "Y-fit", "PMOE(tau=0.5)"])
        self.assertEqual(len(report.draws), 12)
        oracle = report.row("Oracle")
        self.assertEqual(oracle.mean_correct_zeros, 4.0)
        self.assertEqual(oracle.mean_incorrect_zeros, 0.0)
        self.assertLess(abs(oracle.bias), 0.5)
        for row in report.rows:
            self.assertAlmostEqual(row.mse, row.mse_decomposed, delta=1e-12)
        with self.assertRaises(KeyError):
            report.row("nope")
        table = report.table()
        self.assertEqual(list(table.columns), ["Method", "Bias", "S.D", "MSE", "Correct", "Incorrect"])
        self.assertEqual(report.to_dict()["schema_version"], simulation.SCHEMA_VERSION)

    def test_deterministic_and_worker_independent(self):
        """
        tests that results depend on the seed only, not on the workers
        """
        a = run(TINY, 150, 3, methods(), seed=5)
        b = run(TINY, 150, 3, methods(), seed=5, n_jobs=2)
        self.assertEqual(a.to_json(), run(TINY, 150, 3, methods(), seed=5).to_json())
        for ra, rb in zip(a.rows, b.rows):
            self.assertEqual(ra.method, rb.method)
            self.assertAlmostEqual(ra.bias, rb.bias, delta=1e-9)
            self.assertAlmostEqual(ra.mse, rb.mse, delta=1e-9)
        self.assertEqual([d.selected for d in a.draws], [d.selected for d in b.draws])

    def test_invalid_reps(self):
        with self.assertRaises(InvalidConfig):
            run(TINY, 100, 0, methods())

    def test_write(self):
        report = run(TINY, 100, 2, [OracleMethod()], seed=1)
        with tempfile.TemporaryDirectory() as tmp:
            paths = report.write(os.path.join(tmp, "tiny"))
            self.assertEqual([os.path.basename(p) for p in paths], ["tiny.json", "tiny.csv", "tiny_draws.csv"])
            with open(paths[0]) as f:
                self.assertEqual(json.load(f)["scenario"], "tiny")
            table = pd.read_csv(paths[1])
            self.assertEqual(list(table["Method"]), ["Oracle"])
            draws = pd.read_csv(paths[2], keep_default_na=False)
            self.assertEqual(len(draws), 2)
            self.assertEqual(list(draws["selected"]), ["x1 x3", "x1 x3"])
