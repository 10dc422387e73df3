#!/usr/bin/env python3
"""
Unit tests for the n/log n fit, eps extrapolation, prefactor tables and the
CSV/JSON writers.
"""

import json
import math
import os
import tempfile
import unittest

import numpy as np

from triperc import cft
from triperc.analysis import (
    csv_text,
    extrapolate_linear,
    fit_n_log,
    prefactor_report,
    write_csv,
    write_summary,
)
from triperc.config import Settings
from triperc.errors import ArgumentError
from triperc.estimators import estimate_window_grid
from triperc.percolation.sampling import Configuration

# Constants
TEST_DIR = os.path.dirname(os.path.abspath(__file__))
QUIET = Settings(progress=False)


def closed_sampler(domain, seed_record):
    return Configuration.filled(domain, False)


def _closed_grid(kind, eps):
    return estimate_window_grid(16, eps, kind, trials=3, truncation=16, sampler=closed_sampler, settings=QUIET)


class FitTests(unittest.TestCase):

    def test_recovers_exact_model(self):
        points = [(n, 2.0 * n + 0.3 * math.log(n) + 1.0, 0.1) for n in (16, 32, 64, 128, 256)]
        fit = fit_n_log(points)
        self.assertAlmostEqual(fit.A, 2.0, places=8)
        self.assertAlmostEqual(fit.B, 0.3, places=6)
        self.assertAlmostEqual(fit.C, 1.0, places=6)
        self.assertEqual(fit.points, 5)
        self.assertLess(fit.residual_norm, 1e-6)
        self.assertTrue(np.allclose(fit.covariance, fit.covariance.T))
        self.assertTrue(all(s > 0 for s in fit.stderrs))

    def test_to_dict(self):
        points = [(n, n + math.log(n), 0.5) for n in (8, 16, 32, 64)]
        data = fit_n_log(points).to_dict()
        self.assertTrue({"A", "B", "C", "A_stderr", "covariance", "points"} <= set(data))
        json.dumps(data)

    def test_needs_four_distinct_n(self):
        with self.assertRaises(ArgumentError):
            fit_n_log([(16, 1.0, 0.1), (32, 2.0, 0.1), (64, 3.0, 0.1)])
        with self.assertRaises(ArgumentError):
            fit_n_log([(16, 1.0, 0.1), (16, 1.1, 0.1), (32, 2.0, 0.1), (64, 3.0, 0.1)])

    def test_rejects_bad_points(self):
        with self.assertRaises(ArgumentError):
            fit_n_log([(n, 1.0, 0.0) for n in (8, 16, 32, 64)])
        with self.assertRaises(ArgumentError):
            fit_n_log([(n, 1.0, 0.1) for n in (0, 1, 2, 3)])


class ExtrapolationTests(unittest.TestCase):

    EPS = (1.0, 0.5, 0.25)

    def test_weighted_line(self):
        values = [0.2 + 0.1 * e for e in self.EPS]
        fit = extrapolate_linear(self.EPS, values, [0.01, 0.01, 0.02])
        self.assertAlmostEqual(fit.intercept, 0.2, places=10)
        self.assertAlmostEqual(fit.slope, 0.1, places=10)
        self.assertGreater(fit.intercept_stderr, 0.0)
        self.assertEqual(fit.points, 3)

    def test_zero_stderrs(self):
        values = [0.2 + 0.1 * e for e in self.EPS]
        fit = extrapolate_linear(self.EPS, values, [0.0, 0.0, 0.0])
        self.assertAlmostEqual(fit.intercept, 0.2, places=10)
        self.assertAlmostEqual(fit.intercept_stderr, 0.0, places=10)

    def test_invalid_inputs(self):
        with self.assertRaises(ArgumentError):
            extrapolate_linear(self.EPS, [1.0, 2.0, 3.0], [0.1, 0.0, 0.1])
        with self.assertRaises(ArgumentError):
            extrapolate_linear((0.5, 0.5), [1.0, 2.0], [0.1, 0.1])
        with self.assertRaises(ArgumentError):
            extrapolate_linear(self.EPS, [1.0, 2.0], [0.1, 0.1, 0.1])


class PrefactorReportTests(unittest.TestCase):

    def test_half_plane(self):
        report = prefactor_report([_closed_grid("half", 1.0), _closed_grid("half", 0.5)])
        self.assertEqual(len(report.rows), 2)
        half = report.summary["half"]["T_over_eps"]
        self.assertEqual(half["intercept"], 0.0)
        self.assertIsNone(half["deviation_sigmas"])
        self.assertEqual(half["target"], cft.HALF_PLANE_PREFACTOR)
        self.assertEqual(report.summary["targets"]["full_plane_bound"], cft.FULL_PLANE_BOUND)

    def test_full_plane(self):
        report = prefactor_report([_closed_grid("full", 1.0), _closed_grid("full", 0.5)])
        full = report.summary["full"]
        self.assertEqual(full["direct_T_over_eps"]["target"], cft.FULL_PLANE_CONJECTURE)
        self.assertEqual(full["cut_T_tilde_over_eps"]["target"], cft.FULL_PLANE_BOUND)
        self.assertEqual(len(full["L_bound"]), 2)
        predictions = {row["eps"]: row["cut_prediction"] for row in report.rows}
        self.assertIsNone(predictions[1.0])
        self.assertGreater(predictions[0.5], 0.0)

    def test_needs_two_eps(self):
        with self.assertRaises(ArgumentError):
            prefactor_report([_closed_grid("half", 1.0)])


class WriterTests(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def test_csv_text(self):
        text = csv_text([{"a": 1, "b": None}, {"a": 0.5, "c": "x,y"}])
        self.assertEqual(text, 'a,b,c\r\n1,,\r\n0.5,,"x,y"\r\n')

    def test_csv_floats_round_trip(self):
        text = csv_text([{"x": 0.1 + 0.2}])
        self.assertEqual(float(text.split("\r\n")[1]), 0.1 + 0.2)

    def test_write_csv_creates_directories(self):
        path = write_csv([{"a": 1}], os.path.join(self.tmp.name, "out", "t.csv"))
        with open(path, newline="", encoding="utf-8") as f:
            self.assertEqual(f.read(), "a\r\n1\r\n")

    def test_write_summary_with_numpy_values(self):
        path = write_summary({"x": np.float64(1.5), "arr": np.arange(3), "i": np.int64(2)},
                             os.path.join(self.tmp.name, "summary.json"))
        with open(path, encoding="utf-8") as f:
            self.assertEqual(json.load(f), {"arr": [0, 1, 2], "i": 2, "x": 1.5})


def test_report_files_in_temp_dir(temp_dir):
    report = prefactor_report([_closed_grid("half", 1.0), _closed_grid("half", 0.5)])
    csv_path = write_csv(report.rows, os.path.join(temp_dir, "prefactor.csv"))
    json_path = write_summary(report.summary, os.path.join(temp_dir, "summary.json"))
    with open(json_path, encoding="utf-8") as f:
        assert json.load(f)["half"]["T_over_eps"]["intercept"] == 0.0
    with open(csv_path, newline="", encoding="utf-8") as f:
        assert f.readline().startswith("domain,n,eps,")


if __name__ == "__main__":
    unittest.main()
