#!/usr/bin/env python3
"""
Unit tests for the trial pool: exact accumulators, chunking and the
worker-count independence of merged results.
"""

import math
import os
import unittest
from dataclasses import dataclass

from triperc.errors import ArgumentError, RecordError
from triperc.percolation.sampling import SeedRecord, generator_for
from triperc.pool import (
    Accumulator,
    EstimateReport,
    chunk_bounds,
    empty_accumulators,
    params_fingerprint,
    run_trials,
)

# Constants
TEST_DIR = os.path.dirname(os.path.abspath(__file__))


@dataclass(frozen=True)
class DiceTask:
    """A die roll and a constant per trial; module level so it pickles."""

    sides: int = 6

    observables = ("roll", "one")

    def params(self):
        return {"task": "dice", "sides": self.sides}

    def __call__(self, seed_record: SeedRecord):
        return [int(generator_for(seed_record).integers(1, self.sides + 1)), 1]


class AccumulatorTests(unittest.TestCase):

    def test_add_is_exact(self):
        acc = Accumulator("x", "f").add(3).add(4)
        self.assertEqual((acc.trials, acc.sum, acc.sum_sq), (2, 7, 25))
        self.assertEqual(acc.mean, 3.5)
        self.assertEqual(acc.variance, 0.5)
        self.assertEqual(acc.stderr, 0.5)

    def test_large_values_stay_integers(self):
        big = 10 ** 20
        acc = Accumulator("x", "f").add(big).add(big + 1)
        self.assertEqual(acc.sum, 2 * big + 1)
        self.assertEqual(acc.sum_sq, big * big + (big + 1) ** 2)

    def test_mean_needs_trials(self):
        with self.assertRaises(ArgumentError):
            Accumulator("x", "f").mean
        with self.assertRaises(ArgumentError):
            Accumulator("x", "f").add(1).variance

    def test_merge(self):
        left = Accumulator("x", "f").add(1).add(2)
        right = Accumulator("x", "f").add(5)
        merged = left.merge(right)
        self.assertEqual((merged.trials, merged.sum, merged.sum_sq), (3, 8, 30))
        self.assertEqual(merged, right.merge(left))

    def test_merge_mismatch(self):
        with self.assertRaises(RecordError):
            Accumulator("x", "f").merge(Accumulator("x", "g"))
        with self.assertRaises(RecordError):
            Accumulator("x", "f").merge(Accumulator("y", "f"))

    def test_dict_form(self):
        acc = Accumulator("count[4]", "abc").add(2).add(0)
        self.assertEqual(Accumulator.from_dict(acc.to_dict()), acc)
        with self.assertRaises(RecordError):
            Accumulator.from_dict({"observable": "x", "trials": 1})

    def test_report_scale_and_offset(self):
        acc = Accumulator("x", "f").add(0).add(1)
        report = acc.report(truncation=8, scale=2.0, offset=-0.5, name="y")
        self.assertEqual(report.observable, "y")
        self.assertAlmostEqual(report.mean, 0.5)
        self.assertAlmostEqual(report.stderr, 1.0)
        self.assertEqual((report.trials, report.truncation), (2, 8))
        self.assertIs(report.accumulator, acc)


class EstimateReportTests(unittest.TestCase):

    def test_stderr_must_be_nonnegative(self):
        with self.assertRaises(ArgumentError):
            EstimateReport("x", 0.0, -1.0, 10)
        with self.assertRaises(ArgumentError):
            EstimateReport("x", 0.0, math.nan, 10)

    def test_with_doubling(self):
        base = EstimateReport("x", 1.0, 0.3, 10, truncation=8)
        doubled = EstimateReport("x", 1.25, 0.4, 10, truncation=16)
        combined = base.with_doubling(doubled)
        self.assertEqual(combined.mean, 1.0)
        self.assertEqual(combined.truncation, 8)
        self.assertAlmostEqual(combined.doubled_delta, 0.25)
        self.assertAlmostEqual(combined.doubled_stderr, 0.5)
        self.assertEqual(combined.to_dict()["doubled_delta"], combined.doubled_delta)


class FingerprintTests(unittest.TestCase):

    def test_key_order_does_not_matter(self):
        self.assertEqual(params_fingerprint({"a": 1, "b": [1, 2]}), params_fingerprint({"b": [1, 2], "a": 1}))

    def test_values_matter(self):
        self.assertNotEqual(params_fingerprint({"a": 1}), params_fingerprint({"a": 2}))

    def test_streams_get_distinct_fingerprints(self):
        task = DiceTask()
        first = empty_accumulators(task, 0, 0)
        second = empty_accumulators(task, 0, 1)
        self.assertEqual(set(first), {"roll", "one"})
        self.assertNotEqual(first["roll"].fingerprint, second["roll"].fingerprint)


class RunTrialsTests(unittest.TestCase):

    def test_chunk_bounds(self):
        self.assertEqual(chunk_bounds(10, 4), [(0, 4), (4, 8), (8, 10)])
        self.assertEqual(chunk_bounds(5, 2, first_trial=3), [(3, 5), (5, 7), (7, 8)])
        with self.assertRaises(ArgumentError):
            chunk_bounds(5, 0)

    def test_counts_trials(self):
        acc = run_trials(DiceTask(), 25, master_seed=3)
        self.assertEqual(acc["one"].trials, 25)
        self.assertEqual(acc["one"].sum, 25)
        self.assertTrue(25 <= acc["roll"].sum <= 150)

    def test_chunk_size_does_not_change_sums(self):
        results = [run_trials(DiceTask(), 40, master_seed=11, chunk_size=size) for size in (1, 7, 100)]
        for other in results[1:]:
            self.assertEqual(other, results[0])

    def test_workers_do_not_change_sums(self):
        serial = run_trials(DiceTask(), 40, master_seed=11, chunk_size=5)
        parallel = run_trials(DiceTask(), 40, master_seed=11, chunk_size=5, workers=2)
        self.assertEqual(parallel, serial)

    def test_shards_merge_to_the_whole_run(self):
        whole = run_trials(DiceTask(), 30, master_seed=5)
        head = run_trials(DiceTask(), 12, master_seed=5)
        tail = run_trials(DiceTask(), 18, master_seed=5, first_trial=12)
        for name in whole:
            self.assertEqual(head[name].merge(tail[name]), whole[name])

    def test_streams_differ(self):
        first = run_trials(DiceTask(sides=1000), 20, master_seed=5, stream=0)
        second = run_trials(DiceTask(sides=1000), 20, master_seed=5, stream=1)
        self.assertNotEqual(first["roll"].sum, second["roll"].sum)

    def test_invalid_arguments(self):
        with self.assertRaises(ArgumentError):
            run_trials(DiceTask(), 0, master_seed=0)
        with self.assertRaises(ArgumentError):
            run_trials(DiceTask(), 5, master_seed=0, workers=0)


if __name__ == "__main__":
    unittest.main()
