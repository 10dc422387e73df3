#!/usr/bin/env python3
"""
Unit tests for the pinch event B(i).

With n = 16 and eps = 1 the partition is a = (2, 4, 8, 16), so window 2 uses
a(2) = 4.
"""

import os
import unittest

from triperc.errors import ArgumentError
from triperc.estimators import make_partition
from triperc.lattice import DomainSpec
from triperc.percolation.pinch import event_B
from triperc.percolation.sampling import Configuration, SeedRecord, sample

# Constants
TEST_DIR = os.path.dirname(os.path.abspath(__file__))
PARTITION = make_partition(16, 1.0)
FULL = DomainSpec.full_plane(16, truncation=16)


def _pinched(open_row):
    """Axis closed on [-5, 9] and open elsewhere, row open_row open, every other row closed."""
    def is_open(m, h):
        if h == 0:
            return not -5 <= m <= 9
        return h == open_row

    return Configuration.from_function(FULL, is_open)


class PinchEventTests(unittest.TestCase):

    def test_upper_pinch(self):
        c = _pinched(open_row=1)
        self.assertTrue(event_B(c, PARTITION, 2, mode="either"))
        self.assertTrue(event_B(c, PARTITION, 2, mode="same"))

    def test_lower_pinch(self):
        c = _pinched(open_row=-1)
        self.assertTrue(event_B(c, PARTITION, 2))

    def test_no_open_vertices(self):
        c = _pinched(open_row=2)
        self.assertFalse(event_B(c, PARTITION, 2))

    def test_closed_axis_must_reach_right(self):
        # axis closed only on [-5, 3]: no closed path reaches [4, inf) along the axis
        def is_open(m, h):
            if h == 0:
                return not -5 <= m <= 3
            return h == 1

        c = Configuration.from_function(FULL, is_open)
        self.assertFalse(event_B(c, PARTITION, 2))

    def test_monochrome(self):
        self.assertFalse(event_B(Configuration.filled(FULL, True), PARTITION, 1))
        self.assertFalse(event_B(Configuration.filled(FULL, False), PARTITION, 1))

    def test_modes_agree_on_samples(self):
        for t in range(10):
            c = sample(FULL, SeedRecord(51, 0, t))
            for i in range(1, PARTITION.M + 1):
                self.assertEqual(event_B(c, PARTITION, i, "either"), event_B(c, PARTITION, i, "same"))

    def test_invalid_arguments(self):
        c = _pinched(open_row=1)
        with self.assertRaises(ArgumentError):
            event_B(c, PARTITION, 0)
        with self.assertRaises(ArgumentError):
            event_B(c, PARTITION, 2, mode="both")
        half = Configuration.filled(DomainSpec.half_plane(16, truncation=16), True)
        with self.assertRaises(ArgumentError):
            event_B(half, PARTITION, 2)


if __name__ == "__main__":
    unittest.main()
