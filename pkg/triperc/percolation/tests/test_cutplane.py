#!/usr/bin/env python3
"""
Unit tests for the cut-plane crossing counts.

On every sample the open clusters crossing from the tip arc to the ray arc
while avoiding the boundary of [1, a(i)] number S - 1{S >= 1}.
"""

import os
import unittest

from triperc.errors import ArgumentError
from triperc.estimators import make_partition
from triperc.lattice import DomainSpec
from triperc.percolation.cutplane import cut_arcs, window_S
from triperc.percolation.sampling import Configuration, SeedRecord, sample

# Constants
TEST_DIR = os.path.dirname(os.path.abspath(__file__))
PARTITION = make_partition(16, 1.0)
WINDOW = 2
CUT = DomainSpec.cut_plane(16, cut_end=8, truncation=16)


class CutPlaneTests(unittest.TestCase):
    """Tests for window_S with a(2) = 4, a(3) = 8."""

    def test_identity_on_samples(self):
        for t in range(40):
            c = sample(CUT, SeedRecord(13, 0, t))
            counts = window_S(c, PARTITION, WINDOW)
            self.assertEqual(counts.T_tilde, counts.T_tilde_direct, f"trial {t}")
            self.assertEqual(counts.T_tilde, max(counts.S - 1, 0))

    def test_all_closed(self):
        counts = window_S(Configuration.filled(CUT, False), PARTITION, WINDOW)
        self.assertEqual((counts.S, counts.T_tilde, counts.T_tilde_direct), (1, 0, 0))

    def test_all_open(self):
        counts = window_S(Configuration.filled(CUT, True), PARTITION, WINDOW)
        self.assertEqual((counts.S, counts.T_tilde, counts.T_tilde_direct), (0, 0, 0))

    def test_two_closed_crossings(self):
        def is_open(m, h):
            if m == 9 and 0 <= h <= 3:
                return False
            if h == 1:
                return m >= 8
            return h != 3

        counts = window_S(Configuration.from_function(CUT, is_open), PARTITION, WINDOW)
        self.assertEqual((counts.S, counts.T_tilde, counts.T_tilde_direct), (2, 1, 1))

    def test_arcs(self):
        c = Configuration.filled(CUT, True)
        arcs = cut_arcs(c, PARTITION, WINDOW)
        index = c.index
        self.assertTrue(arcs.tip[index.cell(9, 0)])
        self.assertTrue(arcs.tip[index.cell(8, 1)])
        self.assertTrue(arcs.segment[index.cell(1, -1)])
        self.assertTrue(arcs.ray[index.cell(0, 1)])
        self.assertTrue(arcs.ray[index.cell(index.m_hi, index.h_hi)])
        self.assertFalse((arcs.tip & arcs.ray).any())

    def test_wrong_cut_end(self):
        c = Configuration.filled(DomainSpec.cut_plane(16, cut_end=4, truncation=16), True)
        with self.assertRaises(ArgumentError):
            window_S(c, PARTITION, WINDOW)

    def test_needs_cut_plane(self):
        c = Configuration.filled(DomainSpec.full_plane(16, truncation=16), True)
        with self.assertRaises(ArgumentError):
            window_S(c, PARTITION, WINDOW)

    def test_window_out_of_range(self):
        c = Configuration.filled(CUT, True)
        with self.assertRaises(ArgumentError):
            window_S(c, PARTITION, 0)
        with self.assertRaises(ArgumentError):
            window_S(c, PARTITION, PARTITION.M + 1)


def test_identity_on_restricted_full_plane_samples(small_full_plane, random_samples):
    cut = small_full_plane.cut_at(8)
    for c in random_samples(small_full_plane, count=10, seed=14):
        counts = window_S(c.restricted(cut), PARTITION, WINDOW)
        assert counts.T_tilde == counts.T_tilde_direct
        assert counts.T_tilde == max(counts.S - 1, 0)


if __name__ == "__main__":
    unittest.main()
