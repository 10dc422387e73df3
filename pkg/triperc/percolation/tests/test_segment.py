#!/usr/bin/env python3
"""
Unit tests for segment cluster counts and the per-window T terms.
"""

import os
import unittest

import numpy as np

from triperc.errors import ArgumentError
from triperc.estimators import make_partition
from triperc.lattice import DomainKind, DomainSpec
from triperc.percolation.labeling import Phase, label
from triperc.percolation.sampling import Configuration, SeedRecord, sample
from triperc.percolation.segment import (
    count_segment_clusters,
    leading_indicator,
    segment_terms,
    window_T,
    window_T_by_clusters,
)

# Constants
TEST_DIR = os.path.dirname(os.path.abspath(__file__))
BOX_16 = DomainSpec.toy(DomainKind.HALF, (-2, 18, 0, 2), segment_n=16)
BOX_4 = DomainSpec.toy(DomainKind.HALF, (-2, 5, 0, 2), segment_n=4)
NESTED_BOX = DomainSpec.toy(DomainKind.HALF, (-6, 18, 0, 4), segment_n=16)
PARTITION_16 = make_partition(16, 1.0)


def _bridge(ray_linked):
    """
    Axis open on the ray and at 5 and 10, row h=1 open (from m=1 on when the
    ray is cut off), everything else closed.
    """
    def is_open(m, h):
        if h == 0:
            return m <= 0 or m in (5, 10)
        if h == 1:
            return ray_linked or m >= 1
        return False

    return Configuration.from_function(BOX_16, is_open)


def _nested_arcs():
    """
    Two open arcs over a closed segment: (0, 0) to site 10 along row 1, and
    (-4, 0) to site 14 along row 3, separated by the closed row 2.
    """
    def is_open(m, h):
        if h == 0:
            return m in (-4, 0, 10, 14)
        if h == 1:
            return 0 <= m <= 10 or m in (-4, 14)
        if h == 2:
            return m in (-4, 14)
        if h == 3:
            return -4 <= m <= 14
        return False

    return Configuration.from_function(NESTED_BOX, is_open)


class SegmentCountTests(unittest.TestCase):
    """Tests for count_segment_clusters and segment_terms."""

    def test_all_open(self):
        c = Configuration.filled(BOX_4, True)
        terms = segment_terms(c)
        self.assertEqual(count_segment_clusters(c), 1)
        self.assertEqual(terms.first.tolist(), [True, False, False, False])
        self.assertEqual(terms.t.tolist(), [True, False, False, False])
        self.assertEqual(int(terms.a.sum()), 0)
        self.assertEqual(leading_indicator(c), 0)

    def test_all_closed(self):
        c = Configuration.filled(BOX_4, False)
        self.assertEqual(count_segment_clusters(c), 0)
        self.assertEqual(segment_terms(c).count, 0)
        self.assertEqual(leading_indicator(c), 1)

    def test_isolated_sites(self):
        c = Configuration.from_function(BOX_4, lambda m, h: h == 0 and m in (1, 3))
        terms = segment_terms(c)
        self.assertEqual(count_segment_clusters(c), 2)
        self.assertEqual(terms.first.tolist(), [True, False, True, False])
        self.assertFalse(terms.ray.any())
        self.assertEqual(terms.count, int(terms.a.sum()))

    def test_count_matches_terms_on_samples(self):
        domain = DomainSpec.half_plane(16, truncation=16)
        for t in range(15):
            c = sample(domain, SeedRecord(4, 0, t))
            labeling = label(c, Phase.OPEN)
            terms = segment_terms(c, labeling)
            self.assertEqual(count_segment_clusters(c, labeling), terms.count)
            self.assertEqual(terms.count, int(terms.a.sum() + terms.t.sum()))

    def test_cut_plane_rejected(self):
        c = Configuration.filled(DomainSpec.cut_plane(4, cut_end=2, truncation=4), True)
        with self.assertRaises(ArgumentError):
            segment_terms(c)

    def test_closed_labeling_rejected(self):
        c = Configuration.filled(BOX_4, True)
        with self.assertRaises(ArgumentError):
            count_segment_clusters(c, label(c, Phase.CLOSED))


class WindowTermTests(unittest.TestCase):
    """Window sums on configurations with a known answer; a = (2, 4, 8, 16)."""

    def test_partition(self):
        self.assertEqual(PARTITION_16.a, (2, 4, 8, 16))

    def test_ray_connected_bridge(self):
        c = _bridge(ray_linked=True)
        counts = window_T(c, PARTITION_16)
        self.assertEqual(counts.T, (0, 1, 0))
        self.assertEqual(counts.f0, 0)
        self.assertEqual(window_T_by_clusters(c, PARTITION_16), counts.T)
        self.assertEqual(count_segment_clusters(c), 1)
        self.assertEqual(leading_indicator(c), 1)

    def test_ray_disconnected_bridge(self):
        c = _bridge(ray_linked=False)
        terms = segment_terms(c)
        self.assertEqual(window_T(c, PARTITION_16, terms).T, (0, 0, 0))
        self.assertEqual(window_T_by_clusters(c, PARTITION_16), (0, 0, 0))
        self.assertEqual(int(terms.a.sum()), 1)
        self.assertTrue(terms.first[4])

    def test_two_terms_in_one_window(self):
        c = _nested_arcs()
        terms = segment_terms(c)
        self.assertEqual(np.flatnonzero(terms.t).tolist(), [9, 13])
        self.assertEqual(int(terms.t[8:16].sum()), 2)
        counts = window_T(c, PARTITION_16, terms)
        self.assertEqual(counts.T, (0, 0, 2))
        self.assertEqual(counts.f0, 0)
        self.assertEqual(window_T_by_clusters(c, PARTITION_16), (0, 0, 2))
        self.assertEqual(count_segment_clusters(c), 2)
        self.assertEqual(leading_indicator(c), 1)

    def test_f0_counts_sites_up_to_first_cut(self):
        # site 2 open, linked to the ray through row 1; site 1 closed
        def is_open(m, h):
            return (h == 0 and (m <= 0 or m == 2)) or (h == 1 and m <= 2)

        c = Configuration.from_function(BOX_16, is_open)
        counts = window_T(c, PARTITION_16)
        self.assertEqual(counts.f0, 1)
        self.assertEqual(counts.T, (0, 0, 0))

    def test_decomposition_on_samples(self):
        domain = DomainSpec.half_plane(16, truncation=16)
        for t in range(15):
            c = sample(domain, SeedRecord(8, 0, t))
            labeling = label(c, Phase.OPEN)
            terms = segment_terms(c, labeling)
            counts = window_T(c, PARTITION_16, terms)
            direct = count_segment_clusters(c, labeling) - int(terms.a.sum()) - int(terms.t[0])
            self.assertEqual(direct, counts.f0 + sum(counts.T))
            self.assertEqual(window_T_by_clusters(c, PARTITION_16, labeling), counts.T)

    def test_partition_must_match_segment(self):
        c = Configuration.filled(BOX_4, True)
        with self.assertRaises(ArgumentError):
            window_T(c, PARTITION_16)


def test_window_terms_match_clusters(small_half_plane, random_samples):
    partition = make_partition(8, 1.0)
    for c in random_samples(small_half_plane):
        assert window_T_by_clusters(c, partition) == window_T(c, partition).T


if __name__ == "__main__":
    unittest.main()
