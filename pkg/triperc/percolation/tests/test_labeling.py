#!/usr/bin/env python3
"""
Unit tests for cluster labeling.

The ndimage and union-find methods must agree element by element, and both
must follow the six-neighbor rule of the triangular lattice.
"""

import os
import unittest

import numpy as np
import pytest

from triperc.errors import ArgumentError
from triperc.lattice import DomainKind, DomainSpec
from triperc.percolation.labeling import Phase, UnionFind, flood, label
from triperc.percolation.sampling import Configuration, SeedRecord, sample

# Constants
TEST_DIR = os.path.dirname(os.path.abspath(__file__))
METHODS = ("ndimage", "union_find")
SQUARE = DomainSpec.toy(DomainKind.HALF, (0, 1, 0, 1))


class NeighborRuleTests(unittest.TestCase):
    """Adjacency on a 2x2 box: (1,0)-(0,1) touch, (0,0)-(1,1) do not."""

    def _components(self, open_sites, method):
        c = Configuration.from_function(SQUARE, lambda m, h: (m, h) in open_sites)
        return label(c, Phase.OPEN, method=method).component_count()

    def test_short_diagonal_connects(self):
        for method in METHODS:
            self.assertEqual(self._components({(1, 0), (0, 1)}, method), 1, method)

    def test_long_diagonal_does_not_connect(self):
        for method in METHODS:
            self.assertEqual(self._components({(0, 0), (1, 1)}, method), 2, method)

    def test_closed_phase(self):
        c = Configuration.from_function(SQUARE, lambda m, h: (m, h) in {(1, 0), (0, 1)})
        closed = label(c, Phase.CLOSED)
        self.assertEqual(closed.component_count(), 2)
        self.assertEqual(closed.root_at(1, 0), -1)


class LabelingTests(unittest.TestCase):
    """Tests for label() on random samples."""

    def setUp(self):
        self.domain = DomainSpec.full_plane(8, truncation=8)
        self.samples = [sample(self.domain, SeedRecord(21, 0, t)) for t in range(10)]

    def test_methods_agree(self):
        for c in self.samples:
            for phase in Phase:
                fast = label(c, phase, method="ndimage")
                slow = label(c, phase, method="union_find")
                self.assertTrue(np.array_equal(fast.parent, slow.parent))

    def test_roots_are_smallest_members(self):
        for c in self.samples:
            labeling = label(c, Phase.OPEN)
            parent = labeling.parent
            inside = parent >= 0
            self.assertTrue(np.all(parent[inside] <= np.arange(parent.size)[inside]))
            self.assertTrue(np.array_equal(parent[parent[inside]], parent[inside]))

    def test_phases_partition_sites(self):
        c = self.samples[0]
        opened = label(c, Phase.OPEN).parent >= 0
        closed = label(c, Phase.CLOSED).parent >= 0
        self.assertFalse(np.any(opened & closed))
        self.assertTrue(np.all(opened | closed))
        self.assertTrue(np.array_equal(opened, c.states.astype(bool)))

    def test_components_cover_phase(self):
        labeling = label(self.samples[1], Phase.OPEN)
        members = sum(len(v) for v in labeling.components().values())
        self.assertEqual(members, int(self.samples[1].states.sum()))
        self.assertEqual(len(labeling.components()), labeling.component_count())

    def test_region_restricts_clusters(self):
        c = Configuration.filled(self.domain, True)
        index = c.index
        region = index.axis_mask(-2, 2)
        labeling = label(c, Phase.OPEN, region=region)
        self.assertEqual(labeling.component_count(), 1)
        self.assertEqual(int((labeling.parent >= 0).sum()), 5)
        self.assertEqual(labeling.root_at(3, 0), -1)

    def test_unknown_method(self):
        with self.assertRaises(ArgumentError):
            label(self.samples[0], Phase.OPEN, method="bfs")


class UnionFindTests(unittest.TestCase):

    def test_union_and_find(self):
        uf = UnionFind(6)
        uf.union(0, 1)
        uf.union(2, 3)
        uf.union(1, 3)
        self.assertTrue(uf.is_same(0, 2))
        self.assertFalse(uf.is_same(0, 4))
        self.assertEqual(uf.union(0, 3), uf.find(2))


def test_flood_stays_inside_region(tiny_half_box):
    c = Configuration.filled(tiny_half_box, True)
    index = c.index
    region = index.mask.copy()
    region[index.cell(1, 0)] = False
    region[index.cell(0, 1)] = False
    seeds = index.axis_mask(3, 3)
    reached = flood(region, seeds)
    assert reached[index.cell(4, 1)]
    assert not reached[index.cell(0, 0)]
    assert not reached[index.cell(1, 0)]


@pytest.mark.parametrize("method", METHODS)
def test_cut_plane_labeling(method):
    cut = DomainSpec.full_plane(8, truncation=8).cut_at(4)
    c = Configuration.filled(cut, True)
    labeling = label(c, Phase.OPEN, method=method)
    assert labeling.component_count() == 1
    assert labeling.root_at(0, 0) == -1


if __name__ == "__main__":
    unittest.main()
