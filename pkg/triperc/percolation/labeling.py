"""
Cluster labeling for open or closed sites.

Two interchangeable methods produce the same ClusterLabeling: scipy.ndimage
labeling with the triangular structuring element (the fast path) and a plain
union-find over the neighbor table. Every cluster is identified by its
smallest site index, so the two methods agree element by element.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Set

import numpy as np
from scipy import ndimage

from triperc.errors import ArgumentError
from triperc.lattice import STRUCTURE, SiteIndex
from triperc.percolation.sampling import Configuration

logger = logging.getLogger(__name__)

# Offset columns (1,0), (0,1), (1,-1) visit every lattice edge once.
FORWARD_COLUMNS = (0, 2, 4)


class Phase(str, Enum):
    OPEN = "open"
    CLOSED = "closed"


class UnionFind:
    """Disjoint sets over 0..n-1 with path compression and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> int:
        x_root = self.find(x)
        y_root = self.find(y)
        if x_root == y_root:
            return x_root
        if self.rank[x_root] < self.rank[y_root]:
            x_root, y_root = y_root, x_root
        self.parent[y_root] = x_root
        if self.rank[x_root] == self.rank[y_root]:
            self.rank[x_root] += 1
        return x_root

    def is_same(self, x: int, y: int) -> bool:
        return self.find(x) == self.find(y)


@dataclass(frozen=True, eq=False)
class ClusterLabeling:
    """
    Component structure of the sites of one phase.

    ``parent`` maps every site index to the smallest index of its cluster
    (fully compressed), or -1 for sites outside the phase or region.
    ``rank`` holds union-by-rank ranks when built by union-find, zeros otherwise.
    """

    phase: Phase
    index: SiteIndex
    parent: np.ndarray
    rank: np.ndarray

    @cached_property
    def root_grid(self) -> np.ndarray:
        grid = np.full(self.index.shape, -1, dtype=np.int64)
        grid[self.index.mask] = self.parent
        grid.setflags(write=False)
        return grid

    def find(self, i: int) -> int:
        return int(self.parent[i])

    def connected(self, i: int, j: int) -> bool:
        return self.parent[i] >= 0 and self.parent[i] == self.parent[j]

    def root_at(self, m: int, h: int) -> int:
        """Cluster id of site (m, h), -1 if it is not a site of this phase."""
        if not self.index.contains(m, h):
            return -1
        return int(self.root_grid[self.index.cell(m, h)])

    def roots_on(self, mask: np.ndarray) -> Set[int]:
        """Ids of the clusters meeting the sites marked in a boolean grid."""
        values = self.root_grid[mask]
        return {int(r) for r in np.unique(values) if r >= 0}

    def cluster_mask(self, root: int) -> np.ndarray:
        return self.root_grid == root

    def component_count(self) -> int:
        return int(np.count_nonzero(self.parent == np.arange(self.index.size)))

    def components(self) -> Dict[int, List[int]]:
        groups: Dict[int, List[int]] = {}
        for i, root in enumerate(self.parent.tolist()):
            if root >= 0:
                groups.setdefault(root, []).append(i)
        return groups


def _label_ndimage(members: np.ndarray, index: SiteIndex):
    labels, count = ndimage.label(members, structure=STRUCTURE)
    flat = labels[index.mask]
    parent = np.full(index.size, -1, dtype=np.int64)
    if count:
        uniq, first = np.unique(flat, return_index=True)
        root_of = np.full(count + 1, -1, dtype=np.int64)
        root_of[uniq] = first
        root_of[0] = -1
        parent = root_of[flat]
    return parent, np.zeros(index.size, dtype=np.int64)


def _label_union_find(members: np.ndarray, index: SiteIndex):
    in_phase = members[index.mask].tolist()
    table = index.neighbor_table[:, FORWARD_COLUMNS].tolist()
    uf = UnionFind(index.size)
    for i, inside in enumerate(in_phase):
        if not inside:
            continue
        for j in table[i]:
            if j >= 0 and in_phase[j]:
                uf.union(i, j)

    parent = [-1] * index.size
    canonical: Dict[int, int] = {}
    for i, inside in enumerate(in_phase):
        if inside:
            root = uf.find(i)
            parent[i] = canonical.setdefault(root, i)
    return np.array(parent, dtype=np.int64), np.array(uf.rank, dtype=np.int64)


def label(
    c: Configuration,
    phase=Phase.OPEN,
    method: str = "ndimage",
    region: Optional[np.ndarray] = None,
) -> ClusterLabeling:
    """
    Label the clusters of one phase of a configuration.

    Args:
        c: The configuration
        phase: Phase.OPEN or Phase.CLOSED
        method: "ndimage" or "union_find"
        region: Optional boolean grid; only sites inside it take part

    Returns:
        The ClusterLabeling
    """
    phase = Phase(phase)
    index = c.index
    members = c.phase_grid(phase is Phase.OPEN)
    if region is not None:
        members = members & region

    if method == "ndimage":
        parent, rank = _label_ndimage(members, index)
    elif method == "union_find":
        parent, rank = _label_union_find(members, index)
    else:
        raise ArgumentError(f"unknown labeling method {method!r}")
    return ClusterLabeling(phase, index, parent, rank)


def flood(region: np.ndarray, seeds: np.ndarray) -> np.ndarray:
    """Sites of region connected (inside region) to some seed site."""
    labels, _ = ndimage.label(region, structure=STRUCTURE)
    hit = np.unique(labels[seeds & region])
    hit = hit[hit > 0]
    return np.isin(labels, hit)
