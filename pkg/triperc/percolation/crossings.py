"""
Half-plane crossing events between (-inf, 1] and [k, k(1+eps)].

W' asks for both an open and a closed crossing. W additionally asks for the
closed crossing to run below the open one; it is evaluated as T >= 1 for the
single window (k, k(1+eps)] and, independently, by flooding the region below
the closed crossings (lowest_crossing_W). W~ is W with colors swapped.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from triperc.errors import ArgumentError
from triperc.lattice import DomainKind
from triperc.percolation.labeling import ClusterLabeling, Phase, flood, label
from triperc.percolation.sampling import Configuration


@dataclass(frozen=True)
class CrossingEvents:
    W: bool
    W_prime: bool
    W_tilde: bool


@dataclass(frozen=True)
class DualityPair:
    """Open [1,k] <-> [k(1+eps), inf) and closed (-inf,1] <-> [k, k(1+eps)]; exactly one holds."""

    open_path: bool
    closed_path: bool


@dataclass(frozen=True)
class CrossingConnections:
    open_crossing: bool
    closed_crossing: bool
    open_across: bool
    double_crossing: bool


def crossing_window(c: Configuration, k: int, eps: float) -> Tuple[int, int]:
    """Validate the geometry and return (k, floor(k(1+eps)))."""
    d = c.domain
    if d.kind is not DomainKind.HALF:
        raise ArgumentError(f"crossing events live in the half plane, got {d.kind.value}")
    if eps <= 0:
        raise ArgumentError(f"eps must be positive, got {eps}")
    k2 = math.floor(k * (1 + eps) + 1e-9)
    m_lo, m_hi, _, _ = d.bounds()
    if k < 2 or k2 <= k:
        raise ArgumentError(f"need 2 <= k < k(1+eps), got k={k}, k(1+eps)={k2}")
    if k2 > d.segment_n or k2 > m_hi or m_lo > 0:
        raise ArgumentError(f"window [{k}, {k2}] does not fit {d.describe()}")
    return k, k2


def _labelings(c, open_labeling, closed_labeling):
    return (
        open_labeling or label(c, Phase.OPEN),
        closed_labeling or label(c, Phase.CLOSED),
    )


def _crosses(labeling: ClusterLabeling, first: np.ndarray, second: np.ndarray) -> set:
    return labeling.roots_on(first) & labeling.roots_on(second)


def _shielded_crossing(labeling: ClusterLabeling, k: int, k2: int) -> bool:
    """A cluster meeting (k, k2] and (-inf, 0] while avoiding [1, k]."""
    index = labeling.index
    inside = labeling.roots_on(index.axis_mask(k + 1, k2))
    before = labeling.roots_on(index.axis_mask(1, k))
    on_ray = labeling.roots_on(index.axis_mask(index.m_lo, 0))
    return bool((inside - before) & on_ray)


def event_W(
    c: Configuration,
    k: int,
    eps: float,
    open_labeling: Optional[ClusterLabeling] = None,
    closed_labeling: Optional[ClusterLabeling] = None,
) -> CrossingEvents:
    k, k2 = crossing_window(c, k, eps)
    opened, closed = _labelings(c, open_labeling, closed_labeling)
    index = c.index
    left = index.axis_mask(index.m_lo, 1)
    target = index.axis_mask(k, k2)

    w_prime = bool(_crosses(opened, left, target)) and bool(_crosses(closed, left, target))
    return CrossingEvents(
        W=_shielded_crossing(opened, k, k2),
        W_prime=w_prime,
        W_tilde=_shielded_crossing(closed, k, k2),
    )


def lowest_crossing_W(
    c: Configuration,
    k: int,
    eps: float,
    open_labeling: Optional[ClusterLabeling] = None,
    closed_labeling: Optional[ClusterLabeling] = None,
) -> bool:
    """W as: some open crossing lies outside the region below all closed crossings."""
    k, k2 = crossing_window(c, k, eps)
    opened, closed = _labelings(c, open_labeling, closed_labeling)
    index = c.index
    left = index.axis_mask(index.m_lo, 1)
    target = index.axis_mask(k, k2)

    closed_roots = _crosses(closed, left, target)
    if not closed_roots:
        return False
    walls = np.isin(closed.root_grid, sorted(closed_roots))
    below = flood(index.mask & ~walls, index.axis_mask(1, k) & ~walls)
    for root in _crosses(opened, left, target):
        if not (opened.cluster_mask(root) & below).any():
            return True
    return False


def duality_pair(
    c: Configuration,
    k: int,
    eps: float,
    open_labeling: Optional[ClusterLabeling] = None,
    closed_labeling: Optional[ClusterLabeling] = None,
) -> DualityPair:
    """
    The two sides of the half-plane duality. The frame of the box counts as
    part of [k(1+eps), inf).
    """
    k, k2 = crossing_window(c, k, eps)
    opened, closed = _labelings(c, open_labeling, closed_labeling)
    index = c.index
    right = index.axis_mask(k2, index.m_hi) | index.frame_mask
    open_path = bool(_crosses(opened, index.axis_mask(1, k), right))
    closed_path = bool(_crosses(closed, index.axis_mask(index.m_lo, 1), index.axis_mask(k, k2)))
    return DualityPair(open_path=open_path, closed_path=closed_path)


def crossing_probability_events(
    c: Configuration,
    k: int,
    eps: float,
    open_labeling: Optional[ClusterLabeling] = None,
    closed_labeling: Optional[ClusterLabeling] = None,
) -> CrossingConnections:
    """
    Connection indicators entering the duality identity:
    open (-inf,1] <-> [k,k2], closed (-inf,1] <-> [k,k2], open [1,k] <-> [k2,inf),
    and the double crossing (-inf,0] <-> [k,k2] together with [1,k] <-> [k2,inf).
    """
    k, k2 = crossing_window(c, k, eps)
    opened, closed = _labelings(c, open_labeling, closed_labeling)
    index = c.index
    target = index.axis_mask(k, k2)
    right = index.axis_mask(k2, index.m_hi) | index.frame_mask

    open_across = bool(_crosses(opened, index.axis_mask(1, k), right))
    double = bool(_crosses(opened, index.axis_mask(index.m_lo, 0), target)) and open_across
    return CrossingConnections(
        open_crossing=bool(_crosses(opened, index.axis_mask(index.m_lo, 1), target)),
        closed_crossing=bool(_crosses(closed, index.axis_mask(index.m_lo, 1), target)),
        open_across=open_across,
        double_crossing=double,
    )
