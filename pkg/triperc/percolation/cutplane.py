"""
Crossing counts on the cut plane.

On the lattice with the axis sites m <= a(i+1) removed, the boundary splits
into three arcs: A around the tip ([a(i)+1, a(i+1)] plus the tip site),
B on both sides of [1, a(i)], and C, which collects both sides of the ray
(-inf, 0] together with the frame of the box. Clusters crossing from A to C
alternate in color, which gives T~ = S - 1{S >= 1} sample by sample.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Optional

import numpy as np

from triperc.errors import ArgumentError
from triperc.lattice import DomainKind, DomainSpec, boundary_of_interval, enumerate_sites, frame_sites
from triperc.percolation.labeling import ClusterLabeling, Phase, label
from triperc.percolation.sampling import Configuration

if TYPE_CHECKING:
    from triperc.estimators import ScalePartition


@dataclass(frozen=True)
class CutArcs:
    tip: np.ndarray
    segment: np.ndarray
    ray: np.ndarray


@dataclass(frozen=True)
class CutPlaneCounts:
    """S_i, T~_i from the identity, and T~_i counted cluster by cluster."""

    S: int
    T_tilde: int
    T_tilde_direct: int


def cut_arcs(c: Configuration, p: "ScalePartition", i: int) -> CutArcs:
    d = c.domain
    if d.kind is not DomainKind.CUT:
        raise ArgumentError(f"window_S needs a cut-plane domain, got {d.kind.value}")
    if not 1 <= i <= p.M:
        raise ArgumentError(f"window {i} outside 1..{p.M}")
    a_lo, a_hi = p.a[i - 1], p.a[i]
    if d.cut_end != a_hi:
        raise ArgumentError(f"domain is cut at {d.cut_end}, window {i} needs a cut at {a_hi}")
    if a_lo >= a_hi:
        raise ArgumentError(f"window {i} is degenerate: a(i) = a(i+1) = {a_hi}")

    return _arc_masks(d, a_lo)


@lru_cache(maxsize=256)
def _arc_masks(d: DomainSpec, a_lo: int) -> CutArcs:
    index = enumerate_sites(d)
    tip = boundary_of_interval(a_lo + 1, d.cut_end, d)
    segment = boundary_of_interval(1, a_lo, d)
    ray = boundary_of_interval(index.m_lo, 0, d) | frame_sites(d)
    return CutArcs(
        tip=index.grid_mask(tip),
        segment=index.grid_mask(segment),
        ray=index.grid_mask(ray),
    )


def window_S(
    c_cut: Configuration,
    p: "ScalePartition",
    i: int,
    open_labeling: Optional[ClusterLabeling] = None,
    closed_labeling: Optional[ClusterLabeling] = None,
) -> CutPlaneCounts:
    """
    Count closed clusters joining the tip arc with the ray arc (S_i), and the
    open clusters joining them while avoiding the boundary of [1, a(i)] (T~_i).
    """
    arcs = cut_arcs(c_cut, p, i)
    closed = closed_labeling or label(c_cut, Phase.CLOSED)
    opened = open_labeling or label(c_cut, Phase.OPEN)

    s = len(closed.roots_on(arcs.tip) & closed.roots_on(arcs.ray))
    crossing = opened.roots_on(arcs.tip) & opened.roots_on(arcs.ray)
    direct = len(crossing - opened.roots_on(arcs.segment))
    return CutPlaneCounts(S=s, T_tilde=s - (1 if s >= 1 else 0), T_tilde_direct=direct)
