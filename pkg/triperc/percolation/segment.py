"""
Segment cluster counts and the per-window T terms.

For the segment [1, n] on the real axis, site k contributes to the cluster
count when it is open and not connected to [1, k-1] ("first"). A first site
is either connected to the truncated ray (-inf, 0] (a T-term) or not (an
a-term), so count = sum(a) + sum(t) holds for every sample.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Set, Tuple

import numpy as np

from triperc.errors import ArgumentError
from triperc.lattice import DomainKind
from triperc.percolation.labeling import ClusterLabeling, Phase, label
from triperc.percolation.sampling import Configuration

if TYPE_CHECKING:
    from triperc.estimators import ScalePartition


@dataclass(frozen=True)
class SegmentTerms:
    """Per-site indicators along [1, n]; entry k-1 belongs to site k."""

    open: np.ndarray
    first: np.ndarray
    ray: np.ndarray

    @property
    def t(self) -> np.ndarray:
        return self.first & self.ray

    @property
    def a(self) -> np.ndarray:
        return self.first & ~self.ray

    @property
    def count(self) -> int:
        return int(self.first.sum())


@dataclass(frozen=True)
class WindowCounts:
    """T_i for windows i = 1..M (T[i-1]), the f0 sum, and cut-plane S_i / T~_i when computed."""

    T: Tuple[int, ...]
    f0: int = 0
    S: Optional[Tuple[int, ...]] = None
    T_tilde: Optional[Tuple[int, ...]] = None


def check_axis_domain(c: Configuration) -> None:
    d = c.domain
    if d.kind is DomainKind.CUT:
        raise ArgumentError("segment observables need the real axis; got a cut-plane domain")
    m_lo, m_hi, h_lo, h_hi = d.bounds()
    if not (h_lo <= 0 <= h_hi and m_lo <= 0 and d.segment_n <= m_hi):
        raise ArgumentError(f"{d.describe()} does not contain the ray and the segment")


def axis_roots(labeling: ClusterLabeling, m_from: int, m_to: int) -> np.ndarray:
    """Cluster ids of the axis sites m_from..m_to (-1 where not in the phase)."""
    index = labeling.index
    row = -index.h_lo
    return labeling.root_grid[m_from - index.m_lo: m_to - index.m_lo + 1, row]


def ray_roots(labeling: ClusterLabeling) -> Set[int]:
    """Clusters touching the truncated ray (-inf, 0]."""
    roots = axis_roots(labeling, labeling.index.m_lo, 0)
    return {int(r) for r in np.unique(roots) if r >= 0}


def _open_labeling(c: Configuration, labeling: Optional[ClusterLabeling]) -> ClusterLabeling:
    if labeling is None:
        return label(c, Phase.OPEN)
    if labeling.phase is not Phase.OPEN:
        raise ArgumentError("segment observables need an open-cluster labeling")
    return labeling


def count_segment_clusters(c: Configuration, labeling: Optional[ClusterLabeling] = None) -> int:
    """Number of distinct open clusters meeting [1, n]."""
    check_axis_domain(c)
    labeling = _open_labeling(c, labeling)
    roots = axis_roots(labeling, 1, c.domain.segment_n)
    return int(np.unique(roots[roots >= 0]).size)


def segment_terms(c: Configuration, labeling: Optional[ClusterLabeling] = None) -> SegmentTerms:
    check_axis_domain(c)
    labeling = _open_labeling(c, labeling)
    seg = axis_roots(labeling, 1, c.domain.segment_n)
    is_open = seg >= 0

    first = np.zeros(seg.size, dtype=bool)
    uniq, first_at = np.unique(seg, return_index=True)
    first[first_at[uniq >= 0]] = True

    on_ray = np.isin(seg, sorted(ray_roots(labeling))) & is_open
    return SegmentTerms(open=is_open, first=first, ray=on_ray)


def leading_indicator(c: Configuration, labeling: Optional[ClusterLabeling] = None) -> int:
    """1 if site 1 is not connected to the truncated (-inf, 0], else 0."""
    check_axis_domain(c)
    labeling = _open_labeling(c, labeling)
    root = labeling.root_at(1, 0)
    return int(root < 0 or root not in ray_roots(labeling))


def _check_partition(c: Configuration, p: "ScalePartition") -> None:
    if p.n != c.domain.segment_n:
        raise ArgumentError(
            f"partition is for n={p.n} but the domain segment has n={c.domain.segment_n}"
        )


def window_T(
    c: Configuration,
    p: "ScalePartition",
    terms: Optional[SegmentTerms] = None,
) -> WindowCounts:
    """
    T_i = number of k in (a(i), a(i+1)] that are open, not connected to
    [1, k-1] and connected to (-inf, 0]; f0 sums the same terms over k = 2..a(1).
    """
    _check_partition(c, p)
    if terms is None:
        terms = segment_terms(c)
    t = terms.t
    counts = tuple(int(t[lo - 1: hi].sum()) for lo, hi in p.windows())
    f0 = int(t[1: p.a[0]].sum())
    return WindowCounts(T=counts, f0=f0)


def window_T_by_clusters(
    c: Configuration,
    p: "ScalePartition",
    labeling: Optional[ClusterLabeling] = None,
) -> Tuple[int, ...]:
    """T_i counted as open clusters meeting (a(i), a(i+1)] and (-inf, 0] but avoiding [1, a(i)]."""
    _check_partition(c, p)
    check_axis_domain(c)
    labeling = _open_labeling(c, labeling)
    on_ray = ray_roots(labeling)
    counts = []
    for lo, hi in p.windows():
        if lo > hi:
            counts.append(0)
            continue
        inside = {int(r) for r in axis_roots(labeling, lo, hi) if r >= 0}
        before = {int(r) for r in axis_roots(labeling, 1, lo - 1) if r >= 0}
        counts.append(len((inside - before) & on_ray))
    return tuple(counts)
