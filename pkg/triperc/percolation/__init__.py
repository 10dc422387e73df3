"""Per-sample percolation observables for triperc.

This package samples p = 1/2 configurations, labels their clusters and
evaluates the per-sample events and counts on the three domains.
"""

from .arms import ARM_KINDS, arm_domain, arm_indicator
from .crossings import (
    crossing_probability_events,
    duality_pair,
    event_W,
    lowest_crossing_W,
)
from .cutplane import CutPlaneCounts, window_S
from .labeling import ClusterLabeling, Phase, UnionFind, label
from .pinch import event_B
from .sampling import Configuration, SeedRecord, sample
from .segment import (
    SegmentTerms,
    WindowCounts,
    count_segment_clusters,
    leading_indicator,
    segment_terms,
    window_T,
    window_T_by_clusters,
)

__all__ = [
    "ARM_KINDS",
    "ClusterLabeling",
    "Configuration",
    "CutPlaneCounts",
    "Phase",
    "SeedRecord",
    "SegmentTerms",
    "UnionFind",
    "WindowCounts",
    "arm_domain",
    "arm_indicator",
    "count_segment_clusters",
    "crossing_probability_events",
    "duality_pair",
    "event_B",
    "event_W",
    "label",
    "leading_indicator",
    "lowest_crossing_W",
    "sample",
    "segment_terms",
    "window_S",
    "window_T",
    "window_T_by_clusters",
]
