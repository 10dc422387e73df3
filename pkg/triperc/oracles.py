"""
Reference implementations used to check the fast code paths.

Connectivity here goes through networkx graphs built site by site from the
neighbor rule, never through the grid labelings, and expectations on toy
domains are computed exactly by enumerating all 2^V configurations.
"""

import itertools
import logging
import math
from fractions import Fraction
from typing import Callable, Iterator, List, Optional, Sequence

import networkx as nx
import numpy as np

from triperc.errors import ArgumentError
from triperc.lattice import DomainSpec, enumerate_sites, neighbors
from triperc.percolation.arms import annulus_masks
from triperc.percolation.crossings import crossing_window
from triperc.percolation.sampling import Configuration

logger = logging.getLogger(__name__)

MAX_ENUMERATION_SITES = 22

INNER = "inner"
OUTER = "outer"


def lattice_graph(c: Configuration, open_phase: bool = True, region: Optional[np.ndarray] = None) -> nx.Graph:
    """Graph on the sites of one phase (optionally inside a region), keyed by site index."""
    index = c.index
    members = c.phase_grid(open_phase)
    if region is not None:
        members = members & region
    graph = nx.Graph()
    for i, (m, h) in enumerate(index.coords.tolist()):
        if not members[index.cell(m, h)]:
            continue
        graph.add_node(i)
        for nm, nh in neighbors((m, h), c.domain):
            if members[index.cell(nm, nh)]:
                graph.add_edge(i, index.index_of(nm, nh))
    return graph


def bfs_parent(c: Configuration, open_phase: bool = True, region: Optional[np.ndarray] = None) -> np.ndarray:
    """Canonical cluster ids (smallest member index, -1 outside) from graph search."""
    parent = np.full(c.index.size, -1, dtype=np.int64)
    for component in nx.connected_components(lattice_graph(c, open_phase, region)):
        parent[sorted(component)] = min(component)
    return parent


def _sites_in(c: Configuration, mask: np.ndarray):
    index = c.index
    return [int(i) for i in index.index_grid[mask & index.mask]]


def _joined(graph: nx.Graph, sources: Sequence[int], targets: Sequence[int]) -> bool:
    """Whether some node of sources has a path to some node of targets."""
    graph = graph.copy()
    graph.add_edges_from((INNER, s) for s in sources if s in graph)
    graph.add_edges_from((OUTER, t) for t in targets if t in graph)
    if INNER not in graph or OUTER not in graph:
        return False
    return nx.has_path(graph, INNER, OUTER)


def segment_count_by_search(c: Configuration, n: Optional[int] = None) -> int:
    """Open clusters meeting the axis segment [1, n]."""
    n = n or c.domain.segment_n
    index = c.index
    segment = set(_sites_in(c, index.axis_mask(1, n)))
    graph = lattice_graph(c, True)
    return sum(1 for comp in nx.connected_components(graph) if comp & segment)


def leading_indicator_by_search(c: Configuration) -> int:
    index = c.index
    graph = lattice_graph(c, True)
    one = _sites_in(c, index.axis_mask(1, 1))
    ray = _sites_in(c, index.axis_mask(index.m_lo, 0))
    return int(not _joined(graph, one, ray))


def w_prime_by_search(c: Configuration, k: int, eps: float) -> bool:
    """An open and a closed path between (-inf, 1] and [k, k(1+eps)]."""
    k, k2 = crossing_window(c, k, eps)
    index = c.index
    left = _sites_in(c, index.axis_mask(index.m_lo, 1))
    target = _sites_in(c, index.axis_mask(k, k2))
    return _joined(lattice_graph(c, True), left, target) and _joined(lattice_graph(c, False), left, target)


def one_arm_by_search(c: Configuration, m: int, n: int) -> bool:
    masks = annulus_masks(c.domain, m, n)
    graph = lattice_graph(c, True, masks.annulus)
    return _joined(graph, _sites_in(c, masks.inner), _sites_in(c, masks.outer))


def _inner_angle(c: Configuration, site: int) -> float:
    """Angle of a site seen from the origin, in the embedded plane."""
    m, h = c.index.coords[site].tolist()
    return math.atan2(h * math.sqrt(3.0) / 2.0, m + h / 2.0)


def crossing_starts(c: Configuration, m: int, n: int, open_phase: bool) -> List[int]:
    """
    Inner-layer sites of one phase that start a trimmed crossing of the
    annulus: a path of that phase from the site to the outer layer meeting
    the inner layer nowhere else.
    """
    masks = annulus_masks(c.domain, m, n)
    phase = c.phase_grid(open_phase)
    graph = lattice_graph(c, open_phase, masks.annulus)
    inner = _sites_in(c, masks.inner & phase)
    outer = _sites_in(c, masks.outer & phase)
    starts = []
    for s in inner:
        others = set(inner) - {s}
        if _joined(graph.subgraph(set(graph.nodes) - others), [s], outer):
            starts.append(s)
    return starts


def three_arm_by_search(c: Configuration, m: int, n: int) -> bool:
    """
    Three-arm event from the angular order of trimmed crossings.

    Trimmed crossings of different phases are disjoint, so their order around
    the inner box is the order of their start sites. The event holds when an
    open start lies strictly between two closed starts.
    """
    closed = [_inner_angle(c, s) for s in crossing_starts(c, m, n, False)]
    if len(closed) < 2:
        return False
    low, high = min(closed), max(closed)
    return any(low < _inner_angle(c, s) < high for s in crossing_starts(c, m, n, True))


def enumerate_configurations(d: DomainSpec) -> Iterator[Configuration]:
    """Every configuration of a toy domain, in binary counting order of the site states."""
    size = enumerate_sites(d).size
    if size > MAX_ENUMERATION_SITES:
        raise ArgumentError(f"{d.describe()} has {size} sites; enumeration is capped at {MAX_ENUMERATION_SITES}")
    for states in itertools.product((0, 1), repeat=size):
        yield Configuration.from_states(d, np.array(states, dtype=np.uint8))


def exact_expectation(d: DomainSpec, observable: Callable[[Configuration], int]) -> Fraction:
    """E[observable] under fair coins, as an exact fraction."""
    total = 0
    count = 0
    for c in enumerate_configurations(d):
        total += int(observable(c))
        count += 1
    logger.debug("Enumerated %d configurations of %s", count, d.describe())
    return Fraction(total, count)
