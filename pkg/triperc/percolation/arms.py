"""
Arm events in half-plane annuli.

B(r) = {|m| <= r, 0 <= h <= r} in lattice coordinates. The annulus
B(n) minus B(m) has an inner layer (sites adjacent to B(m)) and an outer
layer (|m| = n or h = n); arms are clusters of the annulus joining the two.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import ndimage

from triperc.errors import ArgumentError
from triperc.lattice import STRUCTURE, DomainKind, DomainSpec, enumerate_sites
from triperc.percolation.labeling import Phase, label
from triperc.percolation.sampling import Configuration

ARM_KINDS = ("one_arm", "three_arm")


@dataclass(frozen=True)
class AnnulusMasks:
    annulus: np.ndarray
    inner: np.ndarray
    outer: np.ndarray
    left_bottom: np.ndarray
    right_bottom: np.ndarray


def arm_domain(n_outer: int) -> DomainSpec:
    """The smallest half-plane box holding B(n_outer)."""
    return DomainSpec.toy(DomainKind.HALF, (-n_outer, n_outer, 0, n_outer))


@lru_cache(maxsize=64)
def annulus_masks(d: DomainSpec, m: int, n: int) -> AnnulusMasks:
    if m < 0 or m >= n:
        raise ArgumentError(f"need 0 <= m < n, got m={m}, n={n}")
    if d.kind is not DomainKind.HALF:
        raise ArgumentError(f"arm events live in the half plane, got {d.kind.value}")
    m_lo, m_hi, h_lo, h_hi = d.bounds()
    if m_lo > -n or m_hi < n or h_lo != 0 or h_hi < n:
        raise ArgumentError(f"B({n}) does not fit {d.describe()}")

    index = enumerate_sites(d)
    ms = np.arange(m_lo, m_hi + 1)[:, None]
    hs = np.arange(h_lo, h_hi + 1)[None, :]

    def box(r):
        return (np.abs(ms) <= r) & (hs <= r) & index.mask

    inner_box = box(m)
    annulus = box(n) & ~inner_box
    return AnnulusMasks(
        annulus=annulus,
        inner=annulus & ndimage.binary_dilation(inner_box, structure=STRUCTURE),
        outer=annulus & ((np.abs(ms) == n) | (hs == n)),
        left_bottom=annulus & (hs == 0) & (ms < -m),
        right_bottom=annulus & (hs == 0) & (ms > m),
    )


def arm_indicator(c: Configuration, m: int, n: int, kind: str) -> bool:
    """
    one_arm: an open cluster of the annulus joins its inner and outer layers.
    three_arm: such an open cluster has a closed crossing of the annulus on
    each side, i.e. in the two components of the annulus minus that cluster.
    """
    if kind not in ARM_KINDS:
        raise ArgumentError(f"kind must be one of {ARM_KINDS}, got {kind!r}")
    masks = annulus_masks(c.domain, m, n)
    opened = label(c, Phase.OPEN, region=masks.annulus)
    open_crossings = opened.roots_on(masks.inner) & opened.roots_on(masks.outer)
    if kind == "one_arm" or not open_crossings:
        return bool(open_crossings)

    closed = label(c, Phase.CLOSED, region=masks.annulus)
    closed_crossings = closed.roots_on(masks.inner) & closed.roots_on(masks.outer)
    if len(closed_crossings) < 2:
        return False

    index = c.index
    for root in sorted(open_crossings):
        free = masks.annulus & ~opened.cluster_mask(root)
        parts, _ = ndimage.label(free, structure=STRUCTURE)
        left = set(np.unique(parts[masks.left_bottom & free]).tolist()) - {0}
        right = set(np.unique(parts[masks.right_bottom & free]).tolist()) - {0}

        side_of = {}
        for closed_root in closed_crossings:
            mm, hh = index.coords[closed_root]
            side_of[closed_root] = int(parts[index.cell(int(mm), int(hh))])
        on_left = {r for r, part in side_of.items() if part in left}
        on_right = {r for r, part in side_of.items() if part in right}
        if on_left and on_right and len(on_left | on_right) >= 2:
            return True
    return False
