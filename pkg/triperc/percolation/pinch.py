"""
The pinch event B(i) of the full plane.

B_u(i, k) happens in the upper half plane when axis site k (1 <= k <= a(i))
is closed with closed paths to (-inf, 1] and to [a(i), inf), while the open
vertices k+j / k-1+j have open paths to (-inf, 0] and to [a(i)+1, inf).
B_l(i, k) is the mirror image below the axis, using k-j and k+1-j.
"""

from typing import TYPE_CHECKING

import numpy as np

from triperc.config import B_EVENT_MODES
from triperc.errors import ArgumentError
from triperc.lattice import DomainKind
from triperc.percolation.labeling import Phase, label
from triperc.percolation.sampling import Configuration

if TYPE_CHECKING:
    from triperc.estimators import ScalePartition

UPPER_VERTICES = ((0, 1), (-1, 1))
LOWER_VERTICES = ((0, -1), (1, -1))


def _half_event(c: Configuration, region: np.ndarray, vertices, a: int, mode: str) -> bool:
    index = c.index
    closed = label(c, Phase.CLOSED, region=region)
    opened = label(c, Phase.OPEN, region=region)

    closed_left = closed.roots_on(index.axis_mask(index.m_lo, 1))
    closed_right = closed.roots_on(index.axis_mask(a, index.m_hi))
    pinched = closed_left & closed_right
    if not pinched:
        return False
    open_left = opened.roots_on(index.axis_mask(index.m_lo, 0))
    open_right = opened.roots_on(index.axis_mask(a + 1, index.m_hi))

    for k in range(1, a + 1):
        if closed.root_at(k, 0) not in pinched:
            continue
        roots = [opened.root_at(k + dm, dh) for dm, dh in vertices]
        if mode == "same":
            if any(r in open_left and r in open_right for r in roots):
                return True
        elif any(r in open_left for r in roots) and any(r in open_right for r in roots):
            return True
    return False


def event_B(c: Configuration, p: "ScalePartition", i: int, mode: str = "either") -> bool:
    """
    True iff B_u(i, k) or B_l(i, k) holds for some k in [1, a(i)].

    ``mode`` "either" lets the two open paths start from different vertices;
    "same" requires one vertex to carry both.
    """
    if mode not in B_EVENT_MODES:
        raise ArgumentError(f"mode must be one of {B_EVENT_MODES}, got {mode!r}")
    if c.domain.kind is not DomainKind.FULL:
        raise ArgumentError(f"B(i) is a full-plane event, got {c.domain.kind.value}")
    if not 1 <= i <= p.M:
        raise ArgumentError(f"window {i} outside 1..{p.M}")
    if p.n != c.domain.segment_n:
        raise ArgumentError(f"partition is for n={p.n}, domain has n={c.domain.segment_n}")

    a = p.a[i - 1]
    index = c.index
    hs = np.arange(index.h_lo, index.h_hi + 1)[None, :]
    upper = index.mask & (hs >= 0)
    lower = index.mask & (hs <= 0)
    return _half_event(c, upper, UPPER_VERTICES, a, mode) or _half_event(c, lower, LOWER_VERTICES, a, mode)
