"""
Triangular-lattice geometry for triperc.

Sites are written m + h*j with j = exp(i*pi/3) and stored as integer pairs
(m, h). Infinite domains are truncated to a box: the half plane becomes
[-L, n+L] x [0, L], the full plane [-L, n+L] x [-L, L], and the cut plane is
the full-plane box without the axis sites m <= cut_end. Grids are indexed
[m - m_lo, h - h_lo] throughout.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from triperc.errors import ArgumentError, DomainError

logger = logging.getLogger(__name__)

J = cmath.exp(1j * math.pi / 3)

# Fixed neighbor order; iteration-order sensitive code relies on it.
OFFSETS: Tuple[Tuple[int, int], ...] = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))

# ndimage structuring element for the offsets above on an [m, h] grid
STRUCTURE = np.array([[0, 1, 1], [1, 1, 1], [1, 1, 0]], dtype=bool)

MIN_TRUNCATION = 256


class DomainKind(str, Enum):
    HALF = "half"
    FULL = "full"
    CUT = "cut"


class SiteCoord(NamedTuple):
    """The site m + h*j."""

    m: int
    h: int

    def embed(self) -> complex:
        """Euclidean position, for documentation and plots only."""
        return self.m + self.h * J


def default_truncation(segment_n: int) -> int:
    """Default box extent: max(4n, 256)."""
    return max(4 * segment_n, MIN_TRUNCATION)


@dataclass(frozen=True)
class DomainSpec:
    """
    A truncated half-plane, full-plane or cut-plane domain.

    Use the half_plane / full_plane / cut_plane constructors for standard boxes
    (which enforce truncation >= segment_n) and toy() for explicit small boxes.
    """

    kind: DomainKind
    segment_n: int
    truncation: int
    cut_end: Optional[int] = None
    box: Optional[Tuple[int, int, int, int]] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", DomainKind(self.kind))
        if self.segment_n < 1:
            raise ArgumentError(f"segment_n must be positive, got {self.segment_n}")
        if self.truncation < 1:
            raise ArgumentError(f"truncation must be positive, got {self.truncation}")
        if self.kind is DomainKind.CUT and self.cut_end is None:
            raise ArgumentError("cut-plane domains need a cut_end")
        if self.kind is not DomainKind.CUT and self.cut_end is not None:
            raise ArgumentError(f"cut_end is only meaningful for cut-plane domains, got {self.cut_end}")
        if self.box is None:
            if self.truncation < self.segment_n:
                raise ArgumentError(
                    f"truncation {self.truncation} is below segment length {self.segment_n}"
                )
        else:
            m_lo, m_hi, h_lo, h_hi = self.box
            object.__setattr__(self, "box", (int(m_lo), int(m_hi), int(h_lo), int(h_hi)))
            if m_lo > m_hi or h_lo > h_hi:
                raise ArgumentError(f"empty box {self.box}")
            if self.kind is DomainKind.HALF and h_lo < 0:
                raise ArgumentError(f"half-plane box must have h >= 0, got {self.box}")

    @classmethod
    def half_plane(cls, segment_n: int, truncation: Optional[int] = None) -> "DomainSpec":
        return cls(DomainKind.HALF, segment_n, truncation or default_truncation(segment_n))

    @classmethod
    def full_plane(cls, segment_n: int, truncation: Optional[int] = None) -> "DomainSpec":
        return cls(DomainKind.FULL, segment_n, truncation or default_truncation(segment_n))

    @classmethod
    def cut_plane(cls, segment_n: int, cut_end: int, truncation: Optional[int] = None) -> "DomainSpec":
        return cls(DomainKind.CUT, segment_n, truncation or default_truncation(segment_n), cut_end=cut_end)

    @classmethod
    def of_kind(cls, kind, segment_n: int, truncation: Optional[int] = None) -> "DomainSpec":
        kind = DomainKind(kind)
        if kind is DomainKind.CUT:
            raise ArgumentError("cut-plane domains are built with DomainSpec.cut_plane")
        return cls(kind, segment_n, truncation or default_truncation(segment_n))

    @classmethod
    def toy(
        cls,
        kind,
        box: Tuple[int, int, int, int],
        segment_n: int = 1,
        cut_end: Optional[int] = None,
    ) -> "DomainSpec":
        """An explicit box (m_lo, m_hi, h_lo, h_hi), exempt from the truncation floor."""
        m_lo, m_hi, h_lo, h_hi = box
        extent = max(abs(m_lo), abs(m_hi), abs(h_lo), abs(h_hi), 1)
        return cls(DomainKind(kind), segment_n, extent, cut_end=cut_end, box=tuple(box))

    def with_truncation(self, truncation: int) -> "DomainSpec":
        if self.box is not None:
            raise ArgumentError("toy boxes have no truncation to change")
        return DomainSpec(self.kind, self.segment_n, truncation, self.cut_end)

    def cut_at(self, cut_end: int) -> "DomainSpec":
        """The cut-plane domain with the same box as this full-plane domain."""
        if self.kind is DomainKind.HALF:
            raise ArgumentError("only full-plane boxes can be cut")
        return DomainSpec(DomainKind.CUT, self.segment_n, self.truncation, cut_end, self.box)

    def bounds(self) -> Tuple[int, int, int, int]:
        """(m_lo, m_hi, h_lo, h_hi), all inclusive."""
        if self.box is not None:
            return self.box
        lam = self.truncation
        h_lo = 0 if self.kind is DomainKind.HALF else -lam
        return (-lam, self.segment_n + lam, h_lo, lam)

    @property
    def shape(self) -> Tuple[int, int]:
        m_lo, m_hi, h_lo, h_hi = self.bounds()
        return (m_hi - m_lo + 1, h_hi - h_lo + 1)

    def contains(self, m: int, h: int) -> bool:
        m_lo, m_hi, h_lo, h_hi = self.bounds()
        if not (m_lo <= m <= m_hi and h_lo <= h <= h_hi):
            return False
        if self.kind is DomainKind.CUT and h == 0 and m <= self.cut_end:
            return False
        return True

    def describe(self) -> str:
        if self.kind is DomainKind.CUT:
            return f"cut(n={self.segment_n}, cut_end={self.cut_end}, box={self.bounds()})"
        return f"{self.kind.value}(n={self.segment_n}, box={self.bounds()})"


@dataclass(frozen=True)
class BoundarySet:
    """A set of sites bordering an interval (or the frame of a box)."""

    sites: FrozenSet[SiteCoord] = field(default_factory=frozenset)

    def __contains__(self, site) -> bool:
        return SiteCoord(*site) in self.sites

    def __iter__(self) -> Iterator[SiteCoord]:
        return iter(sorted(self.sites))

    def __len__(self) -> int:
        return len(self.sites)

    def __or__(self, other: "BoundarySet") -> "BoundarySet":
        return BoundarySet(self.sites | other.sites)

    def upper(self) -> "BoundarySet":
        return BoundarySet(frozenset(s for s in self.sites if s.h > 0))

    def lower(self) -> "BoundarySet":
        return BoundarySet(frozenset(s for s in self.sites if s.h < 0))


def neighbors(s, d: DomainSpec) -> List[SiteCoord]:
    """
    The triangular neighbors of s that lie in d, in the fixed offset order.

    Raises:
        DomainError: if s itself is not a site of d
    """
    m, h = s
    if not d.contains(m, h):
        raise DomainError(f"site {(m, h)} is not in {d.describe()}")
    return [SiteCoord(m + dm, h + dh) for dm, dh in OFFSETS if d.contains(m + dm, h + dh)]


def boundary_of_interval(a: int, b: int, d: DomainSpec) -> BoundarySet:
    """
    Sites of d adjacent to some axis site of [a, b] but not on [a, b] itself.

    Adjacency ignores the cut; membership in d does not.
    """
    if a > b:
        raise ArgumentError(f"empty interval [{a}, {b}]")
    m_lo, m_hi, _, _ = d.bounds()
    if a < m_lo or b > m_hi:
        raise ArgumentError(f"interval [{a}, {b}] leaves the box [{m_lo}, {m_hi}]")

    sites = set()
    for dm, dh in OFFSETS:
        if dh == 0:
            for m in (a - 1, b + 1):
                if d.contains(m, 0):
                    sites.add(SiteCoord(m, 0))
            continue
        for m in range(a + dm, b + dm + 1):
            if d.contains(m, dh):
                sites.add(SiteCoord(m, dh))
    return BoundarySet(frozenset(sites))


def frame_sites(d: DomainSpec) -> BoundarySet:
    """
    The outermost layer of the box, restricted to d.

    For half-plane domains the bottom row is the real axis and not part of the frame.
    """
    m_lo, m_hi, h_lo, h_hi = d.bounds()
    sites = set()
    for h in range(h_lo, h_hi + 1):
        sites.add(SiteCoord(m_lo, h))
        sites.add(SiteCoord(m_hi, h))
    for m in range(m_lo, m_hi + 1):
        sites.add(SiteCoord(m, h_hi))
        if d.kind is not DomainKind.HALF:
            sites.add(SiteCoord(m, h_lo))
    return BoundarySet(frozenset(s for s in sites if d.contains(*s)))


class SiteIndex:
    """
    Dense, stable indexing of the sites of a domain.

    Sites are numbered in row-major [m, h] order, so boolean-mask indexing of a
    grid yields values in index order.
    """

    def __init__(self, domain: DomainSpec):
        self.domain = domain
        self.m_lo, self.m_hi, self.h_lo, self.h_hi = domain.bounds()
        self.shape = domain.shape
        mask = np.ones(self.shape, dtype=bool)
        if domain.kind is DomainKind.CUT:
            row = -self.h_lo
            if 0 <= row < self.shape[1]:
                last = min(domain.cut_end, self.m_hi) - self.m_lo
                if last >= 0:
                    mask[: last + 1, row] = False
        mask.setflags(write=False)
        self.mask = mask
        self.size = int(mask.sum())

    def __len__(self) -> int:
        return self.size

    def contains(self, m: int, h: int) -> bool:
        return self.domain.contains(m, h)

    def cell(self, m: int, h: int) -> Tuple[int, int]:
        """Grid cell of a site of the box (the site itself may be cut away)."""
        return (m - self.m_lo, h - self.h_lo)

    @cached_property
    def index_grid(self) -> np.ndarray:
        grid = np.full(self.shape, -1, dtype=np.int64)
        grid[self.mask] = np.arange(self.size, dtype=np.int64)
        grid.setflags(write=False)
        return grid

    @cached_property
    def coords(self) -> np.ndarray:
        """(N, 2) array of (m, h) in index order."""
        cells = np.argwhere(self.mask)
        cells[:, 0] += self.m_lo
        cells[:, 1] += self.h_lo
        cells.setflags(write=False)
        return cells

    @cached_property
    def neighbor_table(self) -> np.ndarray:
        """(N, 6) neighbor indices in offset order, -1 where the neighbor is missing."""
        padded = np.full((self.shape[0] + 2, self.shape[1] + 2), -1, dtype=np.int64)
        padded[1:-1, 1:-1] = self.index_grid
        width, height = self.shape
        table = np.empty((self.size, len(OFFSETS)), dtype=np.int64)
        for col, (dm, dh) in enumerate(OFFSETS):
            shifted = padded[1 + dm: 1 + dm + width, 1 + dh: 1 + dh + height]
            table[:, col] = shifted[self.mask]
        table.setflags(write=False)
        return table

    @cached_property
    def frame_mask(self) -> np.ndarray:
        mask = self.grid_mask(frame_sites(self.domain))
        mask.setflags(write=False)
        return mask

    def index_of(self, m: int, h: int) -> int:
        if not self.contains(m, h):
            raise DomainError(f"site {(m, h)} is not in {self.domain.describe()}")
        return int(self.index_grid[m - self.m_lo, h - self.h_lo])

    def site(self, index: int) -> SiteCoord:
        m, h = self.coords[index]
        return SiteCoord(int(m), int(h))

    def sites(self) -> Iterable[SiteCoord]:
        for m, h in self.coords:
            yield SiteCoord(int(m), int(h))

    def grid_mask(self, sites: Iterable) -> np.ndarray:
        """Boolean grid marking the given sites (sites outside the domain are ignored)."""
        grid = np.zeros(self.shape, dtype=bool)
        for m, h in sites:
            if self.contains(m, h):
                grid[m - self.m_lo, h - self.h_lo] = True
        return grid

    def axis_mask(self, m_from: int, m_to: int) -> np.ndarray:
        """Boolean grid marking the axis sites m_from..m_to of the domain."""
        grid = np.zeros(self.shape, dtype=bool)
        row = -self.h_lo
        if not 0 <= row < self.shape[1]:
            return grid
        lo = max(m_from, self.m_lo) - self.m_lo
        hi = min(m_to, self.m_hi) - self.m_lo
        if lo <= hi:
            grid[lo: hi + 1, row] = True
        return grid & self.mask


@lru_cache(maxsize=64)
def enumerate_sites(d: DomainSpec) -> SiteIndex:
    """Dense index over the sites of d; equal domains share one index."""
    index = SiteIndex(d)
    logger.debug("Indexed %d sites of %s", index.size, d.describe())
    return index
