"""
Sampling of p = 1/2 site configurations.

Each trial owns a counter-based Philox stream keyed by
(master seed, stream index, trial index), so any trial can be regenerated on
its own and trials can be spread over workers in any order.
"""

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Optional

import numpy as np

from triperc.errors import ArgumentError
from triperc.lattice import DomainSpec, SiteIndex, enumerate_sites


class SeedRecord(NamedTuple):
    master_seed: int
    stream_index: int
    trial_index: int


def generator_for(seed_record: SeedRecord) -> np.random.Generator:
    """A Philox generator whose stream is fixed by the seed record."""
    master_seed, stream_index, trial_index = seed_record
    if master_seed < 0 or stream_index < 0 or trial_index < 0:
        raise ArgumentError(f"seed record entries must be nonnegative, got {tuple(seed_record)}")
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(stream_index, trial_index))
    return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True, eq=False)
class Configuration:
    """
    One open/closed state for every site of a domain.

    ``grid`` is a boolean [m, h] array over the domain's box; cells that are
    not sites of the domain (the cut) are always False.
    """

    domain: DomainSpec
    grid: np.ndarray
    seed_record: Optional[SeedRecord] = None

    def __post_init__(self):
        if self.grid.shape != self.domain.shape:
            raise ArgumentError(f"grid shape {self.grid.shape} does not match box {self.domain.shape}")
        grid = np.ascontiguousarray(self.grid, dtype=bool) & self.index.mask
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)

    @property
    def index(self) -> SiteIndex:
        return enumerate_sites(self.domain)

    @property
    def states(self) -> np.ndarray:
        """Bit vector in site-index order (1 = open)."""
        return self.grid[self.index.mask].astype(np.uint8)

    @classmethod
    def from_states(cls, domain: DomainSpec, states, seed_record: Optional[SeedRecord] = None) -> "Configuration":
        index = enumerate_sites(domain)
        states = np.asarray(states)
        if states.shape != (index.size,):
            raise ArgumentError(f"expected {index.size} states, got shape {states.shape}")
        grid = np.zeros(domain.shape, dtype=bool)
        grid[index.mask] = states.astype(bool)
        return cls(domain, grid, seed_record)

    @classmethod
    def from_function(cls, domain: DomainSpec, is_open: Callable[[int, int], bool]) -> "Configuration":
        """Build a configuration by asking is_open(m, h) for every site."""
        index = enumerate_sites(domain)
        states = [bool(is_open(int(m), int(h))) for m, h in index.coords]
        return cls.from_states(domain, np.array(states, dtype=bool))

    @classmethod
    def filled(cls, domain: DomainSpec, is_open: bool = True) -> "Configuration":
        return cls(domain, np.full(domain.shape, bool(is_open)))

    def swapped(self) -> "Configuration":
        """The color-swapped configuration (open <-> closed)."""
        return Configuration(self.domain, ~self.grid, self.seed_record)

    def restricted(self, domain: DomainSpec) -> "Configuration":
        """The same states on another domain over the same box (e.g. the cut plane)."""
        if domain.bounds() != self.domain.bounds():
            raise ArgumentError(
                f"cannot restrict {self.domain.describe()} to {domain.describe()}: boxes differ"
            )
        return Configuration(domain, self.grid, self.seed_record)

    def with_sites(self, sites: Iterable, is_open: bool) -> "Configuration":
        """A copy with the given sites forced open or closed."""
        grid = self.grid.copy()
        grid[self.index.grid_mask(sites)] = bool(is_open)
        return Configuration(self.domain, grid, self.seed_record)

    def is_open(self, m: int, h: int) -> bool:
        if not self.domain.contains(m, h):
            return False
        return bool(self.grid[self.index.cell(m, h)])

    def phase_grid(self, open_phase: bool) -> np.ndarray:
        """Boolean grid of the sites in the requested phase."""
        if open_phase:
            return self.grid
        return ~self.grid & self.index.mask

    def open_fraction(self) -> float:
        return float(self.grid.sum()) / self.index.size


def sample(d: DomainSpec, seed_record: SeedRecord) -> Configuration:
    """
    Draw a fair-coin configuration of d.

    Bits are drawn for the whole box and masked afterwards, so a cut-plane
    domain shares its states with the full-plane domain of the same box.
    """
    width, height = d.shape
    count = width * height
    rng = generator_for(SeedRecord(*seed_record))
    raw = rng.integers(0, 256, size=(count + 7) // 8, dtype=np.uint8)
    bits = np.unpackbits(raw, count=count).reshape(width, height).astype(bool)
    return Configuration(d, bits, SeedRecord(*seed_record))
