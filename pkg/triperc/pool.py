"""
Trial fan-out and result accumulation.

A task is a picklable callable mapping a SeedRecord to one integer per
observable. Trials are cut into fixed chunks, chunks run in-process or on a
ProcessPoolExecutor, and per-chunk Accumulators are merged in chunk order.
Sums are exact integers, so the merged result does not depend on the worker
count.
"""

import concurrent.futures
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Mapping, Optional, Protocol, Sequence, Tuple

from tqdm import tqdm

from triperc.errors import ArgumentError, RecordError
from triperc.percolation.sampling import SeedRecord

logger = logging.getLogger(__name__)


def params_fingerprint(params: Mapping[str, Any]) -> str:
    """SHA-256 over the canonical JSON form of a parameter mapping."""
    canonical = json.dumps(params, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class EstimateReport:
    observable: str
    mean: float
    stderr: float
    trials: int
    truncation: Optional[int] = None
    doubled_delta: Optional[float] = None
    doubled_stderr: Optional[float] = None
    accumulator: Optional["Accumulator"] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.stderr >= 0:
            raise ArgumentError(f"stderr must be nonnegative, got {self.stderr}")

    def with_doubling(self, doubled: "EstimateReport") -> "EstimateReport":
        """Attach the difference to the same estimate at doubled truncation."""
        return replace(
            self,
            doubled_delta=doubled.mean - self.mean,
            doubled_stderr=math.hypot(doubled.stderr, self.stderr),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "observable": self.observable,
            "mean": self.mean,
            "stderr": self.stderr,
            "trials": self.trials,
            "truncation": self.truncation,
            "doubled_delta": self.doubled_delta,
            "doubled_stderr": self.doubled_stderr,
        }


@dataclass(frozen=True)
class Accumulator:
    """
    Running sums for one observable.

    Two accumulators merge only when they carry the same observable and
    params fingerprint; merging is field-wise addition.
    """

    observable: str
    fingerprint: str
    trials: int = 0
    sum: int = 0
    sum_sq: int = 0

    def add(self, value: int) -> "Accumulator":
        value = int(value)
        return Accumulator(
            self.observable, self.fingerprint,
            self.trials + 1, self.sum + value, self.sum_sq + value * value,
        )

    def merge(self, other: "Accumulator") -> "Accumulator":
        if (self.observable, self.fingerprint) != (other.observable, other.fingerprint):
            raise RecordError(
                f"cannot merge {other.observable}@{other.fingerprint[:12]} "
                f"into {self.observable}@{self.fingerprint[:12]}"
            )
        return Accumulator(
            self.observable, self.fingerprint,
            self.trials + other.trials, self.sum + other.sum, self.sum_sq + other.sum_sq,
        )

    @property
    def mean(self) -> float:
        if self.trials == 0:
            raise ArgumentError(f"no trials accumulated for {self.observable}")
        return self.sum / self.trials

    @property
    def variance(self) -> float:
        """Unbiased sample variance, computed from the exact integer sums."""
        t = self.trials
        if t < 2:
            raise ArgumentError(f"need at least 2 trials for a variance of {self.observable}")
        return (t * self.sum_sq - self.sum * self.sum) / (t * (t - 1))

    @property
    def stderr(self) -> float:
        return math.sqrt(self.variance / self.trials)

    def report(self, truncation: Optional[int] = None, scale: float = 1.0,
               offset: float = 0.0, name: Optional[str] = None) -> EstimateReport:
        """Report scale * X + offset."""
        return EstimateReport(
            observable=name or self.observable,
            mean=scale * self.mean + offset,
            stderr=abs(scale) * self.stderr,
            trials=self.trials,
            truncation=truncation,
            accumulator=self,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "observable": self.observable,
            "fingerprint": self.fingerprint,
            "trials": self.trials,
            "sum": self.sum,
            "sum_sq": self.sum_sq,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Accumulator":
        try:
            return cls(
                observable=str(data["observable"]),
                fingerprint=str(data["fingerprint"]),
                trials=int(data["trials"]),
                sum=int(data["sum"]),
                sum_sq=int(data["sum_sq"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise RecordError(f"malformed accumulator {data!r}: {e}") from e


class TrialTask(Protocol):
    observables: Tuple[str, ...]

    def params(self) -> Dict[str, Any]: ...

    def __call__(self, seed_record: SeedRecord) -> Sequence[int]: ...


def empty_accumulators(task: TrialTask, master_seed: int, stream: int) -> Dict[str, Accumulator]:
    fingerprint = params_fingerprint({**task.params(), "master_seed": master_seed, "stream": stream})
    return {name: Accumulator(name, fingerprint) for name in task.observables}


def merge_accumulators(
    left: Dict[str, Accumulator],
    right: Dict[str, Accumulator],
) -> Dict[str, Accumulator]:
    if left.keys() != right.keys():
        raise RecordError(f"observable sets differ: {sorted(left)} vs {sorted(right)}")
    return {name: left[name].merge(right[name]) for name in left}


def _run_chunk(task: TrialTask, master_seed: int, stream: int, start: int, stop: int) -> Dict[str, Accumulator]:
    names = task.observables
    totals = [0] * len(names)
    squares = [0] * len(names)
    for trial in range(start, stop):
        values = task(SeedRecord(master_seed, stream, trial))
        for j, value in enumerate(values):
            value = int(value)
            totals[j] += value
            squares[j] += value * value
    empty = empty_accumulators(task, master_seed, stream)
    return {
        name: Accumulator(name, empty[name].fingerprint, stop - start, totals[j], squares[j])
        for j, name in enumerate(names)
    }


def chunk_bounds(trials: int, chunk_size: int, first_trial: int = 0) -> List[Tuple[int, int]]:
    """Consecutive [start, stop) trial ranges of at most chunk_size trials."""
    if chunk_size < 1:
        raise ArgumentError(f"chunk_size must be positive, got {chunk_size}")
    stop = first_trial + trials
    return [(s, min(s + chunk_size, stop)) for s in range(first_trial, stop, chunk_size)]


def run_trials(
    task: TrialTask,
    trials: int,
    master_seed: int,
    stream: int = 0,
    workers: int = 1,
    chunk_size: int = 256,
    progress: bool = False,
    desc: Optional[str] = None,
    first_trial: int = 0,
) -> Dict[str, Accumulator]:
    """
    Run trials first_trial .. first_trial + trials - 1 of a task.

    Args:
        task: Picklable trial function with an ``observables`` tuple
        trials: Number of trials
        master_seed: Campaign seed; trial t uses SeedRecord(master_seed, stream, t)
        stream: Stream index separating independent estimates of one campaign
        workers: Process count; 1 runs in-process
        chunk_size: Trials per work unit
        progress: Show a tqdm bar over chunks (only on a terminal)
        desc: Progress bar label
        first_trial: Offset for sharded runs

    Returns:
        One Accumulator per observable
    """
    if trials < 1:
        raise ArgumentError(f"trials must be positive, got {trials}")
    if workers < 1:
        raise ArgumentError(f"workers must be positive, got {workers}")
    chunks = chunk_bounds(trials, chunk_size, first_trial)
    logger.debug("Running %d trials of %s in %d chunks on %d workers",
                 trials, type(task).__name__, len(chunks), workers)

    bar = tqdm(total=trials, desc=desc or type(task).__name__, unit="trial",
               disable=None if progress else True, leave=False)
    results: List[Optional[Dict[str, Accumulator]]] = [None] * len(chunks)
    try:
        if workers == 1 or len(chunks) == 1:
            for i, (start, stop) in enumerate(chunks):
                results[i] = _run_chunk(task, master_seed, stream, start, stop)
                bar.update(stop - start)
        else:
            with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
                futures = {
                    executor.submit(_run_chunk, task, master_seed, stream, start, stop): i
                    for i, (start, stop) in enumerate(chunks)
                }
                for future in concurrent.futures.as_completed(futures):
                    i = futures[future]
                    results[i] = future.result()
                    start, stop = chunks[i]
                    bar.update(stop - start)
    finally:
        bar.close()

    merged = results[0]
    for part in results[1:]:
        merged = merge_accumulators(merged, part)
    return merged
