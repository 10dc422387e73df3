"""
Monte Carlo campaigns for triperc.

Each estimator builds a picklable trial task, runs it through
``triperc.pool.run_trials`` and turns the merged Accumulators into
EstimateReports. Every per-trial observable is an integer, so a campaign
with a fixed master seed gives bit-identical sums for any worker count and
any sharding.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from triperc.config import Settings
from triperc.errors import ArgumentError
from triperc.lattice import DomainKind, DomainSpec
from triperc.percolation.arms import ARM_KINDS, arm_domain, arm_indicator
from triperc.percolation.crossings import (
    crossing_probability_events,
    crossing_window,
    duality_pair,
    event_W,
    lowest_crossing_W,
)
from triperc.percolation.cutplane import window_S
from triperc.percolation.labeling import Phase, label
from triperc.percolation.pinch import event_B
from triperc.percolation.sampling import Configuration, SeedRecord, sample
from triperc.percolation.segment import (
    axis_roots,
    leading_indicator,
    ray_roots,
    segment_terms,
    window_T,
    window_T_by_clusters,
)
from triperc.pool import Accumulator, EstimateReport, params_fingerprint, run_trials

logger = logging.getLogger(__name__)

# Stream indices keep the estimates of one campaign independent.
STREAM_SEGMENT = 0
STREAM_LEADING = 1
STREAM_WINDOWS = 2
STREAM_TAIL = 3
STREAM_CROSSING = 4
STREAM_ARM = 5
DOUBLED_STREAM_OFFSET = 1000

DEFAULT_EPS_GRID = (1.0, 0.5, 0.25)
TAIL_LEVELS = (1, 2, 3)

Sampler = Callable[[DomainSpec, SeedRecord], Configuration]

__all__ = [
    "Accumulator",
    "EstimateReport",
    "ScalePartition",
    "WindowGrid",
    "make_partition",
    "params_fingerprint",
    "estimate_segment_expectation",
    "estimate_leading_constant",
    "estimate_window_grid",
    "estimate_window_tail",
    "estimate_crossing_events",
    "estimate_arm",
]


@dataclass(frozen=True)
class ScalePartition:
    """
    Logarithmic partition of [1, n]: a(1) <= ... <= a(M+1) = n.

    Window i (1 <= i <= M) is the interval (a(i), a(i+1)]; ``a`` is stored
    zero-based, so a(i) is ``a[i - 1]``.
    """

    n: int
    eps: float
    M: int
    a: Tuple[int, ...]

    def __post_init__(self):
        if len(self.a) != self.M + 1:
            raise ArgumentError(f"need M + 1 = {self.M + 1} cut points, got {len(self.a)}")
        if self.a[-1] != self.n:
            raise ArgumentError(f"a(M+1) must equal n = {self.n}, got {self.a[-1]}")
        if any(x > y for x, y in zip(self.a, self.a[1:])):
            raise ArgumentError(f"cut points must be nondecreasing: {self.a}")

    def windows(self) -> Iterator[Tuple[int, int]]:
        """(a(i) + 1, a(i+1)) for i = 1..M."""
        for lo, hi in zip(self.a, self.a[1:]):
            yield lo + 1, hi

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "eps": self.eps, "M": self.M, "a": list(self.a)}


def make_partition(n: int, eps: float) -> ScalePartition:
    """
    M = floor((log n - log(log n) / 2) / log(1 + eps)),
    a(j) = floor(n / (1 + eps)^(M - j + 1)) and a(M+1) = n.
    """
    if n < 3:
        raise ArgumentError(f"n must be at least 3, got {n}")
    if not eps > 0:
        raise ArgumentError(f"eps must be positive, got {eps}")
    log_n = math.log(n)
    M = math.floor((log_n - 0.5 * math.log(log_n)) / math.log1p(eps))
    M = max(M, 0)
    a = tuple(math.floor(n / (1.0 + eps) ** (M - j + 1) + 1e-9) for j in range(1, M + 1)) + (n,)
    return ScalePartition(n=n, eps=float(eps), M=M, a=a)


def _settings(settings: Optional[Settings]) -> Settings:
    return settings or Settings()


def _check_trials(trials: int) -> None:
    if trials < 2:
        raise ArgumentError(f"need at least 2 trials, got {trials}")


def _run(task, trials: int, seed: int, stream: int, settings: Settings, desc: str) -> Dict[str, Accumulator]:
    return run_trials(
        task,
        trials,
        seed,
        stream=stream,
        workers=settings.workers,
        chunk_size=settings.chunk_size,
        progress=settings.progress,
        desc=desc,
        first_trial=settings.first_trial,
    )


def _doubled(domain: DomainSpec) -> DomainSpec:
    if domain.box is not None:
        raise ArgumentError("truncation doubling needs a standard box, not a toy box")
    return domain.with_truncation(2 * domain.truncation)


# --- trial tasks -------------------------------------------------------------


@dataclass(frozen=True)
class SegmentTask:
    """Cluster counts of [1, n] for each requested n on one sample."""

    domain: DomainSpec
    ns: Tuple[int, ...]
    label_method: str = "ndimage"
    sampler: Optional[Sampler] = None

    @property
    def observables(self) -> Tuple[str, ...]:
        return tuple(f"count[{n}]" for n in self.ns)

    def params(self) -> Dict[str, Any]:
        return {"task": "segment", "domain": self.domain.describe(), "ns": list(self.ns)}

    def __call__(self, seed_record: SeedRecord) -> List[int]:
        c = (self.sampler or sample)(self.domain, seed_record)
        labeling = label(c, Phase.OPEN, method=self.label_method)
        first = segment_terms(c, labeling).first
        return [int(first[:n].sum()) for n in self.ns]


@dataclass(frozen=True)
class LeadingTask:
    domain: DomainSpec
    label_method: str = "ndimage"
    sampler: Optional[Sampler] = None

    observables = ("not_connected",)

    def params(self) -> Dict[str, Any]:
        return {"task": "leading", "domain": self.domain.describe()}

    def __call__(self, seed_record: SeedRecord) -> List[int]:
        c = (self.sampler or sample)(self.domain, seed_record)
        return [leading_indicator(c, label(c, Phase.OPEN, method=self.label_method))]


@dataclass(frozen=True)
class WindowTask:
    """
    The per-window T terms, f0 and the assembled L numerator of one sample.

    On the full plane the same sample is also restricted to each cut plane
    CutPlane(a(i+1)) for S(i) and T~(i), and B(i) is evaluated.
    """

    domain: DomainSpec
    partition: ScalePartition
    label_method: str = "ndimage"
    b_event_mode: str = "either"
    sampler: Optional[Sampler] = None

    @property
    def cut_pipeline(self) -> bool:
        return self.domain.kind is DomainKind.FULL

    @property
    def observables(self) -> Tuple[str, ...]:
        M = self.partition.M
        names = ["f0", "L_sum", "T_windows", "violation:decomposition", "violation:clusters"]
        names += [f"T[{i}]" for i in range(1, M + 1)]
        if self.cut_pipeline:
            names += ["L_bound_sum", "T_tilde_windows", "violation:cut_identity"]
            for key in ("S", "T_tilde", "B", "bound_gap"):
                names += [f"{key}[{i}]" for i in range(1, M + 1)]
        return tuple(names)

    def params(self) -> Dict[str, Any]:
        return {
            "task": "windows",
            "domain": self.domain.describe(),
            "partition": self.partition.to_dict(),
            "b_event_mode": self.b_event_mode if self.cut_pipeline else None,
        }

    def __call__(self, seed_record: SeedRecord) -> List[int]:
        c = (self.sampler or sample)(self.domain, seed_record)
        p = self.partition
        opened = label(c, Phase.OPEN, method=self.label_method)
        terms = segment_terms(c, opened)
        counts = window_T(c, p, terms)
        by_clusters = window_T_by_clusters(c, p, opened)

        l_sum = counts.f0 + sum(counts.T)
        # ray-linked clusters of [1, n], less the one holding site 1 when it is ray-linked
        seg = axis_roots(opened, 1, p.n)
        linked = {int(r) for r in seg[seg >= 0]} & ray_roots(opened)
        direct = len(linked) - (1 - leading_indicator(c, opened))
        values = {
            "f0": counts.f0,
            "L_sum": l_sum,
            "T_windows": sum(counts.T),
            "violation:decomposition": int(direct != l_sum),
            "violation:clusters": int(by_clusters != counts.T),
        }
        for i, T in enumerate(counts.T, start=1):
            values[f"T[{i}]"] = T

        if self.cut_pipeline:
            bound_sum = counts.f0
            tilde_windows = 0
            mismatches = 0
            for i in range(1, p.M + 1):
                S = T_tilde = 0
                if p.a[i - 1] < p.a[i]:
                    cut = c.restricted(self.domain.cut_at(p.a[i]))
                    result = window_S(
                        cut, p, i,
                        open_labeling=label(cut, Phase.OPEN, method=self.label_method),
                        closed_labeling=label(cut, Phase.CLOSED, method=self.label_method),
                    )
                    S, T_tilde = result.S, result.T_tilde
                    tilde_windows += T_tilde
                    mismatches += int(result.T_tilde != result.T_tilde_direct)
                B = int(event_B(c, p, i, mode=self.b_event_mode))
                values[f"S[{i}]"] = S
                values[f"T_tilde[{i}]"] = T_tilde
                values[f"B[{i}]"] = B
                values[f"bound_gap[{i}]"] = counts.T[i - 1] - T_tilde - 2 * B
                bound_sum += T_tilde + 2 * B
            values["L_bound_sum"] = bound_sum
            values["T_tilde_windows"] = tilde_windows
            values["violation:cut_identity"] = mismatches
        return [values[name] for name in self.observables]


@dataclass(frozen=True)
class TailTask:
    """1{T(i) >= m} for m in TAIL_LEVELS."""

    domain: DomainSpec
    partition: ScalePartition
    window: int
    label_method: str = "ndimage"
    sampler: Optional[Sampler] = None

    observables = tuple(f"T>={m}" for m in TAIL_LEVELS)

    def params(self) -> Dict[str, Any]:
        return {
            "task": "tail",
            "domain": self.domain.describe(),
            "partition": self.partition.to_dict(),
            "window": self.window,
        }

    def __call__(self, seed_record: SeedRecord) -> List[int]:
        c = (self.sampler or sample)(self.domain, seed_record)
        labeling = label(c, Phase.OPEN, method=self.label_method)
        T = window_T(c, self.partition, segment_terms(c, labeling)).T[self.window - 1]
        return [int(T >= m) for m in TAIL_LEVELS]


CROSSING_OBSERVABLES = (
    "W",
    "W_lowest",
    "W_prime",
    "W_tilde",
    "W_and_W_tilde",
    "open_crossing",
    "closed_crossing",
    "open_across",
    "double_crossing",
    "violation:duality",
    "violation:union",
    "violation:lowest",
    "violation:across",
)


@dataclass(frozen=True)
class CrossingTask:
    domain: DomainSpec
    k: int
    eps: float
    label_method: str = "ndimage"
    sampler: Optional[Sampler] = None

    observables = CROSSING_OBSERVABLES

    def params(self) -> Dict[str, Any]:
        return {"task": "crossing", "domain": self.domain.describe(), "k": self.k, "eps": self.eps}

    def __call__(self, seed_record: SeedRecord) -> List[int]:
        c = (self.sampler or sample)(self.domain, seed_record)
        opened = label(c, Phase.OPEN, method=self.label_method)
        closed = label(c, Phase.CLOSED, method=self.label_method)
        events = event_W(c, self.k, self.eps, opened, closed)
        lowest = lowest_crossing_W(c, self.k, self.eps, opened, closed)
        pair = duality_pair(c, self.k, self.eps, opened, closed)
        links = crossing_probability_events(c, self.k, self.eps, opened, closed)

        values = [
            events.W,
            lowest,
            events.W_prime,
            events.W_tilde,
            events.W and events.W_tilde,
            links.open_crossing,
            links.closed_crossing,
            links.open_across,
            links.double_crossing,
            pair.open_path == pair.closed_path,
            events.W_prime != (events.W or events.W_tilde),
            events.W != lowest,
            (links.open_crossing and not events.W_prime) != (links.open_crossing and links.open_across),
        ]
        return [int(v) for v in values]


@dataclass(frozen=True)
class ArmTask:
    domain: DomainSpec
    m: int
    n_outer: int
    kind: str
    sampler: Optional[Sampler] = None

    observables = ("arm",)

    def params(self) -> Dict[str, Any]:
        return {"task": "arm", "domain": self.domain.describe(), "m": self.m,
                "n_outer": self.n_outer, "kind": self.kind}

    def __call__(self, seed_record: SeedRecord) -> List[int]:
        c = (self.sampler or sample)(self.domain, seed_record)
        return [int(arm_indicator(c, self.m, self.n_outer, self.kind))]


# --- estimators --------------------------------------------------------------


def estimate_segment_expectation(
    n: Union[int, Sequence[int]],
    kind="half",
    trials: int = 1000,
    seed: int = 0,
    truncation: Optional[int] = None,
    domain: Optional[DomainSpec] = None,
    doubling: bool = False,
    sampler: Optional[Sampler] = None,
    settings: Optional[Settings] = None,
) -> Union[EstimateReport, List[EstimateReport]]:
    """
    Estimate E(n), the expected number of open clusters meeting [1, n].

    A sequence of n values is evaluated with common random numbers: one box
    sized for the largest n, and every count taken on the same sample.
    ``domain`` replaces the standard box (toy domains for enumeration checks).

    Returns:
        One report, or one report per n when n is a sequence
    """
    _check_trials(trials)
    settings = _settings(settings)
    ns = (n,) if isinstance(n, int) else tuple(int(x) for x in n)
    if not ns or min(ns) < 1:
        raise ArgumentError(f"segment lengths must be positive, got {ns}")
    if domain is None:
        domain = DomainSpec.of_kind(kind, max(ns), truncation or settings.truncation)
    elif max(ns) > domain.segment_n:
        raise ArgumentError(f"n={max(ns)} exceeds the segment of {domain.describe()}")

    def reports(d: DomainSpec, stream: int) -> List[EstimateReport]:
        task = SegmentTask(d, ns, settings.label_method, sampler)
        acc = _run(task, trials, seed, stream, settings, f"E(n) {d.kind.value}")
        return [acc[name].report(d.truncation) for name in task.observables]

    result = reports(domain, STREAM_SEGMENT)
    if doubling:
        doubled = reports(_doubled(domain), STREAM_SEGMENT + DOUBLED_STREAM_OFFSET)
        result = [r.with_doubling(x) for r, x in zip(result, doubled)]
    logger.info("E(n) on %s: %s", domain.describe(), ", ".join(f"{r.mean:.4f}" for r in result))
    return result[0] if isinstance(n, int) else result


def estimate_leading_constant(
    kind="half",
    trials: int = 1000,
    seed: int = 0,
    truncation: Optional[int] = None,
    domain: Optional[DomainSpec] = None,
    doubling: bool = False,
    settings: Optional[Settings] = None,
) -> EstimateReport:
    """P(1 not connected to the truncated (-inf, 0]) - 1/2."""
    _check_trials(trials)
    settings = _settings(settings)
    if domain is None:
        domain = DomainSpec.of_kind(kind, 1, truncation or settings.truncation)

    def report(d: DomainSpec, stream: int) -> EstimateReport:
        acc = _run(LeadingTask(d, settings.label_method), trials, seed, stream, settings, "leading")
        return acc["not_connected"].report(d.truncation, offset=-0.5, name="leading_constant")

    result = report(domain, STREAM_LEADING)
    if doubling:
        result = result.with_doubling(report(_doubled(domain), STREAM_LEADING + DOUBLED_STREAM_OFFSET))
    return result


@dataclass(frozen=True)
class WindowGrid:
    """
    Window estimates for one (n, eps, domain).

    ``windows`` holds E[T(i)]/eps; ``L`` the assembled (f0 + sum T) / log n.
    On the full plane the cut-plane pipeline adds S(i), E~[T~(i)]/eps, P(B(i)),
    the per-window gap T(i) - T~(i) - 2 B(i) and the bound L assembled from
    T~(i) + 2 B(i).

    ``window_sum`` and ``cut_window_sum`` average T(i)/eps and T~(i)/eps over
    the nondegenerate windows from one per-sample sum each.
    """

    partition: ScalePartition
    kind: DomainKind
    truncation: int
    windows: Tuple[EstimateReport, ...]
    f0: EstimateReport
    L: EstimateReport
    violations: Dict[str, int]
    S: Optional[Tuple[EstimateReport, ...]] = None
    T_tilde: Optional[Tuple[EstimateReport, ...]] = None
    B: Optional[Tuple[EstimateReport, ...]] = None
    bound_gap: Optional[Tuple[EstimateReport, ...]] = None
    L_bound: Optional[EstimateReport] = None
    window_sum: Optional[EstimateReport] = None
    cut_window_sum: Optional[EstimateReport] = None
    accumulators: Dict[str, Accumulator] = field(default_factory=dict, repr=False)

    @property
    def eps(self) -> float:
        return self.partition.eps

    def window_mean(self) -> EstimateReport:
        """
        Average of E[T(i)]/eps over the nondegenerate windows, estimated from
        the per-sample window sum so the stderr carries the window correlations.
        """
        if self.window_sum is None:
            raise ArgumentError(f"partition {self.partition.a} has no nondegenerate window")
        return self.window_sum

    def cut_window_mean(self) -> Optional[EstimateReport]:
        if self.T_tilde is None:
            return None
        if self.cut_window_sum is None:
            raise ArgumentError(f"partition {self.partition.a} has no nondegenerate window")
        return self.cut_window_sum

    def rows(self) -> List[Dict[str, Any]]:
        """One row per window, for CSV output."""
        rows = []
        for i, (lo, hi) in enumerate(self.partition.windows(), start=1):
            row = {
                "domain": self.kind.value,
                "n": self.partition.n,
                "eps": self.eps,
                "truncation": self.truncation,
                "window": i,
                "a_lo": lo - 1,
                "a_hi": hi,
                "T_over_eps": self.windows[i - 1].mean,
                "T_over_eps_stderr": self.windows[i - 1].stderr,
            }
            if self.T_tilde is not None:
                row.update({
                    "S": self.S[i - 1].mean,
                    "S_stderr": self.S[i - 1].stderr,
                    "T_tilde_over_eps": self.T_tilde[i - 1].mean,
                    "T_tilde_over_eps_stderr": self.T_tilde[i - 1].stderr,
                    "P_B": self.B[i - 1].mean,
                    "P_B_stderr": self.B[i - 1].stderr,
                    "bound_gap": self.bound_gap[i - 1].mean,
                    "bound_gap_stderr": self.bound_gap[i - 1].stderr,
                })
            rows.append(row)
        return rows


def build_grid(p: ScalePartition, domain: DomainSpec, acc: Dict[str, Accumulator]) -> WindowGrid:
    lam = domain.truncation
    M = p.M
    log_n = math.log(p.n)

    def series(key: str, scale: float = 1.0) -> Tuple[EstimateReport, ...]:
        return tuple(acc[f"{key}[{i}]"].report(lam, scale=scale) for i in range(1, M + 1))

    live = sum(1 for lo, hi in p.windows() if lo <= hi)

    def window_sum(key: str, name: str) -> Optional[EstimateReport]:
        if not live:
            return None
        return acc[key].report(lam, scale=1.0 / (p.eps * live), name=name)

    violations = {name.split(":", 1)[1]: acc[name].sum for name in acc if name.startswith("violation:")}
    grid = dict(
        partition=p,
        kind=domain.kind,
        truncation=lam,
        windows=series("T", 1.0 / p.eps),
        f0=acc["f0"].report(lam),
        L=acc["L_sum"].report(lam, scale=1.0 / log_n, name="L"),
        window_sum=window_sum("T_windows", "mean_T_over_eps"),
        violations=violations,
        accumulators=acc,
    )
    if "L_bound_sum" in acc:
        grid.update(
            S=series("S"),
            T_tilde=series("T_tilde", 1.0 / p.eps),
            B=series("B"),
            bound_gap=series("bound_gap"),
            L_bound=acc["L_bound_sum"].report(lam, scale=1.0 / log_n, name="L_bound"),
            cut_window_sum=window_sum("T_tilde_windows", "mean_T_tilde_over_eps"),
        )
    return WindowGrid(**grid)


def estimate_window_grid(
    n: int,
    eps: float,
    kind="half",
    trials: int = 1000,
    seed: int = 0,
    truncation: Optional[int] = None,
    domain: Optional[DomainSpec] = None,
    doubling: bool = False,
    sampler: Optional[Sampler] = None,
    settings: Optional[Settings] = None,
) -> WindowGrid:
    """
    Estimate E[T(i)]/eps for every window of make_partition(n, eps), f0 and
    L(n) = (f0 + sum_i T(i)) / log n.

    On the full plane the cut-plane bound pipeline runs on the same samples.
    ``sampler`` replaces the random sampler (forced configurations in tests).
    """
    _check_trials(trials)
    settings = _settings(settings)
    p = make_partition(n, eps)
    if domain is None:
        domain = DomainSpec.of_kind(kind, n, truncation or settings.truncation)
    elif domain.segment_n != n:
        raise ArgumentError(f"domain segment n={domain.segment_n} does not match n={n}")
    if domain.kind is DomainKind.CUT:
        raise ArgumentError("window grids run on half- or full-plane domains")

    def grid(d: DomainSpec, stream: int) -> WindowGrid:
        task = WindowTask(d, p, settings.label_method, settings.b_event_mode, sampler)
        acc = _run(task, trials, seed, stream, settings, f"windows {d.kind.value} n={n} eps={eps}")
        return build_grid(p, d, acc)

    result = grid(domain, STREAM_WINDOWS)
    if any(result.violations.values()):
        logger.warning("Per-sample identity violations on %s: %s", domain.describe(), result.violations)
    if doubling:
        doubled = grid(_doubled(domain), STREAM_WINDOWS + DOUBLED_STREAM_OFFSET)
        result = replace(
            result,
            windows=tuple(r.with_doubling(x) for r, x in zip(result.windows, doubled.windows)),
            f0=result.f0.with_doubling(doubled.f0),
            L=result.L.with_doubling(doubled.L),
            window_sum=(
                result.window_sum.with_doubling(doubled.window_sum) if result.window_sum is not None else None
            ),
        )
    return result


def estimate_window_tail(
    n: int,
    eps: float,
    window: int,
    kind="half",
    trials: int = 1000,
    seed: int = 0,
    truncation: Optional[int] = None,
    domain: Optional[DomainSpec] = None,
    settings: Optional[Settings] = None,
) -> List[EstimateReport]:
    """P(T(i) >= m) for m = 1, 2, 3."""
    _check_trials(trials)
    settings = _settings(settings)
    p = make_partition(n, eps)
    if not 1 <= window <= p.M:
        raise ArgumentError(f"window {window} outside 1..{p.M}")
    if domain is None:
        domain = DomainSpec.of_kind(kind, n, truncation or settings.truncation)
    task = TailTask(domain, p, window, settings.label_method)
    acc = _run(task, trials, seed, STREAM_TAIL, settings, f"tail window {window}")
    return [acc[name].report(domain.truncation) for name in task.observables]


def crossing_domain(k: int, eps: float, truncation: Optional[int] = None) -> DomainSpec:
    """Half-plane box whose segment ends at floor(k(1+eps))."""
    k2 = math.floor(k * (1 + eps) + 1e-9)
    return DomainSpec.half_plane(k2, truncation)


def estimate_crossing_events(
    k: int,
    eps: float,
    trials: int = 1000,
    seed: int = 0,
    truncation: Optional[int] = None,
    domain: Optional[DomainSpec] = None,
    settings: Optional[Settings] = None,
) -> Dict[str, EstimateReport]:
    """
    Probabilities of W, W', W~, W and W~, the open/closed crossings between
    (-inf, 1] and [k, k(1+eps)], and the per-sample identity violation counts
    (reported as frequencies).
    """
    _check_trials(trials)
    settings = _settings(settings)
    if domain is None:
        domain = crossing_domain(k, eps, truncation or settings.truncation)
    crossing_window(Configuration.filled(domain, False), k, eps)
    task = CrossingTask(domain, k, eps, settings.label_method)
    acc = _run(task, trials, seed, STREAM_CROSSING, settings, f"crossings k={k}")
    return {name: acc[name].report(domain.truncation) for name in task.observables}


def estimate_arm(
    m: int,
    n_outer: int,
    kind: str,
    trials: int = 1000,
    seed: int = 0,
    settings: Optional[Settings] = None,
) -> EstimateReport:
    """Empirical one-arm or three-arm probability of the annulus B(n_outer) minus B(m)."""
    _check_trials(trials)
    if kind not in ARM_KINDS:
        raise ArgumentError(f"kind must be one of {ARM_KINDS}, got {kind!r}")
    if not 0 <= m < n_outer:
        raise ArgumentError(f"need 0 <= m < n_outer, got m={m}, n_outer={n_outer}")
    settings = _settings(settings)
    domain = arm_domain(n_outer)
    acc = _run(ArmTask(domain, m, n_outer, kind), trials, seed, STREAM_ARM, settings,
               f"{kind} ({m}, {n_outer})")
    return acc["arm"].report(n_outer, name=f"{kind}({m},{n_outer})")
