"""
Self-checks run by ``triperc verify``.

formulas:    symmetry, reflection and small-argument expansions of the cft module
enumeration: toy-domain expectations by exhaustive enumeration, against both
             the graph-search oracles and Monte Carlo
identities:  per-sample identities on random samples (zero violations allowed)
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy import special

from triperc import cft
from triperc.config import Settings
from triperc.errors import ArgumentError
from triperc.estimators import (
    estimate_arm,
    estimate_crossing_events,
    estimate_leading_constant,
    estimate_segment_expectation,
    estimate_window_grid,
)
from triperc.lattice import DomainKind, DomainSpec
from triperc.oracles import (
    three_arm_by_search,
    bfs_parent,
    exact_expectation,
    leading_indicator_by_search,
    segment_count_by_search,
    w_prime_by_search,
)
from triperc.percolation.arms import arm_domain, arm_indicator
from triperc.percolation.crossings import event_W
from triperc.percolation.labeling import Phase, label
from triperc.percolation.sampling import SeedRecord, sample
from triperc.percolation.segment import count_segment_clusters, leading_indicator

logger = logging.getLogger(__name__)

VERIFY_STREAM = 900
MC_SIGMAS = 5.0


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> Dict[str, object]:
        return {"suite": self.suite, "check": self.name, "passed": self.passed, "detail": self.detail}


def _check(results: List[CheckResult], suite: str, name: str, passed: bool, detail: str) -> None:
    results.append(CheckResult(suite, name, bool(passed), detail))
    if not passed:
        logger.warning("%s/%s failed: %s", suite, name, detail)


def formula_checks(trials: int = 0, seed: int = 0, settings: Optional[Settings] = None) -> List[CheckResult]:
    results: List[CheckResult] = []
    suite = "formulas"

    grid = [round(0.01 * i, 2) for i in range(1, 100)]
    worst = max(abs(cft.cardy(x).value + cft.cardy(1 - x).value - 1.0) for x in grid)
    _check(results, suite, "cardy_symmetry", worst <= 1e-10, f"max |C(l) + C(1-l) - 1| = {worst:.3e}")

    g = cft.gamma_third()
    reflection = g * float(special.gamma(2.0 / 3.0)) / (2.0 * math.pi / math.sqrt(3.0)) - 1.0
    _check(results, suite, "gamma_reflection", abs(reflection) <= 1e-12, f"relative error {reflection:.3e}")

    ordered = all(
        cft.watts(x).value <= cft.cardy(x).value <= cft.expected_crossing_clusters(x).value
        for x in grid if x <= cft.X_MAX
    )
    _check(results, suite, "watts_cardy_clusters_order", ordered, "watts <= cardy <= N on the grid")

    lam = 0.01
    ratio = (cft.expected_crossing_clusters(lam).value - cft.cardy(lam).value) / (
        cft.HALF_PLANE_PREFACTOR * lam ** 2 / 10.0
    )
    _check(results, suite, "clusters_expansion", 0.98 <= ratio <= 1.02, f"ratio {ratio:.6f} at l=0.01")

    eps = 1e-8
    ratio = float(cft.cut_plane_lambda(eps)) ** 2 / (16.0 * eps)
    _check(results, suite, "cut_lambda_expansion", 0.999 <= ratio <= 1.001, f"ratio {ratio:.8f} at eps=1e-8")

    eps = 1e-6
    rel = cft.halfplane_wprime_limit(eps).value / eps / cft.WATTS_COEFFICIENT - 1.0
    _check(results, suite, "wprime_expansion", abs(rel) <= 1e-4, f"relative deviation {rel:.3e} at eps=1e-6")

    half = cft.cardy(0.5).value
    _check(results, suite, "cardy_half", abs(half - 0.5) <= 1e-10, f"cardy(0.5) = {half!r}")

    worst = max(
        abs(cft.hyp2f1(1 / 3, 2 / 3, 4 / 3, x).value - float(special.hyp2f1(1 / 3, 2 / 3, 4 / 3, x)))
        for x in (0.1, 0.5, 0.9)
    )
    _check(results, suite, "hyp2f1_vs_scipy", worst <= 1e-12, f"max deviation {worst:.3e}")

    value = float(cft.cross_ratio(-1, 0, 1, math.inf))
    _check(results, suite, "cross_ratio_infinity", abs(value - 0.5) <= 1e-15, f"lambda = {value!r}")
    return results


def _mc_agrees(exact: float, mean: float, stderr: float) -> bool:
    if stderr == 0:
        return mean == exact
    return abs(mean - exact) <= MC_SIGMAS * stderr


def enumeration_checks(trials: int = 20000, seed: int = 0, settings: Optional[Settings] = None,
                       full: bool = False) -> List[CheckResult]:
    """
    Toy-domain checks. ``full`` adds the 15-site arm box B(2), which takes
    noticeably longer under enumeration.
    """
    results: List[CheckResult] = []
    suite = "enumeration"
    settings = settings or Settings(progress=False)

    segment_box = DomainSpec.toy(DomainKind.HALF, (-1, 4, 0, 1), segment_n=3)
    exact = exact_expectation(segment_box, count_segment_clusters)
    oracle = exact_expectation(segment_box, segment_count_by_search)
    _check(results, suite, "segment_count_oracle", exact == oracle, f"E[count] = {exact} vs search {oracle}")
    mc = estimate_segment_expectation(3, trials=trials, seed=seed, domain=segment_box, settings=settings)
    _check(results, suite, "segment_count_mc", _mc_agrees(float(exact), mc.mean, mc.stderr),
           f"exact {float(exact):.6f}, MC {mc.mean:.6f} +/- {mc.stderr:.6f}")

    exact = exact_expectation(segment_box, leading_indicator)
    oracle = exact_expectation(segment_box, leading_indicator_by_search)
    _check(results, suite, "leading_indicator_oracle", exact == oracle, f"P = {exact} vs search {oracle}")
    mc = estimate_leading_constant(trials=trials, seed=seed, domain=segment_box, settings=settings)
    _check(results, suite, "leading_constant_mc", _mc_agrees(float(exact) - 0.5, mc.mean, mc.stderr),
           f"exact {float(exact) - 0.5:.6f}, MC {mc.mean:.6f} +/- {mc.stderr:.6f}")

    crossing_box = DomainSpec.toy(DomainKind.HALF, (-1, 4, 0, 1), segment_n=4)
    exact = exact_expectation(crossing_box, lambda c: event_W(c, 2, 1.0).W_prime)
    oracle = exact_expectation(crossing_box, lambda c: w_prime_by_search(c, 2, 1.0))
    _check(results, suite, "w_prime_oracle", exact == oracle, f"P(W') = {exact} vs search {oracle}")
    mc = estimate_crossing_events(2, 1.0, trials=trials, seed=seed, domain=crossing_box, settings=settings)
    _check(results, suite, "w_prime_mc", _mc_agrees(float(exact), mc["W_prime"].mean, mc["W_prime"].stderr),
           f"exact {float(exact):.6f}, MC {mc['W_prime'].mean:.6f} +/- {mc['W_prime'].stderr:.6f}")

    annuli = [(0, 1)] + ([(0, 2), (1, 2)] if full else [])
    for m, n in annuli:
        box = arm_domain(n)
        for kind in ("one_arm", "three_arm"):
            exact = exact_expectation(box, lambda c: arm_indicator(c, m, n, kind))
            if kind == "three_arm":
                oracle = exact_expectation(box, lambda c: three_arm_by_search(c, m, n))
                _check(results, suite, f"{kind}_oracle({m},{n})", exact == oracle,
                       f"pi = {exact} vs search {oracle}")
            mc = estimate_arm(m, n, kind, trials=trials, seed=seed, settings=settings)
            _check(results, suite, f"{kind}_mc({m},{n})", _mc_agrees(float(exact), mc.mean, mc.stderr),
                   f"exact {float(exact):.6f}, MC {mc.mean:.6f} +/- {mc.stderr:.6f}")
    return results


def identity_checks(trials: int = 10000, seed: int = 0, settings: Optional[Settings] = None) -> List[CheckResult]:
    """Per-sample identities; every check must see zero violations."""
    results: List[CheckResult] = []
    suite = "identities"
    settings = settings or Settings(progress=False)

    for kind in (DomainKind.HALF, DomainKind.FULL):
        grid = estimate_window_grid(16, 1.0, kind, trials=trials, seed=seed, truncation=16, settings=settings)
        for name, count in sorted(grid.violations.items()):
            _check(results, suite, f"{kind.value}_{name}", count == 0, f"{count} violations in {trials} samples")

    events = estimate_crossing_events(4, 1.0, trials=trials, seed=seed, truncation=16, settings=settings)
    for name, report in sorted(events.items()):
        if name.startswith("violation:"):
            count = round(report.mean * report.trials)
            _check(results, suite, f"crossing_{name.split(':', 1)[1]}", count == 0,
                   f"{count} violations in {trials} samples")

    # search-based labeling is slow; a fixed share of the samples suffices
    search_samples = max(1, min(trials, 500))
    box = DomainSpec.full_plane(8, truncation=8)
    mismatches = 0
    for trial in range(trials):
        c = sample(box, SeedRecord(seed, VERIFY_STREAM, trial))
        for phase in (Phase.OPEN, Phase.CLOSED):
            fast = label(c, phase, method="ndimage").parent
            slow = label(c, phase, method="union_find").parent
            mismatches += int(not np.array_equal(fast, slow))
            if trial < search_samples:
                mismatches += int(not np.array_equal(fast, bfs_parent(c, phase is Phase.OPEN)))
    _check(results, suite, "labeling_methods", mismatches == 0,
           f"{mismatches} mismatches (ndimage / union-find on {trials}, search on {search_samples})")

    box = arm_domain(4)
    mismatches = 0
    for trial in range(search_samples):
        c = sample(box, SeedRecord(seed, VERIFY_STREAM + 1, trial))
        mismatches += int(arm_indicator(c, 1, 4, "three_arm") != three_arm_by_search(c, 1, 4))
    _check(results, suite, "three_arm_methods", mismatches == 0,
           f"{mismatches} mismatches in {search_samples} samples")
    return results


SUITES: Dict[str, Callable[..., List[CheckResult]]] = {
    "formulas": formula_checks,
    "enumeration": enumeration_checks,
    "identities": identity_checks,
}


def run_suite(name: str, trials: Optional[int] = None, seed: int = 0,
              settings: Optional[Settings] = None) -> List[CheckResult]:
    """Run one suite, or every suite for ``all``."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise ArgumentError(f"unknown suite {name!r}; choose from {['all', *SUITES]}")
    results: List[CheckResult] = []
    for suite in names:
        kwargs = {"seed": seed, "settings": settings}
        if trials is not None:
            kwargs["trials"] = trials
        results.extend(SUITES[suite](**kwargs))
    return results
