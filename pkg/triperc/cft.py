"""
Exact scaling-limit formulas: Cardy, Watts and the expected number of
crossing clusters, together with the cross-ratios they are evaluated at.

Every formula returns a FormulaValue carrying a rigorous bound on the series
truncation (plus accumulated rounding). Series arguments are limited to
[0, x_max] with x_max = 0.95 by default.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from triperc.config import DEFAULT_LAMBDA_CAP
from triperc.errors import ArgumentError, NumericError, RangeError

logger = logging.getLogger(__name__)

X_MAX = DEFAULT_LAMBDA_CAP

SQRT3 = math.sqrt(3.0)
# sqrt(3) / (4 pi): the half-plane log-prefactor
HALF_PLANE_PREFACTOR = SQRT3 / (4.0 * math.pi)
FULL_PLANE_BOUND = 8.0 / 5.0 * HALF_PLANE_PREFACTOR
FULL_PLANE_CONJECTURE = 5.0 * SQRT3 / (32.0 * math.pi)
WATTS_COEFFICIENT = SQRT3 / (2.0 * math.pi)

SERIES_RTOL = 1e-15
MAX_TERMS = 200_000
UNIT_ROUNDOFF = np.finfo(float).eps / 2


@dataclass(frozen=True)
class FormulaValue:
    value: float
    abs_error_bound: float

    def __post_init__(self):
        if not self.abs_error_bound >= 0:
            raise NumericError(f"negative error bound {self.abs_error_bound}")

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class CrossRatio:
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ArgumentError(f"cross-ratio {self.value} outside [0, 1]")

    def __float__(self) -> float:
        return self.value


def _check_argument(x: float, x_max: float) -> None:
    if not 0.0 <= x:
        raise ArgumentError(f"series argument must be nonnegative, got {x}")
    if x > x_max:
        raise RangeError(f"series argument {x} exceeds x_max = {x_max}")


def hypergeometric_series(
    numer: Sequence[float],
    denom: Sequence[float],
    x: float,
    x_max: float = X_MAX,
    rtol: float = SERIES_RTOL,
) -> FormulaValue:
    """
    Sum pFq(numer; denom; x) with p = q + 1 as a power series.

    The tail after term K is bounded by |t_{K+1}| / (1 - rho), where rho
    bounds every later term ratio: pairing sorted numerators with sorted
    denominators (the k+1 of k! included), rho = x * prod max(1, (|a|+K+1)/(b+K+1)).
    """
    _check_argument(x, x_max)
    numer = sorted(float(a) for a in numer)
    denom = sorted([float(b) for b in denom] + [1.0])
    if len(numer) != len(denom):
        raise ArgumentError(f"need p = q + 1 parameters, got {len(numer)} and {len(denom) - 1}")
    for b in denom:
        if b <= 0 and float(b).is_integer():
            raise ArgumentError(f"denominator parameter {b} is a nonpositive integer")
    if x == 0.0:
        return FormulaValue(1.0, 0.0)

    pairs = list(zip(numer, denom))
    terms = [1.0]
    term = 1.0
    for k in range(MAX_TERMS):
        ratio = x
        for a, b in pairs:
            ratio *= (a + k) / (b + k)
        term *= ratio
        if term == 0.0:
            total = math.fsum(terms)
            return FormulaValue(total, _rounding(terms))

        nxt = k + 1
        if all(b + nxt > 0 for _, b in pairs):
            rho = x
            for a, b in pairs:
                rho *= max(1.0, (abs(a) + nxt) / (b + nxt))
            if rho < 1.0:
                tail = abs(term) / (1.0 - rho)
                total = math.fsum(terms)
                if tail <= rtol * abs(total):
                    return FormulaValue(total, tail + _rounding(terms))
        terms.append(term)

    raise NumericError(f"series did not converge in {MAX_TERMS} terms at x={x}")


def _rounding(terms) -> float:
    # term k carries at most ~6k relative rounding steps
    return 6.0 * len(terms) * UNIT_ROUNDOFF * math.fsum(abs(t) for t in terms)


def hyp2f1(a: float, b: float, c: float, x: float, x_max: float = X_MAX) -> FormulaValue:
    return hypergeometric_series((a, b), (c,), x, x_max=x_max)


def hyp3f2_special(x: float, x_max: float = X_MAX) -> FormulaValue:
    """3F2(1, 1, 4/3; 5/3, 2; x)."""
    return hypergeometric_series((1.0, 1.0, 4.0 / 3.0), (5.0 / 3.0, 2.0), x, x_max=x_max)


def gamma_third() -> float:
    """Gamma(1/3)."""
    return float(special.gamma(1.0 / 3.0))


def cardy_prefactor() -> float:
    """2 pi sqrt(3) / Gamma(1/3)^3."""
    return 2.0 * math.pi * SQRT3 / gamma_third() ** 3


def _check_unit(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ArgumentError(f"cross-ratio must lie in [0, 1], got {lam}")
    return lam


def cardy(lam: float, x_max: float = X_MAX) -> FormulaValue:
    """Crossing probability limit; uses cardy(l) = 1 - cardy(1 - l) above x_max."""
    lam = _check_unit(lam)
    if lam > x_max:
        mirrored = cardy(1.0 - lam, x_max=x_max)
        return FormulaValue(1.0 - mirrored.value, mirrored.abs_error_bound + UNIT_ROUNDOFF)
    if lam == 0.0:
        return FormulaValue(0.0, 0.0)
    series = hyp2f1(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, lam, x_max=x_max)
    scale = cardy_prefactor() * lam ** (1.0 / 3.0)
    value = scale * series.value
    return FormulaValue(value, scale * series.abs_error_bound + 4 * UNIT_ROUNDOFF * abs(value))


def watts(lam: float, x_max: float = X_MAX) -> FormulaValue:
    """Probability limit of both crossings: cardy - (sqrt3 / 2pi) * l * 3F2(l)."""
    lam = _check_unit(lam)
    _check_argument(lam, x_max)
    crossing = cardy(lam, x_max=x_max)
    series = hyp3f2_special(lam, x_max=x_max)
    correction = WATTS_COEFFICIENT * lam * series.value
    value = crossing.value - correction
    bound = crossing.abs_error_bound + WATTS_COEFFICIENT * lam * series.abs_error_bound
    return FormulaValue(value, bound + 4 * UNIT_ROUNDOFF * abs(crossing.value))


def crossing_cluster_excess(lam: float, x_max: float = X_MAX) -> FormulaValue:
    """
    log(1/(1-l)) - l * 3F2(l), summed as the positive series
    sum_k l^(k+1) (1/(k+1) - c_k) with c_k = (4/3)_k / ((5/3)_k (k+1)).

    The leading term is l^2 / 10 and the tail after K is at most
    l^(K+2) / ((K+2)(1-l)).
    """
    lam = _check_unit(lam)
    _check_argument(lam, x_max)
    if lam == 0.0:
        return FormulaValue(0.0, 0.0)

    terms = []
    power = lam
    pochhammer_ratio = 1.0  # (4/3)_k / (5/3)_k
    for k in range(MAX_TERMS):
        terms.append(power * (1.0 / (k + 1) - pochhammer_ratio / (k + 1)))
        power *= lam
        pochhammer_ratio *= (4.0 / 3.0 + k) / (5.0 / 3.0 + k)
        tail = power / ((k + 2) * (1.0 - lam))
        total = math.fsum(terms)
        if k >= 1 and tail <= SERIES_RTOL * total:
            return FormulaValue(total, tail + _rounding(terms))
    raise NumericError(f"excess series did not converge at lambda={lam}")


def expected_crossing_clusters(lam: float, x_max: float = X_MAX) -> FormulaValue:
    """cardy(l) - (sqrt3/4pi) l 3F2(l) + (sqrt3/4pi) log(1/(1-l))."""
    lam = _check_unit(lam)
    _check_argument(lam, x_max)
    crossing = cardy(lam, x_max=x_max)
    excess = crossing_cluster_excess(lam, x_max=x_max)
    value = crossing.value + HALF_PLANE_PREFACTOR * excess.value
    bound = crossing.abs_error_bound + HALF_PLANE_PREFACTOR * excess.abs_error_bound
    return FormulaValue(value, bound + 4 * UNIT_ROUNDOFF * abs(value))


def _is_infinite(w: complex) -> bool:
    return cmath.isinf(complex(w))


def cross_ratio(w1: complex, w2: complex, w3: complex, w4: complex) -> CrossRatio:
    """
    (w1 - w2)(w4 - w3) / ((w1 - w3)(w4 - w2)) for four boundary points in
    cyclic order. One point may be infinite; its two factors cancel.
    """
    points = [complex(w) for w in (w1, w2, w3, w4)]
    infinite = [i for i, w in enumerate(points) if _is_infinite(w)]
    if len(infinite) > 1:
        raise ArgumentError("at most one point may be infinite")
    finite = [w for w in points if not _is_infinite(w)]
    for i in range(len(finite)):
        for j in range(i + 1, len(finite)):
            if finite[i] == finite[j]:
                raise ArgumentError(f"coincident points {finite[i]}")

    numerator = [(0, 1), (3, 2)]
    denominator = [(0, 2), (3, 1)]
    if infinite:
        drop = infinite[0]
        numerator = [f for f in numerator if drop not in f]
        denominator = [f for f in denominator if drop not in f]
    num = 1 + 0j
    for i, j in numerator:
        num *= points[i] - points[j]
    den = 1 + 0j
    for i, j in denominator:
        den *= points[i] - points[j]
    lam = num / den

    if abs(lam.imag) > 1e-9 * max(1.0, abs(lam)):
        raise ArgumentError(f"points are not on a common circle in cyclic order (lambda={lam})")
    value = lam.real
    if -1e-12 < value < 0.0:
        value = 0.0
    if 1.0 < value < 1.0 + 1e-12:
        value = 1.0
    if not 0.0 <= value <= 1.0:
        raise ArgumentError(f"points are not in cyclic order (lambda={value})")
    return CrossRatio(value)


def cut_plane_lambda(eps: float) -> CrossRatio:
    """Cross-ratio of the scaled cut plane: sqrt(16 e (1+e)) / (sqrt(1+e) + sqrt(e))^2."""
    if not eps > 0:
        raise ArgumentError(f"eps must be positive, got {eps}")
    root = math.sqrt(1.0 + eps) + math.sqrt(eps)
    return CrossRatio(math.sqrt(16.0 * eps * (1.0 + eps)) / root ** 2)


def cut_plane_map(z: complex, eps: float) -> complex:
    """phi(z) = i sqrt(z - 1 - eps), mapping C minus (-inf, 1+eps) onto the upper half plane."""
    return 1j * cmath.sqrt(complex(z) - 1.0 - eps)


def halfplane_lambda(eps: float) -> CrossRatio:
    """Cross-ratio for (-inf, 1] versus [k, k(1+eps)] in the half plane: eps / (1 + eps)."""
    if not eps > 0:
        raise ArgumentError(f"eps must be positive, got {eps}")
    return cross_ratio(math.inf, 0.0, 1.0, 1.0 + eps)


def halfplane_wprime_limit(eps: float, x_max: float = X_MAX) -> FormulaValue:
    """Limit of P(W'_k): (sqrt3/2pi) * (e/(1+e)) * 3F2(e/(1+e))."""
    x = float(halfplane_lambda(eps))
    _check_argument(x, x_max)
    series = hyp3f2_special(x, x_max=x_max)
    value = WATTS_COEFFICIENT * x * series.value
    return FormulaValue(value, WATTS_COEFFICIENT * x * series.abs_error_bound + 4 * UNIT_ROUNDOFF * value)


def wprime_linearization(eps: float) -> float:
    """Small-eps form of the W' limit: 2 (sqrt3/4pi) eps."""
    return 2.0 * HALF_PLANE_PREFACTOR * eps


def cut_plane_prediction(eps: float, x_max: float = X_MAX) -> FormulaValue:
    """
    Limit of E~[T~(i)] / eps on the cut plane:
    (N(l) - cardy(l)) / eps = (sqrt3/4pi) * excess(l) / eps at l = cut_plane_lambda(eps).
    """
    lam = float(cut_plane_lambda(eps))
    excess = crossing_cluster_excess(lam, x_max=x_max)
    return FormulaValue(
        HALF_PLANE_PREFACTOR * excess.value / eps,
        HALF_PLANE_PREFACTOR * excess.abs_error_bound / eps,
    )


def cut_plane_linearization(eps: float) -> float:
    """(sqrt3/4pi) * l(eps)^2 / (10 eps), which tends to (8/5)(sqrt3/4pi)."""
    lam = float(cut_plane_lambda(eps))
    return HALF_PLANE_PREFACTOR * lam ** 2 / (10.0 * eps)


FORMULAS = {
    "cardy": cardy,
    "watts": watts,
    "clusters": expected_crossing_clusters,
    "excess": crossing_cluster_excess,
    "hyp3f2": hyp3f2_special,
    "wprime": halfplane_wprime_limit,
    "cut-prediction": cut_plane_prediction,
}
