"""
Regression and reporting.

fit_n_log fits E(n) = A*n + B*log(n) + C by weighted least squares;
prefactor_report turns window grids into tables of L and E[T(i)]/eps with a
linear extrapolation to eps -> 0, next to the predicted constants.
"""

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from triperc import cft
from triperc.errors import ArgumentError, NumericError, RangeError
from triperc.estimators import WindowGrid
from triperc.lattice import DomainKind

logger = logging.getLogger(__name__)

TARGETS = {
    "half_plane_prefactor": cft.HALF_PLANE_PREFACTOR,
    "full_plane_bound": cft.FULL_PLANE_BOUND,
    "full_plane_conjecture": cft.FULL_PLANE_CONJECTURE,
}


@dataclass(frozen=True)
class FitResult:
    """E(n) = A*n + B*log(n) + C with the parameter covariance."""

    A: float
    B: float
    C: float
    covariance: np.ndarray
    residual_norm: float
    points: int

    @property
    def stderrs(self) -> Tuple[float, float, float]:
        return tuple(float(math.sqrt(max(v, 0.0))) for v in np.diag(self.covariance))

    def to_dict(self) -> Dict[str, Any]:
        sa, sb, sc = self.stderrs
        return {
            "A": self.A, "B": self.B, "C": self.C,
            "A_stderr": sa, "B_stderr": sb, "C_stderr": sc,
            "covariance": self.covariance.tolist(),
            "residual_norm": self.residual_norm,
            "points": self.points,
        }


def fit_n_log(points: Iterable[Tuple[float, float, float]]) -> FitResult:
    """
    Weighted least squares on the model A*n + B*log(n) + C.

    Args:
        points: (n, mean, stderr) triples; stderrs are the weights' scale

    Returns:
        FitResult; covariance is (X^T W X)^-1 with W = diag(1/stderr^2)

    Raises:
        ArgumentError: fewer than 4 distinct n or nonpositive stderrs
        NumericError: rank-deficient design
    """
    rows = sorted((float(n), float(y), float(s)) for n, y, s in points)
    if len({n for n, _, _ in rows}) < 4:
        raise ArgumentError(f"need at least 4 distinct n values, got {len(rows)} points")
    n, y, sigma = (np.array(col) for col in zip(*rows))
    if np.any(n <= 0):
        raise ArgumentError("n values must be positive")
    if np.any(sigma <= 0):
        raise ArgumentError("stderrs must be positive")

    design = np.column_stack([n, np.log(n), np.ones_like(n)])
    weighted = design / sigma[:, None]
    target = y / sigma
    solution, _, rank, singular = linalg.lstsq(weighted, target)
    if rank < 3 or singular[-1] <= singular[0] * 1e-14:
        raise NumericError(f"design matrix is rank deficient (rank {rank})")

    covariance = linalg.inv(weighted.T @ weighted)
    covariance = 0.5 * (covariance + covariance.T)
    residual = float(np.linalg.norm(weighted @ solution - target))
    A, B, C = (float(v) for v in solution)
    logger.debug("Fit over %d points: A=%.6g B=%.6g C=%.6g", len(rows), A, B, C)
    return FitResult(A, B, C, covariance, residual, len(rows))


@dataclass(frozen=True)
class Extrapolation:
    intercept: float
    intercept_stderr: float
    slope: float
    slope_stderr: float
    points: int


def extrapolate_linear(
    eps: Sequence[float],
    values: Sequence[float],
    stderrs: Sequence[float],
) -> Extrapolation:
    """
    Weighted straight-line fit value = intercept + slope * eps.

    With all stderrs zero the fit is unweighted and the uncertainty comes from
    the residuals.
    """
    x = np.asarray(eps, dtype=float)
    y = np.asarray(values, dtype=float)
    s = np.asarray(stderrs, dtype=float)
    if not (x.shape == y.shape == s.shape):
        raise ArgumentError("eps, values and stderrs must have equal lengths")
    if np.unique(x).size < 2:
        raise ArgumentError(f"need at least 2 distinct eps values, got {sorted(set(x.tolist()))}")

    design = np.column_stack([np.ones_like(x), x])
    if np.all(s > 0):
        weighted = design / s[:, None]
        solution, *_ = linalg.lstsq(weighted, y / s)
        covariance = linalg.inv(weighted.T @ weighted)
    elif np.all(s == 0):
        solution, *_ = linalg.lstsq(design, y)
        dof = x.size - 2
        resid = y - design @ solution
        scale = float(resid @ resid) / dof if dof > 0 else 0.0
        covariance = scale * linalg.inv(design.T @ design)
    else:
        raise ArgumentError("stderrs must be all positive or all zero")

    return Extrapolation(
        intercept=float(solution[0]),
        intercept_stderr=float(math.sqrt(max(covariance[0, 0], 0.0))),
        slope=float(solution[1]),
        slope_stderr=float(math.sqrt(max(covariance[1, 1], 0.0))),
        points=int(x.size),
    )


@dataclass
class PrefactorReport:
    """Window tables (``rows``) and the extrapolated prefactors (``summary``)."""

    rows: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)


def _prediction(eps: float) -> Optional[float]:
    try:
        return cft.cut_plane_prediction(eps).value
    except RangeError:
        return None


def _extrapolated(points: List[Tuple[float, float, float]], target: float) -> Dict[str, Any]:
    eps, values, stderrs = zip(*points)
    fit = extrapolate_linear(eps, values, stderrs)
    return {
        **asdict(fit),
        "target": target,
        "deviation_sigmas": (
            (fit.intercept - target) / fit.intercept_stderr if fit.intercept_stderr > 0 else None
        ),
        "grid": [{"eps": e, "value": v, "stderr": s} for e, v, s in points],
    }


def prefactor_report(grids: Sequence[WindowGrid]) -> PrefactorReport:
    """
    Tabulate L and E[T(i)]/eps per (domain, n, eps) and extrapolate to eps -> 0.

    For each domain and eps the grid with the largest n enters the
    extrapolation. Half-plane results are compared with sqrt(3)/(4 pi); full
    plane results are reported twice: the direct estimate against
    5 sqrt(3)/(32 pi) and the cut-plane pipeline against the bound
    (8/5) sqrt(3)/(4 pi) and the per-eps prediction.

    Raises:
        ArgumentError: a domain present with fewer than 2 eps values
    """
    report = PrefactorReport()
    by_kind: Dict[DomainKind, Dict[float, WindowGrid]] = {}
    ordered = sorted(grids, key=lambda g: (g.kind.value, g.eps, g.partition.n, g.truncation))
    for grid in ordered:
        current = by_kind.setdefault(grid.kind, {}).get(grid.eps)
        if current is None or grid.partition.n >= current.partition.n:
            by_kind[grid.kind][grid.eps] = grid

        mean = grid.window_mean()
        row = {
            "domain": grid.kind.value,
            "n": grid.partition.n,
            "eps": grid.eps,
            "truncation": grid.truncation,
            "windows": grid.partition.M,
            "trials": grid.L.trials,
            "L": grid.L.mean,
            "L_stderr": grid.L.stderr,
            "L_doubled_delta": grid.L.doubled_delta,
            "f0": grid.f0.mean,
            "T_over_eps": mean.mean,
            "T_over_eps_stderr": mean.stderr,
        }
        if grid.T_tilde is not None:
            cut_mean = grid.cut_window_mean()
            row.update({
                "T_tilde_over_eps": cut_mean.mean,
                "T_tilde_over_eps_stderr": cut_mean.stderr,
                "cut_prediction": _prediction(grid.eps),
                "L_bound": grid.L_bound.mean,
                "L_bound_stderr": grid.L_bound.stderr,
            })
        report.rows.append(row)

    for kind, per_eps in sorted(by_kind.items(), key=lambda kv: kv[0].value):
        if len(per_eps) < 2:
            raise ArgumentError(f"{kind.value}-plane grids need at least 2 eps values, got {sorted(per_eps)}")
        chosen = [per_eps[e] for e in sorted(per_eps)]
        direct = [(g.eps, g.window_mean().mean, g.window_mean().stderr) for g in chosen]
        if kind is DomainKind.HALF:
            report.summary["half"] = {
                "T_over_eps": _extrapolated(direct, TARGETS["half_plane_prefactor"]),
            }
            continue

        cut = [(g.eps, g.cut_window_mean().mean, g.cut_window_mean().stderr)
               for g in chosen if g.T_tilde is not None]
        summary = {"direct_T_over_eps": _extrapolated(direct, TARGETS["full_plane_conjecture"])}
        if len(cut) >= 2:
            summary["cut_T_tilde_over_eps"] = _extrapolated(cut, TARGETS["full_plane_bound"])
            summary["cut_predictions"] = [
                {"eps": g.eps, "measured": g.cut_window_mean().mean,
                 "stderr": g.cut_window_mean().stderr, "predicted": _prediction(g.eps)}
                for g in chosen
            ]
            summary["L_bound"] = [
                {"eps": g.eps, "n": g.partition.n, "value": g.L_bound.mean,
                 "stderr": g.L_bound.stderr, "limit": TARGETS["full_plane_bound"]}
                for g in chosen
            ]
        report.summary[kind.value] = summary

    report.summary["targets"] = dict(TARGETS)
    return report


def csv_text(rows: Sequence[Mapping[str, Any]]) -> str:
    """Rows as CSV with a header naming every column (RFC 4180 quoting, CRLF line ends)."""
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_value(v) for k, v in row.items()})
    return buffer.getvalue()


def write_csv(rows: Sequence[Mapping[str, Any]], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(csv_text(rows))
    return path


def _csv_value(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def write_summary(summary: Mapping[str, Any], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, sort_keys=True, default=_json_default)
        f.write("\n")
    return path


def _json_default(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer, np.floating)):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")
