"""Closed-form variance, bias and first-order MSE of the estimators.

Every function takes population parameters ``p``, the first-phase sample
size ``n``, the sub-sampling factor ``f`` and the non-response share ``w``.
``w`` defaults to ``p.w`` (``N2 / N``) but may be set freely, which is how
efficiency tables sweep it while keeping ``N`` fixed.

Notation used below: ``fpc = 1/n - 1/N`` and ``nr = (f - 1) * w / n``.
The products ``rho * C_y * C_x`` and ``rho2 * C'_y * C'_x`` are evaluated as
``S_xy / (Ybar * Xbar)`` and ``S_xy2 / (Ybar * Xbar)`` so that they stay
defined when a variable is constant.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .errors import DegenerateStratum, ZeroMean
from .estimators import EstimatorKind
from .population import PopulationParams


@dataclass(frozen=True)
class Moments:
    """Expectations of the relative errors ``e0*``, ``e1`` and ``e1*``."""

    var_e0: float
    var_e1: float
    cov_e0_e1: float
    var_e1_star: Optional[float] = None
    cov_e0_e1_star: Optional[float] = None


@dataclass(frozen=True)
class TheoryReport:
    estimator: EstimatorKind
    variance_or_mse: float
    bias: Optional[float]
    inputs: dict

    def to_dict(self) -> dict:
        d = asdict(self)
        d["estimator"] = self.estimator.value
        return d


def _resolve(p: PopulationParams, n, f, w):
    if not 0 < n <= p.N:
        raise ValueError(f"n={n} must satisfy 0 < n <= N={p.N}")
    if not f >= 1:
        raise ValueError(f"f={f} must be >= 1")
    w = p.w if w is None else w
    if not 0 <= w <= 1:
        raise ValueError(f"w={w} must lie in [0, 1]")
    if p.mean_y == 0 or p.mean_x == 0:
        raise ZeroMean("formulas need nonzero population means")
    return 1 / n - 1 / p.N, (f - 1) * w / n


def _stratum2(p: PopulationParams, nr: float):
    """``(S_y2^2, S_x2^2, S_xy2)``; zeros when the non-response term vanishes."""
    if p.has_stratum2:
        return p.s_y2 ** 2, p.s_x2 ** 2, p.s_xy2
    if nr == 0:
        return 0.0, 0.0, 0.0
    raise DegenerateStratum("non-response stratum parameters are unavailable")


def var_hh(p: PopulationParams, n: int, f: float = 1.0, w: float | None = None) -> float:
    """Variance of the Hansen-Hurwitz estimator."""
    fpc, nr = _resolve(p, n, f, w)
    sy2, _, _ = _stratum2(p, nr)
    return fpc * p.s_y ** 2 + nr * sy2


def moments_case_a(p: PopulationParams, n: int, f: float = 1.0, w: float | None = None) -> Moments:
    fpc, _ = _resolve(p, n, f, w)
    Y, X = p.mean_y, p.mean_x
    return Moments(
        var_e0=var_hh(p, n, f, w) / Y ** 2,
        var_e1=fpc * p.s_x ** 2 / X ** 2,
        cov_e0_e1=fpc * p.s_xy / (X * Y),
    )


def moments_case_b(p: PopulationParams, n: int, f: float = 1.0, w: float | None = None) -> Moments:
    a = moments_case_a(p, n, f, w)
    fpc, nr = _resolve(p, n, f, w)
    _, sx2, sxy2 = _stratum2(p, nr)
    Y, X = p.mean_y, p.mean_x
    return Moments(
        var_e0=a.var_e0,
        var_e1=a.var_e1,
        cov_e0_e1=a.cov_e0_e1,
        var_e1_star=(fpc * p.s_x ** 2 + nr * sx2) / X ** 2,
        cov_e0_e1_star=(fpc * p.s_xy + nr * sxy2) / (X * Y),
    )


def _cross(p):
    return p.s_xy / (p.mean_y * p.mean_x)


def _primed(p, nr):
    sy2, sx2, sxy2 = _stratum2(p, nr)
    Y, X = p.mean_y, p.mean_x
    return sy2 / Y ** 2, sx2 / X ** 2, sxy2 / (Y * X)


def bias_er_y(p: PopulationParams, n: int) -> float:
    fpc, _ = _resolve(p, n, 1.0, 0.0)
    return fpc * p.mean_y * (3 * p.cv_x ** 2 / 8 - _cross(p) / 2)


def bias_ep_y(p: PopulationParams, n: int) -> float:
    fpc, _ = _resolve(p, n, 1.0, 0.0)
    return fpc * p.mean_y * (-p.cv_x ** 2 / 8 + _cross(p) / 2)


def _mse_y(p, n, f, w, sign):
    fpc, nr = _resolve(p, n, f, w)
    sy2, _, _ = _stratum2(p, nr)
    bracket = p.cv_y ** 2 + p.cv_x ** 2 / 4 + sign * _cross(p)
    return fpc * p.mean_y ** 2 * bracket + nr * sy2


def mse_er_y(p: PopulationParams, n: int, f: float = 1.0, w: float | None = None) -> float:
    return _mse_y(p, n, f, w, -1)


def mse_ep_y(p: PopulationParams, n: int, f: float = 1.0, w: float | None = None) -> float:
    return _mse_y(p, n, f, w, +1)


def _bias_xy(p, n, f, w, x_coef, sign):
    fpc, nr = _resolve(p, n, f, w)
    _, cx2_sq, cross2 = _primed(p, nr)
    first = fpc * (x_coef * p.cv_x ** 2 + sign * _cross(p) / 2)
    second = nr * (x_coef * cx2_sq + sign * cross2 / 2)
    return p.mean_y * (first + second)


def bias_er_xy(p: PopulationParams, n: int, f: float = 1.0, w: float | None = None) -> float:
    return _bias_xy(p, n, f, w, 3 / 8, -1)


def bias_ep_xy(p: PopulationParams, n: int, f: float = 1.0, w: float | None = None) -> float:
    return _bias_xy(p, n, f, w, -1 / 8, +1)


def _mse_xy(p, n, f, w, sign):
    fpc, nr = _resolve(p, n, f, w)
    cy2_sq, cx2_sq, cross2 = _primed(p, nr)
    first = fpc * (p.cv_y ** 2 + p.cv_x ** 2 / 4 + sign * _cross(p))
    second = nr * (cy2_sq + cx2_sq / 4 + sign * cross2)
    return p.mean_y ** 2 * (first + second)


def mse_er_xy(p: PopulationParams, n: int, f: float = 1.0, w: float | None = None) -> float:
    return _mse_xy(p, n, f, w, -1)


def mse_ep_xy(p: PopulationParams, n: int, f: float = 1.0, w: float | None = None) -> float:
    return _mse_xy(p, n, f, w, +1)


def mse(p: PopulationParams, n: int, f: float, w: float | None, kind: EstimatorKind) -> float:
    """First-order MSE of ``kind`` (the exact variance for HH)."""
    kind = EstimatorKind(kind)
    if kind is EstimatorKind.HH:
        return var_hh(p, n, f, w)
    if kind is EstimatorKind.ER_Y:
        return mse_er_y(p, n, f, w)
    if kind is EstimatorKind.EP_Y:
        return mse_ep_y(p, n, f, w)
    if kind is EstimatorKind.ER_XY:
        return mse_er_xy(p, n, f, w)
    if kind is EstimatorKind.EP_XY:
        return mse_ep_xy(p, n, f, w)
    # complete response: no sub-sampling term
    return _mse_y(p, n, 1.0, 0.0, 1 if kind.is_product else -1)


def bias(p: PopulationParams, n: int, f: float, w: float | None, kind: EstimatorKind):
    """First-order bias of ``kind``; ``None`` for the unbiased HH estimator."""
    kind = EstimatorKind(kind)
    if kind is EstimatorKind.HH:
        return None
    if kind in (EstimatorKind.ER_Y, EstimatorKind.ER_BASE):
        return bias_er_y(p, n)
    if kind in (EstimatorKind.EP_Y, EstimatorKind.EP_BASE):
        return bias_ep_y(p, n)
    if kind is EstimatorKind.ER_XY:
        return bias_er_xy(p, n, f, w)
    return bias_ep_xy(p, n, f, w)


def mse_from_moments(p: PopulationParams, n: int, f: float, w: float | None,
                     kind: EstimatorKind) -> float:
    """Rebuild an MSE from the error moments.

    ``Ybar^2 * (E[e0^2] + E[e1^2] / 4 -/+ E[e0 e1])``, with the starred
    moments for the estimators that see non-response on ``x``.
    """
    kind = EstimatorKind(kind)
    if kind is EstimatorKind.HH:
        return p.mean_y ** 2 * moments_case_a(p, n, f, w).var_e0
    if kind in (EstimatorKind.ER_BASE, EstimatorKind.EP_BASE):
        f, w = 1.0, 0.0
    sign = 1 if kind.is_product else -1
    if kind.regime == "B":
        m = moments_case_b(p, n, f, w)
        return p.mean_y ** 2 * (m.var_e0 + m.var_e1_star / 4 + sign * m.cov_e0_e1_star)
    m = moments_case_a(p, n, f, w)
    return p.mean_y ** 2 * (m.var_e0 + m.var_e1 / 4 + sign * m.cov_e0_e1)


def theory_report(p: PopulationParams, n: int, f: float = 1.0, w: float | None = None,
                  kind: EstimatorKind = EstimatorKind.HH) -> TheoryReport:
    kind = EstimatorKind(kind)
    w = p.w if w is None else w
    return TheoryReport(
        estimator=kind,
        variance_or_mse=mse(p, n, f, w, kind),
        bias=bias(p, n, f, w, kind),
        inputs={"params": p.to_dict(), "n": n, "f": f, "w": w},
    )
