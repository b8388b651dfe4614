"""Point estimators of the population mean of ``y``.

The exponential estimators multiply a mean estimate by
``exp((Xbar - xbar) / (Xbar + xbar))`` (ratio type, for positive
correlation) or by its reciprocal (product type, for negative correlation).
"""

from __future__ import annotations

import enum
import math

from .errors import NoRespondents, RegimeMismatch, SingularExponent
from .sampling import SampleData, sample_statistics


class EstimatorKind(enum.Enum):
    HH = "HH"
    ER_Y = "ER_Y"
    EP_Y = "EP_Y"
    ER_XY = "ER_XY"
    EP_XY = "EP_XY"
    ER_BASE = "ER_BASE"
    EP_BASE = "EP_BASE"

    @property
    def regime(self):
        """Regime the estimator needs, or ``None`` if either will do."""
        return {"ER_Y": "A", "EP_Y": "A", "ER_XY": "B", "EP_XY": "B"}.get(self.value)

    @property
    def is_product(self) -> bool:
        return self.value.startswith("EP")


NONRESPONSE_KINDS = (EstimatorKind.ER_Y, EstimatorKind.EP_Y,
                     EstimatorKind.ER_XY, EstimatorKind.EP_XY)


def _ratio_exponent(Xbar: float, xbar: float) -> float:
    denom = Xbar + xbar
    if denom == 0:
        raise SingularExponent(f"Xbar + xbar = 0 (Xbar={Xbar}, xbar={xbar})")
    return (Xbar - xbar) / denom


def _hh(s: SampleData, col: int) -> float:
    if s.n1 == 0:
        raise NoRespondents("draw has no respondents")
    st = sample_statistics(s)
    first = st.ybar1 if col == 1 else st.xbar1
    if s.n2 == 0:
        return first
    second = st.ybar_h2 if col == 1 else st.xbar_h2
    return (s.n1 * first + s.n2 * second) / s.n


def hh_mean(s: SampleData) -> float:
    """Hansen-Hurwitz estimator ``(n1 * ybar1 + n2 * ybar_h2) / n``."""
    return _hh(s, 1)


def hh_mean_x(s: SampleData) -> float:
    """Hansen-Hurwitz estimator applied to the auxiliary variable."""
    return _hh(s, 0)


def _full_xbar(s: SampleData) -> float:
    if s.nonresp_x is None:
        raise RegimeMismatch("estimator needs x for every sampled unit (regime A)")
    return sample_statistics(s).xbar_full


def exp_ratio_y(s: SampleData, Xbar: float) -> float:
    return hh_mean(s) * math.exp(_ratio_exponent(Xbar, _full_xbar(s)))


def exp_product_y(s: SampleData, Xbar: float) -> float:
    return hh_mean(s) * math.exp(-_ratio_exponent(Xbar, _full_xbar(s)))


def _check_b(s: SampleData):
    if s.nonresp_x is not None:
        raise RegimeMismatch("estimator models non-response on x as well (regime B)")


def exp_ratio_xy(s: SampleData, Xbar: float) -> float:
    _check_b(s)
    return hh_mean(s) * math.exp(_ratio_exponent(Xbar, hh_mean_x(s)))


def exp_product_xy(s: SampleData, Xbar: float) -> float:
    _check_b(s)
    return hh_mean(s) * math.exp(-_ratio_exponent(Xbar, hh_mean_x(s)))


def exp_ratio_base(ybar: float, xbar: float, Xbar: float) -> float:
    """Complete-response exponential ratio estimator."""
    return ybar * math.exp(_ratio_exponent(Xbar, xbar))


def exp_product_base(ybar: float, xbar: float, Xbar: float) -> float:
    """Complete-response exponential product estimator."""
    return ybar * math.exp(-_ratio_exponent(Xbar, xbar))


def _base(s: SampleData, Xbar: float, fn) -> float:
    if s.n2 != 0:
        raise RegimeMismatch("complete-response estimators need a draw without non-respondents")
    st = sample_statistics(s)
    if st.ybar1 is None:
        raise NoRespondents("draw has no respondents")
    return fn(st.ybar1, st.xbar1, Xbar)


def estimate(kind: EstimatorKind, s: SampleData, Xbar: float) -> float:
    """Evaluate the estimator ``kind`` on ``s``."""
    kind = EstimatorKind(kind)
    if kind is EstimatorKind.HH:
        return hh_mean(s)
    if kind is EstimatorKind.ER_Y:
        return exp_ratio_y(s, Xbar)
    if kind is EstimatorKind.EP_Y:
        return exp_product_y(s, Xbar)
    if kind is EstimatorKind.ER_XY:
        return exp_ratio_xy(s, Xbar)
    if kind is EstimatorKind.EP_XY:
        return exp_product_xy(s, Xbar)
    if kind is EstimatorKind.ER_BASE:
        return _base(s, Xbar, exp_ratio_base)
    return _base(s, Xbar, exp_product_base)


def estimate_record(kind: EstimatorKind, s: SampleData, Xbar: float) -> dict:
    """JSON-ready ``{kind, value, n1, n2, h2}`` result."""
    kind = EstimatorKind(kind)
    return {"kind": kind.value, "value": estimate(kind, s, Xbar),
            "n1": s.n1, "n2": s.n2, "h2": s.h2}
