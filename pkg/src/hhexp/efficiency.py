"""Efficiency of the exponential estimators relative to Hansen-Hurwitz.

Each condition is decided by the sign of ``MSE(estimator) - V(HH)``.  The
closed-form algebraic condition is evaluated alongside and reported with an
``agree`` flag; for the two estimators that see non-response on ``x`` the
ratio form ``alpha / alpha' <= (1 - f) N2 / (N - n)`` is additionally
reported with a validity flag, since dividing by ``alpha'`` reverses the
inequality when ``alpha' < 0``.

PRE is ``100 * V(HH) / MSE(estimator)``.
"""

from __future__ import annotations

import io
import csv
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from . import theory
from .errors import ZeroCV, ZeroMSE
from .estimators import NONRESPONSE_KINDS, EstimatorKind
from .population import LITERATURE_SAMPLE_SIZE, PopulationParams, literature_params

K = EstimatorKind

# Published PRE grid for the literature population, n = 35.
PUBLISHED_PRE: dict[tuple[float, float], dict[EstimatorKind, float]] = {
    (w, f): {EstimatorKind.HH: 100.0, **dict(zip(NONRESPONSE_KINDS, vals))}
    for (w, f), vals in {
        (0.10, 1.50): (263.64, 45.47, 263.65, 45.47),
        (0.10, 2.00): (263.62, 45.47, 263.65, 45.47),
        (0.10, 2.50): (263.61, 45.48, 263.65, 45.47),
        (0.10, 3.00): (263.59, 45.48, 263.64, 45.47),
        (0.20, 1.50): (263.62, 45.47, 263.65, 45.47),
        (0.20, 2.00): (263.59, 45.48, 263.64, 45.47),
        (0.20, 2.50): (263.56, 45.48, 263.64, 45.47),
        (0.20, 3.00): (263.52, 45.48, 263.63, 45.47),
        (0.30, 1.50): (263.61, 45.48, 263.65, 45.47),
        (0.30, 2.00): (263.56, 45.48, 263.64, 45.47),
        (0.30, 2.50): (263.51, 45.48, 263.63, 45.47),
        (0.30, 3.00): (263.46, 45.48, 263.62, 45.47),
    }.items()
}
PUBLISHED_W = (0.10, 0.20, 0.30)
PUBLISHED_F = (1.50, 2.00, 2.50, 3.00)
TABLE_KINDS = (EstimatorKind.HH,) + NONRESPONSE_KINDS


@dataclass(frozen=True)
class ConditionReport:
    estimator: EstimatorKind
    algebraic_holds: bool
    mse_difference: float
    direct_holds: bool
    agree: bool
    intermediates: dict
    ratio_form_holds: Optional[bool] = None
    ratio_form_valid: Optional[bool] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["estimator"] = self.estimator.value
        return d


def _report(kind, algebraic, diff, intermediates, **ratio):
    diff = float(diff)
    direct = diff <= 0
    return ConditionReport(kind, bool(algebraic), diff, direct, bool(algebraic) == direct,
                           intermediates, **ratio)


def _threshold(p):
    if p.cv_y == 0:
        raise ZeroCV("C_y = 0: the correlation threshold is undefined")
    return p.cv_x / (4 * p.cv_y)


def _rho(p):
    return 0.0 if p.rho is None else p.rho


def condition_er_y(p: PopulationParams, n: int, f: float = 1.0,
                   w: float | None = None) -> ConditionReport:
    """Ratio estimator beats HH when ``rho >= C_x / (4 C_y)``."""
    t = _threshold(p)
    diff = theory.mse_er_y(p, n, f, w) - theory.var_hh(p, n, f, w)
    return _report(K.ER_Y, _rho(p) >= t, diff, {"threshold": t})


def condition_ep_y(p: PopulationParams, n: int, f: float = 1.0,
                   w: float | None = None) -> ConditionReport:
    """Product estimator beats HH when ``rho <= -C_x / (4 C_y)``."""
    t = _threshold(p)
    diff = theory.mse_ep_y(p, n, f, w) - theory.var_hh(p, n, f, w)
    return _report(K.EP_Y, _rho(p) <= -t, diff, {"threshold": t})


def _condition_xy(p, n, f, w, kind):
    w = p.w if w is None else w
    sign = 1 if kind.is_product else -1
    Y, X = p.mean_y, p.mean_x
    a = p.cv_x ** 2 / 4 + sign * p.s_xy / (Y * X)
    if p.has_stratum2:
        a2 = p.cv_x2 ** 2 / 4 + sign * p.s_xy2 / (Y * X)
    else:
        a2 = 0.0
    N2 = w * p.N
    lhs = (p.N - n) * a
    rhs = (1 - f) * N2 * a2
    undivided = lhs <= rhs
    valid = a2 > 0 and p.N > n
    ratio_holds = a / a2 <= (1 - f) * N2 / (p.N - n) if valid else None
    if kind.is_product:
        names = {"lambda": a, "lambda_prime": a2}
        m = theory.mse_ep_xy(p, n, f, w)
    else:
        names = {"alpha": a, "alpha_prime": a2}
        m = theory.mse_er_xy(p, n, f, w)
    diff = m - theory.var_hh(p, n, f, w)
    return _report(kind, undivided, diff, names,
                   ratio_form_holds=ratio_holds, ratio_form_valid=valid)


def condition_er_xy(p: PopulationParams, n: int, f: float = 1.0,
                    w: float | None = None) -> ConditionReport:
    return _condition_xy(p, n, f, w, K.ER_XY)


def condition_ep_xy(p: PopulationParams, n: int, f: float = 1.0,
                    w: float | None = None) -> ConditionReport:
    return _condition_xy(p, n, f, w, K.EP_XY)


def conditions(p: PopulationParams, n: int, f: float = 1.0,
               w: float | None = None) -> list[ConditionReport]:
    return [condition_er_y(p, n, f, w), condition_ep_y(p, n, f, w),
            condition_er_xy(p, n, f, w), condition_ep_xy(p, n, f, w)]


def pre(p: PopulationParams, n: int, f: float, w: float | None, kind: EstimatorKind) -> float:
    """Percent relative efficiency of ``kind`` with respect to HH."""
    kind = EstimatorKind(kind)
    if kind is K.HH:
        return 100.0
    m = theory.mse(p, n, f, w, kind)
    if m <= 0:
        raise ZeroMSE(f"MSE of {kind.value} is {m}; PRE undefined")
    return 100 * theory.var_hh(p, n, f, w) / m


def pre_from_moments(p: PopulationParams, n: int, f: float, w: float | None,
                     kind: EstimatorKind) -> float:
    """PRE rebuilt from the relative-error moments (cross-check of :func:`pre`)."""
    kind = EstimatorKind(kind)
    v = theory.mse_from_moments(p, n, f, w, K.HH)
    m = theory.mse_from_moments(p, n, f, w, kind)
    if m <= 0:
        raise ZeroMSE(f"MSE of {kind.value} is {m}; PRE undefined")
    return 100 * v / m


def _published(w, f):
    for (pw, pf), row in PUBLISHED_PRE.items():
        if abs(pw - w) < 1e-9 and abs(pf - f) < 1e-9:
            return row
    return None


@dataclass
class PreRow:
    w: float
    f: float
    pre: dict
    published: dict = field(default_factory=dict)

    @property
    def delta(self) -> dict:
        return {k: self.pre[k] - v for k, v in self.published.items()}


@dataclass
class PreTable:
    rows: list[PreRow]
    n: int

    def cell(self, w, f) -> PreRow:
        for r in self.rows:
            if abs(r.w - w) < 1e-9 and abs(r.f - f) < 1e-9:
                return r
        raise KeyError((w, f))

    def records(self) -> list[dict]:
        """Long format: one record per ``(w, f, kind)``."""
        out = []
        for r in self.rows:
            for k, v in r.pre.items():
                ref = r.published.get(k)
                out.append({"w": r.w, "f": r.f, "kind": k.value, "pre": v,
                            "published": ref, "delta": None if ref is None else v - ref})
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, ["w", "f", "kind", "pre", "published", "delta"],
                                lineterminator="\n")
        writer.writeheader()
        for rec in self.records():
            writer.writerow({k: "" if v is None else v for k, v in rec.items()})
        return buf.getvalue()

    def to_text(self) -> str:
        """Aligned table nested by ``w`` then ``f``; published values in brackets."""
        kinds = list(self.rows[0].pre) if self.rows else []
        head = f"{'w':>5}  {'f':>5}" + "".join(f"  {k.value:>18}" for k in kinds)
        lines = [head, "-" * len(head)]
        last_w = None
        for r in self.rows:
            wcol = f"{r.w:5.2f}" if r.w != last_w else " " * 5
            last_w = r.w
            cells = []
            for k in kinds:
                ref = r.published.get(k)
                s = f"{r.pre[k]:8.2f}" + (f" [{ref:7.2f}]" if ref is not None else " " * 10)
                cells.append(f"  {s:>18}")
            lines.append(f"{wcol}  {r.f:5.2f}" + "".join(cells))
        return "\n".join(lines) + "\n"


def pre_table(p: PopulationParams, n: int, w_list: Sequence[float], f_list: Sequence[float],
              kinds: Sequence[EstimatorKind] = TABLE_KINDS) -> PreTable:
    if not w_list or not f_list:
        raise ValueError("w_list and f_list must be nonempty")
    rows = []
    for w in w_list:
        for f in f_list:
            published = _published(w, f) or {}
            rows.append(PreRow(
                w=w, f=f,
                pre={k: pre(p, n, f, w, k) for k in kinds},
                published={k: v for k, v in published.items() if k in kinds},
            ))
    return PreTable(rows, n)


def _non_increasing(values):
    return all(b <= a for a, b in zip(values, values[1:]))


def qualitative_verdicts(table: PreTable, w_list, f_list) -> dict:
    """Direction and trend checks against the published table's pattern."""
    ordering = all(
        r.pre[K.ER_Y] > 100 > r.pre[K.EP_Y] and r.pre[K.ER_XY] > 100 > r.pre[K.EP_XY]
        for r in table.rows
    )
    verdicts = {"ordering": ordering}
    for k in (K.ER_Y, K.ER_XY):
        in_w = all(_non_increasing([table.cell(w, f).pre[k] for w in w_list]) for f in f_list)
        in_f = all(_non_increasing([table.cell(w, f).pre[k] for f in f_list]) for w in w_list)
        verdicts[f"{k.value}_non_increasing_in_w"] = in_w
        verdicts[f"{k.value}_non_increasing_in_f"] = in_f
    return verdicts


def replication_report(p: PopulationParams | None = None, n: int = LITERATURE_SAMPLE_SIZE,
                       w_list=PUBLISHED_W, f_list=PUBLISHED_F) -> dict:
    """Recompute the published PRE grid and compare it with the printed values.

    Besides the grid and signed deltas the report carries the four
    efficiency conditions at the population's own ``w`` for each ``f``, the
    qualitative verdicts, and the largest gap between PRE computed from the
    MSE formulas and PRE rebuilt from the error moments (relative).
    """
    p = literature_params() if p is None else p
    table = pre_table(p, n, w_list, f_list)
    gap = max(
        abs(r.pre[k] - pre_from_moments(p, n, r.f, r.w, k)) / r.pre[k]
        for r in table.rows for k in r.pre
    )
    return {
        "n": n,
        "params": p.to_dict(),
        "grid": table.records(),
        "conditions": [
            {"f": f, "w": p.w, "reports": [c.to_dict() for c in conditions(p, n, f)]}
            for f in f_list
        ],
        "verdicts": qualitative_verdicts(table, w_list, f_list),
        "consistency": {"max_rel_pre_gap": gap, "consistent": gap <= 1e-12},
        "text_table": table.to_text(),
    }
