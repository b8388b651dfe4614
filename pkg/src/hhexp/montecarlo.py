"""Empirical checks of the closed-form theory.

:func:`enumerate_exact` walks every first-phase sample and every
sub-sample of a tiny population and weights them by their design
probabilities.  :func:`run_simulation` repeats seeded two-phase draws; each
replication's seed depends only on the master seed and the replication
index, so results do not depend on how replications are spread over
workers.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import theory
from .errors import AllDrawsSkipped, DegenerateStratum, DesignInfeasible, NoRespondents, RegimeMismatch, TooLarge
from .estimators import EstimatorKind, estimate
from .population import FinitePopulation, compute_params
from .sampling import DesignConfig, SampleData, draw_sample, subsample_size

ENUMERATION_LIMIT = 10 ** 7
DEFAULT_KINDS = (EstimatorKind.HH, EstimatorKind.ER_Y, EstimatorKind.EP_Y,
                 EstimatorKind.ER_XY, EstimatorKind.EP_XY)


def replication_seed(master_seed: int, index: int) -> int:
    """64-bit seed for replication ``index``, mixed from ``master_seed``."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def _view(s: SampleData, kind: EstimatorKind, regime: str) -> SampleData:
    need = kind.regime
    if need is None:
        return s if regime == "auto" else s.project(regime)
    if regime not in ("auto", need):
        raise RegimeMismatch(f"{kind.value} needs regime {need}, configured {regime}")
    return s.project(need)


def _estimates(s: SampleData, kinds, regime, Xbar) -> Optional[list[float]]:
    try:
        return [estimate(k, _view(s, k, regime), Xbar) for k in kinds]
    except NoRespondents:
        return None


@dataclass(frozen=True)
class SimConfig:
    replications: int
    design: DesignConfig
    estimators: tuple = DEFAULT_KINDS
    regime: str = "auto"
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "estimators",
                           tuple(EstimatorKind(k) for k in self.estimators))
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not self.estimators:
            raise ValueError("estimator set must be nonempty")
        if self.regime not in ("auto", "A", "B"):
            raise ValueError(f"unknown regime {self.regime!r}")
        for k in self.estimators:
            if k.regime and self.regime not in ("auto", k.regime):
                raise RegimeMismatch(f"{k.value} needs regime {k.regime}, configured {self.regime}")

    def to_dict(self) -> dict:
        return {
            "replications": self.replications,
            "n": self.design.n,
            "f": self.design.f,
            "estimators": [k.value for k in self.estimators],
            "regime": self.regime,
            "master_seed": self.master_seed,
        }


@dataclass(frozen=True)
class EstimatorSummary:
    empirical_mean: float
    empirical_bias: float
    empirical_mse: float
    mc_se_of_mean: float
    mc_se_of_mse: Optional[float]
    theory_bias: Optional[float]
    theory_mse: float
    z_bias: Optional[float]
    z_mse: Optional[float]
    mse_relative_error: float
    bias_sign_checked: bool
    bias_sign_match: Optional[bool]


@dataclass(frozen=True)
class SimReport:
    config: dict
    Ybar: float
    usable_draws: int
    skipped_draws: int
    per_estimator: dict

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "Ybar": self.Ybar,
            "usable_draws": self.usable_draws,
            "skipped_draws": self.skipped_draws,
            "per_estimator": {k.value: asdict(v) for k, v in self.per_estimator.items()},
        }


def _run_range(pop, cfg, start, stop, Xbar):
    out = np.full((stop - start, len(cfg.estimators)), np.nan)
    for i in range(start, stop):
        design = DesignConfig(cfg.design.n, cfg.design.f, replication_seed(cfg.master_seed, i))
        vals = _estimates(draw_sample(pop, design), cfg.estimators, cfg.regime, Xbar)
        if vals is not None:
            out[i - start] = vals
    return out


def _chunks(R, workers):
    size = max(1, math.ceil(R / (4 * workers)))
    return [(a, min(a + size, R)) for a in range(0, R, size)]


def _batch_se(sq_err: np.ndarray, batches: int = 100) -> Optional[float]:
    b = min(batches, len(sq_err))
    if b < 2:
        return None
    means = [math.fsum(chunk) / len(chunk) for chunk in np.array_split(sq_err, b)]
    return float(np.std(means, ddof=1) / math.sqrt(b))


def run_simulation(pop: FinitePopulation, cfg: SimConfig, workers: int = 1) -> SimReport:
    """Monte Carlo moments of each estimator against the first-order theory.

    Draws without respondents are skipped and counted.  The MSE standard
    error uses 100 batch means over the replication order.
    """
    if cfg.design.n > pop.N:
        raise DesignInfeasible(f"n={cfg.design.n} exceeds population size N={pop.N}")
    params = compute_params(pop, require_stratum2=False)
    Ybar, Xbar = params.mean_y, params.mean_x
    R = cfg.replications

    if workers <= 1:
        est = _run_range(pop, cfg, 0, R, Xbar)
    else:
        chunks = _chunks(R, workers)
        est = np.empty((R, len(cfg.estimators)))
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = [ex.submit(_run_range, pop, cfg, a, b, Xbar) for a, b in chunks]
            for (a, b), fut in zip(chunks, futures):
                est[a:b] = fut.result()

    usable = ~np.isnan(est[:, 0])
    count = int(usable.sum())
    if count == 0:
        raise AllDrawsSkipped("no draw had respondents")

    n, f = cfg.design.n, cfg.design.f
    summaries = {}
    for j, kind in enumerate(cfg.estimators):
        v = est[usable, j]
        mean = math.fsum(v) / count
        sq = (v - Ybar) ** 2
        emp_mse = math.fsum(sq) / count
        se_mean = float(np.std(v, ddof=1) / math.sqrt(count)) if count > 1 else math.nan
        se_mse = _batch_se(sq)
        t_bias = theory.bias(params, n, f, params.w, kind)
        t_mse = theory.mse(params, n, f, params.w, kind)
        emp_bias = mean - Ybar
        checked = t_bias is not None and abs(t_bias) > 3 * se_mean
        summaries[kind] = EstimatorSummary(
            empirical_mean=mean,
            empirical_bias=emp_bias,
            empirical_mse=emp_mse,
            mc_se_of_mean=se_mean,
            mc_se_of_mse=se_mse,
            theory_bias=t_bias,
            theory_mse=t_mse,
            z_bias=(emp_bias - (t_bias or 0.0)) / se_mean if se_mean > 0 else None,
            z_mse=(emp_mse - t_mse) / se_mse if se_mse else None,
            mse_relative_error=emp_mse / t_mse - 1 if t_mse else math.nan,
            bias_sign_checked=checked,
            bias_sign_match=(math.copysign(1, emp_bias) == math.copysign(1, t_bias)) if checked else None,
        )
    return SimReport(cfg.to_dict(), Ybar, count, R - count, summaries)


@dataclass(frozen=True)
class ExactReport:
    """Design expectations from full enumeration.

    Expectations are conditional on draws with at least one respondent;
    ``skipped_probability`` is the mass of the excluded draws.
    """

    n: int
    f: float
    enumeration_size: int
    weight_total: float
    skipped_probability: float
    Ybar: float
    per_estimator: dict
    hh_variance_theory: Optional[float]
    hh_variance_discrepancy: Optional[float]
    subsample_sizes_integral: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_estimator"] = {k.value: v for k, v in self.per_estimator.items()}
        return d


def enumeration_size(pop: FinitePopulation, n: int, f: float) -> int:
    """Number of (first-phase sample, sub-sample) pairs."""
    N1, N2 = pop.N1, pop.N2
    return sum(
        math.comb(N1, n - n2) * math.comb(N2, n2) * math.comb(n2, subsample_size(n2, f))
        for n2 in range(max(0, n - N1), min(n, N2) + 1)
    )


def enumerate_exact(pop: FinitePopulation, n: int, f: float,
                    kinds: Sequence[EstimatorKind] = DEFAULT_KINDS) -> ExactReport:
    """Exact design moments of ``kinds`` by enumerating every two-phase draw."""
    DesignConfig(n, f)
    if n > pop.N:
        raise DesignInfeasible(f"n={n} exceeds population size N={pop.N}")
    kinds = tuple(EstimatorKind(k) for k in kinds)
    N = pop.N
    feasible = range(max(0, n - pop.N1), min(n, pop.N2) + 1)
    guard = math.comb(N, n) * max(math.comb(k, subsample_size(k, f)) for k in feasible)
    if guard > ENUMERATION_LIMIT:
        raise TooLarge(f"enumeration needs ~{guard} evaluations (limit {ENUMERATION_LIMIT})")

    params = compute_params(pop, require_stratum2=False)
    Ybar, Xbar = params.mean_y, params.mean_x
    x, y, nr = pop.x, pop.y, pop.nonrespondent
    first_count = math.comb(N, n)

    weights, values = [], []
    total = skipped = Fraction(0)
    size = 0
    for idx in itertools.combinations(range(N), n):
        idx = np.array(idx)
        r_idx, nr_idx = idx[~nr[idx]], idx[nr[idx]]
        n2 = len(nr_idx)
        h2 = subsample_size(n2, f)
        resp = np.column_stack((x[r_idx], y[r_idx]))
        wt = Fraction(1, first_count * math.comb(n2, h2))
        for sub in itertools.combinations(nr_idx, h2):
            size += 1
            total += wt
            sub = np.array(sub, dtype=int)
            s = SampleData(resp, np.column_stack((x[sub], y[sub])), n2, n, f, x[nr_idx])
            vals = _estimates(s, kinds, "auto", Xbar)
            if vals is None:
                skipped += wt
                continue
            weights.append(wt)
            values.append(vals)

    usable = total - skipped
    wf = np.array([float(w / usable) for w in weights]) if weights else np.empty(0)
    vals = np.array(values).reshape(len(weights), len(kinds))
    per = {}
    for j, k in enumerate(kinds):
        e = math.fsum(wf * vals[:, j])
        m = math.fsum(wf * (vals[:, j] - Ybar) ** 2)
        per[k] = {"exact_expectation": e, "exact_bias": e - Ybar, "exact_mse": m}

    integral = all(k == 0 or (k / f).is_integer() for k in feasible)
    try:
        v_theory = theory.var_hh(params, n, f, params.w)
    except DegenerateStratum:
        v_theory = None
    disc = None
    if v_theory is not None and EstimatorKind.HH in per:
        disc = per[EstimatorKind.HH]["exact_mse"] - v_theory
    return ExactReport(
        n=n, f=f, enumeration_size=size, weight_total=float(total),
        skipped_probability=float(skipped), Ybar=Ybar, per_estimator=per,
        hh_variance_theory=v_theory, hh_variance_discrepancy=disc,
        subsample_sizes_integral=integral,
    )
