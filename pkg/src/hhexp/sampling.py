"""Two-phase Hansen-Hurwitz design.

A simple random sample without replacement of ``n`` units is split into
respondents and non-respondents by their true class; a simple random
sub-sample of ``h2`` non-respondents is then interviewed.

One draw serves both non-response regimes:

* regime ``"A"`` -- non-response on ``y`` only: ``x`` is known for all ``n``
  sampled units (``nonresp_x`` is populated);
* regime ``"B"`` -- non-response on ``x`` and ``y``: ``x`` is known only for
  respondents and the sub-sample (``nonresp_x`` is ``None``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import DesignInfeasible, EmptySubset, RegimeMismatch
from .population import FinitePopulation

REGIMES = ("A", "B")


@dataclass(frozen=True)
class DesignConfig:
    n: int
    f: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise DesignInfeasible(f"first-phase sample size n={self.n} must be >= 2")
        if not self.f >= 1:
            raise DesignInfeasible(f"sub-sampling factor f={self.f} must be >= 1")


def subsample_size(n2: int, f: float) -> int:
    """Number of non-respondents to re-interview.

    ``n2 / f`` rounded half-to-even and clamped to ``[1, n2]``; zero when
    there are no non-respondents.
    """
    if n2 == 0:
        return 0
    return min(max(round(n2 / f), 1), n2)


@dataclass(frozen=True, eq=False)
class SampleData:
    """One realized two-phase draw.

    ``resp`` and ``sub`` are ``(k, 2)`` arrays with columns ``x, y``.
    """

    resp: np.ndarray
    sub: np.ndarray
    n2: int
    n: int
    f_nominal: float
    nonresp_x: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.n1 + self.n2 != self.n:
            raise ValueError(f"n1 + n2 = {self.n1 + self.n2} != n = {self.n}")
        if self.nonresp_x is not None and len(self.nonresp_x) != self.n2:
            raise ValueError("nonresp_x must hold one value per non-respondent")
        if self.n2 == 0 and self.h2 != 0:
            raise ValueError("sub-sample must be empty when n2 = 0")
        if self.n2 > 0 and not 1 <= self.h2 <= self.n2:
            raise ValueError(f"h2={self.h2} outside [1, n2={self.n2}]")

    @property
    def n1(self) -> int:
        return len(self.resp)

    @property
    def h2(self) -> int:
        return len(self.sub)

    @cached_property
    def stats(self) -> "SampleStatistics":
        return _statistics(self)

    @property
    def regime(self) -> str:
        return "A" if self.nonresp_x is not None else "B"

    def project(self, regime: str) -> "SampleData":
        """View of this draw under ``regime``.

        Projecting to ``"B"`` drops the non-respondents' ``x``; projecting a
        regime-B sample back to ``"A"`` is impossible.
        """
        if regime not in REGIMES:
            raise ValueError(f"unknown regime {regime!r}")
        if regime == self.regime:
            return self
        if regime == "B":
            return replace(self, nonresp_x=None)
        raise RegimeMismatch("regime-B sample lacks non-respondents' x")

    def __eq__(self, other):
        if not isinstance(other, SampleData):
            return NotImplemented
        same_nx = (self.nonresp_x is None and other.nonresp_x is None) or (
            self.nonresp_x is not None and other.nonresp_x is not None
            and np.array_equal(self.nonresp_x, other.nonresp_x))
        return (np.array_equal(self.resp, other.resp) and np.array_equal(self.sub, other.sub)
                and self.n2 == other.n2 and self.n == other.n
                and self.f_nominal == other.f_nominal and same_nx)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "n": self.n,
            "n1": self.n1,
            "n2": self.n2,
            "h2": self.h2,
            "f_nominal": self.f_nominal,
            "resp": self.resp.tolist(),
            "nonresp_x": None if self.nonresp_x is None else self.nonresp_x.tolist(),
            "sub": self.sub.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SampleData":
        nx = d.get("nonresp_x")
        return cls(
            resp=np.asarray(d["resp"], dtype=float).reshape(-1, 2),
            sub=np.asarray(d["sub"], dtype=float).reshape(-1, 2),
            n2=int(d["n2"]),
            n=int(d["n"]),
            f_nominal=float(d["f_nominal"]),
            nonresp_x=None if nx is None else np.asarray(nx, dtype=float),
        )


def draw_sample(pop: FinitePopulation, cfg: DesignConfig) -> SampleData:
    """Draw one regime-A sample; deterministic in ``cfg.seed``."""
    if cfg.n > pop.N:
        raise DesignInfeasible(f"n={cfg.n} exceeds population size N={pop.N}")
    rng = np.random.default_rng(cfg.seed)
    idx = np.sort(rng.choice(pop.N, size=cfg.n, replace=False))
    nr = pop.nonrespondent[idx]
    resp_idx = idx[~nr]
    nonresp_idx = idx[nr]
    n2 = len(nonresp_idx)
    h2 = subsample_size(n2, cfg.f)
    sub_idx = np.sort(rng.choice(nonresp_idx, size=h2, replace=False)) if h2 else nonresp_idx[:0]
    x, y = pop.x, pop.y
    return SampleData(
        resp=np.column_stack((x[resp_idx], y[resp_idx])),
        sub=np.column_stack((x[sub_idx], y[sub_idx])),
        n2=n2,
        n=cfg.n,
        f_nominal=cfg.f,
        nonresp_x=x[nonresp_idx],
    )


@dataclass(frozen=True)
class SampleStatistics:
    """Subset sizes and means of one draw; ``None`` marks an empty subset."""

    n1: int
    n2: int
    h2: int
    ybar1: Optional[float]
    ybar_h2: Optional[float]
    xbar_full: Optional[float]
    xbar1: Optional[float]
    xbar_h2: Optional[float]

    def require(self, name: str) -> float:
        value = getattr(self, name)
        if value is None:
            raise EmptySubset(f"{name} is undefined for this sample")
        return value


def _mean(v):
    return math.fsum(v) / len(v) if len(v) else None


def sample_statistics(s: SampleData) -> SampleStatistics:
    """Subset sizes and means; cached on the sample."""
    return s.stats


def _statistics(s: SampleData) -> SampleStatistics:
    xbar_full = None
    if s.nonresp_x is not None:
        xbar_full = math.fsum(np.r_[s.resp[:, 0], s.nonresp_x]) / s.n
    return SampleStatistics(
        n1=s.n1,
        n2=s.n2,
        h2=s.h2,
        ybar1=_mean(s.resp[:, 1]),
        ybar_h2=_mean(s.sub[:, 1]),
        xbar_full=xbar_full,
        xbar1=_mean(s.resp[:, 0]),
        xbar_h2=_mean(s.sub[:, 0]),
    )
