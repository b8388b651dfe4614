"""Finite populations split into a response and a non-response class.

Population mean squares use the divisor ``N - 1`` for the whole population
and ``N2 - 1`` for the non-response stratum.  All sums go through
:func:`math.fsum`, so parameters do not depend on unit order.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import asdict, dataclass, fields
from functools import cached_property
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import DegenerateStratum, InfeasibleSpec, ParseError, ZeroMean


class ResponseClass(enum.Enum):
    RESPONDENT = "R"
    NONRESPONDENT = "NR"


@dataclass(frozen=True)
class Observation:
    id: int
    x: float
    y: float
    cls: ResponseClass

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"unit {self.id}: x and y must be finite")


@dataclass(frozen=True)
class FinitePopulation:
    """Ordered collection of units with known response class."""

    units: tuple[Observation, ...]

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        if len(self.units) < 2:
            raise ValueError("a population needs at least 2 units")
        ids = [u.id for u in self.units]
        if len(set(ids)) != len(ids):
            raise ValueError("unit ids must be unique")
        if self.N1 < 1:
            raise ValueError("a population needs at least one respondent")

    @classmethod
    def from_arrays(cls, x, y, nonrespondent, ids=None) -> "FinitePopulation":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        nr = np.asarray(nonrespondent, dtype=bool)
        if ids is None:
            ids = range(1, len(x) + 1)
        units = [
            Observation(int(i), float(a), float(b),
                        ResponseClass.NONRESPONDENT if c else ResponseClass.RESPONDENT)
            for i, a, b, c in zip(ids, x, y, nr)
        ]
        return cls(tuple(units))

    @property
    def N(self) -> int:
        return len(self.units)

    @cached_property
    def x(self) -> np.ndarray:
        return np.array([u.x for u in self.units])

    @cached_property
    def y(self) -> np.ndarray:
        return np.array([u.y for u in self.units])

    @cached_property
    def nonrespondent(self) -> np.ndarray:
        return np.array([u.cls is ResponseClass.NONRESPONDENT for u in self.units])

    @property
    def N2(self) -> int:
        return int(self.nonrespondent.sum())

    @property
    def N1(self) -> int:
        return self.N - self.N2

    @property
    def mean_y(self) -> float:
        return math.fsum(self.y) / self.N

    @property
    def mean_x(self) -> float:
        return math.fsum(self.x) / self.N


@dataclass(frozen=True)
class PopulationParams:
    """Population-level quantities consumed by the bias/MSE formulas.

    Stratum-2 fields (``s_y2``, ``s_x2``, ``s_xy2``, ``cv_y2``, ``cv_x2``)
    are ``None`` when the non-response stratum has fewer than two units.
    Correlations are ``None`` when one of the variables is constant.
    """

    N: int
    N1: int
    N2: int
    mean_y: float
    mean_x: float
    s_y: float
    s_x: float
    s_xy: float
    rho: Optional[float]
    cv_y: float
    cv_x: float
    w: float
    s_y2: Optional[float] = None
    s_x2: Optional[float] = None
    s_xy2: Optional[float] = None
    rho2: Optional[float] = None
    cv_y2: Optional[float] = None
    cv_x2: Optional[float] = None

    @classmethod
    def from_moments(cls, N, N2, mean_y, mean_x, s_y, s_x, s_xy,
                     s_y2=None, s_x2=None, s_xy2=None) -> "PopulationParams":
        """Fill in correlations, CVs and ``w`` from base moments."""
        if mean_y == 0 or mean_x == 0:
            raise ZeroMean("coefficients of variation need nonzero means")
        has2 = s_y2 is not None and s_x2 is not None and s_xy2 is not None
        return cls(
            N=int(N), N1=int(N - N2), N2=int(N2),
            mean_y=float(mean_y), mean_x=float(mean_x),
            s_y=float(s_y), s_x=float(s_x), s_xy=float(s_xy),
            rho=_corr(s_xy, s_x, s_y),
            cv_y=s_y / mean_y, cv_x=s_x / mean_x,
            w=N2 / N,
            s_y2=float(s_y2) if has2 else None,
            s_x2=float(s_x2) if has2 else None,
            s_xy2=float(s_xy2) if has2 else None,
            rho2=_corr(s_xy2, s_x2, s_y2) if has2 else None,
            cv_y2=s_y2 / mean_y if has2 else None,
            cv_x2=s_x2 / mean_x if has2 else None,
        )

    @property
    def has_stratum2(self) -> bool:
        return self.s_y2 is not None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "PopulationParams":
        names = {f.name for f in fields(cls)}
        missing = {f.name for f in fields(cls) if f.default is not None} - set(d)
        if missing:
            raise ParseError(f"params JSON missing fields: {sorted(missing)}")
        return cls(**{k: v for k, v in d.items() if k in names})


def _corr(sxy, sx, sy):
    if sxy is None or not sx or not sy:
        return None
    return max(-1.0, min(1.0, sxy / (sx * sy)))


def _moments(x: np.ndarray, y: np.ndarray):
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    dx = x - mx
    dy = y - my
    sxx = math.fsum(dx * dx) / (n - 1)
    syy = math.fsum(dy * dy) / (n - 1)
    sxy = math.fsum(dx * dy) / (n - 1)
    return mx, my, math.sqrt(sxx), math.sqrt(syy), sxy


def compute_params(pop: FinitePopulation, require_stratum2: bool = True) -> PopulationParams:
    """Compute every population parameter of ``pop``.

    With ``require_stratum2`` a non-response stratum of fewer than two units
    raises :class:`DegenerateStratum`; otherwise the stratum-2 fields are
    left as ``None``.
    """
    mx, my, sx, sy, sxy = _moments(pop.x, pop.y)
    N2 = pop.N2
    if N2 >= 2:
        nr = pop.nonrespondent
        _, _, sx2, sy2, sxy2 = _moments(pop.x[nr], pop.y[nr])
    elif require_stratum2:
        raise DegenerateStratum(f"non-response stratum has {N2} unit(s); need at least 2")
    else:
        sx2 = sy2 = sxy2 = None
    return PopulationParams.from_moments(pop.N, N2, my, mx, sy, sx, sxy, sy2, sx2, sxy2)


# Literature data set: y = weight (kg), x = chest circumference (cm).
LITERATURE_N = 95
LITERATURE_N2 = 24
LITERATURE_SAMPLE_SIZE = 35


def literature_params() -> PopulationParams:
    """Parameters of the children's weight/chest-circumference population.

    Only correlations are published, so both covariances are rebuilt as
    ``rho * s_x * s_y``.
    """
    s_y, s_x, rho = 3.04, 3.2735, 0.85
    s_y2, s_x2, rho2 = 2.3552, 2.51, 0.7290
    p = PopulationParams.from_moments(
        LITERATURE_N, LITERATURE_N2, 19.50, 55.86, s_y, s_x, rho * s_x * s_y,
        s_y2, s_x2, rho2 * s_x2 * s_y2,
    )
    # keep the published correlations verbatim rather than their round trip
    return PopulationParams(**{**p.to_dict(), "rho": rho, "rho2": rho2})


@dataclass(frozen=True)
class StratumTarget:
    mean_x: float
    mean_y: float
    s_x: float
    s_y: float
    rho: float


@dataclass(frozen=True)
class SynthesisSpec:
    N: int
    N2: int
    respondents: StratumTarget
    nonrespondents: StratumTarget
    seed: int = 0


def _standardize(v: np.ndarray) -> np.ndarray:
    v = v - v.mean()
    return v / v.std(ddof=1)


def _synthesize_stratum(rng: np.random.Generator, size: int, t: StratumTarget):
    if size < 2:
        raise InfeasibleSpec(f"stratum of size {size}; need at least 2")
    if not (t.s_x > 0 and t.s_y > 0):
        raise InfeasibleSpec("target mean-square roots must be positive")
    if not -1 < t.rho < 1:
        raise InfeasibleSpec("target correlation must lie in (-1, 1)")
    zx = _standardize(rng.standard_normal(size))
    noise = rng.standard_normal(size)
    # residualize the noise on (1, zx) so the correlation is hit exactly
    noise = noise - noise.mean()
    noise = noise - (noise @ zx) / (zx @ zx) * zx
    if size > 2 and np.linalg.norm(noise) > 1e-12 * math.sqrt(size):
        zy = t.rho * zx + math.sqrt(1 - t.rho ** 2) * _standardize(noise)
    else:
        zy = math.copysign(1.0, t.rho) * zx
    zy = _standardize(zy)
    return t.mean_x + t.s_x * zx, t.mean_y + t.s_y * zy


def synthesize_population(spec: SynthesisSpec) -> FinitePopulation:
    """Draw a population whose per-stratum moments match ``spec``.

    Means and mean squares are matched exactly by an affine correction;
    within-stratum correlation is matched up to floating point for strata of
    three or more units (a two-unit stratum is perfectly correlated).
    Respondents come first, then non-respondents.
    """
    N1 = spec.N - spec.N2
    rng = np.random.default_rng(spec.seed)
    x1, y1 = _synthesize_stratum(rng, N1, spec.respondents)
    x2, y2 = _synthesize_stratum(rng, spec.N2, spec.nonrespondents)
    nr = np.r_[np.zeros(N1, bool), np.ones(spec.N2, bool)]
    return FinitePopulation.from_arrays(np.r_[x1, x2], np.r_[y1, y2], nr)


def read_population_csv(path) -> FinitePopulation:
    """Read a ``id,x,y,class`` CSV with ``class`` in ``{R, NR}``."""
    tokens = {c.value: c for c in ResponseClass}
    units = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["id", "x", "y", "class"]:
            raise ParseError(f"{path}: line 1: expected header 'id,x,y,class'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ParseError(f"{path}: line {lineno}: expected 4 fields, got {len(row)}")
            uid, xs, ys, cs = (c.strip() for c in row)
            if cs not in tokens:
                raise ParseError(f"{path}: line {lineno}: unknown class token {cs!r}")
            try:
                units.append(Observation(int(uid), float(xs), float(ys), tokens[cs]))
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from None
    try:
        return FinitePopulation(tuple(units))
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


def write_population_csv(pop: FinitePopulation, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "x", "y", "class"])
        for u in pop.units:
            writer.writerow([u.id, repr(u.x), repr(u.y), u.cls.value])


def read_params_json(path) -> PopulationParams:
    return PopulationParams.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
