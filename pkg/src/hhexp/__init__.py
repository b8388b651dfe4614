"""Exponential ratio and product estimators of a population mean under
non-response with Hansen-Hurwitz sub-sampling."""

from .errors import *  # noqa: F401,F403
from .population import (
    FinitePopulation,
    Observation,
    PopulationParams,
    ResponseClass,
    StratumTarget,
    SynthesisSpec,
    compute_params,
    literature_params,
    read_population_csv,
    synthesize_population,
    write_population_csv,
)
from .sampling import DesignConfig, SampleData, draw_sample, sample_statistics, subsample_size
from .estimators import (
    EstimatorKind,
    estimate,
    exp_product_base,
    exp_product_xy,
    exp_product_y,
    exp_ratio_base,
    exp_ratio_xy,
    exp_ratio_y,
    hh_mean,
    hh_mean_x,
)
from . import theory, efficiency
from .montecarlo import SimConfig, enumerate_exact, run_simulation

__version__ = "0.1.0"
