"""Draw one two-phase sample and compare the estimators on it.

Run:  python3 demos/01_estimators_on_one_sample.py
"""

from hhexp import (
    DesignConfig,
    EstimatorKind,
    StratumTarget,
    SynthesisSpec,
    draw_sample,
    estimate,
    synthesize_population,
)

# A population shaped like the literature example: 95 units, 24 of which
# would not answer at first contact.
pop = synthesize_population(SynthesisSpec(
    N=95, N2=24,
    respondents=StratumTarget(mean_x=55.86, mean_y=19.5, s_x=3.2735, s_y=3.04, rho=0.85),
    nonrespondents=StratumTarget(mean_x=55.86, mean_y=19.5, s_x=2.51, s_y=2.3552, rho=0.729),
    seed=1,
))
print(f"population mean of y: {pop.mean_y:.4f}  (x: {pop.mean_x:.4f})")

# First phase: 35 units.  Second phase: every second non-respondent is revisited.
sample = draw_sample(pop, DesignConfig(n=35, f=2.0, seed=7))
print(f"sampled n={sample.n}: {sample.n1} respondents, {sample.n2} non-respondents, "
      f"{sample.h2} revisited")

# Regime A knows x for every sampled unit; regime B only where y is known.
for kind in (EstimatorKind.HH, EstimatorKind.ER_Y, EstimatorKind.EP_Y):
    print(f"  {kind.value:6s} {estimate(kind, sample, pop.mean_x):.4f}")
b = sample.project("B")
for kind in (EstimatorKind.ER_XY, EstimatorKind.EP_XY):
    print(f"  {kind.value:6s} {estimate(kind, b, pop.mean_x):.4f}")
