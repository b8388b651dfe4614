"""Monte Carlo check of first-order MSE on a low-variability population.

Run:  python3 demos/04_monte_carlo.py   (about ten seconds)
"""

from hhexp import (
    DesignConfig,
    SimConfig,
    StratumTarget,
    SynthesisSpec,
    run_simulation,
    synthesize_population,
)

pop = synthesize_population(SynthesisSpec(
    N=2000, N2=500,
    respondents=StratumTarget(100, 100, 9, 9, 0.9),
    nonrespondents=StratumTarget(95, 92, 8, 8, 0.8),
    seed=2024,
))
cfg = SimConfig(replications=50_000, design=DesignConfig(n=200, f=2.0), master_seed=1)
rep = run_simulation(pop, cfg, workers=1)

print(f"{rep.usable_draws} usable draws, {rep.skipped_draws} skipped")
print(f"{'kind':6s} {'empirical':>10s} {'theory':>10s} {'rel.err':>8s} {'z':>6s}")
for kind, s in rep.per_estimator.items():
    print(f"{kind.value:6s} {s.empirical_mse:10.5f} {s.theory_mse:10.5f} "
          f"{s.mse_relative_error:+8.2%} {s.z_mse:+6.2f}")
# Changing workers= changes wall time only: each replication seeds itself
# from (master_seed, index).
