"""Closed-form MSE, bias and efficiency conditions at the literature parameters.

Run:  python3 demos/02_closed_form_theory.py
"""

from hhexp import EstimatorKind, efficiency, literature_params, theory

p = literature_params()
n, f = 35, 2.0
print(f"N={p.N}, N2={p.N2}, C_y={p.cv_y:.4f}, C_x={p.cv_x:.4f}, rho={p.rho}")

print("\nfirst-order MSE and bias, n=35, f=2")
for kind in efficiency.TABLE_KINDS:
    r = theory.theory_report(p, n, f, kind=kind)
    b = "   (unbiased)" if r.bias is None else f"   bias {r.bias:+.5f}"
    print(f"  {kind.value:6s} MSE {r.variance_or_mse:.5f}{b}")

# The ratio estimator wins when rho clears C_x / (4 C_y); the product
# estimator needs rho below the negative of that threshold.
print("\nefficiency against HH")
for c in efficiency.conditions(p, n, f):
    print(f"  {c.estimator.value:6s} beats HH: {c.direct_holds}  "
          f"(MSE - V = {c.mse_difference:+.5f}, algebra agrees: {c.agree})")

print(f"\nPRE of ER_XY at w=0.2, f=2.5: "
      f"{efficiency.pre(p, n, 2.5, 0.2, EstimatorKind.ER_XY):.2f}")
