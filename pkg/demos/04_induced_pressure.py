"""
Escape rate as an induced pressure root
=======================================

The flow escape rate through a hole is characterized thermodynamically: the
induced pressure of the survivor system, as a function of the inverse
temperature beta on the ceiling, crosses zero exactly at beta = -rate. This
script locates that root, compares it with the spectral rate, and shows the
slowly-converging truncated definition creeping toward the same value.
"""

from flowescape import (
    build_markov_shift,
    build_suspension,
    constant_function,
    cylinder_function,
    escape_rate_flow,
    gibbs_constant,
    induced_pressure_truncated,
    induced_pressure_via_root,
    superadditivity_check,
)

# A biased two-symbol chain under a non-constant ceiling: nothing about this
# example is symmetric, so agreement between the routes is meaningful.
shift = build_markov_shift([[0.9, 0.1], [0.2, 0.8]])
ceiling = cylinder_function(1, {(0,): 1.0, (1,): 2.0}, lattice=1.0)
system = build_suspension(shift, ceiling)
hole = (1, 1)

# The Gibbs constant bounds cylinder measures against Birkhoff weights; it
# is what makes the pressure characterization quantitative.
print(f"Gibbs constant of the chain: {gibbs_constant(shift)}")

rate = escape_rate_flow(system, hole)
beta = induced_pressure_via_root(shift, ceiling, hole)
print(f"\nescape rate through [1,1]   {rate:.15f}")
print(f"pressure root beta*         {beta:.15f}")
print(f"|beta* + rate|              {abs(beta + rate):.2e}")

# The definition as a limit of truncated sums converges like log(t)/t, so
# even t = 400 only gives a couple of digits; the root method is the one to
# use, the truncation is the sanity check.
print("\ntruncated induced pressure vs -rate")
for t_max in (50.0, 100.0, 200.0, 400.0):
    estimate = induced_pressure_truncated(shift, ceiling, hole, t_max=t_max)
    print(f" t = {t_max:5.0f}: {estimate:.6f}   (gap {abs(estimate + rate):.4f})")

# Reciprocal-rate sublinearity: opening two holes cannot beat the sum of
# the individual pressures. With equal ceilings the slack is exactly zero.
report = superadditivity_check(shift, hole, ceiling, ceiling)
print(f"\nsuperadditivity slack for equal ceilings: {report.slack}")
