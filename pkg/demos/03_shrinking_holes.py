"""
Shrinking holes around a periodic orbit
=======================================

Fix a periodic point and shrink the hole to the cylinder of its first nu
symbols. The escape rate divided by the hole measure converges to
(1 - c_o) / mu(phi), where c_o is the orbit's weight, and the full expansion
rate = s_1 mu + s_2 mu^2 + ... is computable to any order by a recursion on
the factorized determinant. This script sweeps nu and watches each level of
the expansion lock in.
"""

from flowescape import (
    build_family,
    build_markov_shift,
    constant_function,
    expansion_coefficients,
    family_hole_measure,
    local_rate_sweep,
    second_order_check,
    verify_expansion,
)

shift = build_markov_shift([[0.5, 0.5], [0.5, 0.5]])
ceiling = constant_function(shift, 1.0)

# The fixed point 000... of the full 2-shift: orbit weight c_o = 1/2, so
# rate/measure tends to (1 - 1/2) / 1 = 1/2.
family = build_family(shift, ceiling, (0,))
print(f"family around 0^inf: nu_min = {family.nu_min}, orbit weight = {family.orbit_weight}")

nus = list(range(family.nu_min + 2, 11))
report = local_rate_sweep(shift, ceiling, (0,), nus)
print(f"\nlocal rate limit (1 - c_o)/mu(phi) = {report.limit_ceiling}")
print(" nu   mu_nu        rate/mu_nu       relative gap")
for row in report.rows:
    rel = abs(row.ratio_ceiling - report.limit_ceiling) / report.limit_ceiling
    print(f" {row.nu:2d}   {row.mu_nu:.6f}   {row.ratio_ceiling:.12f}   {rel:.2e}")

# The recursion reproduces the closed forms s_1 = (1 - c_o)/mass and, for
# this family, s_2 = (nu + 1)/4: the second coefficient grows with nu, which
# is why the expansion is asymptotic in mu_nu rather than a fixed series.
print("\nexpansion coefficients")
print(" nu   s_1 (recursion)   s_2 (recursion)   (nu+1)/4")
for nu in range(4, 9):
    coeffs = expansion_coefficients(family, nu, 2)
    s1, s2 = coeffs.s_normalized
    print(f" {nu:2d}   {s1:.12f}    {s2:.12f}     {(nu + 1) / 4:.4f}")

# Residuals past the order-2 partial sum shrink faster than mu_nu^2.
print("\nresidual |z_nu - partial sum| / mu_nu^2")
for row in verify_expansion(family, [4, 6, 8, 10], 2):
    print(f" nu {row.nu:2d}: {row.residual_over_mu_k:.6f}")

# The second-order normalization (rate - s_1 mu)/(nu mu^2) has the limit
# s_1^2 * S_p(phi) = 1/4 here.
second = second_order_check(family, [6, 8, 10])
print(f"\nsecond-order limit s_1^2 S_p(phi) = {second.limit}")
for row in second.rows:
    print(f" nu {row.nu:2d}: ratio {row.ratio:.12f}")
print(f"hole measure at nu = 10: {family_hole_measure(family, 10):.6e}")
