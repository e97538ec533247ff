"""Second-order diagnostic bounds, end to end.

Given an envelope |bias function| <= C t^rho on the tail quantile function,
these calculators answer: how small can the oracle k be (lower bound), how
much data guarantees the adaptive scan starts below the oracle (n0), and
what error do the oracle and the adaptive choice incur.  All diagnostics;
the selection rule itself never uses them.
"""

import math

from eavhill import (
    SecondOrderParams,
    adaptive_error_bound,
    bias_envelope,
    c2_of,
    check_grid_conditions,
    exact_quantile,
    geometric_grid,
    k0_upper_bound,
    kstar_lower_bound,
    kstar_under_envelope,
    n0_upper_bound,
    oracle_error_bound,
)

p = SecondOrderParams(gamma=0.5, rho=-1.0, C=1.0, beta=1.1)
n = 10000
delta = 0.9
grid = geometric_grid(n, 1.1)
delta_grid = delta / grid.nominal_size

print(f"params: gamma={p.gamma}, rho={p.rho}, C={p.C}, beta={p.beta}, "
      f"c1={p.c1}, c2={p.c2} (c1, c2 are user-supplied stand-ins)")
print(f"n={n}, delta={delta}, grid {grid.describe()} (|K|={grid.nominal_size}, "
      f"delta_grid={delta_grid:.5f})")
print()
print(f"C2(rho)                      = {c2_of(p):.6f}")
print(f"admissibility ceiling (k0)   <= {k0_upper_bound(grid.nominal_size, delta):.1f}")
lower = kstar_lower_bound(delta_grid, n, p)
print(f"oracle lower bound           >= {lower.value:.2f}"
      + ("  [vacuous]" if lower.vacuous else ""))
print(f"minimum sample size (n0)     <= {n0_upper_bound(delta, grid.nominal_size, p)}")
print(f"oracle error bound           <= {oracle_error_bound(delta_grid, n, p):.4f}")

expo = 1 - 2 * p.rho
v_star = ((1 + math.sqrt(2)) * math.sqrt(p.beta * c2_of(p))
          * math.sqrt(1 + math.log(4 / delta_grid))
          * p.gamma ** (-1 / expo) * n ** (p.rho / expo))
print(f"deviation at the oracle      <= {v_star:.4f}")
if v_star < 1 / 6:
    print(f"adaptive error bound         <= {adaptive_error_bound(p.gamma, v_star):.4f}")
else:
    print("adaptive error bound         n/a (deviation bound >= 1/6 at this n)")

print()
k_env = kstar_under_envelope(grid, n, delta, p)
print(f"bound-implied oracle on the grid: k = {k_env}")
print(f"  envelope bias there  {bias_envelope(k_env, n, delta, p):.4f} <= "
      f"gamma * V = {p.gamma * exact_quantile(k_env, delta):.4f}")
cond = check_grid_conditions(grid, n, delta, p)
print(f"grid conditions: wide={cond.wide}, fine={cond.fine} "
      f"(max consecutive ratio {cond.beta_observed:.3f} vs beta={p.beta})")
print()
print("larger samples tighten everything:")
for n_big in (10**4, 10**5, 10**6):
    print(f"  n={n_big:>8}: oracle error <= {oracle_error_bound(delta_grid, n_big, p):.4f}")
