"""Closed-form phasors against a direct tridiagonal solve of a finite chain.

A matched termination on the last element makes the finite chain behave like
the semi-infinite one, so the two must agree to round-off.  Free or fixed
ends reflect the wave instead.
"""
import math

import numpy as np

from wavelab import LineParams, Termination, dispersion_params, forced_phasors, solve_steady_chain

params = LineParams.from_beta(0.7, alpha=math.pi / 3)
disp = dispersion_params(params)
exact_delta, _ = forced_phasors(params, disp, np.arange(1, 101))

for termination in Termination:
    sol = solve_steady_chain(params, 200, termination)
    err = np.abs(sol.delta[:100] - exact_delta).max() / np.abs(exact_delta).max()
    print(f"{termination.value:8s} residual {sol.residual_norm:.1e}  distance from closed form {err:.2e}")

# Above cutoff the far end hardly matters: the wave has died out long before.
params = LineParams.from_beta(1.25, alpha=math.pi / 3)
disp = dispersion_params(params)
free = solve_steady_chain(params, 30, Termination.FREE)
exact, _ = forced_phasors(params, disp, np.arange(1, 31))
print("aperiodic, free end, N = 30:", np.abs(free.delta - exact).max())
