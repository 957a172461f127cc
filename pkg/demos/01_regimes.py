"""The three response regimes of the driven chain.

Below the cutoff frequency 2*sqrt(s/m) the drive launches a travelling wave,
above it the response decays away from the driven end, and right at the
cutoff neighbouring elements swing in antiphase with equal amplitude.
"""
import math

import numpy as np

from wavelab import LineParams, dispersion_params, forced_phasors

for beta in (0.5, 1.0, 1.25):
    params = LineParams.from_beta(beta, alpha=math.pi / 6)
    disp = dispersion_params(params)
    delta, y = forced_phasors(params, disp, np.arange(1, 7))
    print(f"beta = {beta}: {disp.regime.value}")
    print(f"  tau = {disp.tau:.4f}, gamma- = {disp.gamma_minus:.4f}, gamma+ = {disp.gamma_plus:.4f}")
    print("  |delta_n| :", np.round(np.abs(delta), 4))
    print("  phase     :", np.round(np.angle(delta), 4))

# Travelling wave: each element lags its predecessor by 2*tau.
params = LineParams.from_beta(0.5)
disp = dispersion_params(params)
d, _ = forced_phasors(params, disp, np.arange(1, 4))
print("phase step / (2 tau):", np.angle(d[0] / d[1]) / (2 * disp.tau))
