"""Element trajectories in the (longitudinal, transverse) plane.

With an in-phase inclined drive each element moves back and forth along a
segment tilted by alpha.  Delaying the transverse force opens the segment
into an ellipse centred on the rest point; below cutoff each element runs
2*tau behind its predecessor along that ellipse.
"""
import math

import numpy as np

from wavelab import LineParams, dispersion_params, element_orbit, fit_conic, phase_shift_along_line

for offset in (0.0, math.pi / 4, math.pi / 2):
    params = LineParams.from_beta(0.5, alpha=math.pi / 4, phase_offset=offset)
    disp = dispersion_params(params)
    fit = fit_conic(element_orbit(params, disp, 3))
    print(
        f"phase offset {offset:.3f}: degenerate={fit.degenerate}, "
        f"orientation={fit.orientation:.4f}, eccentricity={fit.eccentricity:.4f}, "
        f"axes=({fit.semi_axes[0]:.4f}, {fit.semi_axes[1]:.4f})"
    )

lags = phase_shift_along_line(params, disp, range(1, 6))
print("lags:", np.round(lags, 6), " 2*tau =", round(2 * disp.tau, 6))
