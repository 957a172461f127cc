"""Inclined-force waves in a lumped elastic line: analytic phasors, a
steady-state tridiagonal oracle, a time-domain integrator, implicit
travelling waves and element orbit analysis."""

from .errors import (
    AmbiguousBranchError,
    GradientCatastropheError,
    InstabilityError,
    NonConvergenceError,
    ParameterDomainError,
    SingularModeError,
    SingularSystemError,
    UnsupportedRegimeError,
    WaveLabError,
)
from .lattice import DispersionParams, LineParams, Regime, classify_regime, dispersion_params
from .analytic import (
    ContinuumParams,
    ModeShapeSpec,
    continuum_displacement,
    continuum_limit_report,
    forced_phasor,
    forced_phasors,
    forced_profile,
    free_mode_shape,
)
from .oracle import Termination, recurrence_residual, solve_steady_chain, thomas_solve
from .timedomain import SimConfig, simulate, steady_state_extract, energy_series
from .implicit import (
    ImplicitWaveSpec,
    InclinedSineSpec,
    derivatives_analytic,
    eval_implicit,
    pde_residual_fd,
)
from .trajectory import element_orbit, fit_conic, phase_shift_along_line

__version__ = "0.1.0"
