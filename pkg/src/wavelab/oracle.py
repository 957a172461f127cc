"""Finite-chain steady state by direct tridiagonal elimination.

A chain of ``N`` elements is solved exactly for its complex amplitudes.  The
``MATCHED`` termination closes the last element with the outgoing ratio of the
semi-infinite solution, so the finite solve reproduces the infinite line up to
round-off.
"""

from dataclasses import dataclass
from enum import Enum
import cmath
import math

import numpy as np

from .analytic import ComplexDisplacement2
from .errors import ParameterDomainError, SingularSystemError
from .lattice import Regime, dispersion_params


class Termination(Enum):
    MATCHED = "matched"
    FREE = "free"
    FIXED = "fixed"


@dataclass(frozen=True)
class SteadySolve:
    amplitudes: list
    termination: Termination
    residual_norm: float

    @property
    def delta(self):
        return np.array([a.delta for a in self.amplitudes])

    @property
    def y(self):
        return np.array([a.y for a in self.amplitudes])


def thomas_solve(lower, diag, upper, rhs, pivot_tol=1e-13):
    """Solve a tridiagonal system with the forward/back sweep.

    ``lower[i]`` multiplies ``x[i-1]`` in row ``i`` (``lower[0]`` unused) and
    ``upper[i]`` multiplies ``x[i+1]`` (``upper[-1]`` unused).  A pivot smaller
    than ``pivot_tol`` times the largest coefficient raises
    :class:`SingularSystemError`.
    """
    n = len(diag)
    scale = max(np.abs(diag).max(), np.abs(lower).max(), np.abs(upper).max())
    c = np.zeros(n, dtype=complex)
    d = np.zeros(n, dtype=complex)
    pivot = diag[0]
    if abs(pivot) <= pivot_tol * scale:
        raise SingularSystemError("zero pivot in row 1")
    c[0] = upper[0] / pivot
    d[0] = rhs[0] / pivot
    for i in range(1, n):
        pivot = diag[i] - lower[i] * c[i - 1]
        if abs(pivot) <= pivot_tol * scale:
            raise SingularSystemError(f"zero pivot in row {i + 1}")
        c[i] = upper[i] / pivot if i < n - 1 else 0.0
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot
    x = np.empty(n, dtype=complex)
    x[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


def _termination_ratio(params, termination):
    """``A[N+1]/A[N]`` implied by the chosen termination."""
    if termination is Termination.FREE:
        return 1.0
    if termination is Termination.FIXED:
        return 0.0
    disp = dispersion_params(params)
    if disp.regime is Regime.PERIODIC:
        return cmath.exp(-2j * disp.tau)
    if disp.regime is Regime.CRITICAL:
        return -1.0
    return -disp.gamma_minus**2


def _solve_axis(params, N, force, ratio):
    m, s, w2 = params.m, params.s, params.omega**2
    diag = np.full(N, 2 * s - m * w2, dtype=complex)
    diag[0] = s - m * w2
    diag[-1] -= s * ratio
    off = np.full(N, -s, dtype=complex)
    rhs = np.zeros(N, dtype=complex)
    rhs[0] = force
    # sweep from the terminated end first: at omega**2 = s/m the driven row
    # has a zero diagonal, and the matched ratio keeps the upward sweep exact
    try:
        return thomas_solve(off[::-1], diag[::-1], off[::-1], rhs[::-1])[::-1]
    except SingularSystemError:
        return thomas_solve(off, diag, off, rhs)


def drive_components(params):
    """Complex force amplitudes on the longitudinal and transverse axes."""
    return (
        params.F0 * math.cos(params.alpha),
        params.F0 * math.sin(params.alpha) * cmath.exp(-1j * params.phase_offset),
    )


def solve_steady_chain(params, N, termination=Termination.MATCHED):
    if N < 3:
        raise ParameterDomainError(f"N must be >= 3, got {N}")
    termination = Termination(termination)
    ratio = _termination_ratio(params, termination)
    fx, fy = drive_components(params)
    delta = _solve_axis(params, N, fx, ratio)
    y = _solve_axis(params, N, fy, ratio)
    amplitudes = [
        ComplexDisplacement2(n, complex(d), complex(v))
        for n, d, v in zip(range(1, N + 1), delta, y)
    ]
    return SteadySolve(amplitudes, termination, recurrence_residual(amplitudes, params))


def _axis_residual(A, params, force):
    m, s, w2 = params.m, params.s, params.omega**2
    res = np.empty(len(A) - 1, dtype=complex)
    res[0] = -m * w2 * A[0] - force - s * (A[1] - A[0])
    res[1:] = -m * w2 * A[1:-1] - s * (A[2:] + A[:-2] - 2 * A[1:-1])
    return np.abs(res)


def recurrence_residual(amplitudes, params):
    """Largest residual of the equations of motion over rows ``1..len-1``.

    The driven first row is included; the last row is skipped because its
    neighbour lies outside the supplied amplitudes.  Residuals are forces
    divided by ``F0`` (by ``s*max|A|`` when undriven), i.e. displacements
    relative to the static scale ``F0/s``.
    """
    if len(amplitudes) < 3:
        raise ParameterDomainError("need at least 3 amplitudes")
    delta = np.array([a.delta for a in amplitudes], dtype=complex)
    y = np.array([a.y for a in amplitudes], dtype=complex)
    fx, fy = drive_components(params)
    worst = max(
        _axis_residual(delta, params, fx).max(),
        _axis_residual(y, params, fy).max(),
    )
    if params.F0 > 0:
        scale = params.F0
    else:
        scale = params.s * max(np.abs(delta).max(), np.abs(y).max())
        if scale == 0:
            return 0.0
    return float(worst / scale)
