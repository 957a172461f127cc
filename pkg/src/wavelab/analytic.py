"""Closed-form steady states of the driven chain and of its continuum limit.

Phasor convention: the physical displacement is ``Re(phasor * exp(1j*omega*t))``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ParameterDomainError, SingularModeError, UnsupportedRegimeError
from .lattice import LineParams, Regime, dispersion_params


@dataclass(frozen=True)
class ComplexDisplacement2:
    """Longitudinal and transverse phasors of element ``n``."""

    n: int
    delta: complex
    y: complex


@dataclass(frozen=True)
class ModeShapeSpec:
    k_ref: int
    Xk: float
    Yk: float

    def __post_init__(self):
        if self.k_ref < 1:
            raise ParameterDomainError(f"k_ref must be >= 1, got {self.k_ref}")


@dataclass(frozen=True)
class ContinuumParams:
    """String of linear density ``rho`` under tension ``T``, driven at ``x0 = 0``."""

    rho: float = 1.0
    T: float = 1.0
    F0: float = 1.0
    alpha: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("rho", "T", "omega"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterDomainError(f"{name} must be > 0, got {value!r}")

    @property
    def speed(self):
        return math.sqrt(self.T / self.rho)

    @property
    def wavenumber(self):
        return self.omega * math.sqrt(self.rho / self.T)

    def lumped(self, a):
        """Chain with spacing ``a`` whose continuum limit is this string."""
        return LineParams(
            m=self.rho * a,
            s=self.T / a,
            a=a,
            F0=self.F0,
            alpha=self.alpha,
            omega=self.omega,
        )


def _element_shape(disp, n):
    """Per-element factor shared by both axes, without the drive amplitude."""
    n = np.asarray(n)
    if disp.regime is Regime.PERIODIC:
        return -1j * np.exp(-1j * (2 * n - 1) * disp.tau)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    if disp.regime is Regime.APERIODIC:
        return sign * disp.gamma_minus ** (2.0 * n - 1.0) + 0j
    return sign + 0j


def forced_phasors(params, disp, n):
    """Vectorised :func:`forced_phasor`; returns ``(delta, y)`` complex arrays."""
    n = np.asarray(n)
    if np.any(n < 1):
        raise ParameterDomainError("element indices start at 1")
    if disp.regime is Regime.CRITICAL:
        scale = params.F0 / (2.0 * params.s)
    else:
        scale = params.F0 / params.impedance
    shape = _element_shape(disp, n)
    delta = scale * math.cos(params.alpha) * shape
    y = scale * math.sin(params.alpha) * np.exp(-1j * params.phase_offset) * shape
    return delta, y


def forced_phasor(params, disp, n):
    """Steady-state phasor pair of element ``n`` of the semi-infinite driven chain.

    Below cutoff the wave propagates with phase step ``2*tau`` per element;
    above it the amplitude alternates in sign and shrinks by ``gamma_minus**2``
    per element; at cutoff neighbours are in antiphase with constant amplitude
    ``F0/(2*s)``.
    """
    if n < 1:
        raise ParameterDomainError(f"element index must be >= 1, got {n}")
    delta, y = forced_phasors(params, disp, n)
    return ComplexDisplacement2(int(n), complex(delta), complex(y))


def forced_profile(params, n_max, t, disp=None):
    """Real displacements of elements ``1..n_max`` at time ``t``.

    Returns ``(n, delta, y)`` arrays.
    """
    if n_max < 1:
        raise ParameterDomainError(f"n_max must be >= 1, got {n_max}")
    if disp is None:
        disp = dispersion_params(params)
    n = np.arange(1, n_max + 1)
    delta, y = forced_phasors(params, disp, n)
    rot = np.exp(1j * params.omega * t)
    return n, (delta * rot).real, (y * rot).real


def free_mode_shape(spec, disp, i_max):
    """Unforced mode shape normalised to the prescribed amplitudes at ``k_ref``."""
    if disp.regime is not Regime.PERIODIC:
        raise UnsupportedRegimeError("free mode shapes exist only below cutoff")
    if i_max < 1:
        raise ParameterDomainError(f"i_max must be >= 1, got {i_max}")
    ref = math.cos((2 * spec.k_ref - 1) * disp.tau)
    if abs(ref) < 1e-12:
        raise SingularModeError(
            f"element {spec.k_ref} sits at a node of the mode (cos = {ref:.3g})"
        )
    out = []
    for i in range(1, i_max + 1):
        ratio = math.cos((2 * i - 1) * disp.tau) / ref
        out.append(ComplexDisplacement2(i, complex(spec.Xk * ratio), complex(spec.Yk * ratio)))
    return out


def continuum_phasors(cp, x0):
    """Phasor pair of the string at rest position ``x0`` (arrays allowed)."""
    x0 = np.asarray(x0, dtype=float)
    if np.any(x0 < 0):
        raise ParameterDomainError("x0 must be >= 0")
    scale = cp.F0 / (cp.omega * math.sqrt(cp.T * cp.rho))
    wave = -1j * np.exp(-1j * cp.wavenumber * x0)
    return scale * math.cos(cp.alpha) * wave, scale * math.sin(cp.alpha) * wave


def continuum_displacement(cp, x0, t):
    """Position ``(x, y)`` at time ``t`` of the string point resting at ``x0``."""
    delta, y = continuum_phasors(cp, x0)
    rot = np.exp(1j * cp.omega * t)
    return (delta * rot).real + x0, (y * rot).real


@dataclass(frozen=True)
class ContinuumLimitRow:
    a: float
    n_elements: int
    max_phasor_error: float
    max_phase_error: float


@dataclass(frozen=True)
class ContinuumLimitReport:
    rows: list
    orders: list
    phase_orders: list

    @property
    def observed_order(self):
        return min(self.orders) if self.orders else math.nan


def lumped_phase(cp, a, x0, element_offset=0.5):
    """Propagation phase ``(2n-1)*tau`` of the chain with spacing ``a`` at ``x0``.

    Element ``n`` rests at ``x0 = (n - 1 + element_offset)*a`` from the drive
    point; ``n`` is allowed to be fractional so every ``a`` is sampled at the
    same physical points.
    """
    disp = dispersion_params(cp.lumped(a))
    if disp.regime is not Regime.PERIODIC:
        raise UnsupportedRegimeError(f"a = {a} puts the drive above cutoff")
    n = np.asarray(x0, dtype=float) / a + 1.0 - element_offset
    return (2.0 * n - 1.0) * disp.tau


def continuum_limit_report(cp, a_values, x0_values=None, element_offset=0.5):
    """Distance between lumped and continuum phasors as the spacing shrinks.

    ``element_offset = 0.5`` places each element at the centre of its cell,
    ``1.0`` uses ``x0 = n*a``.
    """
    a_values = [float(a) for a in a_values]
    if not a_values:
        raise ParameterDomainError("a_values must not be empty")
    if any(a <= 0 for a in a_values):
        raise ParameterDomainError("spacings must be positive")
    if x0_values is None:
        x0_values = np.linspace(0.0, 2 * math.pi / cp.wavenumber, 33)[1:]
    x0 = np.asarray(x0_values, dtype=float)

    cont_delta, cont_y = continuum_phasors(cp, x0)
    continuum_phase = cp.wavenumber * x0
    rows = []
    for a in a_values:
        params = cp.lumped(a)
        phase = lumped_phase(cp, a, x0, element_offset)
        wave = -1j * np.exp(-1j * phase)
        scale = params.F0 / params.impedance
        lump_delta = scale * math.cos(cp.alpha) * wave
        lump_y = scale * math.sin(cp.alpha) * wave
        err = np.hypot(np.abs(lump_delta - cont_delta), np.abs(lump_y - cont_y))
        rows.append(
            ContinuumLimitRow(
                a=a,
                n_elements=int(math.ceil(x0.max() / a)),
                max_phasor_error=float(err.max()),
                max_phase_error=float(np.abs(phase - continuum_phase).max()),
            )
        )

    def orders(key):
        out = []
        for r0, r1 in zip(rows, rows[1:]):
            e0, e1 = getattr(r0, key), getattr(r1, key)
            if e0 > 0 and e1 > 0:
                out.append(math.log(e0 / e1) / math.log(r0.a / r1.a))
            else:
                out.append(math.inf)
        return out

    return ContinuumLimitReport(rows, orders("max_phasor_error"), orders("max_phase_error"))
