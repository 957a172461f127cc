"""Physical parameters of the lumped elastic line and its dispersion regime.

The chain is a semi-infinite row of point masses ``m`` joined by springs of
stiffness ``s``.  Element 1 is driven by a harmonic force of amplitude ``F0``
inclined at ``alpha`` to the line axis.  The drive frequency relative to the
cutoff ``2*sqrt(s/m)`` decides whether the response propagates (periodic),
decays (aperiodic), or sits exactly at the band edge (critical).
"""

from dataclasses import dataclass
from enum import Enum
import math

from .errors import ParameterDomainError

DEFAULT_CLASSIFICATION_TOL = 1e-9


class Regime(Enum):
    PERIODIC = "periodic"
    CRITICAL = "critical"
    APERIODIC = "aperiodic"


@dataclass(frozen=True)
class LineParams:
    """Lumped chain plus inclined harmonic drive.

    Parameters
    ----------
    m : float
        Mass of one element (kg).
    s : float
        Spring stiffness between neighbours (N/m).
    a : float
        Spacing between elements at rest (m).
    F0 : float
        Drive amplitude (N).
    alpha : float
        Drive inclination to the line axis (rad), in ``[0, pi/2]``.
    omega : float
        Angular drive frequency (rad/s).
    phase_offset : float
        Lag of the transverse drive component behind the longitudinal one
        (rad).  Zero reproduces the in-phase drive; nonzero values make the
        element orbits genuine ellipses.
    """

    m: float = 1.0
    s: float = 1.0
    a: float = 1.0
    F0: float = 1.0
    alpha: float = 0.0
    omega: float = 1.0
    phase_offset: float = 0.0

    def __post_init__(self):
        for name in ("m", "s", "a", "omega"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterDomainError(f"{name} must be > 0, got {value!r}")
        if not (math.isfinite(self.F0) and self.F0 >= 0):
            raise ParameterDomainError(f"F0 must be >= 0, got {self.F0!r}")
        if not (0.0 <= self.alpha <= math.pi / 2):
            raise ParameterDomainError(
                f"alpha must lie in [0, pi/2], got {self.alpha!r}"
            )
        if not math.isfinite(self.phase_offset):
            raise ParameterDomainError("phase_offset must be finite")

    @property
    def cutoff(self):
        """Upper edge of the pass band, ``2*sqrt(s/m)`` (rad/s)."""
        return 2.0 * math.sqrt(self.s / self.m)

    @property
    def impedance(self):
        """``omega*sqrt(s*m)``, the force-to-amplitude scale of the driven end."""
        return self.omega * math.sqrt(self.s * self.m)

    @property
    def static_scale(self):
        return self.F0 / self.s

    @classmethod
    def from_beta(cls, beta, m=1.0, s=1.0, **kwargs):
        """Build parameters whose drive frequency gives the requested ``beta``."""
        if beta <= 0:
            raise ParameterDomainError(f"beta must be > 0, got {beta!r}")
        omega = 2.0 * beta * math.sqrt(s / m)
        return cls(m=m, s=s, omega=omega, **kwargs)


@dataclass(frozen=True)
class DispersionParams:
    """Regime quantities of a driven chain.

    ``tau`` is only meaningful for ``beta <= 1`` and the ``gamma`` pair only
    for ``beta >= 1``; the unused ones are NaN.
    """

    beta: float
    tau: float
    gamma_minus: float
    gamma_plus: float
    regime: Regime


def classify_regime(beta, tol=DEFAULT_CLASSIFICATION_TOL):
    if not beta >= 0:
        raise ParameterDomainError(f"beta must be >= 0, got {beta!r}")
    if not tol > 0:
        raise ParameterDomainError(f"tolerance must be > 0, got {tol!r}")
    if abs(beta - 1.0) <= tol:
        return Regime.CRITICAL
    return Regime.PERIODIC if beta < 1.0 else Regime.APERIODIC


def dispersion_params(params, classification_tol=DEFAULT_CLASSIFICATION_TOL):
    """Compute ``beta``, ``tau`` and ``gamma_minus``/``gamma_plus`` for a chain.

    ``beta = (omega/2)*sqrt(m/s)``; ``sin(tau) = beta`` below cutoff and
    ``gamma**2 - 2*beta*gamma + 1 = 0`` at or above it.
    """
    if not isinstance(params, LineParams):
        raise ParameterDomainError("params must be a LineParams instance")
    beta = 0.5 * params.omega * math.sqrt(params.m / params.s)
    regime = classify_regime(beta, classification_tol)

    tau = math.asin(beta) if beta <= 1.0 else math.nan
    if beta >= 1.0:
        root = math.sqrt(beta * beta - 1.0)
        gamma_plus = beta + root
        # 1/gamma_plus avoids cancellation in beta - root for large beta
        gamma_minus = 1.0 / gamma_plus
    else:
        gamma_minus = gamma_plus = math.nan

    if regime is Regime.CRITICAL:
        # inside the tolerance band both branches collapse onto the band edge
        tau = math.pi / 2 if beta > 1.0 else tau
        if beta < 1.0:
            gamma_minus = gamma_plus = 1.0
    return DispersionParams(beta, tau, gamma_minus, gamma_plus, regime)
