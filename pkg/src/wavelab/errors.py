"""Exception types raised by the wavelab kernels."""


class WaveLabError(Exception):
    """Base class for all kernel errors."""


class ParameterDomainError(WaveLabError, ValueError):
    """A parameter violates the invariants of its type."""


class SingularModeError(WaveLabError):
    """Free-mode prescription at a node of the mode shape."""


class SingularSystemError(WaveLabError):
    """The finite-chain steady-state system is singular (resonance)."""


class InstabilityError(WaveLabError):
    """Time integration blew up."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class NonConvergenceError(WaveLabError):
    """Root finding did not converge within its iteration budget."""

    def __init__(self, message, x=None, t=None):
        super().__init__(message)
        self.x = x
        self.t = t


class AmbiguousBranchError(WaveLabError):
    """Several roots in the bracket and no seed to pick one."""


class GradientCatastropheError(WaveLabError):
    """Implicit-derivative denominator vanished (wave overturning)."""


class UnsupportedRegimeError(WaveLabError):
    """Operation is undefined in the requested dispersion regime."""
