"""Time integration of the driven chain from rest.

Kick-drift-kick leapfrog on both displacement axes at once.  The trailing
``absorber_len`` elements carry a velocity damping that ramps quadratically
from zero to ``absorber_max_damping`` and soaks up the outgoing wave, so the
finite chain behaves like the semi-infinite one near the driven end.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import InstabilityError, ParameterDomainError


@dataclass(frozen=True)
class SimConfig:
    """Integration settings.

    ``record_start`` and ``record_stride`` only thin the stored samples; the
    integration itself always runs from ``t = 0`` with step ``dt``.
    """

    N: int = 400
    dt: float = None
    t_end: float = None
    absorber_len: int = 150
    absorber_max_damping: float = 0.5
    record_stride: int = 1
    record_start: float = 0.0
    ramp_time: float = 0.0

    def validated(self, params):
        """Copy with defaults resolved against ``params``; raises on bad values."""
        period = 2 * math.pi / params.omega
        dt = self.dt if self.dt is not None else period / 200
        t_end = self.t_end if self.t_end is not None else 200 * period
        if self.N < 3:
            raise ParameterDomainError(f"N must be >= 3, got {self.N}")
        if not 0 < dt < 0.1 * 2 / params.cutoff:
            raise ParameterDomainError(
                f"dt = {dt:.4g} violates 0 < dt < 0.1*(2/omega_cutoff) = "
                f"{0.2 / params.cutoff:.4g}"
            )
        if not 0 <= self.absorber_len < self.N / 2:
            raise ParameterDomainError("absorber_len must satisfy 0 <= len < N/2")
        if self.absorber_max_damping < 0:
            raise ParameterDomainError("absorber_max_damping must be >= 0")
        if t_end <= 0:
            raise ParameterDomainError("t_end must be > 0")
        if self.record_stride < 1:
            raise ParameterDomainError("record_stride must be >= 1")
        if self.ramp_time < 0:
            raise ParameterDomainError("ramp_time must be >= 0")
        return SimConfig(
            self.N, dt, t_end, self.absorber_len, self.absorber_max_damping,
            self.record_stride, self.record_start, self.ramp_time,
        )

    def envelope(self, t):
        """Drive envelope: 1 for a sudden start, else an erf ramp over ``ramp_time``.

        The erf ramp starts at 1e-17 and its spectrum is Gaussian, so almost
        no energy reaches frequencies away from the drive.
        """
        if self.ramp_time <= 0 or t >= self.ramp_time:
            return 1.0
        return 0.5 * (1.0 + math.erf(12.0 * t / self.ramp_time - 6.0))

    def damping_profile(self):
        sigma = np.zeros(self.N)
        if self.absorber_len > 0:
            ramp = np.arange(1, self.absorber_len + 1) / self.absorber_len
            sigma[self.N - self.absorber_len:] = self.absorber_max_damping * ramp**2
        return sigma


@dataclass(frozen=True)
class SimulationRecord:
    """Sampled chain states.

    ``displacement`` and ``velocity`` have shape ``(samples, 2, N)``; axis 1
    is (longitudinal, transverse).
    """

    times: np.ndarray
    displacement: np.ndarray
    velocity: np.ndarray
    config: SimConfig = field(repr=False)

    @property
    def delta(self):
        return self.displacement[:, 0, :]

    @property
    def y(self):
        return self.displacement[:, 1, :]


def _spring_force(x, s):
    f = np.empty_like(x)
    f[:, 1:-1] = s * (x[:, 2:] + x[:, :-2] - 2 * x[:, 1:-1])
    f[:, 0] = s * (x[:, 1] - x[:, 0])
    f[:, -1] = s * (x[:, -2] - x[:, -1])
    return f


def simulate(params, cfg=SimConfig(), initial_displacement=None, initial_velocity=None):
    """Integrate the chain and return the sampled record.

    The drive ``F0*cos(omega*t)`` acts on element 1 only, split into
    ``cos(alpha)`` along the axis and ``sin(alpha)`` across it, the latter
    delayed by ``phase_offset``.  With ``cfg.ramp_time > 0`` the drive is
    switched on smoothly (see :meth:`SimConfig.envelope`).  The line starts at rest unless initial
    states of shape ``(2, N)`` are given.
    """
    cfg = cfg.validated(params)
    N, dt, m, s = cfg.N, cfg.dt, params.m, params.s
    n_steps = int(round(cfg.t_end / dt))

    x = np.zeros((2, N))
    v = np.zeros((2, N))
    if initial_displacement is not None:
        x[:] = initial_displacement
    if initial_velocity is not None:
        v[:] = initial_velocity

    fx = params.F0 * math.cos(params.alpha)
    fy = params.F0 * math.sin(params.alpha)

    def drive(t):
        e = cfg.envelope(t)
        return (
            e * fx * math.cos(params.omega * t),
            e * fy * math.cos(params.omega * t - params.phase_offset),
        )

    # exact exponential decay over half a step keeps the damped kick stable
    half_decay = np.exp(-0.5 * dt * cfg.damping_profile())
    limit = 1e6 * max(params.static_scale, np.abs(x).max(), np.abs(v).max() * dt, 1e-300)

    start_step = max(0, int(math.ceil(cfg.record_start / dt - 1e-9)))
    n_samples = max(0, (n_steps - start_step) // cfg.record_stride + 1)
    times = np.empty(n_samples)
    xs = np.empty((n_samples, 2, N))
    vs = np.empty((n_samples, 2, N))
    k = 0

    def acceleration(x, t):
        a = _spring_force(x, s)
        dx, dy = drive(t)
        a[0, 0] += dx
        a[1, 0] += dy
        return a / m

    acc = acceleration(x, 0.0)
    for step in range(n_steps + 1):
        if step >= start_step and (step - start_step) % cfg.record_stride == 0:
            times[k] = step * dt
            xs[k] = x
            vs[k] = v
            k += 1
        if step == n_steps:
            break
        v = (v + 0.5 * dt * acc) * half_decay
        x = x + dt * v
        acc = acceleration(x, (step + 1) * dt)
        v = (v + 0.5 * dt * acc) * half_decay
        if step % 256 == 0 and not np.abs(x).max() < limit:
            raise InstabilityError(
                f"state exceeded {limit:.3g} at step {step + 1} (t = {(step + 1) * dt:.6g})",
                step=step + 1,
            )
    return SimulationRecord(times[:k], xs[:k], vs[:k], cfg)


@dataclass(frozen=True)
class SteadyExtract:
    """Per-element fitted harmonic; arrays have shape ``(2, N)``."""

    amplitude: np.ndarray
    phase: np.ndarray
    fit_residual: np.ndarray

    @property
    def phasor(self):
        return self.amplitude * np.exp(1j * self.phase)


def steady_state_extract(rec, omega, window):
    """Least-squares fit of ``A*cos(omega*t) + B*sin(omega*t)`` over ``window``.

    ``window`` is a ``(t_start, t_stop)`` pair inside the record and must span
    at least five drive periods.  Phase follows ``amp*cos(omega*t + phase)``.
    """
    t0, t1 = window
    period = 2 * math.pi / omega
    if t1 - t0 < 5 * period * (1 - 1e-9):
        raise ParameterDomainError(
            f"window of {t1 - t0:.4g} s is shorter than 5 periods ({5 * period:.4g} s)"
        )
    if t0 < rec.times[0] - 1e-12 or t1 > rec.times[-1] + 1e-12:
        raise ParameterDomainError("window lies outside the record")
    sel = (rec.times >= t0 - 1e-12) & (rec.times <= t1 + 1e-12)
    t = rec.times[sel]
    data = rec.displacement[sel].reshape(len(t), -1)
    design = np.column_stack([np.cos(omega * t), np.sin(omega * t)])
    coef, *_ = np.linalg.lstsq(design, data, rcond=None)
    A, B = coef
    amplitude = np.hypot(A, B)
    phase = np.arctan2(-B, A)
    misfit = np.sqrt(np.mean((data - design @ coef) ** 2, axis=0))
    with np.errstate(divide="ignore", invalid="ignore"):
        residual = np.where(amplitude > 0, misfit / amplitude, np.where(misfit > 0, np.inf, 0.0))
    shape = rec.displacement.shape[1:]
    return SteadyExtract(amplitude.reshape(shape), phase.reshape(shape), residual.reshape(shape))


def extract_signal(t, signal, omega):
    """Single-series convenience wrapper: returns ``(amplitude, phase, residual)``."""
    t = np.asarray(t, dtype=float)
    signal = np.asarray(signal, dtype=float)
    rec = SimulationRecord(t, signal.reshape(-1, 1, 1), np.zeros((len(t), 1, 1)), None)
    ex = steady_state_extract(rec, omega, (t[0], t[-1]))
    return float(ex.amplitude[0, 0]), float(ex.phase[0, 0]), float(ex.fit_residual[0, 0])


def energy_series(rec, params):
    """Kinetic plus spring energy of every sample, both axes, whole chain."""
    kinetic = 0.5 * params.m * np.sum(rec.velocity**2, axis=(1, 2))
    stretch = np.diff(rec.displacement, axis=2)
    potential = 0.5 * params.s * np.sum(stretch**2, axis=(1, 2))
    return kinetic + potential
