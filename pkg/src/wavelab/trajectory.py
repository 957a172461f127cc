"""Closed orbits of single elements in the (longitudinal, transverse) plane."""

from dataclasses import dataclass
import math

import numpy as np

from .analytic import forced_phasors
from .errors import ParameterDomainError, UnsupportedRegimeError
from .lattice import Regime

DEGENERATE_RATIO = 1e-6


@dataclass(frozen=True)
class Orbit:
    """``points[i]`` is the displacement pair at ``t = i*T/(len(points)-1)``.

    The last sample repeats the first one, one period later.
    """

    n: int
    points: np.ndarray
    omega: float

    @property
    def times(self):
        period = 2 * math.pi / self.omega
        return np.linspace(0.0, period, len(self.points))

    @property
    def closure_error(self):
        scale = np.abs(self.points).max()
        if scale == 0:
            return 0.0
        return float(np.abs(self.points[-1] - self.points[0]).max() / scale)


@dataclass(frozen=True)
class ConicFit:
    center: tuple
    semi_axes: tuple
    orientation: float
    eccentricity: float
    degenerate: bool
    rms_residual: float


def element_orbit(params, disp, n, samples=64):
    """Sample one drive period of element ``n`` (``samples`` intervals)."""
    if samples < 16:
        raise ParameterDomainError(f"samples must be >= 16, got {samples}")
    delta, y = forced_phasors(params, disp, n)
    t = np.linspace(0.0, 2 * math.pi / params.omega, samples + 1)
    rot = np.exp(1j * params.omega * t)
    points = np.column_stack([(delta * rot).real, (y * rot).real])
    return Orbit(int(n), points, params.omega)


def _wrap_half_turn(angle):
    """Map a line direction onto ``(-pi/2, pi/2]``."""
    angle = math.fmod(angle, math.pi)
    if angle <= -math.pi / 2:
        angle += math.pi
    elif angle > math.pi / 2:
        angle -= math.pi
    return angle


def _distinct(points):
    pts = np.asarray(points, dtype=float)
    scale = np.abs(pts).max() if pts.size else 0.0
    keep = [pts[0]] if len(pts) else []
    for p in pts[1:]:
        if all(np.abs(p - q).max() > 1e-12 * max(scale, 1e-300) for q in keep):
            keep.append(p)
    return np.array(keep)


def _ellipse_coefficients(x, y):
    """Direct ellipse-specific least squares, numerically stable split form.

    Returns ``(A, B, C, D, E, F)`` of ``A x^2 + B xy + C y^2 + D x + E y + F = 0``
    with ``4AC - B^2 > 0``.
    """
    D1 = np.column_stack([x * x, x * y, y * y])
    D2 = np.column_stack([x, y, np.ones_like(x)])
    S1 = D1.T @ D1
    S2 = D1.T @ D2
    S3 = D2.T @ D2
    T = -np.linalg.solve(S3, S2.T)
    M = S1 + S2 @ T
    M = np.array([M[2] / 2, -M[1], M[0] / 2])
    vals, vecs = np.linalg.eig(M)
    vecs = vecs.real
    cond = 4 * vecs[0] * vecs[2] - vecs[1] ** 2
    good = np.flatnonzero(cond > 0)
    if good.size == 0:
        raise ParameterDomainError("points do not determine an ellipse")
    a1 = vecs[:, good[np.argmin(np.abs(vals[good]))]]
    coef = np.concatenate([a1, T @ a1])
    # eigenvectors carry an arbitrary sign; make the quadratic part positive
    return coef if coef[0] + coef[2] > 0 else -coef


def fit_conic(orbit):
    """Fit an ellipse to an orbit, or recognise it as a straight segment.

    Segments are detected from the point covariance before fitting: when its
    minor spread is below ``1e-6`` of the major one the fit is flagged
    ``degenerate`` and the orientation is the segment's inclination.
    Orientations lie in ``(-pi/2, pi/2]``.  A segment's half-length is the
    larger of its sampled half-extent and ``sqrt(2)`` times the RMS spread, so
    uniformly sampled harmonic motion recovers its exact amplitude.  ``rms_residual`` is the RMS
    relative radial misfit, a fraction of the semi-axes.
    """
    points = orbit.points if isinstance(orbit, Orbit) else np.asarray(orbit, dtype=float)
    pts = _distinct(points)
    if len(pts) < 6:
        raise ParameterDomainError(f"need at least 6 distinct points, got {len(pts)}")

    center = pts.mean(axis=0)
    rel = pts - center
    cov = rel.T @ rel / len(rel)
    evals, evecs = np.linalg.eigh(cov)
    major_dir = evecs[:, 1]
    spread_major = math.sqrt(max(evals[1], 0.0))
    spread_minor = math.sqrt(max(evals[0], 0.0))

    if spread_minor < DEGENERATE_RATIO * spread_major:
        along = rel @ major_dir
        across = rel @ evecs[:, 0]
        # a full period of harmonic motion has amplitude sqrt(2) * RMS spread,
        # which the sample extent only approaches from below
        harmonic = math.sqrt(2.0) * spread_major
        half_extent = 0.5 * (along.max() - along.min())
        if half_extent >= harmonic:
            center = center + 0.5 * (along.max() + along.min()) * major_dir
        major = max(half_extent, harmonic)
        minor = 0.5 * (across.max() - across.min())
        rms = math.sqrt(np.mean(across**2)) / major
        return ConicFit(
            (float(center[0]), float(center[1])),
            (major, minor),
            _wrap_half_turn(math.atan2(major_dir[1], major_dir[0])),
            1.0,
            True,
            rms,
        )

    scale = spread_major
    u, v = rel[:, 0] / scale, rel[:, 1] / scale
    A, B, C, D, E, F = _ellipse_coefficients(u, v)
    cu, cv = np.linalg.solve([[2 * A, B], [B, 2 * C]], [-D, -E])
    f0 = F + 0.5 * (D * cu + E * cv)
    mu, axes_dirs = np.linalg.eigh([[A, B / 2], [B / 2, C]])
    # smallest eigenvalue of the quadratic form belongs to the major axis
    semi = np.sqrt(-f0 / mu)
    major, minor = semi[0] * scale, semi[1] * scale
    direction = axes_dirs[:, 0]
    center = center + scale * np.array([cu, cv])

    frame = np.column_stack([direction, axes_dirs[:, 1]])
    local = (pts - center) @ frame
    rho = np.hypot(local[:, 0] / major, local[:, 1] / minor)
    rms = math.sqrt(np.mean((rho - 1.0) ** 2))
    ecc = math.sqrt(max(0.0, 1.0 - (minor / major) ** 2))
    return ConicFit(
        (float(center[0]), float(center[1])),
        (float(major), float(minor)),
        _wrap_half_turn(math.atan2(direction[1], direction[0])),
        ecc,
        bool(minor < DEGENERATE_RATIO * major),
        rms,
    )


def orbit_phasor(orbit):
    """First-harmonic complex amplitudes ``(P_delta, P_y)`` of a sampled orbit."""
    pts = orbit.points[:-1]
    t = orbit.times[:-1]
    rot = np.exp(-1j * orbit.omega * t)
    return 2.0 * (pts * rot[:, None]).mean(axis=0)


def phase_shift_along_line(params, disp, n_range, samples=64):
    """Orbital phase lag of each element relative to the first one in ``n_range``.

    Lags are taken along the major-axis direction of the first orbit and
    wrapped to ``[0, 2*pi)``.
    """
    if disp.regime is not Regime.PERIODIC:
        raise UnsupportedRegimeError(
            f"{disp.regime.value} regime has no propagating phase"
        )
    n_values = list(n_range)
    if not n_values:
        raise ParameterDomainError("n_range is empty")
    orbits = [element_orbit(params, disp, n, samples) for n in n_values]
    fit = fit_conic(orbits[0])
    axis = np.array([math.cos(fit.orientation), math.sin(fit.orientation)])
    phases = np.array([np.angle(orbit_phasor(o) @ axis) for o in orbits])
    return list(np.mod(-(phases - phases[0]), 2 * math.pi))
