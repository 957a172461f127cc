"""Implicit travelling waves ``y = Phi1(kx - wt + psi1(y)) + Phi2(kx + wt + psi2(y))``.

The displacement appears inside its own phase, so every evaluation is a
scalar root-finding problem.  This module evaluates such waves, differentiates
them implicitly, and checks numerically that they satisfy the wave equation
``y_xx = (k/omega)**2 * y_tt``.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .errors import (
    AmbiguousBranchError,
    GradientCatastropheError,
    NonConvergenceError,
    ParameterDomainError,
)


class MultivaluedWarning(UserWarning):
    """The implicit relation may have several roots (overturning wave)."""


@dataclass(frozen=True)
class ScalarFunction:
    """A twice-differentiable function of one variable with its derivatives.

    ``bound``, when known, is ``sup |f|``; it brackets the roots of the
    implicit relation.
    """

    f: object
    df: object
    d2f: object
    bound: float = None

    def __call__(self, u):
        return self.f(u)

    def check_derivatives(self, samples, h=1e-3, rtol=1e-4):
        """Compare the derivative evaluators with central differences."""
        u = np.asarray(samples, dtype=float)
        fd1 = (self.f(u + h) - self.f(u - h)) / (2 * h)
        fd2 = (self.df(u + h) - self.df(u - h)) / (2 * h)
        d1 = np.broadcast_to(self.df(u), u.shape)
        d2 = np.broadcast_to(self.d2f(u), u.shape)
        scale = 1.0 + np.abs(np.broadcast_to(self.f(u), u.shape)).max()
        scale += np.abs(d1).max() + np.abs(d2).max()
        err1 = np.abs(d1 - fd1).max()
        err2 = np.abs(d2 - fd2).max()
        if not (err1 <= rtol * scale and err2 <= rtol * scale):
            raise ParameterDomainError(
                f"derivative evaluators disagree with finite differences "
                f"(first: {err1:.3g}, second: {err2:.3g})"
            )


def _zero(u):
    return 0.0 * u


ZERO = ScalarFunction(_zero, _zero, _zero, bound=0.0)


def sine(amplitude=1.0):
    """``amplitude * sin(u)`` with exact derivatives (dtype preserving)."""
    return ScalarFunction(
        lambda u: amplitude * np.sin(u),
        lambda u: amplitude * np.cos(u),
        lambda u: -amplitude * np.sin(u),
        bound=abs(amplitude),
    )


def linear(slope):
    """``slope * u``."""
    return ScalarFunction(
        lambda u: slope * u,
        lambda u: slope + 0.0 * u,
        _zero,
    )


@dataclass(frozen=True)
class ImplicitWaveSpec:
    """Profile ``phi1`` deformed by ``psi1``, plus an optional reverse pair.

    Derivative evaluators are checked against finite differences when the
    spec is built.
    """

    phi1: ScalarFunction
    psi1: ScalarFunction = ZERO
    phi2: ScalarFunction = None
    psi2: ScalarFunction = ZERO
    k: float = 1.0
    omega: float = 1.0
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if not (self.k > 0 and self.omega > 0):
            raise ParameterDomainError("k and omega must be > 0")
        if self.validate:
            phases = np.linspace(-2 * math.pi, 2 * math.pi, 41)
            span = self.amplitude_bound
            ys = np.linspace(-span, span, 41) if span and math.isfinite(span) else phases
            self.phi1.check_derivatives(phases)
            self.psi1.check_derivatives(ys)
            if self.phi2 is not None:
                self.phi2.check_derivatives(phases)
                self.psi2.check_derivatives(ys)

    @property
    def c(self):
        """Propagation speed ``omega/k``."""
        return self.omega / self.k

    @property
    def single_branch(self):
        return self.phi2 is None

    @property
    def amplitude_bound(self):
        """``sup|phi1| + sup|phi2|`` or ``None`` when a bound is unknown."""
        bounds = [self.phi1.bound]
        if self.phi2 is not None:
            bounds.append(self.phi2.bound)
        if any(b is None for b in bounds):
            return None
        return float(sum(bounds))

    def phases(self, x, t, y):
        a1 = self.k * x - self.omega * t + self.psi1(y)
        if self.phi2 is None:
            return a1, None
        return a1, self.k * x + self.omega * t + self.psi2(y)

    def residual(self, x, t, y):
        """``y - Phi1(A1) - Phi2(A2)`` and its derivative in ``y``."""
        a1, a2 = self.phases(x, t, y)
        g = y - self.phi1(a1)
        dg = 1.0 - self.phi1.df(a1) * self.psi1.df(y)
        if a2 is not None:
            g = g - self.phi2(a2)
            dg = dg - self.phi2.df(a2) * self.psi2.df(y)
        return g, dg


@dataclass(frozen=True)
class InclinedSineSpec:
    """``y = c_amp * sin(kx - omega*t + y*cot(alpha))``."""

    c_amp: float = 0.5
    alpha: float = math.pi / 3
    k: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if not 0 < self.alpha <= math.pi / 2:
            raise ParameterDomainError("alpha must lie in (0, pi/2]")

    @property
    def cot_alpha(self):
        # cos/sin gives an exact 0 at pi/2 only up to round-off; pin it
        return 0.0 if self.alpha == math.pi / 2 else math.cos(self.alpha) / math.sin(self.alpha)

    def implicit(self):
        return ImplicitWaveSpec(
            phi1=sine(self.c_amp),
            psi1=linear(self.cot_alpha),
            k=self.k,
            omega=self.omega,
        )


def as_implicit(spec):
    if isinstance(spec, InclinedSineSpec):
        return spec.implicit()
    if isinstance(spec, ImplicitWaveSpec):
        return spec
    raise TypeError(f"expected ImplicitWaveSpec or InclinedSineSpec, got {type(spec).__name__}")


def contraction_check(spec, y_range=None, phase_range=(-math.pi, math.pi), samples=1001):
    """Sampled ``sup |psi'(y) * Phi'(A)|`` over ``y_range`` and ``phase_range``.

    With two branches the two suprema are added.  A value below 1 means the
    implicit relation has exactly one root; at or above 1 a
    :class:`MultivaluedWarning` is issued.
    """
    spec = as_implicit(spec)
    if y_range is None:
        bound = spec.amplitude_bound
        if bound is None:
            raise ParameterDomainError("y_range is required when no amplitude bound is known")
        y_range = (-bound, bound)
    lo, hi = (float(v) for v in y_range)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ParameterDomainError("y_range must be finite")
    ys = np.linspace(lo, hi, samples)
    phases = np.linspace(phase_range[0], phase_range[1], samples)
    total = 0.0
    pairs = [(spec.phi1, spec.psi1)]
    if spec.phi2 is not None:
        pairs.append((spec.phi2, spec.psi2))
    for phi, psi in pairs:
        dpsi = np.abs(np.broadcast_to(psi.df(ys), ys.shape)).max()
        dphi = np.abs(np.broadcast_to(phi.df(phases), phases.shape)).max()
        total += float(dpsi * dphi)
    if total >= 1.0:
        warnings.warn(
            f"contraction bound {total:.4g} >= 1: the wave may overturn and "
            "the implicit relation can have several roots",
            MultivaluedWarning,
            stacklevel=2,
        )
    return total


def _sign_changes(spec, x, t, lo, hi, samples=513):
    ys = np.linspace(lo, hi, samples)
    g, _ = spec.residual(x, t, ys)
    g = np.broadcast_to(g, ys.shape)
    brackets = []
    for i in range(samples - 1):
        if g[i] == 0.0:
            brackets.append((ys[i], ys[i]))
        elif g[i] * g[i + 1] < 0:
            brackets.append((ys[i], ys[i + 1]))
    if g[-1] == 0.0:
        brackets.append((ys[-1], ys[-1]))
    return brackets


def _bracketed_root(spec, x, t, lo, hi, tol, max_iter):
    """Newton steps kept inside ``[lo, hi]``, bisecting when they leave it."""
    if lo == hi:
        return lo
    g_lo, _ = spec.residual(x, t, lo)
    y = 0.5 * (lo + hi)
    for _ in range(max_iter):
        g, dg = spec.residual(x, t, y)
        if abs(g) <= tol:
            step = g / dg if dg != 0 else 0.0
            if abs(step) <= tol:
                return y - step if lo <= y - step <= hi else y
        if (g < 0) == (g_lo < 0):
            lo, g_lo = y, g
        else:
            hi = y
        candidate = y - g / dg if dg != 0 else math.nan
        if not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)
        if hi - lo <= tol:
            return candidate
        y = candidate
    raise NonConvergenceError(f"bracketed solve did not converge at x={x}, t={t}", x=x, t=t)


def _search_interval(spec, seed):
    bound = spec.amplitude_bound
    if bound is not None:
        return -bound, bound
    centre = 0.0 if seed is None else float(seed)
    return centre - 10.0, centre + 10.0


def eval_implicit(spec, x, t, seed=None, tol=1e-12, max_iter=100):
    """Solve the implicit relation for ``y`` at ``(x, t)``.

    With ``seed`` the root nearest to it is followed (Newton from the seed,
    falling back to the sign change closest to the seed).  Without a seed
    the root must be unique in the amplitude bracket, otherwise
    :class:`AmbiguousBranchError` is raised.
    """
    spec = as_implicit(spec)
    x = float(x)
    t = float(t)
    if seed is not None:
        y = float(seed)
        for _ in range(max_iter):
            g, dg = spec.residual(x, t, y)
            if dg == 0 or not math.isfinite(g):
                break
            step = g / dg
            y -= step
            if abs(step) <= tol * 1e-2 or (abs(step) <= tol and abs(g) <= tol):
                g, _ = spec.residual(x, t, y)
                if abs(g) <= tol:
                    return y
            if abs(y - seed) > 4 * (abs(seed) + 1.0):
                break
        lo, hi = _search_interval(spec, seed)
        brackets = _sign_changes(spec, x, t, lo, hi)
        if not brackets:
            raise NonConvergenceError(f"no root found near seed at x={x}, t={t}", x=x, t=t)
        lo, hi = min(brackets, key=lambda b: abs(0.5 * (b[0] + b[1]) - seed))
        return _bracketed_root(spec, x, t, lo, hi, tol, max_iter)

    lo, hi = _search_interval(spec, None)
    brackets = _sign_changes(spec, x, t, lo, hi)
    if not brackets:
        raise NonConvergenceError(f"no root in [{lo}, {hi}] at x={x}, t={t}", x=x, t=t)
    if len(brackets) > 1:
        raise AmbiguousBranchError(
            f"{len(brackets)} roots in [{lo:.4g}, {hi:.4g}] at x={x}, t={t}; supply a seed"
        )
    return _bracketed_root(spec, x, t, *brackets[0], tol, max_iter)


def polish(spec, x, t, seed, dtype=np.float64, max_iter=30):
    """Vectorised Newton polish of nearby roots in the requested precision.

    Iterates down to the round-off floor of ``dtype``, which finite
    differencing needs.
    """
    x = np.asarray(x, dtype=dtype)
    t = np.asarray(t, dtype=dtype)
    y = np.array(seed, dtype=dtype)
    eps = np.finfo(dtype).eps
    for _ in range(max_iter):
        g, dg = spec.residual(x, t, y)
        step = g / dg
        y = y - step
        if np.all(np.abs(step) <= 4 * eps * np.maximum(1, np.abs(y))):
            break
    g, _ = spec.residual(x, t, y)
    if not np.all(np.abs(g) <= 1e-10):
        bad = np.unravel_index(np.argmax(np.abs(g)), np.shape(g))
        raise NonConvergenceError(
            f"polish failed at x={float(x[bad])}, t={float(t[bad])}",
            x=float(x[bad]),
            t=float(t[bad]),
        )
    return y


def implicit_profile(spec, x_values, t, seed=None):
    """``y`` along a row of ``x`` values at time ``t`` by continuation."""
    spec = as_implicit(spec)
    out = np.empty(len(x_values))
    for i, x in enumerate(x_values):
        seed = eval_implicit(spec, x, t, seed=seed)
        out[i] = seed
    return out


def derivatives_analytic(spec, x, t, y, singular_tol=1e-12):
    """Implicit derivatives ``(y_x, y_t, y_xx, y_tt)`` at a solution point.

    For one branch, with ``D = 1 - psi1'(y)*Phi1'(A)``::

        y_x  =  k*Phi1'/D            y_xx = k**2 * (Phi1'' + psi1''*Phi1'**3) / D**3
        y_t  = -w*Phi1'/D            y_tt = w**2 * (Phi1'' + psi1''*Phi1'**3) / D**3

    Two branches go through the general implicit-function formulas.
    """
    spec = as_implicit(spec)
    k, w = spec.k, spec.omega
    a1, a2 = spec.phases(x, t, y)
    p1, p2 = spec.phi1.df(a1), spec.phi1.d2f(a1)
    q1, q2 = spec.psi1.df(y), spec.psi1.d2f(y)

    if spec.single_branch:
        D = 1.0 - q1 * p1
        if abs(D) < singular_tol:
            raise GradientCatastropheError(
                f"1 - psi1'*Phi1' = {D:.3g} at x={x}, t={t}: the wave overturns here"
            )
        bracket = p2 + q2 * p1**3
        return k * p1 / D, -w * p1 / D, k * k * bracket / D**3, w * w * bracket / D**3

    r1, r2 = spec.phi2.df(a2), spec.phi2.d2f(a2)
    s1, s2 = spec.psi2.df(y), spec.psi2.d2f(y)
    G_y = 1.0 - p1 * q1 - r1 * s1
    if abs(G_y) < singular_tol:
        raise GradientCatastropheError(f"implicit denominator {G_y:.3g} at x={x}, t={t}")
    G_x = -k * (p1 + r1)
    G_t = w * (p1 - r1)
    G_xx = -k * k * (p2 + r2)
    G_tt = -w * w * (p2 + r2)
    G_xy = -k * (p2 * q1 + r2 * s1)
    G_ty = w * (p2 * q1 - r2 * s1)
    G_yy = -(p2 * q1 * q1 + p1 * q2 + r2 * s1 * s1 + r1 * s2)
    y_x = -G_x / G_y
    y_t = -G_t / G_y
    y_xx = -(G_xx + 2 * G_xy * y_x + G_yy * y_x * y_x) / G_y
    y_tt = -(G_tt + 2 * G_ty * y_t + G_yy * y_t * y_t) / G_y
    return y_x, y_t, y_xx, y_tt


def dalembert_eval(phi1, phi2, k, omega, x, t):
    """Explicit travelling-wave pair ``Phi1(kx - wt) + Phi2(kx + wt)``."""
    y = phi1(k * x - omega * t)
    if phi2 is not None:
        y = y + phi2(k * x + omega * t)
    return y


@dataclass(frozen=True)
class ResidualReport:
    """Wave-equation residual of a sampled implicit solution on nested grids.

    ``residuals[i]`` is the largest ``|y_xx - coef*y_tt|`` over the nodes for
    stencil spacings ``spacings[i] = (hx, ht)``; ``scale`` is the largest
    ``|y_xx|`` seen, for normalisation; ``orders[i]`` compares levels ``i``
    and ``i+1``.
    """

    spacings: list
    residuals: list
    scale: float
    orders: list
    coefficient: float

    @property
    def relative(self):
        return [r / self.scale for r in self.residuals]

    @property
    def observed_order(self):
        return min(self.orders)


def solve_nodes(spec, x_nodes, t_nodes):
    """Solutions on a rectangular node grid, continued along each row.

    Rows are indexed by time; the first node of each row is seeded from the
    row above.
    """
    spec = as_implicit(spec)
    y = np.empty((len(t_nodes), len(x_nodes)))
    row_seed = None
    for i, t in enumerate(t_nodes):
        seed = row_seed
        for j, x in enumerate(x_nodes):
            try:
                seed = eval_implicit(spec, x, t, seed=seed)
            except NonConvergenceError as exc:
                raise NonConvergenceError(
                    f"node (x={x}, t={t}): {exc}", x=float(x), t=float(t)
                ) from exc
            y[i, j] = seed
            if j == 0:
                row_seed = seed
    return y


def pde_residual_fd(
    spec,
    x_nodes=None,
    t_nodes=None,
    h_values=(2e-3, 1e-3),
    ht_ratio=0.5,
    coefficient_scale=1.0,
    dtype=np.longdouble,
):
    """Certify the wave equation by central differences of the implicit solution.

    At every node the second derivatives in ``x`` and ``t`` are formed with
    spacings ``hx = h`` and ``ht = ht_ratio*h``, and the residual
    ``y_xx - coefficient_scale*(k/omega)**2 * y_tt`` is recorded for each
    ``h``.  ``ht_ratio`` must differ from ``k/omega``: at that ratio the
    stencil is exact for any travelling wave and the truncation error
    vanishes identically.  Stencil points are Newton-polished from the node
    value in ``dtype`` so round-off stays below the truncation error.
    """
    spec = as_implicit(spec)
    if x_nodes is None:
        x_nodes = np.linspace(0.0, 2 * math.pi / spec.k, 16, endpoint=False)
    if t_nodes is None:
        t_nodes = np.linspace(0.0, 2 * math.pi / spec.omega, 4, endpoint=False)
    h_values = [float(h) for h in h_values]
    if len(h_values) < 2:
        raise ParameterDomainError("need at least two spacings for an order estimate")
    x_nodes = np.asarray(x_nodes, dtype=float)
    t_nodes = np.asarray(t_nodes, dtype=float)

    base = solve_nodes(spec, x_nodes, t_nodes)
    X = np.broadcast_to(x_nodes[None, :], base.shape).astype(dtype)
    T = np.broadcast_to(t_nodes[:, None], base.shape).astype(dtype)
    y0 = polish(spec, X, T, base, dtype)
    coef = coefficient_scale * (spec.k / spec.omega) ** 2

    spacings, residuals = [], []
    scale = 0.0
    for h in h_values:
        hx = dtype(h)
        ht = dtype(h * ht_ratio)
        xp = polish(spec, X + hx, T, y0, dtype)
        xm = polish(spec, X - hx, T, y0, dtype)
        tp = polish(spec, X, T + ht, y0, dtype)
        tm = polish(spec, X, T - ht, y0, dtype)
        y_xx = (xp - 2 * y0 + xm) / hx**2
        y_tt = (tp - 2 * y0 + tm) / ht**2
        res = np.abs(y_xx - dtype(coef) * y_tt)
        spacings.append((h, h * ht_ratio))
        residuals.append(float(res.max()))
        scale = max(scale, float(np.abs(y_xx).max()))

    orders = []
    for (h0, _), (h1, _), r0, r1 in zip(spacings, spacings[1:], residuals, residuals[1:]):
        if r0 > 0 and r1 > 0:
            orders.append(math.log(r0 / r1) / math.log(h0 / h1))
        else:
            orders.append(math.inf)
    return ResidualReport(spacings, residuals, scale, orders, coef)


def phase_line_slope(spec, t=0.0, phase=0.0, half_width=1e-3, samples=21):
    """Slope ``dy/dx`` of the constant-phase locus through ``y = 0``.

    The locus is ``k*x - omega*t + psi1(y) = phase``; it is sampled for
    ``|y| <= half_width`` and fitted with a straight line.
    """
    spec = as_implicit(spec)
    ys = np.linspace(-half_width, half_width, samples)
    xs = (phase + spec.omega * t - np.broadcast_to(spec.psi1(ys), ys.shape)) / spec.k
    if np.ptp(xs) == 0:
        return math.inf
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def derivatives_fd(spec, x, t, y, h, dtype=np.longdouble):
    """Central-difference ``(y_x, y_t, y_xx, y_tt)`` of the implicit solution.

    Neighbouring values are Newton-polished from ``y`` in ``dtype``.
    """
    spec = as_implicit(spec)
    x, t, h = dtype(x), dtype(t), dtype(h)
    X = np.array([x + h, x - h, x, x, x], dtype=dtype)
    T = np.array([t, t, t + h, t - h, t], dtype=dtype)
    xp, xm, tp, tm, y0 = polish(spec, X, T, np.full(5, y), dtype)
    return (
        float((xp - xm) / (2 * h)),
        float((tp - tm) / (2 * h)),
        float((xp - 2 * y0 + xm) / h**2),
        float((tp - 2 * y0 + tm) / h**2),
    )
