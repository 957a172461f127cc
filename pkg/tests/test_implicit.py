import math
import warnings

import numpy as np
import pytest

from wavelab.errors import (
    AmbiguousBranchError,
    GradientCatastropheError,
    ParameterDomainError,
)
from wavelab.implicit import (
    ImplicitWaveSpec,
    InclinedSineSpec,
    MultivaluedWarning,
    ScalarFunction,
    contraction_check,
    dalembert_eval,
    derivatives_analytic,
    derivatives_fd,
    eval_implicit,
    implicit_profile,
    linear,
    pde_residual_fd,
    phase_line_slope,
    sine,
)

INCLINED = InclinedSineSpec(c_amp=0.5, alpha=math.pi / 3, k=1.0, omega=1.0)


def bisection_root(c, cot, x, t, lo, hi, iters=200):
    """Independent oracle: plain bisection on y - c*sin(x - t + y*cot)."""

    def g(y):
        return y - c * math.sin(x - t + y * cot)

    glo = g(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if (gm < 0) == (glo < 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_perpendicular_inclination_is_explicit():
    spec = InclinedSineSpec(c_amp=0.5, alpha=math.pi / 2, k=1.3, omega=0.7)
    rng = np.random.default_rng(1)
    for x, t in rng.uniform(-5, 5, size=(20, 2)):
        assert eval_implicit(spec, x, t) == pytest.approx(0.5 * math.sin(1.3 * x - 0.7 * t), abs=1e-14)


def test_origin_root():
    assert eval_implicit(INCLINED, 0.0, 0.0, seed=0.0) == 0.0


def test_matches_bisection_sweep():
    cot = INCLINED.cot_alpha
    for x in np.linspace(-3, 3, 13):
        for t in np.linspace(0, 2, 5):
            expected = bisection_root(0.5, cot, x, t, -0.5, 0.5)
            assert eval_implicit(INCLINED, x, t) == pytest.approx(expected, abs=1e-10)


def test_profile_continuation_matches_pointwise():
    xs = np.linspace(0, 4 * math.pi, 101)
    prof = implicit_profile(INCLINED, xs, 0.4)
    point = [eval_implicit(INCLINED, x, 0.4) for x in xs]
    assert np.allclose(prof, point, atol=1e-12)


def test_multivalued_without_seed_is_ambiguous():
    spec = InclinedSineSpec(c_amp=2.0, alpha=math.pi / 4)
    with pytest.warns(MultivaluedWarning):
        assert contraction_check(spec) == pytest.approx(2.0, rel=1e-12)
    # x = 0: y = 2 sin(y) has roots 0 and about +-1.895
    with pytest.raises(AmbiguousBranchError):
        eval_implicit(spec, 0.0, 0.0)
    assert eval_implicit(spec, 0.0, 0.0, seed=0.05) == pytest.approx(0.0, abs=1e-12)
    assert eval_implicit(spec, 0.0, 0.0, seed=1.8) == pytest.approx(1.8954942670339809, abs=1e-12)


def test_contraction_bound_values():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert contraction_check(INCLINED) == pytest.approx(0.5 / math.sqrt(3), rel=1e-12)
        assert contraction_check(InclinedSineSpec(alpha=math.pi / 2)) == 0.0


def test_derivative_validation_on_construction():
    wrong = ScalarFunction(np.sin, np.sin, np.cos, bound=1.0)
    with pytest.raises(ParameterDomainError):
        ImplicitWaveSpec(phi1=wrong)


def test_invalid_inclination():
    with pytest.raises(ParameterDomainError):
        InclinedSineSpec(alpha=0.0)


def test_zero_deformation_derivatives_are_chain_rule():
    spec = ImplicitWaveSpec(phi1=sine(0.8), k=1.5, omega=0.6)
    x, t = 0.37, 1.1
    y = eval_implicit(spec, x, t)
    a = 1.5 * x - 0.6 * t
    got = derivatives_analytic(spec, x, t, y)
    want = (1.2 * math.cos(a), -0.48 * math.cos(a), -1.8 * math.sin(a), -0.288 * math.sin(a))
    assert np.allclose(got, want, rtol=0, atol=1e-14)


def test_second_derivative_ratio():
    spec = InclinedSineSpec(c_amp=0.5, alpha=math.pi / 3, k=1.4, omega=0.9)
    rng = np.random.default_rng(2)
    for x, t in rng.uniform(-4, 4, size=(25, 2)):
        y = eval_implicit(spec, x, t)
        _, _, yxx, ytt = derivatives_analytic(spec, x, t, y)
        if abs(ytt) > 1e-8:
            assert yxx / ytt == pytest.approx((1.4 / 0.9) ** 2, rel=1e-12)


def test_derivatives_match_finite_differences():
    x, t = 0.8, 0.3
    y = eval_implicit(INCLINED, x, t)
    exact = np.array(derivatives_analytic(INCLINED, x, t, y))
    errs = [np.abs(np.array(derivatives_fd(INCLINED, x, t, y, h)) - exact) for h in (1e-3, 5e-4)]
    orders = np.log2(errs[0] / errs[1])
    assert np.all(orders > 1.95)
    assert errs[1].max() < 1e-6


def test_two_branch_derivatives_match_finite_differences():
    spec = ImplicitWaveSpec(phi1=sine(0.3), psi1=linear(0.4), phi2=sine(0.2), psi2=linear(-0.5))
    x, t = 0.6, 0.25
    y = eval_implicit(spec, x, t)
    exact = np.array(derivatives_analytic(spec, x, t, y))
    errs = [np.abs(np.array(derivatives_fd(spec, x, t, y, h)) - exact) for h in (1e-3, 5e-4)]
    assert np.all(np.log2(errs[0] / errs[1]) > 1.95)


def test_overturning_point_raises():
    # y = sin(x + y): at x = -pi/2 the root y = 0 has D = 1 - cos(A) = 0
    spec = ImplicitWaveSpec(phi1=sine(1.0), psi1=linear(1.0))
    with pytest.raises(GradientCatastropheError):
        derivatives_analytic(spec, 0.0, 0.0, 0.0)


def test_residual_explicit_sine_at_round_off_floor():
    spec = ImplicitWaveSpec(phi1=sine(1.0))
    report = pde_residual_fd(spec, h_values=(2e-3, 1e-3), ht_ratio=1.0)
    # eps(longdouble) / h**2 is about 1e-13 at h = 1e-3
    assert max(report.relative) < 1e-11


def test_residual_second_order_certification():
    report = pde_residual_fd(INCLINED, h_values=(2e-3, 1e-3, 5e-4))
    assert report.observed_order >= 1.95
    assert report.relative[-1] < 1e-6


def test_residual_exact_stencil_ratio():
    # with ht = hx*k/omega the stencil is exact for travelling waves
    report = pde_residual_fd(INCLINED, h_values=(2e-3, 1e-3), ht_ratio=1.0)
    assert max(report.relative) < 1e-12


def test_residual_negative_control():
    report = pde_residual_fd(INCLINED, h_values=(2e-3, 1e-3, 5e-4), coefficient_scale=1.1)
    assert min(report.relative) > 1e-2
    assert max(report.orders) < 0.5


def test_dalembert_on_phase_line():
    assert dalembert_eval(np.sin, None, 1.0, 1.0, 0.7, 0.7) == 0.0


def test_dalembert_standing_wave():
    half = lambda u: 0.5 * np.sin(u)
    x, t = np.meshgrid(np.linspace(-3, 3, 9), np.linspace(0, 2, 5))
    got = dalembert_eval(half, half, 1.2, 0.8, x, t)
    assert np.allclose(got, np.sin(1.2 * x) * np.cos(0.8 * t), atol=1e-15)


def test_implicit_degenerates_to_dalembert():
    spec = ImplicitWaveSpec(phi1=sine(0.7), phi2=sine(0.2), k=1.3, omega=0.9)
    rng = np.random.default_rng(11)
    for x, t in rng.uniform(-10, 10, size=(200, 2)):
        want = dalembert_eval(spec.phi1, spec.phi2, 1.3, 0.9, x, t)
        assert abs(eval_implicit(spec, x, t) - want) < 1e-12


def test_travelling_invariance():
    rng = np.random.default_rng(13)
    spec = InclinedSineSpec(c_amp=0.5, alpha=math.pi / 3, k=1.2, omega=0.8)
    for x, t, d in rng.uniform(-10, 10, size=(50, 3)):
        a = eval_implicit(spec, x + d, t + 1.2 * d / 0.8)
        assert a == pytest.approx(eval_implicit(spec, x, t), abs=1e-10)


@pytest.mark.parametrize("alpha", [math.pi / 6, math.pi / 3, 1.2])
def test_phase_line_inclination(alpha):
    slope = phase_line_slope(InclinedSineSpec(alpha=alpha))
    assert abs(abs(slope) - math.tan(alpha)) < 1e-3
