"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary (see ``conftest.py``) and when this file is run directly.
"""

import filecmp
import math
import os

import numpy as np
import pytest

from wavelab import cli, verify
from wavelab.analytic import ContinuumParams, continuum_limit_report, forced_phasors
from wavelab.implicit import InclinedSineSpec, pde_residual_fd
from wavelab.lattice import LineParams, dispersion_params
from wavelab.oracle import recurrence_residual, solve_steady_chain
from wavelab.analytic import forced_phasor

REPORT = []

BETAS = (0.3, 0.5, 0.7, 0.9, 1.1, 1.25, 2.0)
ALPHAS = (0.0, math.pi / 6, math.pi / 3, math.pi / 2)


def record(label, passed, detail):
    REPORT.append(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
    assert passed, f"{label}: {detail}"


def rel_error(actual, expected):
    scale = np.abs(expected).max()
    if scale == 0:
        return float(np.abs(actual).max())
    return float(np.abs(actual - expected).max() / scale)


def test_criterion_01_analytic_oracle_equivalence():
    worst = 0.0
    for beta in BETAS:
        for alpha in ALPHAS:
            params = LineParams.from_beta(beta, alpha=alpha)
            sol = solve_steady_chain(params, 200)
            d, y = forced_phasors(params, dispersion_params(params), np.arange(1, 101))
            worst = max(worst, rel_error(sol.delta[:100], d), rel_error(sol.y[:100], y))
    record("1 analytic-oracle equivalence", worst < 1e-10, f"max relative error {worst:.3e} (< 1e-10)")


def test_criterion_02_recurrence_residuals():
    worst = {}
    for beta in (0.5, 1.0, 1.25):
        params = LineParams.from_beta(beta, alpha=math.pi / 6)
        disp = dispersion_params(params)
        amps = [forced_phasor(params, disp, n) for n in range(1, 102)]
        worst[disp.regime.value] = recurrence_residual(amps, params)
    ok = max(worst.values()) < 1e-12
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    record("2 recurrence residuals", ok, f"{detail} (< 1e-12)")


def _critical_deviation(beta):
    params = LineParams.from_beta(beta, alpha=math.pi / 6)
    d, y = forced_phasors(params, dispersion_params(params), np.arange(1, 11))
    ref = params.F0 / (2 * params.s)
    return max(
        float(np.abs(np.abs(d) / (ref * math.cos(params.alpha)) - 1).max()),
        float(np.abs(np.abs(y) / (ref * math.sin(params.alpha)) - 1).max()),
    )


def test_criterion_03a_critical_continuity_below_cutoff():
    dev = _critical_deviation(1 - 1e-5)
    record("3a critical continuity at beta = 1 - 1e-5", dev < 1e-4, f"deviation {dev:.3e} (< 1e-4)")


def test_criterion_03b_critical_continuity_above_cutoff():
    # Expected to fail: |gamma_minus| = 1 - sqrt(2e-5) + ..., so the
    # deviation grows to about 19*sqrt(2e-5) = 0.085 at n = 10.
    dev = _critical_deviation(1 + 1e-5)
    record("3b critical continuity at beta = 1 + 1e-5", dev < 1e-4, f"deviation {dev:.3e} (< 1e-4)")


@pytest.mark.parametrize("beta", [0.5, 1.25])
def test_criterion_04_time_domain_reproduction(beta):
    coarse_amp, coarse_phase = verify._sim_errors(beta, 200)
    fine_amp, _ = verify._sim_errors(beta, 400)
    ratio = coarse_amp / fine_amp
    ok = coarse_amp < 0.01 and coarse_phase < 0.05 and 3.0 <= ratio <= 5.0
    record(
        f"4 time-domain reproduction beta = {beta}",
        ok,
        f"amplitude {coarse_amp:.2e} (< 1e-2), phase {coarse_phase:.2e} rad (< 0.05), "
        f"dt-halving ratio {ratio:.2f} (in [3, 5])",
    )


def test_criterion_05_continuum_limit():
    cp = ContinuumParams(alpha=math.pi / 6)
    report = continuum_limit_report(cp, [1e-1, 1e-2, 1e-3], x0_values=[1.0])
    order = min(report.phase_orders)
    literal = continuum_limit_report(cp, [1e-1, 1e-2, 1e-3], x0_values=[1.0], element_offset=1.0)
    record(
        "5 continuum limit",
        order >= 2 - verify.ORDER_TOL,
        f"observed order {order:.4f} (>= 2); x0 = n*a mapping gives {min(literal.phase_orders):.4f}",
    )


def test_criterion_06_implicit_certification():
    spec = InclinedSineSpec(c_amp=0.5, alpha=math.pi / 3, k=1.0, omega=1.0)
    h = (2e-3, 1e-3, 5e-4)
    report = pde_residual_fd(spec, h_values=h)
    control = pde_residual_fd(spec, h_values=h, coefficient_scale=1.1)
    order = report.observed_order
    stalled = control.relative[-1] > 1e-2 and max(control.orders) < 0.5
    record(
        "6 implicit-solution certification",
        order >= 2 - verify.ORDER_TOL and stalled,
        f"order {order:.4f} (>= 2); control relative residual {control.relative[-1]:.3f}, "
        f"orders {max(control.orders):.1e} (does not converge)",
    )


def test_criterion_07_derivative_formulas():
    r = verify.derivative_formulas(points=100)
    record("7 derivative formulas", r.passed, f"minimum observed order {r.value:.4f} (>= 2)")


def test_criterion_08_degeneration():
    r = verify.degeneration(points=1000)
    record("8 degeneration", r.passed, f"max difference {r.value:.2e} (<= 1e-12)")


def test_criterion_09_travelling_invariance():
    r = verify.travelling_invariance(points=100)
    record("9 travelling invariance", r.passed, f"max difference {r.value:.2e} (<= 1e-10)")


def test_criterion_10_orbits():
    results = verify.orbit_checks()
    detail = ", ".join(f"{r.name} {r.value:.1e} (<= {r.threshold:g})" for r in results)
    record("10 orbits", all(r.passed for r in results), detail)


def test_criterion_11_cli_determinism(tmp_path):
    codes = []
    dirs = []
    for rep in range(2):
        out = tmp_path / f"run{rep}"
        for fmt in ("csv", "json"):
            codes.append(cli.main(["verify-all", "--out", str(out), "--format", fmt]))
        dirs.append(out)
    names = sorted(os.listdir(dirs[0]))
    same = names == sorted(os.listdir(dirs[1])) and all(
        filecmp.cmp(dirs[0] / n, dirs[1] / n, shallow=False) for n in names
    )
    record(
        "11 CLI determinism",
        same and codes == [0, 0, 0, 0],
        f"exit codes {codes}, byte-identical {', '.join(names)}: {same}",
    )


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
