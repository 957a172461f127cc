"""``wave-lab`` command line front end.

Runs are configured by an optional JSON document; command-line flags take
precedence over the file, which takes precedence over the built-in defaults.

Output columns per mode (CSV header row, one row per item):

``analytic``    n, delta, y
``oracle``      n, delta_re, delta_im, y_re, y_im, abs_err_delta, abs_err_y
``simulate``    n, amp_delta, phase_delta, amp_y, phase_y, fit_residual_delta,
                fit_residual_y, analytic_amp_delta, analytic_phase_delta,
                analytic_amp_y, analytic_phase_y
``implicit``    x, y  (plus implicit_residual: h, hx, ht, residual, relative, order)
``orbit``       n, center_delta, center_y, semi_major, semi_minor, orientation,
                eccentricity, degenerate, rms_residual, phase_lag
``verify-all``  check, value, threshold, passed, detail
"""

import argparse
import copy
import csv
import json
import math
import os
import sys
import traceback

import numpy as np

from . import analytic, implicit, oracle, svg, timedomain, trajectory, verify
from .errors import ParameterDomainError, WaveLabError
from .lattice import LineParams, Regime, dispersion_params

MODES = ("analytic", "oracle", "simulate", "implicit", "orbit", "verify-all")

EXIT_OK, EXIT_VALIDATION, EXIT_KERNEL, EXIT_VERIFY = 0, 1, 2, 3

DEFAULTS = {
    "line": {
        "m": 1.0,
        "s": 1.0,
        "a": 1.0,
        "F0": 1.0,
        "alpha": math.pi / 6,
        "omega": 1.0,
        "phase_offset": 0.0,
        "beta_target": None,
    },
    "analytic": {"n_max": 40, "t": 0.0},
    "oracle": {"N": 200, "termination": "matched", "n_report": 100},
    "simulate": {
        "N": 400,
        "dt": None,
        "periods": 170,
        "window_periods": 20,
        "ramp_periods": 60,
        "absorber_len": 150,
        "absorber_max_damping": 0.5,
        "n_report": 20,
    },
    "implicit": {
        "c_amp": 0.5,
        "alpha": math.pi / 3,
        "k": 1.0,
        "omega": 1.0,
        "t": 0.0,
        "x_min": 0.0,
        "x_max": 4 * math.pi,
        "nx": 201,
        "h_values": [2e-3, 1e-3, 5e-4],
        "ht_ratio": 0.5,
    },
    "orbit": {"n_first": 1, "n_last": 10, "samples": 64},
    "output": {"dir": "wave-lab-out", "format": "csv", "svg": False},
}

# flag name -> (section, key)
OVERRIDES = {
    "m": [("line", "m")],
    "s": [("line", "s")],
    "a": [("line", "a")],
    "F0": [("line", "F0")],
    "alpha": [("line", "alpha")],
    "omega": [("line", "omega")],
    "beta_target": [("line", "beta_target")],
    "phase_offset": [("line", "phase_offset")],
    "N": [("oracle", "N"), ("simulate", "N")],
    "dt": [("simulate", "dt")],
    "periods": [("simulate", "periods")],
}


class ConfigError(Exception):
    pass


def _key_line(text, section, key):
    """1-based line of ``"key"`` inside ``"section"`` in the JSON source, if found."""
    if text is None:
        return None
    lines = text.splitlines()
    start = 0
    if section is not None:
        for i, line in enumerate(lines):
            if f'"{section}"' in line:
                start = i
                break
    for i in range(start, len(lines)):
        if f'"{key}"' in lines[i]:
            return i + 1
    return None


class Config:
    """Merged configuration plus where each value came from."""

    def __init__(self, data, source_name=None, source_text=None, flag_keys=()):
        self.data = data
        self.source_name = source_name
        self.source_text = source_text
        self.flag_keys = set(flag_keys)

    def __getitem__(self, section):
        return self.data[section]

    def where(self, section, key):
        if (section, key) in self.flag_keys:
            return f"--{key.replace('_', '-')}"
        line = _key_line(self.source_text, section, key)
        if line is not None:
            return f"{self.source_name}:{line}"
        return "defaults"

    def fail(self, section, key, message):
        raise ConfigError(f"{self.where(section, key)}: {section}.{key}: {message}")


def load_config(path=None, overrides=None):
    data = copy.deepcopy(DEFAULTS)
    text = None
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from exc
        try:
            loaded = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}:1: top level must be an object")
        for section, values in loaded.items():
            if section not in data:
                line = _key_line(text, None, section) or 1
                raise ConfigError(f"{path}:{line}: unknown section {section!r}")
            if not isinstance(values, dict):
                line = _key_line(text, None, section) or 1
                raise ConfigError(f"{path}:{line}: section {section!r} must be an object")
            for key, value in values.items():
                if key not in data[section]:
                    line = _key_line(text, section, key) or 1
                    raise ConfigError(f"{path}:{line}: unknown key {section}.{key}")
                data[section][key] = value
    flag_keys = []
    for name, value in (overrides or {}).items():
        if value is None:
            continue
        for section, key in OVERRIDES[name]:
            data[section][key] = value
            flag_keys.append((section, key))
    return Config(data, path, text, flag_keys)


def _number(cfg, section, key, integer=False, optional=False):
    value = cfg[section][key]
    if value is None and optional:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        cfg.fail(section, key, f"expected a number, got {value!r}")
    if integer:
        if int(value) != value:
            cfg.fail(section, key, f"expected an integer, got {value!r}")
        return int(value)
    return float(value)


def line_params(cfg):
    kwargs = {k: _number(cfg, "line", k) for k in ("m", "s", "a", "F0", "alpha", "omega", "phase_offset")}
    beta = _number(cfg, "line", "beta_target", optional=True)
    if beta is not None:
        if not beta > 0:
            cfg.fail("line", "beta_target", f"must be > 0, got {beta!r}")
        kwargs["omega"] = 2 * beta * math.sqrt(kwargs["s"] / kwargs["m"])
    try:
        return LineParams(**kwargs)
    except ParameterDomainError as exc:
        key = str(exc).split()[0]
        key = key if key in kwargs else "m"
        cfg.fail("line", key, str(exc))


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def write_table(path_stem, mode, columns, rows, fmt):
    """Write ``rows`` as CSV or JSON; returns the file path."""
    if fmt == "csv":
        path = path_stem + ".csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    else:
        path = path_stem + ".json"
        doc = {
            "mode": mode,
            "columns": list(columns),
            "rows": [[_json_value(v) for v in row] for row in rows],
        }
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    return path


def run_analytic(cfg, params, out):
    n_max = _number(cfg, "analytic", "n_max", integer=True)
    if n_max < 1:
        cfg.fail("analytic", "n_max", "must be >= 1")
    t = _number(cfg, "analytic", "t")
    n, delta, y = analytic.forced_profile(params, n_max, t)
    rows = list(zip(n, delta, y))
    files = [out.table("analytic", ["n", "delta", "y"], rows)]
    if out.svg:
        disp = dispersion_params(params)
        files.append(
            out.snapshot(
                "analytic",
                [("displaced line", n * params.a + delta, y)],
                svg.title_with("Inclined wave snapshot", beta=disp.beta, alpha=params.alpha, t=t),
                "x = n a + delta",
                "y",
            )
        )
    return files, True


def run_oracle(cfg, params, out):
    N = _number(cfg, "oracle", "N", integer=True)
    n_report = _number(cfg, "oracle", "n_report", integer=True)
    termination = cfg["oracle"]["termination"]
    if termination not in [t.value for t in oracle.Termination]:
        cfg.fail("oracle", "termination", f"must be matched, free or fixed, got {termination!r}")
    if N < 3:
        cfg.fail("oracle", "N", "must be >= 3")
    if not 1 <= n_report <= N:
        cfg.fail("oracle", "n_report", f"must lie in [1, N], got {n_report}")
    sol = oracle.solve_steady_chain(params, N, termination)
    disp = dispersion_params(params)
    delta, y = analytic.forced_phasors(params, disp, np.arange(1, n_report + 1))
    rows = []
    for amp, d, v in zip(sol.amplitudes[:n_report], delta, y):
        rows.append(
            (amp.n, amp.delta.real, amp.delta.imag, amp.y.real, amp.y.imag,
             abs(amp.delta - d), abs(amp.y - v))
        )
    columns = ["n", "delta_re", "delta_im", "y_re", "y_im", "abs_err_delta", "abs_err_y"]
    files = [out.table("oracle", columns, rows)]
    if out.svg:
        n = np.arange(1, N + 1)
        files.append(
            out.snapshot(
                "oracle",
                [("|delta|", n, np.abs(sol.delta)), ("|y|", n, np.abs(sol.y))],
                svg.title_with("Steady-state amplitudes", beta=disp.beta, N=N, termination=termination),
                "n",
                "amplitude",
            )
        )
    print(f"residual_norm = {sol.residual_norm:.3e}")
    return files, True


def run_simulate(cfg, params, out):
    sec = "simulate"
    N = _number(cfg, sec, "N", integer=True)
    dt = _number(cfg, sec, "dt", optional=True)
    periods = _number(cfg, sec, "periods")
    window = _number(cfg, sec, "window_periods")
    ramp = _number(cfg, sec, "ramp_periods")
    n_report = _number(cfg, sec, "n_report", integer=True)
    if window < 5:
        cfg.fail(sec, "window_periods", "must be >= 5")
    if window > periods:
        cfg.fail(sec, "window_periods", "must not exceed periods")
    if not 1 <= n_report <= N:
        cfg.fail(sec, "n_report", f"must lie in [1, N], got {n_report}")
    period = 2 * math.pi / params.omega
    sim_cfg = timedomain.SimConfig(
        N=N,
        dt=dt,
        t_end=periods * period,
        absorber_len=_number(cfg, sec, "absorber_len", integer=True),
        absorber_max_damping=_number(cfg, sec, "absorber_max_damping"),
        record_start=(periods - window) * period,
        ramp_time=ramp * period,
    )
    try:
        sim_cfg.validated(params)
    except ParameterDomainError as exc:
        message = str(exc)
        key = next((k for k in ("dt", "absorber_len", "absorber_max_damping", "N") if message.startswith(k)), "N")
        cfg.fail(sec, key, message)
    rec = timedomain.simulate(params, sim_cfg)
    ex = timedomain.steady_state_extract(rec, params.omega, ((periods - window) * period, periods * period))
    disp = dispersion_params(params)
    delta, y = analytic.forced_phasors(params, disp, np.arange(1, n_report + 1))
    rows = []
    for i in range(n_report):
        rows.append(
            (i + 1,
             ex.amplitude[0, i], ex.phase[0, i], ex.amplitude[1, i], ex.phase[1, i],
             ex.fit_residual[0, i], ex.fit_residual[1, i],
             abs(delta[i]), float(np.angle(delta[i])), abs(y[i]), float(np.angle(y[i])))
        )
    columns = [
        "n", "amp_delta", "phase_delta", "amp_y", "phase_y",
        "fit_residual_delta", "fit_residual_y",
        "analytic_amp_delta", "analytic_phase_delta", "analytic_amp_y", "analytic_phase_y",
    ]
    files = [out.table("simulate", columns, rows)]
    if out.svg:
        n = np.arange(1, n_report + 1)
        files.append(
            out.snapshot(
                "simulate",
                [
                    ("simulated |delta|", n, ex.amplitude[0, :n_report]),
                    ("analytic |delta|", n, np.abs(delta)),
                    ("simulated |y|", n, ex.amplitude[1, :n_report]),
                    ("analytic |y|", n, np.abs(y)),
                ],
                svg.title_with("Time-domain steady state", beta=disp.beta, periods=periods),
                "n",
                "amplitude",
            )
        )
    return files, True


def run_implicit(cfg, params, out):
    sec = "implicit"
    try:
        spec = implicit.InclinedSineSpec(
            c_amp=_number(cfg, sec, "c_amp"),
            alpha=_number(cfg, sec, "alpha"),
            k=_number(cfg, sec, "k"),
            omega=_number(cfg, sec, "omega"),
        )
        wave = spec.implicit()
    except ParameterDomainError as exc:
        cfg.fail(sec, "alpha", str(exc))
    nx = _number(cfg, sec, "nx", integer=True)
    if nx < 2:
        cfg.fail(sec, "nx", "must be >= 2")
    h_values = cfg[sec]["h_values"]
    if not (isinstance(h_values, list) and len(h_values) >= 2 and all(
        isinstance(h, (int, float)) and not isinstance(h, bool) and h > 0 for h in h_values
    )):
        cfg.fail(sec, "h_values", "must be a list of at least two positive spacings")
    t = _number(cfg, sec, "t")
    xs = np.linspace(_number(cfg, sec, "x_min"), _number(cfg, sec, "x_max"), nx)
    ys = implicit.implicit_profile(wave, xs, t)
    files = [out.table("implicit", ["x", "y"], list(zip(xs, ys)))]
    report = implicit.pde_residual_fd(wave, h_values=h_values, ht_ratio=_number(cfg, sec, "ht_ratio"))
    orders = report.orders + [math.nan]
    rows = [
        (h, hx, ht, r, rel, o)
        for h, (hx, ht), r, rel, o in zip(h_values, report.spacings, report.residuals, report.relative, orders)
    ]
    files.append(out.table("implicit_residual", ["h", "hx", "ht", "residual", "relative", "order"], rows))
    if out.svg:
        files.append(
            out.snapshot(
                "implicit",
                [("implicit", xs, ys), ("explicit (psi = 0)", xs, spec.c_amp * np.sin(spec.k * xs - spec.omega * t))],
                svg.title_with("Implicit inclined sine", c=spec.c_amp, alpha=spec.alpha, t=t),
                "x",
                "y",
            )
        )
    return files, True


def run_orbit(cfg, params, out):
    sec = "orbit"
    first = _number(cfg, sec, "n_first", integer=True)
    last = _number(cfg, sec, "n_last", integer=True)
    samples = _number(cfg, sec, "samples", integer=True)
    if first < 1:
        cfg.fail(sec, "n_first", "must be >= 1")
    if last < first:
        cfg.fail(sec, "n_last", "must be >= n_first")
    if samples < 16:
        cfg.fail(sec, "samples", "must be >= 16")
    disp = dispersion_params(params)
    n_range = range(first, last + 1)
    orbits = [trajectory.element_orbit(params, disp, n, samples) for n in n_range]
    if disp.regime is Regime.PERIODIC:
        lags = trajectory.phase_shift_along_line(params, disp, n_range, samples)
    else:
        lags = [math.nan] * len(orbits)
    rows = []
    for orbit, lag in zip(orbits, lags):
        fit = trajectory.fit_conic(orbit)
        rows.append(
            (orbit.n, fit.center[0], fit.center[1], fit.semi_axes[0], fit.semi_axes[1],
             fit.orientation, fit.eccentricity, fit.degenerate, fit.rms_residual, lag)
        )
    columns = [
        "n", "center_delta", "center_y", "semi_major", "semi_minor", "orientation",
        "eccentricity", "degenerate", "rms_residual", "phase_lag",
    ]
    files = [out.table("orbit", columns, rows)]
    if out.svg:
        files.append(
            out.snapshot(
                "orbit",
                [(f"n={o.n}", o.points[:, 0], o.points[:, 1]) for o in orbits],
                svg.title_with("Element orbits", beta=disp.beta, alpha=params.alpha, phase_offset=params.phase_offset),
                "delta",
                "y",
                equal_aspect=True,
            )
        )
    return files, True


def run_verify(cfg, params, out):
    results = verify.run_all()
    rows = [(r.name, r.value, r.threshold, r.passed, r.detail) for r in results]
    files = [out.table("verify-all", ["check", "value", "threshold", "passed", "detail"], rows)]
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  value={r.value:.6g}  threshold={r.threshold:.6g}")
    return files, all(r.passed for r in results)


RUNNERS = {
    "analytic": run_analytic,
    "oracle": run_oracle,
    "simulate": run_simulate,
    "implicit": run_implicit,
    "orbit": run_orbit,
    "verify-all": run_verify,
}


class Output:
    def __init__(self, directory, fmt, want_svg):
        self.directory = directory
        self.fmt = fmt
        self.svg = want_svg

    def table(self, name, columns, rows):
        return write_table(os.path.join(self.directory, name), name, columns, rows, self.fmt)

    def snapshot(self, name, series, title, xlabel, ylabel, equal_aspect=False):
        path = os.path.join(self.directory, name + ".svg")
        return svg.emit_snapshot_svg(series, path, title, xlabel, ylabel, equal_aspect)


def _kernel_module(exc):
    for frame in reversed(traceback.extract_tb(exc.__traceback__)):
        name = os.path.splitext(os.path.basename(frame.filename))[0]
        if os.path.basename(os.path.dirname(frame.filename)) == "wavelab" and name not in ("errors", "cli"):
            return f"wavelab.{name}"
    return "wavelab"


def build_parser():
    p = argparse.ArgumentParser(prog="wave-lab", description="Inclined-force waves in a lumped elastic line.")
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--svg", action="store_true", default=None, help="also write an SVG snapshot")
    p.add_argument("--m", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--F0", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--beta-target", dest="beta_target", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--periods", type=float)
    p.add_argument("--phase-offset", dest="phase_offset", type=float)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {name: getattr(args, name) for name in OVERRIDES}
    try:
        cfg = load_config(args.config, overrides)
        if args.out is not None:
            cfg["output"]["dir"] = args.out
        if args.format is not None:
            cfg["output"]["format"] = args.format
        if args.svg:
            cfg["output"]["svg"] = True
        fmt = cfg["output"]["format"]
        if fmt not in ("csv", "json"):
            cfg.fail("output", "format", f"must be csv or json, got {fmt!r}")
        params = line_params(cfg)
    except ConfigError as exc:
        print(f"wave-lab: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    out = Output(cfg["output"]["dir"], fmt, bool(cfg["output"]["svg"]))
    try:
        os.makedirs(out.directory, exist_ok=True)
        files, ok = RUNNERS[args.mode](cfg, params, out)
    except ConfigError as exc:
        print(f"wave-lab: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except WaveLabError as exc:
        print(f"wave-lab: {_kernel_module(exc)}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_KERNEL
    except OSError as exc:
        print(f"wave-lab: I/O error: {exc}", file=sys.stderr)
        return EXIT_KERNEL
    for path in files:
        print(path)
    return EXIT_OK if ok else EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
