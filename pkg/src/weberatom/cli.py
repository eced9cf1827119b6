"""Command-line front end: deterministic CSV/JSON output for every computation.

Subcommands:

    spectrum     energy-level comparison table
    orbit        rosette trace CSV + measurement summary JSON
    action       radial action by one or all methods
    delay-check  retarded-action Taylor checks on a randomized loop corpus
    pp           proton-proton critical-radius / force-sign report

Exit codes: 0 success, 1 computational error, 2 usage error.  Identical flags
(and seed) produce byte-identical output files.  The WEBER_SPECTRA_THREADS
environment variable caps table parallelism (0 = auto).
"""

from __future__ import annotations

import json
import math
import sys

import click
import numpy as np

from . import actions, delay, dynamics, spectrum
from .errors import WeberError
from .hamiltonian import Model, ModelParams, Pair, PhaseState

SCHEMA_VERSION = 1
CODATA_ALPHA = 0.0072973525693

SPECTRUM_CSV_COLUMNS = [
    "n", "l", "n_r", "E_coulomb", "E_weber_2nd", "E_sommerfeld_2nd",
    "E_exact", "residual", "weber_minus_sommerfeld", "error",
]
TRACE_CSV_COLUMNS = ["t", "r", "phi", "p_r", "p_phi", "energy"]


def fmt_num(x, precision: int) -> str:
    """Plain decimal for 1e-6 <= |x| < 1e6, scientific outside; '.' separator."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    if 1e-6 <= abs(x) < 1e6:
        return f"{x:.{precision}g}"
    return f"{x:.{precision}e}"


def jnum(x, precision: int):
    """Float rounded to the output precision for JSON; None for nan/missing."""
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(fmt_num(x, precision))


def _write_text(path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv_text(columns, rows) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def _emit(text: str, out_path):
    if out_path:
        _write_text(out_path, text)
    else:
        click.echo(text, nl=False)


def _check_alpha(ctx, param, value):
    if not 0.0 <= value <= 0.2:
        raise click.BadParameter("alpha must lie in [0, 0.2] (formulas assume alpha << 1)")
    return value


def _check_precision(ctx, param, value):
    if not 6 <= value <= 17:
        raise click.BadParameter("precision must lie in [6, 17]")
    return value


alpha_option = click.option(
    "--alpha", type=float, default=CODATA_ALPHA, show_default=True,
    callback=_check_alpha, help="Fine structure constant.",
)
precision_option = click.option(
    "--precision", type=int, default=15, show_default=True,
    callback=_check_precision, help="Significant decimal digits in output.",
)


@click.group()
@click.version_option(version="0.1.0", prog_name="weberatom")
def cli():
    """Semiclassical spectra and orbits of Weber's hydrogen atom."""


@cli.command("spectrum")
@click.option("--n-max", type=click.IntRange(1, 20), default=5, show_default=True,
              help="Largest main quantum number.")
@alpha_option
@click.option("--tol", type=float, default=1e-12, show_default=True,
              help="Quantization-condition residual tolerance.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Output file (default: stdout).")
@precision_option
def cmd_spectrum(n_max, alpha, tol, fmt, out, precision):
    """Energy levels for all (n <= n-max, l <= n) by every method."""
    try:
        rows = spectrum.spectrum_table(n_max, alpha, tol)
    except (WeberError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    if fmt == "csv":
        csv_rows = [
            [
                str(r.n), str(r.ell), str(r.n_r),
                fmt_num(r.e_coulomb, precision),
                fmt_num(r.e_weber_2nd, precision),
                fmt_num(r.e_sommerfeld_2nd, precision),
                fmt_num(r.e_exact, precision),
                fmt_num(r.residual, precision),
                fmt_num(r.weber_minus_sommerfeld, precision),
                r.error or "",
            ]
            for r in rows
        ]
        _emit(_csv_text(SPECTRUM_CSV_COLUMNS, csv_rows), out)
    else:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "kind": "spectrum",
            "alpha": jnum(alpha, precision),
            "n_max": n_max,
            "tol": jnum(tol, precision),
            "rows": [
                {
                    "n": r.n,
                    "l": r.ell,
                    "n_r": r.n_r,
                    "E_coulomb": jnum(r.e_coulomb, precision),
                    "E_weber_2nd": jnum(r.e_weber_2nd, precision),
                    "E_sommerfeld_2nd": jnum(r.e_sommerfeld_2nd, precision),
                    "E_exact": jnum(r.e_exact, precision),
                    "residual": jnum(r.residual, precision),
                    "weber_minus_sommerfeld": jnum(r.weber_minus_sommerfeld, precision),
                    "error": r.error,
                }
                for r in rows
            ],
        }
        _emit(_json_text(payload), out)
    if any(r.error for r in rows):
        sys.exit(1)


def _fit_rosette_shape(trace, tp, apsidal):
    """Least-squares fit of r(phi) = c0 (1 + kappa cos(gamma (phi - phi0)))."""
    from scipy.optimize import least_squares

    r = trace.r
    phi = trace.phi
    if len(r) > 20000:
        idx = np.linspace(0, len(r) - 1, 20000).astype(int)
        r, phi = r[idx], phi[idx]
    c0 = 0.5 * (tp.r_min + tp.r_max)
    kappa = (tp.r_max - tp.r_min) / (tp.r_max + tp.r_min)
    gamma = 2.0 * math.pi / apsidal
    peri = [a for a in trace.apsides if a.kind is dynamics.ApsisKind.PERIPROTON]
    phi0 = (peri[0].phi - math.pi / gamma) if peri else 0.0

    def resid(p):
        return p[0] * (1.0 + p[1] * np.cos(p[2] * (phi - p[3]))) - r

    sol = least_squares(
        resid,
        x0=[c0, min(kappa, 0.99), gamma, phi0],
        bounds=([1e-12, 0.0, 1e-12, -np.inf], [np.inf, 0.999999, np.inf, np.inf]),
    )
    rms = float(np.sqrt(np.mean(sol.fun**2)))
    return {"scale": sol.x[0], "kappa": sol.x[1], "gamma": sol.x[2],
            "phi0": sol.x[3], "rms_residual": rms}


@cli.command("orbit")
@click.option("--energy", type=float, required=True, help="Orbit energy (must be < 0).")
@click.option("--l", "ell", type=click.IntRange(min=1), required=True,
              help="Angular momentum quantum number.")
@alpha_option
@click.option("--periods", type=float, default=3.0, show_default=True,
              help="Duration in radial periods.")
@click.option("--step", type=float, default=1e-3, show_default=True)
@click.option("--scheme", type=click.Choice([s.value for s in dynamics.Scheme]),
              default=dynamics.Scheme.GAUSS_LEGENDRE4.value, show_default=True)
@click.option("--stride", type=click.IntRange(min=1), default=1, show_default=True,
              help="Store every k-th state in the trace.")
@click.option("--shape-fit", is_flag=True,
              help="Fit r = c0 (1 + kappa cos(gamma phi)) to the trace.")
@click.option("--closure-tol", type=float, default=1e-7, show_default=True,
              help="Tolerance for the rational-closure classification.")
@click.option("--out", type=click.Path(writable=True), default=None,
              help="Base path: writes BASE.csv (trace) and BASE.json (summary).")
@precision_option
def cmd_orbit(energy, ell, alpha, periods, step, scheme, stride, shape_fit,
              closure_tol, out, precision):
    """Integrate a rosette started at its periproton and measure its shift."""
    if periods <= 0:
        raise click.BadParameter("--periods must be positive")
    if step <= 0:
        raise click.BadParameter("--step must be positive")
    try:
        tp = actions.turning_points(energy, ell, alpha)
        t_radial = actions.radial_period(energy, ell, alpha)
        apsidal = actions.apsidal_angle(energy, ell, alpha)
        config = dynamics.IntegratorConfig(
            step=step, scheme=dynamics.Scheme(scheme), store_stride=stride
        )
        params = ModelParams(alpha=alpha, pair=Pair.ELECTRON_PROTON, model=Model.WEBER)
        initial = PhaseState(t=0.0, r=tp.r_min, phi=0.0, p_r=0.0, p_phi=float(ell))
        trace = dynamics.integrate(initial, params, periods * t_radial, config)
        shift = dynamics.measure_periproton_shift(trace)
        closure = dynamics.rosette_closure(shift.shift, tol=closure_tol)
    except (WeberError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    summary = {
        "schema_version": SCHEMA_VERSION,
        "kind": "orbit",
        "energy": jnum(energy, precision),
        "l": ell,
        "alpha": jnum(alpha, precision),
        "periods": jnum(periods, precision),
        "step": jnum(step, precision),
        "scheme": scheme,
        "stride": stride,
        "radial_period": jnum(t_radial, precision),
        "turning_points": {
            "r_min": jnum(tp.r_min, precision),
            "r_max": jnum(tp.r_max, precision),
        },
        "n_states": len(trace),
        "energy_drift": jnum(trace.energy_drift, precision),
        "p_phi_drift": jnum(trace.p_phi_drift, precision),
        "apsides_count": len(trace.apsides),
        "periproton_shift": {
            "shift": jnum(shift.shift, precision),
            "std": jnum(shift.std, precision),
            "n_periprotons": shift.n_periprotons,
        },
        "apsidal_angle": jnum(apsidal, precision),
        "apsidal_shift": jnum(apsidal - 2.0 * math.pi, precision),
        "shift_vs_quadrature_diff": jnum(
            shift.shift - (apsidal - 2.0 * math.pi), precision
        ),
        "closure": {
            "periodic": closure.periodic,
            "p": closure.p,
            "q": closure.q,
            "label": closure.label(),
        },
    }
    if shape_fit:
        fit = _fit_rosette_shape(trace, tp, apsidal)
        summary["shape_fit"] = {k: jnum(v, precision) for k, v in fit.items()}

    if out:
        energies = trace.energies()
        csv_rows = [
            [
                fmt_num(trace.t[i], precision), fmt_num(trace.r[i], precision),
                fmt_num(trace.phi[i], precision), fmt_num(trace.p_r[i], precision),
                fmt_num(trace.p_phi[i], precision), fmt_num(energies[i], precision),
            ]
            for i in range(len(trace))
        ]
        _write_text(str(out) + ".csv", _csv_text(TRACE_CSV_COLUMNS, csv_rows))
        _write_text(str(out) + ".json", _json_text(summary))
    else:
        click.echo(_json_text(summary), nl=False)


@cli.command("action")
@click.option("--energy", type=float, required=True)
@click.option("--l", "ell", type=click.IntRange(min=1), required=True)
@alpha_option
@click.option("--method", type=click.Choice(["quadrature", "closed", "all"]),
              default="all", show_default=True)
@click.option("--tol", type=float, default=1e-10, show_default=True,
              help="Relative tolerance of the adaptive quadrature.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@precision_option
def cmd_action(energy, ell, alpha, method, tol, out, precision):
    """Radial action n_r by quadrature and/or the closed-form expression."""
    results = {}
    try:
        if method in ("quadrature", "all"):
            q = actions.radial_action_quadrature(energy, ell, alpha, rel_tol=tol)
            results["quadrature"] = {
                "value": jnum(q.value, precision),
                "est_error": jnum(q.est_error, precision),
            }
        if method in ("closed", "all"):
            c = actions.radial_action_closed_form(energy, ell, alpha)
            results["closed_form"] = {
                "value": jnum(c.value, precision),
                "est_error": jnum(c.est_error, precision),
            }
    except (WeberError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "action",
        "energy": jnum(energy, precision),
        "l": ell,
        "alpha": jnum(alpha, precision),
        "tol": jnum(tol, precision),
        "results": results,
    }
    if method == "all":
        payload["quadrature_minus_closed_form"] = jnum(
            results["quadrature"]["value"] - results["closed_form"]["value"], precision
        )
    _emit(_json_text(payload), out)


@cli.command("delay-check")
@click.option("--alpha", type=float, default=0.04, show_default=True,
              callback=_check_alpha,
              help="Largest alpha of the truncation-order study {a, a/2, a/4}.")
@click.option("--corpus-size", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--samples", type=int, default=1024, show_default=True,
              help="Loop samples (power of two >= 64).")
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--loops-csv", type=click.Path(exists=True, dir_okay=False), multiple=True,
              help="Load loops from CSV files (one column of samples per file) "
                   "instead of generating a random corpus.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@precision_option
def cmd_delay_check(alpha, corpus_size, samples, seed, loops_csv, out, precision):
    """Verify S1 = 0, the S2 formula and the truncation order on random loops."""
    s1_threshold = 1e-7
    s2_threshold = 1e-5
    ratio_window = (6.0, 10.0)
    try:
        if loops_csv:
            corpus = [delay.load_loop_csv(path) for path in loops_csv]
        else:
            corpus = delay.random_loop_corpus(corpus_size, n_samples=samples, seed=seed)
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    loops_report = []
    for i, loop in enumerate(corpus):
        s1 = delay.taylor_coefficient_numeric(loop, 1)
        s2n = delay.taylor_coefficient_numeric(loop, 2)
        s2a = delay.taylor_coefficient_analytic(loop, 2)
        loops_report.append({
            "index": i,
            "s1_numeric": jnum(s1, precision),
            "s2_numeric": jnum(s2n, precision),
            "s2_analytic": jnum(s2a, precision),
            "s2_mismatch": jnum(abs(s2n - s2a), precision),
            "s1_pass": bool(abs(s1) < s1_threshold),
            "s2_pass": bool(abs(s2n - s2a) < s2_threshold),
        })
    check_loop = delay.truncation_check_loop(samples)
    alphas = [alpha, alpha / 2.0, alpha / 4.0]
    errors = [delay.truncation_error(check_loop, a) for a in alphas]
    ratios = [errors[0] / errors[1], errors[1] / errors[2]]
    ratios_pass = all(ratio_window[0] <= r <= ratio_window[1] for r in ratios)
    all_pass = ratios_pass and all(l["s1_pass"] and l["s2_pass"] for l in loops_report)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "delay-check",
        "alpha": jnum(alpha, precision),
        "corpus_size": len(corpus),
        "samples": samples,
        "seed": seed,
        "loops_csv": list(loops_csv) or None,
        "thresholds": {
            "s1_abs": jnum(s1_threshold, precision),
            "s2_abs": jnum(s2_threshold, precision),
            "ratio_window": [ratio_window[0], ratio_window[1]],
        },
        "loops": loops_report,
        "truncation": {
            "alphas": [jnum(a, precision) for a in alphas],
            "errors": [jnum(e, precision) for e in errors],
            "ratios": [jnum(r, precision) for r in ratios],
            "pass": bool(ratios_pass),
        },
        "all_pass": bool(all_pass),
    }
    _emit(_json_text(payload), out)
    if not all_pass:
        sys.exit(1)


@cli.command("pp")
@click.option("--alpha", type=float, default=0.1, show_default=True,
              callback=_check_alpha)
@click.option("--r0", type=float, required=True, help="Initial separation.")
@click.option("--duration", type=float, default=1e-4, show_default=True)
@click.option("--step", type=float, default=1e-7, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@precision_option
def cmd_pp(alpha, r0, duration, step, out, precision):
    """Critical radius, metric signature and force sign for two protons
    released at rest at separation r0."""
    if r0 <= 0:
        raise click.BadParameter("--r0 must be positive")
    if duration <= 0 or step <= 0:
        raise click.BadParameter("--duration and --step must be positive")
    try:
        initial = PhaseState(t=0.0, r=r0, phi=0.0, p_r=0.0, p_phi=0.0)
        config = dynamics.IntegratorConfig(step=step)
        report = dynamics.pp_probe(initial, alpha, duration, config)
    except (WeberError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "pp",
        "alpha": jnum(alpha, precision),
        "r0": jnum(r0, precision),
        "duration": jnum(duration, precision),
        "step": jnum(step, precision),
        "critical_radius": jnum(report.critical_radius, precision),
        "signature": report.signature,
        "r_ddot": jnum(report.r_ddot, precision),
        "repulsive": report.repulsive,
        "crossed": report.crossed,
        "crossing_time": jnum(report.crossing_time, precision),
    }
    _emit(_json_text(payload), out)


def main():
    cli()


if __name__ == "__main__":
    main()
