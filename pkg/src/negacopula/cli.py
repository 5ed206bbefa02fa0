"""Batch command-line front end.

Subcommands: ``fit`` (two-stage fitting pipeline on a CSV), ``sample`` (copula or
bivariate draws), ``measures`` (dependence measures and their theta curve),
``audit`` (the certification suite), and ``plot-data`` (long-format grids
for external plotting; no images are rendered).

Exit codes: 0 success, 1 audit failure, 2 usage or data error, 3 the model
is inapplicable (nonnegative empirical dependence).  Every run is a pure
function of its flags and seed; JSON output embeds the resolved config and
the RNG algorithm identifier.
"""

from __future__ import annotations

import csv
import json
import math
import sys

import click
import numpy as np

from . import __version__, audit as audit_mod, copula, estimation, marginals, sampling
from .bivariate import BivariateModel

SEED_ENVVAR = "NEGACOPULA_SEED"


class DataError(click.ClickException):
    exit_code = 2


class ModelInapplicable(click.ClickException):
    exit_code = 3


def _fmt(x):
    # shortest round-trip decimal; keeps output files diff-stable
    return repr(float(x))


def _write_text(text, output):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="") as fh:
            fh.write(text)


def _write_json(obj, output):
    _write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", output)


def _csv_lines(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def _read_columns(path, xcol, ycol):
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise DataError(f"{path}: empty file, header row required")
            for col in (xcol, ycol):
                if col not in reader.fieldnames:
                    raise DataError(
                        f"{path}: no column {col!r}; available: {', '.join(reader.fieldnames)}"
                    )
            x, y = [], []
            for lineno, row in enumerate(reader, start=2):
                for col, acc in ((xcol, x), (ycol, y)):
                    raw = (row.get(col) or "").strip()
                    if raw == "" or raw.upper() == "NA":
                        acc.append(math.nan)
                        continue
                    try:
                        acc.append(float(raw))
                    except ValueError:
                        raise DataError(
                            f"{path}:{lineno}: cannot parse {col}={raw!r} as a number"
                        ) from None
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    return np.array(x), np.array(y)


def _parse_margin(spec):
    """Parse 'family:p1,p2' or 'family:name=value,...' into a marginal model."""
    try:
        family, _, rest = spec.partition(":")
        family = family.strip().lower()
        parts = [p for p in rest.split(",") if p.strip()]
        if any("=" in p for p in parts):
            params = {}
            for p in parts:
                key, _, val = p.partition("=")
                params[key.strip()] = float(val)
            return marginals.family_from_dict(family, params)
        values = [float(p) for p in parts]
        order = {
            "exponential": ["rate"],
            "weibull": ["rate", "shape"],
            "gamma": ["shape", "scale"],
            "lognormal": ["mu", "sigma"],
            "baseline_y": ["lam", "mu"],
        }[family]
        if len(values) != len(order):
            raise ValueError(f"{family} takes {len(order)} parameters {order}")
        return marginals.family_from_dict(family, dict(zip(order, values)))
    except (KeyError, ValueError) as exc:
        raise DataError(f"bad marginal spec {spec!r}: {exc}") from None


def _model_from_report(path):
    try:
        with open(path) as fh:
            report = json.load(fh)
        margins = report["marginals"]
        mx = marginals.family_from_dict(margins["x"]["family"], margins["x"]["params"])
        my = marginals.family_from_dict(margins["y"]["family"], margins["y"]["params"])
        return BivariateModel(mx, my, report["theta_hat"])
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot load fitted model from {path}: {exc}") from None


def _checked_theta(theta):
    try:
        return copula.check_theta(theta)
    except ValueError as exc:
        raise DataError(str(exc)) from None


@click.group()
@click.version_option(version=__version__)
def main():
    """Negative-dependence copula toolkit."""


@main.command()
@click.option("--input", "input_path", required=True, help="CSV file with a header row.")
@click.option("--xcol", required=True, help="Column for the first variable.")
@click.option("--ycol", required=True, help="Column for the second variable.")
@click.option("--bootstrap", "bootstrap_b", default=10000, show_default=True)
@click.option("--seed", envvar=SEED_ENVVAR, default=0, show_default=True)
@click.option(
    "--families",
    default="lognormal,weibull,gamma",
    show_default=True,
    help="Comma-separated candidate marginal families.",
)
@click.option(
    "--method",
    type=click.Choice(["rho_inversion", "tau_inversion"]),
    default="rho_inversion",
    show_default=True,
)
@click.option(
    "--ks-compare",
    type=click.Choice(["data_ecdf", "sample_ecdf"]),
    default="data_ecdf",
    show_default=True,
    help="Bootstrap KS protocol: data_ecdf is conservative, sample_ecdf is calibrated.",
)
@click.option("--at", default="", help="Comma-separated x values for conditional curves.")
@click.option("--output", default=None, help="Write JSON here instead of stdout.")
def fit(input_path, xcol, ycol, bootstrap_b, seed, families, method, ks_compare, at, output):
    """Run the two-stage fitting pipeline on a CSV and emit a JSON report."""
    x, y = _read_columns(input_path, xcol, ycol)
    try:
        data = estimation.PairedData.from_columns(x, y)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    conditioning = tuple(float(v) for v in at.split(",") if v.strip())
    config = estimation.FitConfig(
        families=tuple(f.strip() for f in families.split(",") if f.strip()),
        method=method,
        bootstrap_B=bootstrap_b,
        seed=seed,
        ks_compare_to=ks_compare,
        conditioning_x=conditioning,
    )
    try:
        report = estimation.fit_pipeline(data, config)
    except estimation.PositiveDependence as exc:
        raise ModelInapplicable(str(exc)) from None
    except (estimation.ConstantColumn, marginals.NonPositiveData, ValueError) as exc:
        raise DataError(str(exc)) from None
    _write_json(report.to_dict(), output)


@main.command()
@click.option("--theta", required=True, type=float)
@click.option("--n", default=500, show_default=True)
@click.option("--seed", envvar=SEED_ENVVAR, default=0, show_default=True)
@click.option("--margin-x", default=None, help="e.g. gamma:7.171,1.375")
@click.option("--margin-y", default=None, help="e.g. gamma:1.7,24.775")
@click.option("--output", default=None)
def sample(theta, n, seed, margin_x, margin_y, output):
    """Draw pairs from the copula (or a composed bivariate model) as CSV."""
    theta = _checked_theta(theta)
    if n < 1:
        raise DataError("n must be at least 1")
    if (margin_x is None) != (margin_y is None):
        raise DataError("give both --margin-x and --margin-y, or neither")
    if margin_x is None:
        batch = sampling.sample_copula(n, theta, seed)
        text = _csv_lines(["u", "v"], zip(batch.u, batch.v))
    else:
        model = BivariateModel(_parse_margin(margin_x), _parse_margin(margin_y), theta)
        xs, ys = sampling.sample_bivariate(n, model, seed)
        text = _csv_lines(["x", "y"], zip(xs, ys))
    _write_text(text, output)


@main.command()
@click.option("--theta", default=None, type=float)
@click.option("--grid", default=None, type=int, help="Emit a theta curve as CSV instead.")
@click.option("--output", default=None)
def measures(theta, grid, output):
    """Closed-form Spearman rho and Kendall tau."""
    if grid is not None:
        if grid < 2:
            raise DataError("grid must be at least 2")
        thetas = np.logspace(-2, 2, grid)
        rows = [(t, copula.spearman_rho(t), copula.kendall_tau(t)) for t in thetas]
        _write_text(_csv_lines(["theta", "rho", "tau"], rows), output)
        return
    if theta is None:
        raise DataError("give --theta or --grid")
    theta = _checked_theta(theta)
    _write_json(
        {
            "theta": theta,
            "rho": copula.spearman_rho(theta),
            "tau": copula.kendall_tau(theta),
        },
        output,
    )


@main.command()
@click.option("--theta", default=None, type=float)
@click.option("--theta1", default=None, type=float)
@click.option("--theta2", default=None, type=float)
@click.option("--grid", default=200, show_default=True)
@click.option("--n-rect", default=10000, show_default=True)
@click.option("--seed", envvar=SEED_ENVVAR, default=0, show_default=True)
@click.option("--output", default=None)
@click.pass_context
def audit(ctx, theta, theta1, theta2, grid, n_rect, seed, output):
    """Run the certification suite; nonzero exit if any check fails."""
    reports = []
    if theta is not None:
        reports.extend(
            audit_mod.standard_suite(_checked_theta(theta), grid=grid, n_rect=n_rect, seed=seed)
        )
    if (theta1 is None) != (theta2 is None):
        raise DataError("give both --theta1 and --theta2, or neither")
    if theta1 is not None:
        t1, t2 = _checked_theta(theta1), _checked_theta(theta2)
        if t1 > t2:
            raise DataError("theta1 must not exceed theta2")
        reports.extend(audit_mod.ordering_suite(t1, t2, grid=grid, n_quad=n_rect, seed=seed))
    if not reports:
        raise DataError("give --theta and/or a --theta1/--theta2 pair")
    _write_json([r.to_dict() for r in reports], output)
    if not all(r.passed for r in reports):
        ctx.exit(1)


@main.command("plot-data")
@click.option(
    "--what",
    type=click.Choice(["cdf", "pdf", "joint-cdf", "joint-pdf", "cond"]),
    default="cdf",
    show_default=True,
)
@click.option("--theta", default=None, type=float, help="Copula surfaces (cdf/pdf).")
@click.option("--model", "model_path", default=None, help="Fit report JSON for fitted surfaces.")
@click.option("--grid", default=101, show_default=True)
@click.option("--at", default="", help="Conditioning x values for --what cond.")
@click.option("--output", default=None)
def plot_data(what, theta, model_path, grid, at, output):
    """Emit long-format CSV grids reproducing the module operations exactly."""
    if grid < 2:
        raise DataError("grid must be at least 2")
    if what in ("cdf", "pdf"):
        if theta is None:
            raise DataError(f"--what {what} needs --theta")
        theta = _checked_theta(theta)
        g = np.linspace(0.0, 1.0, grid)
        fn = copula.cdf if what == "cdf" else copula.pdf
        if what == "pdf":
            g = np.clip(g, 1e-12, 1.0 - 1e-12)
        rows = [(u, v, fn(u, v, theta)) for u in g for v in g]
        _write_text(_csv_lines(["u", "v", "value"], rows), output)
        return
    if model_path is None:
        raise DataError(f"--what {what} needs --model (a fit report JSON)")
    model = _model_from_report(model_path)
    qs = np.linspace(0.005, 0.995, grid)
    xg = model.margin_x.quantile(qs)
    yg = model.margin_y.quantile(qs)
    if what == "cond":
        values = tuple(float(v) for v in at.split(",") if v.strip())
        if not values:
            raise DataError("--what cond needs --at x1,x2,...")
        rows = [
            (yv, float(model.cond_cdf_y_given_x(yv, xc)), xc)
            for xc in values
            for yv in yg
        ]
        _write_text(_csv_lines(["y", "cdf", "conditioning_x"], rows), output)
        return
    fn = model.joint_cdf if what == "joint-cdf" else model.joint_pdf
    rows = [(xv, yv, float(fn(xv, yv))) for xv in xg for yv in yg]
    _write_text(_csv_lines(["x", "y", "value"], rows), output)


if __name__ == "__main__":
    main()
