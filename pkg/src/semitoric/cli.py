"""Command line interface: reports, self-checks, sweeps and figure data.

Exit codes: 0 success, 1 verification failure, 2 domain error, 3 numeric failure.
"""
from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__, taylor, verify
from . import global_invariants as glob
from .errors import DomainError, SemitoricError
from .params import ModelParams, ParamChart, classify_fixed_point, from_chart

SCHEMA_VERSION = 1


def _g17(x: float) -> str:
    return f"{x:.17g}"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _params(r1, r2, t) -> ModelParams:
    try:
        return ModelParams(r1, r2, t)
    except DomainError as exc:
        raise click.exceptions.Exit(_fail(exc)) from None


def _fail(exc: SemitoricError) -> int:
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    return exc.exit_code


def build_report(p: ModelParams, cloud_points: int = 20_000, seed: int = 0) -> tuple[dict, int]:
    """Invariant report and its exit code (2 when there is no focus-focus point)."""
    kind = classify_fixed_point(p)
    rep = {"schema_version": SCHEMA_VERSION, "parameters": {"R1": p.R1, "R2": p.R2, "t": p.t},
           "classification": kind.value, "n_FF": kind.n_ff, "critical_interval": dict(vars(p.interval))}
    if kind.n_ff == 0:
        return rep, 2
    s = taylor.closed_form(p)
    h_c, h_n = glob.height_closed_form(p).h, glob.height_numeric(p).h
    fit = taylor.recover_coefficients(p, seed=seed)
    k, corner = glob.twisting_index(p, cloud_points)
    rep["taylor"] = s.as_dict()
    rep["height"] = h_c
    rep["twisting_index"] = k
    rep["polygons"] = [poly.to_json() for poly in glob.polygon_family(p)]
    rep["residuals"] = {
        "height_closed_vs_quadrature": abs(h_c - h_n),
        "taylor_closed_vs_regression": float(np.max(np.abs(s.differences(fit)))),
        "reverse_symmetry": taylor.reverse_symmetry_check(p).max_residual,
        "hull_corner_distance": corner,
    }
    return rep, 0


@click.group()
@click.version_option(__version__)
def main():
    """Invariants of the coupled angular momenta."""


@main.command()
@click.option("--r1", type=float, default=1.0, show_default=True)
@click.option("--r2", type=float, default=2.0, show_default=True)
@click.option("--t", "t", type=float, default=0.5, show_default=True)
@click.option("--cloud-points", type=int, default=20_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def invariants(r1, r2, t, cloud_points, seed, out):
    """JSON report of n_FF, Taylor coefficients, height and polygons."""
    p = _params(r1, r2, t)
    try:
        rep, code = build_report(p, cloud_points, seed)
    except SemitoricError as exc:
        sys.exit(_fail(exc))
    _emit(json.dumps(rep, indent=2) + "\n", out)
    sys.exit(code)


@main.command(name="verify")
@click.option("--suite", type=click.Choice(["elliptic", "roots", "abelian", "series", "taylor", "global", "all"]),
              default="all", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def verify_cmd(suite, seed):
    """Run the numerical self-checks; exit 1 if any fails."""
    checks = verify.run(suite, seed)
    for c in checks:
        click.echo(c.line())
    bad = sum(not c.passed for c in checks)
    click.echo(f"{len(checks) - bad}/{len(checks)} passed")
    sys.exit(1 if bad else 0)


def _field(c: ParamChart, name: str) -> float:
    p = from_chart(c)
    if name == "height":
        return glob.height_closed_form(p).h
    return getattr(taylor.closed_form(p), name)


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        n, m = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise click.BadParameter("grid must look like NxM") from None
    if n < 1 or m < 1:
        raise click.BadParameter("grid sizes must be positive")
    return n, m


@main.command()
@click.option("--chart", type=click.Choice(["uv"]), default="uv", show_default=True)
@click.option("--grid", default="21x21", show_default=True, help="NxM cells over u and v")
@click.option("--field", "field_", type=click.Choice(["c_l", "c_j", "c_ll", "c_lj", "c_jj", "height"]),
              default="height", show_default=True)
@click.option("--u-range", nargs=2, type=float, default=(-2.0, 2.0), show_default=True)
@click.option("--v-range", nargs=2, type=float, default=(-4.0, 4.0), show_default=True)
@click.option("--kappa", type=float, default=1.0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def sweep(chart, grid, field_, u_range, v_range, kappa, out):
    """CSV rows u,v,value,reason over a chart grid."""
    n, m = _parse_grid(grid)
    if not all(map(math.isfinite, (*u_range, *v_range))):
        raise click.BadParameter("grid bounds must be finite")
    lines = ["u,v,value,reason"]
    for u in np.linspace(*u_range, n):
        for v in np.linspace(*v_range, m):
            try:
                val, why = _field(ParamChart(float(u), float(v), kappa), field_), ""
            except SemitoricError as exc:
                val, why = float("nan"), type(exc).__name__
            lines.append(f"{_g17(u)},{_g17(v)},{_g17(val)},{why}")
    _emit("\n".join(lines) + "\n", out)


def polygon_svg(poly: glob.WeightedPolygon, scale: float) -> str:
    """Plain SVG 1.1 drawing with the cut line and the focus-focus marker."""
    box = 6.0 * scale
    pts = " ".join(f"{x:.9g},{-y:.9g}" for x, y in poly.vertices)
    ys = [y for _, y in poly.vertices]
    y0, y1 = -max(ys), -min(ys)
    cut_end = y0 if poly.epsilon > 0 else y1
    sw = 0.01 * box
    return (f'<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{-box} {-box} {2 * box} {2 * box}">\n'
            f'  <polygon points="{pts}" fill="#dde6f0" stroke="black" stroke-width="{sw:.4g}"/>\n'
            f'  <line x1="{poly.lam}" y1="0" x2="{poly.lam}" y2="{cut_end:.9g}" stroke="black" '
            f'stroke-dasharray="{2 * sw:.4g}" stroke-width="{sw:.4g}"/>\n'
            f'  <circle cx="0" cy="0" r="{2 * sw:.4g}" fill="red"/>\n'
            f'  <!-- epsilon={poly.epsilon} k={poly.k} -->\n'
            f'</svg>\n')


@main.command()
@click.option("--r1", type=float, default=1.0, show_default=True)
@click.option("--r2", type=float, default=2.0, show_default=True)
@click.option("--t", "t", type=float, default=0.5, show_default=True)
@click.option("--k-range", nargs=2, type=int, default=(-2, 2), show_default=True)
@click.option("--format", "fmt", type=click.Choice(["svg", "json"]), default="json", show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False), default=".", show_default=True)
def polygons(r1, r2, t, k_range, fmt, out_dir):
    """One file per (epsilon, k) representative."""
    p = _params(r1, r2, t)
    outdir = Path(out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        fam = glob.polygon_family(p, range(k_range[0], k_range[1] + 1))
    except SemitoricError as exc:
        sys.exit(_fail(exc))
    scale = max(p.R1, p.R2)
    for poly in fam:
        name = outdir / f"polygon_eps{'+' if poly.epsilon > 0 else '-'}1_k{poly.k:+d}.{fmt}"
        if fmt == "json":
            d = poly.to_json() | {"schema_version": SCHEMA_VERSION, "ff": [0.0, 0.0]}
            name.write_text(json.dumps(d, indent=2) + "\n")
        else:
            name.write_text(polygon_svg(poly, scale))
        click.echo(str(name))


@main.command(name="momentum-cloud")
@click.option("--r1", type=float, default=1.0, show_default=True)
@click.option("--r2", type=float, default=2.0, show_default=True)
@click.option("--t", "t", type=float, default=0.5, show_default=True)
@click.option("--points", type=click.IntRange(min=1), default=10_000, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def momentum_cloud(r1, r2, t, points, out):
    """CSV l,h,nu2 of (L, H) and the privileged action on a phase-space grid."""
    p = _params(r1, r2, t)
    try:
        c = glob.privileged_map_sample(p, points)
    except SemitoricError as exc:
        sys.exit(_fail(exc))
    buf = [f"# grid={c.grid[0]}x{c.grid[1]}x{c.grid[2]} skipped_singular={c.skipped}", "l,h,nu2"]
    buf += [f"{_g17(a)},{_g17(b)},{_g17(x)}" for a, b, x in zip(c.L, c.H, c.nu2)]
    _emit("\n".join(buf) + "\n", out)


if __name__ == "__main__":  # pragma: no cover
    main()
