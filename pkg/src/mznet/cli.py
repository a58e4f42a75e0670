"""Batch command-line front end.

Loads JSON configuration documents, runs the library operations, and
emits CSV/JSON datasets (sensitivity sweeps, optimization results, gain
curves, spectra, Haar ensembles) together with a run manifest for
reproducibility.  Exit codes: 0 ok, 2 parse error, 3 domain error,
4 partial sweep failure, 5 oracle cross-validation breach.
"""

from __future__ import annotations

import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import click
import numpy as np

from . import __version__
from .errors import MznetError
from .estimation import (
    SensitivityReport,
    variance_emom,
    variance_eqcr,
    variance_smom,
    variance_sqcr,
)
from .network_model import (
    CoefficientVector,
    SeparableConfig,
    circuit_vector_from_unitary,
    entangled_config_from_json,
    entangled_config_to_json,
    inverse_moment_matrix,
    qfim,
    squeeze_factor,
)
from .gaussian_oracle import oracle_moment_matrix, oracle_qfim
from .optimization import (
    OptimizationProblem,
    analytic_optimum_vave,
    bounds_emom,
    bounds_eqcr,
    gain as gain_op,
    gain2_analytic,
    gain2_vave_exact,
    gain4_analytic,
    gain4_curve,
    minimize_emom,
    minimize_eqcr,
)
from .spectra import (
    ensemble_optimal_squeezing,
    ensemble_optimal_variance,
    fisher_spectrum,
    haar_mean_prediction,
    haar_weight_statistic,
    sample_haar_circuit,
    squeezing_spectrum,
)

#: Environment variable (test hook): multiplies the oracle matrices by
#: (1 + value) inside ``oracle-check`` so the checker itself can be
#: validated to fail on an injected discrepancy.
PERTURB_ENV = "MZNET_ORACLE_PERTURB"

_SCALES = {
    "desk": {"sweep_points": 25, "samples": 1000},
    "paper": {"sweep_points": 60, "samples": 10000},
}


def _fail(code: int, message: str) -> None:
    click.echo(message, err=True)
    sys.exit(code)


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        _fail(2, f"could not parse vector {text!r}")


def _load_doc(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        _fail(2, f"cannot read config file: {exc}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(2, f"malformed JSON in {path}: {exc}")
    if not isinstance(doc, dict):
        _fail(2, f"config document must be a JSON object: {path}")
    return doc


def _fmt_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt_cell(c) for c in row))
    path.write_text("\n".join(lines) + "\n", newline="\n")


def _json_default(obj):
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


class _Run:
    """Per-invocation context: global flags plus manifest bookkeeping."""

    def __init__(self, seed, out, fmt, scale):
        self.seed = seed
        self.out = Path(out) if out else None
        self.fmt = fmt
        self.scale = scale
        self.started = datetime.now(timezone.utc).isoformat()
        self.outputs: list[str] = []

    @property
    def sweep_points(self) -> int:
        return _SCALES[self.scale]["sweep_points"]

    @property
    def samples(self) -> int:
        return _SCALES[self.scale]["samples"]

    def outdir(self) -> Path:
        directory = self.out if self.out is not None else Path(".")
        directory.mkdir(parents=True, exist_ok=True)
        return directory

    def emit_table(self, name: str, header, rows) -> Path:
        directory = self.outdir()
        if self.fmt == "json":
            path = directory / f"{name}.json"
            docs = [dict(zip(header, row)) for row in rows]
            path.write_text(json.dumps(docs, indent=2, sort_keys=True, default=_json_default) + "\n")
        else:
            path = directory / f"{name}.csv"
            _write_csv(path, header, rows)
        self.outputs.append(str(path))
        return path

    def emit_json(self, name: str, doc: dict) -> Path:
        directory = self.outdir()
        path = directory / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")
        self.outputs.append(str(path))
        return path

    def write_manifest(self, command: str, parameters: dict) -> None:
        manifest = {
            "command": command,
            "parameters": parameters,
            "master_seed": self.seed,
            "tool_version": __version__,
            "started": self.started,
            "finished": datetime.now(timezone.utc).isoformat(),
            "outputs": list(self.outputs),
        }
        path = self.outdir() / f"{command}_manifest.json"
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


pass_run = click.make_pass_decorator(_Run)


@click.group()
@click.version_option(__version__, prog_name="mznet")
@click.option("--seed", type=int, default=0, help="Master seed for all randomness.")
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Output directory (default: print to stdout / current dir).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              help="Table output format.")
@click.option("--scale", type=click.Choice(["desk", "paper"]), default="desk",
              help="desk: 25 sweep points / 1e3 samples; paper: 60 / 1e4.")
@click.pass_context
def main(ctx, seed, out, fmt, scale):
    """Sensitivity analysis of squeezed-light interferometer networks."""
    ctx.obj = _Run(seed, out, fmt, scale)


def _domain_guard(func):
    import functools

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except MznetError as exc:
            _fail(3, f"{type(exc).__name__}: {exc}")

    return wrapper


# ---------------------------------------------------------------------------
# sensitivity
# ---------------------------------------------------------------------------


def _coefficients_from(doc: dict, v_text: str | None, d: int) -> CoefficientVector:
    if v_text is not None:
        return CoefficientVector(_parse_vector(v_text))
    if "v" in doc:
        return CoefficientVector(np.asarray(doc["v"], dtype=float))
    return CoefficientVector.average(d)


def _separable_from_doc(doc: dict) -> SeparableConfig:
    return SeparableConfig.from_photon_numbers(
        np.asarray(doc["alpha_sq"], dtype=float),
        np.asarray(doc["n_s"], dtype=float),
    )


@main.command()
@click.argument("config", type=click.Path(exists=False))
@click.option("--v", "v_text", default=None, help="Comma-separated coefficient vector.")
@pass_run
@_domain_guard
def sensitivity(run: _Run, config: str, v_text: str | None):
    """Compute the four variances of v . theta for a configuration file.

    The JSON document holds an entangled configuration (keys d, u_tilde
    or unitary/port/signs, alpha_sq, n_s, optional chi) and/or a
    "separable" object (alpha_sq and per-arm n_s arrays).
    """
    doc = _load_doc(config)
    ent_doc = doc.get("entangled", doc if ("u_tilde" in doc or "unitary" in doc) else None)
    sep_doc = doc.get("separable")
    if ent_doc is None and sep_doc is None:
        _fail(2, "config document holds neither an entangled nor a separable section")

    emom = smom = eqcr = sqcr = None
    flags = {}
    vec = None
    if ent_doc is not None:
        try:
            cfg = entangled_config_from_json(ent_doc)
        except (KeyError, TypeError) as exc:
            _fail(2, f"invalid entangled configuration: {exc}")
        vec = _coefficients_from(doc, v_text, cfg.d)
        emom = variance_emom(cfg, vec)
        eqcr = variance_eqcr(cfg, vec)
        flags["phase_matched"] = cfg.is_phase_matched
        flags["total_photons"] = cfg.total_photons
        flags["squeezed_fraction"] = cfg.squeezed_photons / cfg.total_photons
        flags["config"] = entangled_config_to_json(cfg)
    if sep_doc is not None:
        try:
            scfg = _separable_from_doc(sep_doc)
        except (KeyError, TypeError) as exc:
            _fail(2, f"invalid separable configuration: {exc}")
        svec = vec if vec is not None else _coefficients_from(doc, v_text, scfg.d)
        vec = svec
        smom = variance_smom(scfg, svec)
        sqcr = variance_sqcr(scfg, svec)
        flags["separable_total_photons"] = scfg.total_photons

    report = SensitivityReport(
        emom=emom, smom=smom, eqcr=eqcr, sqcr=sqcr,
        v=tuple(vec.entries.tolist()), config=flags,
    )
    click.echo(report.to_json())
    if run.out is not None:
        run.emit_json("sensitivity", json.loads(report.to_json()))
        run.write_manifest("sensitivity", {"config": config, "v": v_text})


# ---------------------------------------------------------------------------
# optimize / gain
# ---------------------------------------------------------------------------


def _result_doc(result) -> dict:
    doc = {
        "minimum_variance": result.minimum_variance,
        "arg_intensities": result.arg_intensities.tolist(),
        "arg_squeezed_photons": result.arg_squeezed_photons,
        "solver_status": result.solver_status,
        "restarts_used": result.restarts_used,
    }
    if result.arg_circuit is not None:
        doc["arg_circuit"] = result.arg_circuit.entries.tolist()
    if result.arg_squeezed_per_arm is not None:
        doc["arg_squeezed_per_arm"] = result.arg_squeezed_per_arm.tolist()
    return doc


@main.command()
@click.option("--v", "v_text", required=True, help="Comma-separated coefficient vector.")
@click.option("--n-total", type=float, required=True)
@click.option("--n-s", type=float, default=None, help="Fixed squeezed photons (C2-C4).")
@click.option("--constraint", type=click.Choice(["C1", "C2", "C3", "C4"]), default="C1")
@click.option("--strategy", type=click.Choice(["entangled", "separable"]), default="entangled")
@click.option("--objective", type=click.Choice(["emom", "eqcr"]), default="emom")
@click.option("--restarts", type=int, default=16)
@pass_run
@_domain_guard
def optimize(run: _Run, v_text, n_total, n_s, constraint, strategy, objective, restarts):
    """Minimize a sensitivity figure of merit under a resource constraint."""
    vec = CoefficientVector(_parse_vector(v_text))
    problem = OptimizationProblem(
        v=vec, total_photons=n_total, constraint=constraint,
        strategy=strategy, fixed_squeezed_photons=n_s,
    )
    solver = minimize_emom if objective == "emom" else minimize_eqcr
    result = solver(problem, seed=run.seed, restarts=restarts)
    doc = _result_doc(result)
    doc["objective"] = objective
    doc["constraint"] = constraint
    doc["strategy"] = strategy
    click.echo(json.dumps(doc, indent=2, sort_keys=True))
    if run.out is not None:
        run.emit_json("optimize", doc)
        run.write_manifest("optimize", {
            "v": v_text, "n_total": n_total, "n_s": n_s, "constraint": constraint,
            "strategy": strategy, "objective": objective, "restarts": restarts,
        })


@main.command()
@click.option("--v", "v_text", required=True)
@click.option("--n-total", type=float, required=True)
@click.option("--n-s", type=float, default=None)
@click.option("--constraint", type=click.Choice(["C1", "C2", "C3", "C4"]), default="C1")
@click.option("--restarts", type=int, default=16)
@pass_run
@_domain_guard
def gain(run: _Run, v_text, n_total, n_s, constraint, restarts):
    """Gain of the distributed over the separable strategy (moment-based)."""
    vec = CoefficientVector(_parse_vector(v_text))
    value, ent, sep = gain_op(constraint, vec, n_total, n_s, seed=run.seed, restarts=restarts)
    doc = {
        "gain": value,
        "constraint": constraint,
        "entangled": _result_doc(ent),
        "separable": _result_doc(sep),
    }
    if constraint == "C2" and n_s is not None:
        doc["gain_asymptotic"] = gain2_analytic(vec)
        doc["gain_vave_exact"] = gain2_vave_exact(vec.d, (n_total - n_s) / vec.d, n_s)
    if constraint == "C4" and n_s is not None:
        doc["gain_analytic"] = gain4_analytic(vec.d, n_total, n_s)
    click.echo(json.dumps(doc, indent=2, sort_keys=True))
    if run.out is not None:
        run.emit_json("gain", doc)
        run.write_manifest("gain", {
            "v": v_text, "n_total": n_total, "n_s": n_s,
            "constraint": constraint, "restarts": restarts,
        })


# ---------------------------------------------------------------------------
# spectrum / ensemble
# ---------------------------------------------------------------------------


@main.command()
@click.argument("config", type=click.Path(exists=False))
@click.option("--kind", type=click.Choice(["moment", "fisher"]), default="moment")
@pass_run
@_domain_guard
def spectrum(run: _Run, config: str, kind: str):
    """Eigendecomposition of the moment matrix or the Fisher matrix."""
    doc = _load_doc(config)
    ent_doc = doc.get("entangled", doc)
    try:
        cfg = entangled_config_from_json(ent_doc)
    except (KeyError, TypeError) as exc:
        _fail(2, f"invalid entangled configuration: {exc}")
    result = squeezing_spectrum(cfg) if kind == "moment" else fisher_spectrum(cfg)
    out = {
        "kind": kind,
        "eigenvalues": result.eigenvalues.tolist(),
        "max_eigenvalue": result.max_eigenvalue,
        "optimal_v": result.optimal_v.entries.tolist(),
        "optimal_variance": 1.0 / (result.max_eigenvalue * cfg.d),
        "degeneracy_classes": [list(c) for c in result.degeneracy_classes],
    }
    click.echo(json.dumps(out, indent=2, sort_keys=True))
    if run.out is not None:
        run.emit_json("spectrum", out)
        run.write_manifest("spectrum", {"config": config, "kind": kind})


_ENSEMBLE_HEADER = (
    "n_total", "mean", "rms", "optimal_n_s_mean", "optimal_n_s_rms",
    "sample_count", "seed",
)


@main.command()
@click.option("--d", type=int, required=True)
@click.option("--n-total", type=float, required=True)
@click.option("--n-s", type=float, default=None, help="Required for mode=variance.")
@click.option("--mode", type=click.Choice(["variance", "squeezing", "heisenberg"]),
              default="variance")
@click.option("--objective", type=click.Choice(["emom", "eqcr"]), default="emom")
@click.option("--samples", type=int, default=None, help="Override the scale default.")
@pass_run
@_domain_guard
def ensemble(run: _Run, d, n_total, n_s, mode, objective, samples):
    """Haar-random circuit ensemble statistics of the optimal variance."""
    count = samples if samples is not None else run.samples
    if mode == "variance":
        if n_s is None:
            _fail(2, "mode=variance requires --n-s")
        stats = ensemble_optimal_variance(d, n_total, n_s, count, run.seed, objective)
        row = (n_total, stats.mean, stats.rms, None, None, stats.sample_count, run.seed)
    else:
        obj = "eqcr" if mode == "heisenberg" else objective
        stats, arg = ensemble_optimal_squeezing(d, n_total, count, run.seed, obj)
        row = (n_total, stats.mean, stats.rms, arg.mean, arg.rms,
               stats.sample_count, run.seed)
    click.echo(",".join(_ENSEMBLE_HEADER))
    click.echo(",".join(_fmt_cell(c) for c in row))
    if run.out is not None:
        run.emit_table("ensemble", _ENSEMBLE_HEADER, [row])
        run.write_manifest("ensemble", {
            "d": d, "n_total": n_total, "n_s": n_s, "mode": mode,
            "objective": objective, "samples": count,
        })


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------


def _logspace(lo: float, hi: float, points: int) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), points)


def _minimize_pair(vec, n_total, n_s, seed, restarts=16):
    """Entangled minima of both objectives at fixed total and squeezed photons."""
    problem = OptimizationProblem(
        v=vec, total_photons=n_total, constraint="C3",
        strategy="entangled", fixed_squeezed_photons=n_s,
    )
    em = minimize_emom(problem, seed=seed, restarts=restarts)
    eq = minimize_eqcr(problem, seed=seed, restarts=restarts)
    return em.minimum_variance, eq.minimum_variance


def _figure_fig2a(run: _Run):
    d, n_s = 2, 100.0
    vec = CoefficientVector.average(d)
    header = ("n_total", "emom_min", "eqcr_min", "eq20", "eq21", "sn", "hl", "status")
    rows, failed = [], False
    for n_t in _logspace(1e3, 1e9, run.sweep_points):
        try:
            emom_min, eqcr_min = _minimize_pair(vec, n_t, n_s, run.seed)
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                eq20 = analytic_optimum_vave(d, n_t, n_s, "emom")
            eq21 = analytic_optimum_vave(d, n_t, n_s, "eqcr")
            rows.append((float(n_t), emom_min, eqcr_min, eq20, eq21,
                         1.0 / n_t, 1.0 / n_t ** 2, "ok"))
        except MznetError as exc:
            rows.append((float(n_t), None, None, None, None, None, None,
                         type(exc).__name__))
            failed = True
    run.emit_table("fig2a", header, rows)
    return failed


def _figure_fig2bc(run: _Run):
    d, n_s = 2, 100.0
    vec = CoefficientVector.average(d)
    header = ("n_total", "emom_min", "emom_lower", "emom_upper",
              "eqcr_min", "eqcr_lower", "eqcr_upper", "status")
    rows, failed = [], False
    for n_t in _logspace(1e3, 1e9, run.sweep_points):
        try:
            emom_min, eqcr_min = _minimize_pair(vec, n_t, n_s, run.seed)
            bm = bounds_emom(vec, n_t, n_s)
            bq = bounds_eqcr(vec, n_t, n_s)
            rows.append((float(n_t), emom_min, bm.lower, bm.upper,
                         eqcr_min, bq.lower, bq.upper, "ok"))
        except MznetError as exc:
            rows.append((float(n_t), None, None, None, None, None, None,
                         type(exc).__name__))
            failed = True
    run.emit_table("fig2bc", header, rows)
    return failed


def _figure_fig3(run: _Run):
    n_t, n_s = 1e6, 100.0
    failed = False
    # d = 2: v on the unit circle scaled to |v|^2 = 1/2.
    points2 = 32 if run.scale == "paper" else 16
    header2 = ("phi_v", "v1", "v2", "emom_min", "eqcr_min", "status")
    rows = []
    for k in range(points2):
        phi = 2.0 * math.pi * k / points2
        v = np.array([math.cos(phi), math.sin(phi)]) / math.sqrt(2.0)
        try:
            vec = CoefficientVector(v)
            emom_min, eqcr_min = _minimize_pair(vec, n_t, n_s, run.seed)
            rows.append((phi, v[0], v[1], emom_min, eqcr_min, "ok"))
        except MznetError as exc:
            rows.append((phi, v[0], v[1], None, None, type(exc).__name__))
            failed = True
    run.emit_table("fig3_d2", header2, rows)
    # d = 3: v on the unit sphere scaled to |v|^2 = 1/3.
    points3 = 16 if run.scale == "paper" else 8
    header3 = ("theta_v", "phi_v", "v1", "v2", "v3", "emom_min", "eqcr_min", "status")
    rows = []
    for theta in np.linspace(0.0, math.pi, points3):
        for k in range(points3):
            phi = 2.0 * math.pi * k / points3
            v = np.array([
                math.sin(theta) * math.cos(phi),
                math.sin(theta) * math.sin(phi),
                math.cos(theta),
            ]) / math.sqrt(3.0)
            try:
                vec = CoefficientVector(v)
                emom_min, eqcr_min = _minimize_pair(vec, n_t, n_s, run.seed)
                rows.append((float(theta), phi, v[0], v[1], v[2],
                             emom_min, eqcr_min, "ok"))
            except MznetError as exc:
                rows.append((float(theta), phi, v[0], v[1], v[2], None, None,
                             type(exc).__name__))
                failed = True
    run.emit_table("fig3_d3", header3, rows)
    return failed


def _figure_fig4(run: _Run):
    n_c, n_s = 1e8, 100.0
    header = ("d", "g2", "ref_d", "ref_e2r", "status")
    grid = sorted({int(round(x)) for x in _logspace(1, 1e6, run.sweep_points)})
    e2r = squeeze_factor(n_s)
    rows = []
    for d in grid:
        rows.append((d, gain2_vave_exact(d, n_c, n_s), float(d), e2r, "ok"))
    run.emit_table("fig4", header, rows)
    return False


def _figure_fig5(run: _Run, samples: int):
    d, n_s = 10, 100.0
    header = ("n_total", "emom_mean", "emom_rms", "eqcr_mean", "eqcr_rms",
              "eq39", "sample_count", "status")
    rows, failed = [], False
    for n_t in _logspace(1e3, 1e9, run.sweep_points):
        try:
            em = ensemble_optimal_variance(d, n_t, n_s, samples, run.seed, "emom")
            eq = ensemble_optimal_variance(d, n_t, n_s, samples, run.seed, "eqcr")
            rows.append((float(n_t), em.mean, em.rms, eq.mean, eq.rms,
                         haar_mean_prediction(d, n_t, n_s), samples, "ok"))
        except MznetError as exc:
            rows.append((float(n_t), None, None, None, None, None, samples,
                         type(exc).__name__))
            failed = True
    run.emit_table("fig5", header, rows)
    return failed


def _figure_fig6(run: _Run, samples: int):
    d = 10
    s_stat = haar_weight_statistic(d)
    header = ("n_total", "min_mean", "min_rms", "argmin_mean", "argmin_rms",
              "ref_min", "ref_argmin", "sample_count", "status")
    rows, failed = [], False
    for n_t in _logspace(1e3, 1e9, run.sweep_points):
        try:
            stats, arg = ensemble_optimal_squeezing(d, n_t, samples, run.seed, "emom")
            rows.append((float(n_t), stats.mean, stats.rms, arg.mean, arg.rms,
                         math.sqrt(s_stat) / n_t ** 1.5,
                         math.sqrt(n_t / (4.0 * s_stat)), samples, "ok"))
        except MznetError as exc:
            rows.append((float(n_t), None, None, None, None, None, None,
                         samples, type(exc).__name__))
            failed = True
    run.emit_table("fig6", header, rows)
    return failed


def _figure_fig7(run: _Run, samples: int):
    d = 10
    header = ("n_total", "scaled_mean", "mean", "rms", "ref", "sample_count", "status")
    rows, failed = [], False
    for n_t in _logspace(1e2, 1e6, run.sweep_points):
        try:
            stats, _ = ensemble_optimal_squeezing(d, n_t, samples, run.seed, "eqcr")
            rows.append((float(n_t), n_t ** 2 * stats.mean, stats.mean, stats.rms,
                         1.0, samples, "ok"))
        except MznetError as exc:
            rows.append((float(n_t), None, None, None, 1.0, samples,
                         type(exc).__name__))
            failed = True
    run.emit_table("fig7", header, rows)
    return failed


def _figure_fig8(run: _Run):
    d, n_s = 10, 100.0
    header = ("n_total", "g4", "g4_qcr", "g4_analytic", "status")
    grid = _logspace(3e3, 1e9, run.sweep_points)
    rows, failed = [], False
    for row in gain4_curve(d, n_s, grid, seed=run.seed):
        status = row["status"]
        if status != "ok":
            failed = True
        rows.append((row["n_total"], row["g4"], row["g4_qcr"],
                     gain4_analytic(d, row["n_total"], n_s), status))
    run.emit_table("fig8", header, rows)
    return failed


@main.command()
@click.argument("name", type=click.Choice(
    ["fig2a", "fig2bc", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"]))
@click.option("--samples", type=int, default=None, help="Override the scale default.")
@pass_run
@_domain_guard
def figure(run: _Run, name: str, samples: int | None):
    """Emit the dataset behind one figure as CSV plus a run manifest."""
    count = samples if samples is not None else run.samples
    dispatch = {
        "fig2a": lambda: _figure_fig2a(run),
        "fig2bc": lambda: _figure_fig2bc(run),
        "fig3": lambda: _figure_fig3(run),
        "fig4": lambda: _figure_fig4(run),
        "fig5": lambda: _figure_fig5(run, count),
        "fig6": lambda: _figure_fig6(run, count),
        "fig7": lambda: _figure_fig7(run, count),
        "fig8": lambda: _figure_fig8(run),
    }
    failed = dispatch[name]()
    run.write_manifest(name, {"figure": name, "scale": run.scale, "samples": count})
    for path in run.outputs:
        click.echo(path)
    if failed:
        sys.exit(4)


# ---------------------------------------------------------------------------
# oracle-check
# ---------------------------------------------------------------------------


@main.command("oracle-check")
@click.option("--trials", type=int, default=200)
@click.option("--d-max", type=int, default=4)
@click.option("--tolerance", type=float, default=1e-9)
@pass_run
@_domain_guard
def oracle_check(run: _Run, trials: int, d_max: int, tolerance: float):
    """Cross-validate the closed forms against the Gaussian moment oracle.

    Random phase-matched configurations (Haar circuit, random signs,
    log-uniform intensities, uniform squeezed photon number) are checked
    entrywise: closed-form Fisher matrix vs the oracle Fisher matrix,
    and the closed-form inverse moment matrix vs the oracle covariance
    assembly.  Exits 5 on any relative deviation above the tolerance.
    """
    perturb = float(os.environ.get(PERTURB_ENV, "0") or "0")
    max_dev_qfim = 0.0
    max_dev_minv = 0.0
    for t in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence((run.seed, t)))
        d = int(rng.integers(1, d_max + 1))
        unitary = sample_haar_circuit(d, rng)
        signs = np.where(rng.random(d) < 0.5, -1.0, 1.0)
        circuit = circuit_vector_from_unitary(unitary, 1, signs)
        alpha_sq = np.exp(rng.uniform(math.log(0.1), math.log(1e3), size=d))
        n_s = float(rng.uniform(0.0, 100.0))
        from .network_model import EntangledConfig

        cfg = EntangledConfig(
            d=d, circuit=circuit, coherent_intensities=alpha_sq,
            squeezed_photons=n_s,
        )
        f_closed = qfim(cfg)
        f_oracle = oracle_qfim(d, cfg) * (1.0 + perturb)
        scale = max(float(np.max(np.abs(f_closed))), 1e-300)
        max_dev_qfim = max(max_dev_qfim, float(np.max(np.abs(f_closed - f_oracle))) / scale)

        minv_closed = inverse_moment_matrix(cfg)
        gamma, g = oracle_moment_matrix(d, cfg)
        m_oracle = g.T @ np.linalg.solve(gamma, g)
        minv_oracle = np.linalg.inv(m_oracle) * (1.0 + perturb)
        scale = max(float(np.max(np.abs(minv_closed))), 1e-300)
        max_dev_minv = max(max_dev_minv, float(np.max(np.abs(minv_closed - minv_oracle))) / scale)

    click.echo(f"trials: {trials}")
    click.echo(f"max relative deviation (Fisher matrix): {max_dev_qfim:.3e}")
    click.echo(f"max relative deviation (inverse moment matrix): {max_dev_minv:.3e}")
    if max(max_dev_qfim, max_dev_minv) > tolerance:
        click.echo("FAIL: oracle cross-validation breached tolerance", err=True)
        sys.exit(5)
    click.echo("PASS")


if __name__ == "__main__":
    main()
