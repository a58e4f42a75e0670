"""Acceptance checks: one test per shipped guarantee.

Each test prints a single ``ACCEPTANCE n: PASS/FAIL`` line summarizing the
measurement before asserting, so the verdicts are visible in any pytest run.
"""

import math
import time
import warnings

import numpy as np
import pytest
from click.testing import CliRunner

from mznet.cli import main as cli_main
from mznet.estimation import variance_emom, variance_eqcr
from mznet.gaussian_oracle import oracle_moment_matrix, oracle_qfim
from mznet.network_model import (
    CircuitVector,
    CoefficientVector,
    EntangledConfig,
    SeparableConfig,
    circuit_vector_from_unitary,
    inverse_moment_matrix,
    qfim,
    squeeze_factor,
)
from mznet.estimation import variance_smom, variance_sqcr
from mznet.optimization import (
    ApproximationWarning,
    OptimizationProblem,
    analytic_optimum_vave,
    gain,
    gain2_analytic,
    gain2_vave_exact,
    gain4_curve,
    lagrange_stationarity_check,
    minimize_emom,
    minimize_eqcr,
)
from mznet.spectra import (
    ensemble_heisenberg_saturation,
    ensemble_optimal_squeezing,
    ensemble_optimal_variance,
    fisher_spectrum,
    haar_mean_prediction,
    haar_weight_statistic,
    sample_haar_circuit,
    squeezing_spectrum,
)


def _report(capsys, number, ok, details):
    with capsys.disabled():
        print(f"\nACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} — {details}")


def _uniform_entangled(d, n_c, n_s):
    return EntangledConfig(
        d=d, circuit=CircuitVector(np.ones(d) / math.sqrt(d)),
        coherent_intensities=np.full(d, n_c), squeezed_photons=n_s,
    )


def test_acceptance_1_oracle_equivalence(capsys):
    """Closed forms agree with the Gaussian oracle on random networks."""
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    trials = 200
    for _ in range(trials):
        d = int(rng.integers(1, 5))
        unitary = sample_haar_circuit(d, rng)
        signs = np.where(rng.random(d) < 0.5, -1.0, 1.0)
        circuit = circuit_vector_from_unitary(unitary, 1, signs)
        alpha_sq = np.exp(rng.uniform(math.log(0.5), math.log(1e4), size=d))
        n_s = float(rng.uniform(0.0, 100.0))
        config = EntangledConfig(
            d=d, circuit=circuit, coherent_intensities=alpha_sq,
            squeezed_photons=n_s,
        )
        f_closed = qfim(config)
        f_oracle = oracle_qfim(d, config)
        worst = max(worst, np.max(np.abs(f_closed - f_oracle))
                    / max(np.max(np.abs(f_closed)), 1e-300))
        minv_closed = inverse_moment_matrix(config)
        gamma, g = oracle_moment_matrix(d, config)
        minv_oracle = np.linalg.inv(g.T @ np.linalg.solve(gamma, g))
        worst = max(worst, np.max(np.abs(minv_closed - minv_oracle))
                    / max(np.max(np.abs(minv_closed)), 1e-300))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 30.0
    _report(capsys, 1, ok,
            f"{trials} random configs, max rel dev {worst:.2e}, {elapsed:.1f}s")
    assert ok


def test_acceptance_2_single_interferometer_reduction(capsys):
    """d=1 collapses to the single-interferometer formulas exactly."""
    worst = 0.0
    n_c_grid = np.logspace(0, 8, 10)
    n_s_grid = np.logspace(-2, 3, 10)
    v1 = CoefficientVector(np.array([1.0]))
    for n_c in n_c_grid:
        for n_s in n_s_grid:
            ent = _uniform_entangled(1, n_c, n_s)
            sep = SeparableConfig.from_photon_numbers(
                np.array([n_c]), np.array([n_s]))
            pairs = (
                (variance_emom(ent, v1), variance_smom(sep, v1)),
                (variance_eqcr(ent, v1), variance_sqcr(sep, v1)),
            )
            for a, b in pairs:
                worst = max(worst, abs(a - b) / abs(b))
    ok = worst <= 1e-12
    _report(capsys, 2, ok,
            f"100-point (n_c, n_s) grid, max rel dev {worst:.2e}")
    assert ok


def _minimize_pair(d, n_t, n_s, seed=11):
    v = CoefficientVector.average(d)
    problem = OptimizationProblem(v=v, total_photons=n_t, constraint="C3",
                                  fixed_squeezed_photons=n_s)
    return (minimize_emom(problem, seed=seed).minimum_variance,
            minimize_eqcr(problem, seed=seed).minimum_variance)


def test_acceptance_3_sensitivity_curves(capsys):
    """Optimized curves reproduce the two-term optima and scaling exponents."""
    d, n_s = 2, 100.0
    e2r = squeeze_factor(n_s)
    msgs, ok = [], True

    worst_eqcr = worst_emom = worst_gap = 0.0
    for n_t in np.logspace(3.1, 9, 25):
        emom_min, eqcr_min = _minimize_pair(d, n_t, n_s)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ApproximationWarning)
            eq20 = analytic_optimum_vave(d, n_t, n_s, "emom")
            eq21 = analytic_optimum_vave(d, n_t, n_s, "eqcr")
        worst_eqcr = max(worst_eqcr, abs(eqcr_min / eq21 - 1.0))
        if n_t >= 100.0 * (d + 1) * n_s:
            worst_emom = max(worst_emom, abs(emom_min / eq20 - 1.0))
        if n_t >= 100.0 * n_s * e2r:
            worst_gap = max(worst_gap, abs(emom_min / eqcr_min - 1.0))
    ok &= worst_eqcr <= 0.01 and worst_emom <= 0.02 and worst_gap <= 0.02
    msgs.append(f"eqcr vs optimum {worst_eqcr:.2e}, emom {worst_emom:.2e}, "
                f"curve gap {worst_gap:.2e}")

    # free-budget scaling over the top two decades of n_T
    grid = np.logspace(7, 9, 8)
    vals_emom, vals_eqcr = [], []
    for n_t in grid:
        v = CoefficientVector.average(d)
        problem = OptimizationProblem(v=v, total_photons=n_t)
        vals_emom.append(minimize_emom(problem, seed=11).minimum_variance)
        vals_eqcr.append(minimize_eqcr(problem, seed=11).minimum_variance)
    slope_emom = np.polyfit(np.log10(grid), np.log10(vals_emom), 1)[0]
    slope_eqcr = np.polyfit(np.log10(grid), np.log10(vals_eqcr), 1)[0]
    ok &= abs(slope_emom + 1.5) <= 0.05 and abs(slope_eqcr + 2.0) <= 0.05
    msgs.append(f"free-budget slopes {slope_emom:.4f} / {slope_eqcr:.4f}")

    _report(capsys, 3, ok, "; ".join(msgs))
    assert ok


def test_acceptance_4_gain_factors(capsys):
    """Entanglement gains hit their asymptotic values in each budget model."""
    n_t, n_s = 1e6, 100.0
    msgs, ok = [], True

    for d in (2, 3):
        v = CoefficientVector.average(d)
        g1, _, _ = gain("C1", v, n_t, seed=21)
        g2, _, _ = gain("C2", v, n_t, n_s, seed=21)
        g3, _, _ = gain("C3", v, n_t, n_s, seed=21)
        ok &= abs(g1 / math.sqrt(d) - 1.0) <= 0.02
        ok &= abs(g2 / d - 1.0) <= 0.05 and abs(g3 / d - 1.0) <= 0.05
        msgs.append(f"d={d}: G1={g1:.4f}, G2={g2:.4f}, G3={g3:.4f}")

    g2_large = gain2_vave_exact(10000, 1e8, 100.0)
    e2r = squeeze_factor(100.0)
    large_ok = abs(g2_large / e2r - 1.0) <= 0.05
    ok &= large_ok
    msgs.append(f"G2(d=1e4)={g2_large:.1f} vs e^(2r)={e2r:.1f} "
                f"({'ok' if large_ok else 'out of band'})")

    d = 10
    for n_big in (1e8, 1e9):
        g4, _, _ = gain("C4", CoefficientVector.average(d), n_big, n_s, seed=21)
        ok &= abs(g4 - 1.0) <= 0.02
        msgs.append(f"G4(n_T={n_big:.0e})={g4:.4f}")
    rows = gain4_curve(d, n_s, np.logspace(math.log10(3e3), 9, 12), seed=21)
    qcr_max = max(r["g4_qcr"] for r in rows if r["status"] == "ok")
    ok &= qcr_max <= 1.0 + 1e-6
    msgs.append(f"max QCR-side G4 {qcr_max:.8f}")

    _report(capsys, 4, ok, "; ".join(msgs))
    assert ok


def _sweep_directions_d2(points):
    out = []
    for k in range(points):
        phi = 2 * math.pi * k / points
        w = np.array([math.cos(phi), math.sin(phi)]) / math.sqrt(2)
        w[np.abs(w) < 1e-12] = 0.0
        out.append((phi, CoefficientVector(w)))
    return out


def _sweep_directions_d3(n_theta, n_phi):
    out = []
    for theta in np.linspace(0.0, math.pi, n_theta):
        for k in range(n_phi):
            phi = 2 * math.pi * k / n_phi
            w = np.array([
                math.sin(theta) * math.cos(phi),
                math.sin(theta) * math.sin(phi),
                math.cos(theta),
            ]) / math.sqrt(3)
            w[np.abs(w) < 1e-12] = 0.0
            out.append((theta, phi, CoefficientVector(w)))
    return out


def test_acceptance_5_gain_sweeps(capsys):
    """Gain landscapes: bounded below by one, unity at single-phase points,
    peaked at the uniform combination."""
    n_t, n_s = 1e6, 100.0
    start = time.perf_counter()
    msgs, ok = [], True
    plans = (("C1", None), ("C2", n_s), ("C3", n_s))

    # two-interferometer sweep
    grid2 = _sweep_directions_d2(32)
    single_phase_phis = {0, 8, 16, 24}
    vave_phis = [math.pi / 4 + k * math.pi / 2 for k in range(4)]
    for constraint, ns in plans:
        gains = []
        for idx, (phi, v) in enumerate(grid2):
            value, _, _ = gain(constraint, v, n_t, ns, seed=31, restarts=6)
            gains.append(value)
            ok &= value >= 1.0 - 1e-6
            if idx in single_phase_phis:
                ok &= abs(value - 1.0) <= 0.01
        peak_phi = grid2[int(np.argmax(gains))][0]
        dist = min(abs(peak_phi - p) for p in vave_phis)
        ok &= dist <= 2 * math.pi / 32 + 1e-12
        msgs.append(f"d=2 {constraint}: min {min(gains):.6f}, "
                    f"peak offset {dist:.3f} rad")

    # three-interferometer sweep
    grid3 = _sweep_directions_d3(16, 16)
    theta_star = math.acos(1.0 / math.sqrt(3.0))
    vave_thetas = (theta_star, math.pi - theta_star)
    for constraint, ns in plans:
        gains = []
        for theta, phi, v in grid3:
            value, _, _ = gain(constraint, v, n_t, ns, seed=31, restarts=6)
            gains.append(value)
            ok &= value >= 1.0 - 1e-6
            if theta in (0.0, math.pi):
                ok &= abs(value - 1.0) <= 0.01
        peak_theta, peak_phi, _ = grid3[int(np.argmax(gains))]
        dt = min(abs(peak_theta - t) for t in vave_thetas)
        dp = min(abs(peak_phi - p) for p in vave_phis)
        ok &= dt <= math.pi / 15 + 1e-12 and dp <= 2 * math.pi / 16 + 1e-12
        msgs.append(f"d=3 {constraint}: min {min(gains):.6f}, "
                    f"peak offsets ({dt:.3f}, {dp:.3f}) rad")

    elapsed = time.perf_counter() - start
    ok &= elapsed < 900.0
    msgs.append(f"{elapsed:.0f}s")
    _report(capsys, 5, ok, "; ".join(msgs))
    assert ok


def test_acceptance_6_gain2_direction_dependence(capsys):
    """Fixed-intensity gain follows its closed direction formula at high power."""
    n_c, n_s = 1e8, 100.0
    n_t = 2 * n_c + n_s
    worst = 0.0
    for phi, v in _sweep_directions_d2(32):
        measured, _, _ = gain("C2", v, n_t, n_s, seed=41, restarts=6)
        predicted = gain2_analytic(v)
        worst = max(worst, abs(measured / predicted - 1.0))
    ok = worst <= 0.05
    _report(capsys, 6, ok, f"32-direction sweep, max rel dev {worst:.2e}")
    assert ok


def test_acceptance_7_haar_ensembles(capsys):
    """Haar-averaged minima track the ensemble prediction and its limits."""
    d, n_s, samples = 10, 100.0, 1000
    e2r = squeeze_factor(n_s)
    msgs, ok = [], True

    for n_t in (1e4, 1e5, 1e6, 1e8):
        stats = ensemble_optimal_variance(d, n_t, n_s, sample_count=samples,
                                          seed=51)
        predicted = haar_mean_prediction(d, n_t, n_s)
        se = stats.rms / math.sqrt(samples)
        z = (stats.mean - predicted) / se
        within = abs(z) <= 3.0
        ok &= within
        msgs.append(f"n_T={n_t:.0e}: z={z:+.2f}"
                    f"{'' if within else ' (out of band)'}")

    for n_t in (1e7, 1e8):
        stats = ensemble_optimal_variance(d, n_t, n_s, sample_count=samples,
                                          seed=51)
        sn = 1.0 / (e2r * n_t)
        ok &= abs(stats.mean / sn - 1.0) <= 0.01
    msgs.append("squeezed shot-noise limit matched at n_T>=1e7")

    n_t = 1e6
    minimum, argmin = ensemble_optimal_squeezing(d, n_t, sample_count=samples,
                                                 seed=51)
    s_haar = haar_weight_statistic(d)
    ns_star = math.sqrt(n_t / (4.0 * s_haar))
    pred_min = haar_mean_prediction(d, n_t, ns_star)
    min_ok = abs(minimum.mean / pred_min - 1.0) <= 0.10
    arg_ok = abs(argmin.mean / ns_star - 1.0) <= 0.15
    ok &= min_ok and arg_ok
    msgs.append(f"free-squeezing minimum dev {minimum.mean / pred_min - 1:+.3f}, "
                f"argmin dev {argmin.mean / ns_star - 1:+.3f}")

    heis = ensemble_heisenberg_saturation(d, 1e4, sample_count=samples, seed=51)
    heis_ok = abs(1e4 ** 2 * heis.mean - 1.0) <= 0.05
    ok &= heis_ok
    msgs.append(f"n_T^2 x QCR mean = {1e4 ** 2 * heis.mean:.4f}")

    rng = np.random.default_rng(51)
    weights = np.empty(samples)
    for i in range(samples):
        row = np.abs(sample_haar_circuit(d, rng)[0])
        weights[i] = d * np.sum((row / math.sqrt(d)) ** 4) * d ** 2
    se_w = weights.std() / math.sqrt(samples)
    z_w = (weights.mean() - s_haar) / se_w
    ok &= abs(z_w) <= 3.0
    msgs.append(f"weight statistic z={z_w:+.2f}")

    _report(capsys, 7, ok, "; ".join(msgs))
    assert ok


def test_acceptance_8_spectral_identities(capsys):
    """Spectral decompositions bound and attain the directional minima."""
    rng = np.random.default_rng(61)
    msgs, ok = [], True
    worst_attain = 0.0
    for _ in range(20):
        d = int(rng.integers(2, 6))
        unitary = sample_haar_circuit(d, rng)
        circuit = circuit_vector_from_unitary(unitary, 1, np.ones(d))
        cfg = EntangledConfig(
            d=d, circuit=circuit,
            coherent_intensities=rng.uniform(10.0, 1e4, size=d),
            squeezed_photons=float(rng.uniform(0.5, 50.0)),
        )
        mspec = squeezing_spectrum(cfg)
        fspec = fisher_spectrum(cfg)
        ok &= fspec.max_eigenvalue >= mspec.max_eigenvalue * (1 - 1e-12)
        floor = 1.0 / (mspec.max_eigenvalue * d)
        attained = variance_emom(cfg, mspec.optimal_v)
        worst_attain = max(worst_attain, abs(attained / floor - 1.0))
        for _ in range(5):
            w = rng.normal(size=d)
            v = CoefficientVector(w / np.linalg.norm(w) / math.sqrt(d))
            ok &= variance_emom(cfg, v) >= floor * (1 - 1e-12)
            ok &= variance_eqcr(cfg, v) >= (1.0 / (fspec.max_eigenvalue * d)
                                            ) * (1 - 1e-12)
    ok &= worst_attain <= 1e-9
    msgs.append(f"20 random configs x 5 directions, "
                f"attainment dev {worst_attain:.2e}")
    _report(capsys, 8, ok, "; ".join(msgs))
    assert ok


def test_acceptance_9_stationarity_certificates(capsys):
    """The uniform splitting is a constrained stationary point; a skewed
    candidate is certified non-stationary."""
    worst = 0.0
    for d in range(2, 7):
        v = CoefficientVector.average(d)
        candidate = math.sqrt(d) * v.entries
        worst = max(worst, lagrange_stationarity_check(v, candidate, 1e6, 10.0))
    v_skew = CoefficientVector(np.array([0.6, math.sqrt(0.5 - 0.36)]))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ApproximationWarning)
        off = lagrange_stationarity_check(
            v_skew, math.sqrt(2) * np.abs(v_skew.entries), 100.0, 50.0)
    ok = worst < 1e-8 and off > 1e-4
    _report(capsys, 9, ok,
            f"uniform residual <= {worst:.2e} (d=2..6), "
            f"skewed residual {off:.3f}")
    assert ok


def test_acceptance_10_deterministic_outputs(capsys, tmp_path):
    """Same seed, same bytes: repeated CLI runs are reproducible."""
    runner = CliRunner()
    payloads = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        result = runner.invoke(cli_main, ["--seed", "5", "--out", str(out),
                                          "--scale", "desk", "figure", "fig2a"])
        assert result.exit_code == 0, result.output
        payloads.append((out / "fig2a.csv").read_bytes())
    ok = payloads[0] == payloads[1] and len(payloads[0]) > 0
    _report(capsys, 10, ok,
            f"fig2a rerun byte-identical ({len(payloads[0])} bytes)")
    assert ok
