"""Tests of the closed-form matrices and configuration types."""

import json
import math

import numpy as np
import pytest

from mznet.errors import DegenerateSlope, DimensionMismatch, PhaseMismatch
from mznet.network_model import (
    CircuitVector,
    CoefficientVector,
    EntangledConfig,
    SeparableConfig,
    circuit_vector_from_unitary,
    covariance_c2_structure,
    entangled_config_from_json,
    entangled_config_to_json,
    inverse_moment_matrix,
    qfim,
    qfim_inverse,
    separable_qfi_terms,
    separable_variance_terms,
    squeeze_factor,
    squeeze_parameter_from_photons,
)
from mznet.spectra import sample_haar_circuit

E2R_NS1 = 3.0 + 2.0 * math.sqrt(2.0)  # e^{2r} at one squeezed photon


def balanced_config(intensity=100.0, n_s=1.0):
    return EntangledConfig(
        d=2,
        circuit=CircuitVector(np.array([1.0, 1.0]) / math.sqrt(2)),
        coherent_intensities=np.array([intensity, intensity]),
        squeezed_photons=n_s,
    )


def test_squeeze_factor_identities():
    for n_s in (0.0, 0.5, 1.0, 100.0):
        r = squeeze_parameter_from_photons(n_s)
        assert math.sinh(r) ** 2 == pytest.approx(n_s, abs=1e-9)
        assert squeeze_factor(n_s) == pytest.approx(math.exp(2 * r), rel=1e-12)
    assert squeeze_factor(1.0) == pytest.approx(E2R_NS1, rel=1e-14)


def test_circuit_vector_normalization():
    v = CircuitVector(np.array([1.0, 1.0]) / math.sqrt(2) * (1 + 5e-7))
    assert np.linalg.norm(v.entries) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        CircuitVector(np.array([1.0, 1.0]))


def test_coefficient_vector_rescaling_and_weight():
    v = CoefficientVector(np.array([1.0, 1.0]))
    assert v.was_rescaled
    assert np.sum(v.entries ** 2) == pytest.approx(0.5, rel=1e-14)
    assert CoefficientVector.average(2).weight == pytest.approx(1.0, rel=1e-12)
    # single-phase: sum v^4 = 1/d^2, weight = d^3/d^2 = d
    assert CoefficientVector.single_phase(4).weight == pytest.approx(4.0, rel=1e-12)


def test_inverse_moment_matrix_worked_example():
    minv = inverse_moment_matrix(balanced_config())
    assert minv[0, 0] == pytest.approx(0.0059673890823656464, rel=1e-12)
    assert minv[0, 1] == pytest.approx(-0.004183869724230147, rel=1e-12)
    assert np.allclose(minv, minv.T, atol=1e-15)


def test_qfim_worked_examples():
    # d=1, |alpha|^2 = 4, one squeezed photon: F = 4 e^{2r} + n_s
    cfg1 = EntangledConfig(
        d=1, circuit=CircuitVector(np.array([1.0])),
        coherent_intensities=np.array([4.0]), squeezed_photons=1.0,
    )
    assert qfim(cfg1)[0, 0] == pytest.approx(4 * E2R_NS1 + 1.0, rel=1e-12)
    assert qfim(cfg1)[0, 0] == pytest.approx(24.31370849898476, rel=1e-12)
    # balanced d=2 at |alpha|^2 = 100, n_s = 1
    f = qfim(balanced_config())
    off = 100.0 * 0.5 * (E2R_NS1 - 1.0)
    assert f[0, 1] == pytest.approx(off, rel=1e-12)
    assert f[0, 0] == pytest.approx(off + 100.0 + 0.5, rel=1e-12)


def test_qfim_inverse_matches_dense_inversion():
    rng = np.random.default_rng(5)
    for _ in range(10):
        d = int(rng.integers(1, 6))
        u = sample_haar_circuit(d, rng)
        circuit = circuit_vector_from_unitary(u, 1, np.ones(d))
        cfg = EntangledConfig(
            d=d, circuit=circuit,
            coherent_intensities=rng.uniform(1.0, 100.0, size=d),
            squeezed_photons=float(rng.uniform(0.0, 20.0)),
        )
        dense = np.linalg.inv(qfim(cfg))
        fast = qfim_inverse(cfg)
        assert np.max(np.abs(dense - fast)) <= 1e-9 * np.max(np.abs(dense))


def test_quantum_cramer_rao_dominance():
    # F_Q - M is positive semidefinite: the moment method never beats the QCR.
    rng = np.random.default_rng(9)
    for _ in range(10):
        d = int(rng.integers(1, 5))
        u = sample_haar_circuit(d, rng)
        circuit = circuit_vector_from_unitary(u, 1, np.ones(d))
        cfg = EntangledConfig(
            d=d, circuit=circuit,
            coherent_intensities=rng.uniform(5.0, 500.0, size=d),
            squeezed_photons=float(rng.uniform(0.0, 30.0)),
        )
        diff = qfim(cfg) - np.linalg.inv(inverse_moment_matrix(cfg))
        trace = np.trace(qfim(cfg))
        assert np.linalg.eigvalsh(diff).min() >= -1e-8 * trace


def test_degenerate_slope_guard():
    # The signal slope vanishes when a_j equals u_j^2 n_s on some arm.
    cfg = EntangledConfig(
        d=2, circuit=CircuitVector(np.array([1.0, 1.0]) / math.sqrt(2)),
        coherent_intensities=np.array([2.0, 100.0]), squeezed_photons=4.0,
    )
    with pytest.raises(DegenerateSlope):
        inverse_moment_matrix(cfg)
    # Both the intensity and the routed squeezing vanish on one arm.
    dead = EntangledConfig(
        d=2, circuit=CircuitVector(np.array([1.0, 0.0])),
        coherent_intensities=np.array([10.0, 0.0]), squeezed_photons=1.0,
    )
    with pytest.raises(DegenerateSlope):
        inverse_moment_matrix(dead)


def test_phase_mismatch_rejected_by_closed_forms():
    cfg = EntangledConfig(
        d=2, circuit=CircuitVector(np.array([1.0, 1.0]) / math.sqrt(2)),
        coherent_intensities=np.array([100.0, 100.0]), squeezed_photons=1.0,
        phase_mismatch=np.array([0.1, 0.0]),
    )
    assert not cfg.is_phase_matched
    with pytest.raises(PhaseMismatch):
        inverse_moment_matrix(cfg)


def test_separable_terms():
    cfg = SeparableConfig.from_photon_numbers(
        np.array([100.0, 100.0]), np.array([1.0, 1.0])
    )
    expected = (100.0 / E2R_NS1 + 1.0) / 99.0 ** 2
    terms = separable_variance_terms(cfg)
    assert terms == pytest.approx([expected, expected], rel=1e-12)
    qfi = separable_qfi_terms(cfg)
    assert qfi == pytest.approx([100.0 * E2R_NS1 + 1.0] * 2, rel=1e-12)


def test_covariance_structure_at_balanced_point():
    cov = covariance_c2_structure(2, 100.0, 1.0)
    off = 100.0 * (E2R_NS1 - 1.0) / 2.0
    diag = off + 100.0 + 0.5
    assert cov[0, 1] == pytest.approx(off, rel=1e-12)
    assert cov[0, 0] == pytest.approx(diag, rel=1e-12)


def test_circuit_vector_from_unitary_row_magnitudes():
    rng = np.random.default_rng(21)
    u = sample_haar_circuit(4, rng)
    signs = np.array([1.0, -1.0, 1.0, -1.0])
    vec = circuit_vector_from_unitary(u, 2, signs)
    assert np.sum(vec.entries ** 2) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(np.abs(vec.entries), np.abs(u[1]), atol=1e-12)
    assert np.all(np.sign(vec.entries[np.abs(vec.entries) > 0]) ==
                  signs[np.abs(vec.entries) > 0])
    with pytest.raises(DimensionMismatch):
        circuit_vector_from_unitary(u, 5, signs)


def test_config_json_round_trip():
    cfg = balanced_config()
    doc = entangled_config_to_json(cfg)
    back = entangled_config_from_json(json.dumps(doc))
    assert back.d == cfg.d
    assert np.allclose(back.circuit.entries, cfg.circuit.entries)
    assert np.allclose(back.coherent_intensities, cfg.coherent_intensities)
    assert back.squeezed_photons == cfg.squeezed_photons


def test_config_json_unitary_form():
    rng = np.random.default_rng(2)
    u = sample_haar_circuit(3, rng)
    doc = {
        "d": 3,
        "unitary": [[[z.real, z.imag] for z in row] for row in u],
        "port": 1,
        "signs": [1, 1, -1],
        "alpha_sq": [10.0, 20.0, 30.0],
        "n_s": 2.0,
    }
    cfg = entangled_config_from_json(doc)
    expected = circuit_vector_from_unitary(u, 1, np.array([1.0, 1.0, -1.0]))
    assert np.allclose(cfg.circuit.entries, expected.entries, atol=1e-12)
