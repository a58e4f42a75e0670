"""Brute-force Gaussian photon-number moment machinery.

Given an arbitrary passive linear network acting on displaced or squeezed
single-mode inputs, this module computes the exact photon-number
covariance tensor ``h`` through the Husimi Q-function moment identities,
and from it assembles the quantum Fisher information matrix and the
measurement covariance/slope pair of the interferometer array.  It makes
no phase-matching or symmetry assumptions, which is what allows it to act
as an independent validation oracle for every closed form in
:mod:`mznet.network_model`.

Conventions
-----------
``GaussianNetwork.transform`` is the input-to-output transfer matrix T of
annihilation operators (output amplitudes = T @ input amplitudes).  With
C = diag(cosh^2 r_k) and D = diag(e^{i phi_k} tanh r_k) built from the
inputs, the moment tensors are

    E  = T C T^dagger        (Hermitian),
    EN = T (C D) T^T         (symmetric),
    b  = T beta,   gamma = conj(b)   (modes are coherent XOR squeezed),

    h  = EN o EN* - EN o g g^T - EN* o (g g^T)* + E o E*
         + E o g g^dagger + E* o (g g^dagger)* - (E + g g^dagger) o I,

with ``o`` the entrywise product and g = gamma;  <n_i> = -1 + E_ii + |g_i|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, MixedModeUnsupported, NonUnitary
from .network_model import CircuitVector, EntangledConfig

__all__ = [
    "ModeInput",
    "GaussianNetwork",
    "MomentTensors",
    "build_network",
    "compute_moment_tensors",
    "oracle_qfim",
    "oracle_moment_matrix",
    "unitary_from_row",
    "vacuum",
    "coherent",
    "squeezed",
]

_UNITARY_TOL = 1e-10
_ASSEMBLY_TOL = 1e-10


@dataclass(frozen=True)
class ModeInput:
    """Single input mode: displacement beta and/or squeezing (r, phi)."""

    displacement: complex = 0.0
    squeeze_magnitude: float = 0.0
    squeeze_phase: float = 0.0

    def __post_init__(self) -> None:
        if self.squeeze_magnitude < 0:
            raise ValueError("squeeze magnitude must be nonnegative")

    @property
    def is_mixed(self) -> bool:
        return self.displacement != 0 and self.squeeze_magnitude != 0


def vacuum() -> ModeInput:
    return ModeInput()


def coherent(beta: complex) -> ModeInput:
    return ModeInput(displacement=complex(beta))


def squeezed(r: float, phase: float = 0.0) -> ModeInput:
    return ModeInput(squeeze_magnitude=r, squeeze_phase=phase)


@dataclass(frozen=True)
class GaussianNetwork:
    """A validated passive network together with its input modes."""

    mode_count: int
    transform: np.ndarray
    inputs: tuple


def build_network(transform, inputs) -> GaussianNetwork:
    """Validate dimensions and unitarity, returning the immutable network."""
    matrix = np.asarray(transform, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch("transform must be a square matrix")
    inputs = tuple(inputs)
    if matrix.shape[0] != len(inputs):
        raise DimensionMismatch(
            f"transform is {matrix.shape[0]}x{matrix.shape[0]} but "
            f"{len(inputs)} input modes were given"
        )
    deviation = float(
        np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])))
    )
    if deviation > _UNITARY_TOL:
        raise NonUnitary(f"unitarity deviation {deviation:.3e} exceeds {_UNITARY_TOL}")
    matrix = matrix.copy()
    matrix.setflags(write=False)
    return GaussianNetwork(mode_count=len(inputs), transform=matrix, inputs=inputs)


@dataclass(frozen=True)
class MomentTensors:
    """Second-moment tensors of the network output photon numbers."""

    E: np.ndarray
    EN: np.ndarray
    gamma: np.ndarray
    h: np.ndarray
    mean_photons: np.ndarray


def compute_moment_tensors(net: GaussianNetwork) -> MomentTensors:
    """Evaluate E, EN, gamma, the covariance h and the mean photon numbers."""
    for k, mode in enumerate(net.inputs):
        if mode.is_mixed:
            raise MixedModeUnsupported(
                f"mode {k} has both displacement and squeezing; "
                "gamma = conj(b) does not hold for such inputs"
            )
    t = net.transform
    r = np.array([m.squeeze_magnitude for m in net.inputs])
    phi = np.array([m.squeeze_phase for m in net.inputs])
    beta = np.array([m.displacement for m in net.inputs], dtype=complex)

    c_diag = np.cosh(r) ** 2
    cd_diag = np.exp(1j * phi) * np.sinh(r) * np.cosh(r)

    e_mat = (t * c_diag) @ t.conj().T
    en_mat = (t * cd_diag) @ t.T
    b = t @ beta
    gamma = b.conj()

    asym = float(np.max(np.abs(e_mat - e_mat.conj().T)))
    if asym > _ASSEMBLY_TOL:
        raise ArithmeticError(f"E asymmetry {asym:.3e} exceeds {_ASSEMBLY_TOL}")
    e_mat = 0.5 * (e_mat + e_mat.conj().T)
    asym = float(np.max(np.abs(en_mat - en_mat.T)))
    if asym > _ASSEMBLY_TOL:
        raise ArithmeticError(f"EN asymmetry {asym:.3e} exceeds {_ASSEMBLY_TOL}")
    en_mat = 0.5 * (en_mat + en_mat.T)

    ggt = np.outer(gamma, gamma)
    ggd = np.outer(gamma, gamma.conj())
    h = (
        en_mat * en_mat.conj()
        - en_mat * ggt
        - en_mat.conj() * ggt.conj()
        + e_mat * e_mat.conj()
        + e_mat * ggd
        + e_mat.conj() * ggd.conj()
    )
    h[np.diag_indices_from(h)] -= np.diag(e_mat + ggd)
    imag = float(np.max(np.abs(h.imag)))
    if imag > _ASSEMBLY_TOL:
        raise ArithmeticError(f"h imaginary residue {imag:.3e} exceeds {_ASSEMBLY_TOL}")
    h = 0.5 * (h.real + h.real.T)

    mean_photons = -1.0 + np.diag(e_mat).real + np.abs(gamma) ** 2
    mean_photons[(mean_photons < 0) & (mean_photons > -1e-9)] = 0.0
    return MomentTensors(E=e_mat, EN=en_mat, gamma=gamma, h=h, mean_photons=mean_photons)


def unitary_from_row(row, injection_port: int = 1) -> np.ndarray:
    """Deterministic unitary completion of a given unit-norm row.

    The returned matrix has the supplied row at (1-based) index
    ``injection_port``; the remaining rows are obtained by Gram-Schmidt
    orthonormalization against the identity basis.
    """
    row = np.asarray(row, dtype=complex)
    d = row.size
    norm = np.linalg.norm(row)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError("row must have unit norm")
    rows = [row / norm]
    for k in range(d):
        if len(rows) == d:
            break
        cand = np.zeros(d, dtype=complex)
        cand[k] = 1.0
        for q in rows:
            cand = cand - (q.conj() @ cand) * q
        nrm = np.linalg.norm(cand)
        if nrm > 1e-10:
            rows.append(cand / nrm)
    if len(rows) != d:
        raise ArithmeticError("failed to complete the row to a unitary")
    matrix = np.zeros((d, d), dtype=complex)
    order = [injection_port - 1] + [k for k in range(d) if k != injection_port - 1]
    for target, source in zip(order, range(d)):
        matrix[target] = rows[source]
    return matrix


def _interferometer_inputs(
    d: int,
    config: EntangledConfig,
    squeeze_phase: float,
    port: int,
) -> list:
    """The 2d input modes: d coherent states, then the circuit inputs."""
    amplitudes = np.sqrt(config.coherent_intensities)
    # chi_j = phi_j - squeeze_phase / 2 fixes the coherent phases.
    phases = config.phase_mismatch + squeeze_phase / 2.0
    inputs = [coherent(a * np.exp(1j * p)) for a, p in zip(amplitudes, phases)]
    r = config.squeeze_parameter
    for k in range(d):
        if k == port - 1 and r > 0:
            inputs.append(squeezed(r, squeeze_phase))
        else:
            inputs.append(vacuum())
    return inputs


def _resolve_unitary(config: EntangledConfig, unitary, port: int) -> np.ndarray:
    if unitary is not None:
        return np.asarray(unitary, dtype=complex)
    return unitary_from_row(config.circuit.entries.astype(complex), port)


def _difference_combination(h: np.ndarray, d: int) -> np.ndarray:
    """h_{i,j} + h_{i+d,j+d} - h_{i,j+d} - h_{i+d,j} for i,j in 1..d."""
    a = slice(0, d)
    b = slice(d, 2 * d)
    return h[a, a] + h[b, b] - h[a, b] - h[b, a]


def oracle_qfim(
    d: int,
    config: EntangledConfig,
    unitary=None,
    port: int = 1,
    squeeze_phase: float = 0.0,
) -> np.ndarray:
    """QFIM evaluated from the moment tensors of the pre-encoding network.

    The network is the d-fold array of balanced beam splitters fed by the
    d coherent states and the circuit outputs,
    T = (1/sqrt(2)) [[I, -i U^dagger], [-i I, U^dagger]].
    """
    if config.d != d:
        raise DimensionMismatch("config dimension does not match d")
    u_mat = _resolve_unitary(config, unitary, port)
    if u_mat.shape != (d, d):
        raise DimensionMismatch("unitary must be d x d")
    eye = np.eye(d)
    udag = u_mat.conj().T
    top = np.hstack([eye, -1j * udag])
    bottom = np.hstack([-1j * eye, udag])
    transform = np.vstack([top, bottom]) / math.sqrt(2.0)
    net = build_network(transform, _interferometer_inputs(d, config, squeeze_phase, port))
    tensors = compute_moment_tensors(net)
    f = _difference_combination(tensors.h, d)
    return 0.5 * (f + f.T)


def oracle_moment_matrix(
    d: int,
    config: EntangledConfig,
    working_point=None,
    unitary=None,
    port: int = 1,
    squeeze_phase: float = 0.0,
):
    """Measurement covariance Gamma and slope matrix G of the full array.

    The network includes the phase-encoding stage; with
    Ct = diag(cos(theta_i/2)) and St = diag(sin(theta_i/2)),
    T = [[Ct, St U^dagger], [-St, Ct U^dagger]].
    Returns ``(Gamma, G)`` with Gamma_ij = (1/4) of the number-difference
    combination of h and G_jj = (1/2) sin(theta_j) (|u_j|^2 n_s - |alpha_j|^2).
    """
    if config.d != d:
        raise DimensionMismatch("config dimension does not match d")
    theta = (
        np.full(d, math.pi / 2.0)
        if working_point is None
        else np.asarray(working_point, dtype=float)
    )
    if theta.shape != (d,):
        raise DimensionMismatch("working point must have length d")
    u_mat = _resolve_unitary(config, unitary, port)
    if u_mat.shape != (d, d):
        raise DimensionMismatch("unitary must be d x d")
    ct = np.cos(theta / 2.0)
    st = np.sin(theta / 2.0)
    udag = u_mat.conj().T
    top = np.hstack([np.diag(ct), st[:, None] * udag])
    bottom = np.hstack([np.diag(-st), ct[:, None] * udag])
    transform = np.vstack([top, bottom])
    net = build_network(transform, _interferometer_inputs(d, config, squeeze_phase, port))
    tensors = compute_moment_tensors(net)
    gamma_mat = 0.25 * _difference_combination(tensors.h, d)
    gamma_mat = 0.5 * (gamma_mat + gamma_mat.T)
    u_row_sq = np.abs(u_mat[port - 1, :]) ** 2
    slopes = 0.5 * np.sin(theta) * (
        u_row_sq * config.squeezed_photons - config.coherent_intensities
    )
    return gamma_mat, np.diag(slopes)
