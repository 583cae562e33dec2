"""Quantum channels in Kraus form and their Choi (dynamical matrix) representation.

Index conventions
-----------------
Composite spaces are ordered output first: the Choi matrix lives on
``Q ⊗ R`` with ``Q`` the channel output and ``R`` a reference copy of the
input, built from ``|phi+> = sum_v |v>|v> / sqrt(d)``. Its row index is
``a * dim_in + mu`` for output index ``a`` and reference index ``mu``, so a
rank-one term ``vec(K) vec(K)^H`` corresponds to the row-major reshape of
``K``. The transpose in ``Phi(X) = Tr_R[D (I ⊗ X^T)]`` is taken in this same
computational basis. The Stinespring isometry maps into ``Q ⊗ E`` with the
environment index ``j`` (Kraus label) last.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .entropies import check_density_matrix
from .exceptions import (
    DimensionMismatch,
    EmptyKrausList,
    NotPositive,
    NotTracePreserving,
    OutOfBall,
    OutOfRange,
)
from .numkernel import as_matrix, clip_spectrum, hermitian_eig, partial_trace

TP_ATOL = 1e-9
ZERO_PROBABILITY = 1e-12
KRAUS_RANK_RTOL = 1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class QuantumChannel:
    """A completely positive trace-preserving map given by Kraus operators.

    Construction validates ``sum_j K_j^H K_j = I`` to Frobenius distance
    ``atol``. Kraus matrices are copied and made read-only.
    """

    __slots__ = ("kraus", "dim_in", "dim_out")

    def __init__(self, kraus: Sequence, atol: float = TP_ATOL):
        ops = [np.array(as_matrix(k), copy=True) for k in kraus]
        if not ops:
            raise EmptyKrausList("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        for j, k in enumerate(ops):
            if k.shape != shape:
                raise DimensionMismatch(
                    f"Kraus operator {j} has shape {k.shape}, expected {shape}"
                )
            k.setflags(write=False)
        dim_out, dim_in = shape
        gram = sum(k.conj().T @ k for k in ops)
        deviation = float(np.linalg.norm(gram - np.eye(dim_in)))
        if deviation > atol:
            raise NotTracePreserving(
                f"sum K^H K differs from the identity by {deviation:.3e} in Frobenius norm",
                deviation=deviation,
            )
        self.kraus = tuple(ops)
        self.dim_in = dim_in
        self.dim_out = dim_out

    def __len__(self):
        return len(self.kraus)

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)

    def __repr__(self):
        return f"QuantumChannel(dim_in={self.dim_in}, dim_out={self.dim_out}, kraus_count={len(self)})"

    @property
    def kraus_array(self) -> np.ndarray:
        """Kraus operators stacked into shape ``(count, dim_out, dim_in)``."""
        return np.stack(self.kraus)


def new_channel(kraus: Sequence) -> QuantumChannel:
    return QuantumChannel(kraus)


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel([np.eye(d)])


def unitary_channel(U) -> QuantumChannel:
    return QuantumChannel([U])


def _check_input(channel: QuantumChannel, rho) -> np.ndarray:
    M = check_density_matrix(rho)
    if M.shape[0] != channel.dim_in:
        raise DimensionMismatch(
            f"state of dimension {M.shape[0]} does not match channel input dimension {channel.dim_in}"
        )
    return M


def _apply_kraus(K: np.ndarray, rho: np.ndarray) -> np.ndarray:
    out = (K @ rho @ K.conj().transpose(0, 2, 1)).sum(axis=0)
    return 0.5 * (out + out.conj().T)


def apply(channel: QuantumChannel, rho) -> np.ndarray:
    """``Phi(rho) = sum_j K_j rho K_j^H``."""
    return _apply_kraus(channel.kraus_array, _check_input(channel, rho))


def effect_probabilities(channel: QuantumChannel, rho) -> np.ndarray:
    """Probabilities ``p_j = Tr(K_j^H K_j rho)`` of the individual effects."""
    M = _check_input(channel, rho)
    K = channel.kraus_array
    p = np.einsum("jab,jab->j", K @ M, K.conj()).real
    return np.clip(p, 0.0, None)


class Effect(NamedTuple):
    index: int
    probability: float
    state: np.ndarray


def particular_outputs(channel: QuantumChannel, rho) -> list[Effect]:
    """Normalized outputs ``K_j rho K_j^H / p_j`` with their probabilities.

    Effects with ``p_j < ZERO_PROBABILITY`` have no well-defined normalized
    output and are left out; ``Effect.index`` keeps the Kraus label.
    """
    M = _check_input(channel, rho)
    out = []
    for j, K in enumerate(channel.kraus):
        A = K @ M @ K.conj().T
        A = 0.5 * (A + A.conj().T)
        p = float(np.trace(A).real)
        if p < ZERO_PROBABILITY:
            continue
        out.append(Effect(j, p, A / p))
    return out


@dataclass(frozen=True, eq=False)
class DynamicalMatrix:
    """Choi matrix on ``Q ⊗ R`` (output factor first).

    ``matrix`` holds ``sigma(Phi)`` when ``rescaled`` is true and
    ``D(Phi) = dim_in * sigma(Phi)`` otherwise.
    """

    matrix: np.ndarray
    dim_in: int
    dim_out: int
    rescaled: bool = True

    @property
    def sigma(self) -> np.ndarray:
        return self.matrix if self.rescaled else self.matrix / self.dim_in

    @property
    def D(self) -> np.ndarray:
        return self.matrix * self.dim_in if self.rescaled else self.matrix


def choi(channel: QuantumChannel) -> DynamicalMatrix:
    """Rescaled dynamical matrix ``sigma(Phi) = (Phi ⊗ id)(|phi+><phi+|)``."""
    K = channel.kraus_array
    vecs = K.reshape(len(channel), -1)
    sigma = np.einsum("ja,jb->ab", vecs, vecs.conj()) / channel.dim_in
    sigma = 0.5 * (sigma + sigma.conj().T)
    return DynamicalMatrix(sigma, channel.dim_in, channel.dim_out, rescaled=True)


def _choi_dims(D: DynamicalMatrix) -> tuple[int, int]:
    n = D.dim_out * D.dim_in
    if D.matrix.shape != (n, n):
        raise DimensionMismatch(
            f"dynamical matrix of shape {D.matrix.shape} does not match dims ({D.dim_out}, {D.dim_in})"
        )
    return D.dim_out, D.dim_in


def apply_via_choi(D: DynamicalMatrix, rho) -> np.ndarray:
    """Evaluate ``Phi(rho) = Tr_R[D(Phi) (I ⊗ rho^T)]``."""
    dim_out, dim_in = _choi_dims(D)
    M = check_density_matrix(rho)
    if M.shape[0] != dim_in:
        raise DimensionMismatch(
            f"state of dimension {M.shape[0]} does not match channel input dimension {dim_in}"
        )
    full = D.D @ np.kron(np.eye(dim_out), M.T)
    out = partial_trace(full, 1, (dim_out, dim_in))
    return 0.5 * (out + out.conj().T)


def kraus_from_choi(D: DynamicalMatrix, atol: float = TP_ATOL) -> QuantumChannel:
    """Recover a Kraus decomposition from a dynamical matrix.

    Eigenvectors with eigenvalue above ``KRAUS_RANK_RTOL * Tr D`` are scaled
    by ``sqrt(lambda)`` and reshaped into ``dim_out x dim_in`` operators. The
    decomposition is unique only up to unitary mixing of Kraus operators.
    """
    dim_out, dim_in = _choi_dims(D)
    dyn = D.D
    marginal = partial_trace(dyn, 0, (dim_out, dim_in))
    deviation = float(np.linalg.norm(marginal - np.eye(dim_in)))
    if deviation > atol:
        raise NotTracePreserving(
            f"Tr_Q D(Phi) differs from the identity by {deviation:.3e}", deviation=deviation
        )
    w, v = hermitian_eig(dyn)
    try:
        clip_spectrum(w)
    except ValueError as exc:
        raise NotPositive(f"dynamical matrix is not positive semidefinite: {exc}") from None
    keep = w > KRAUS_RANK_RTOL * np.trace(dyn).real
    ops = [np.sqrt(lam) * v[:, i].reshape(dim_out, dim_in) for i, lam in zip(np.flatnonzero(keep), w[keep])]
    return QuantumChannel(ops, atol=max(atol, 10 * TP_ATOL))


def depolarizing(p: float) -> QuantumChannel:
    """Qubit depolarizing channel with Kraus operators ``sqrt(1-p) I`` and ``sqrt(p/3) sigma_j``."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"depolarizing parameter must lie in [0, 1], got {p}")
    a, b = np.sqrt(1.0 - p), np.sqrt(p / 3.0)
    return QuantumChannel([a * PAULI_I, b * PAULI_X, b * PAULI_Y, b * PAULI_Z])


def bloch_state(v) -> np.ndarray:
    """Qubit density matrix ``(I + s . sigma) / 2`` for a Bloch vector with ``|s| <= 1``."""
    sx, sy, sz = (float(c) for c in v)
    norm = np.sqrt(sx * sx + sy * sy + sz * sz)
    if norm > 1.0 + 1e-12:
        raise OutOfBall(f"Bloch vector has length {norm:.6g} > 1")
    return 0.5 * (PAULI_I + sx * PAULI_X + sy * PAULI_Y + sz * PAULI_Z)


def bloch_vector(rho) -> np.ndarray:
    M = as_matrix(rho, square=True)
    if M.shape != (2, 2):
        raise DimensionMismatch("Bloch vectors are defined for qubits only")
    return np.array([np.trace(M @ P).real for P in (PAULI_X, PAULI_Y, PAULI_Z)])


def completely_mixed(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex) / d


def stinespring_isometry(channel: QuantumChannel) -> np.ndarray:
    """Isometry ``V psi = sum_j K_j psi ⊗ e_j`` from the input into ``Q ⊗ E``."""
    K = channel.kraus_array
    # V[(a, j), mu] = K_j[a, mu]
    return np.transpose(K, (1, 0, 2)).reshape(channel.dim_out * len(channel), channel.dim_in)


def mix_channels(phi: QuantumChannel, psi: QuantumChannel, theta: float) -> QuantumChannel:
    """The channel ``theta Phi + (1 - theta) Psi`` via the joined Kraus list."""
    if not 0.0 <= theta <= 1.0:
        raise OutOfRange(f"mixing weight must lie in [0, 1], got {theta}")
    if (phi.dim_in, phi.dim_out) != (psi.dim_in, psi.dim_out):
        raise DimensionMismatch("cannot mix channels with different dimensions")
    a, b = np.sqrt(theta), np.sqrt(1.0 - theta)
    return QuantumChannel([a * k for k in phi.kraus] + [b * k for k in psi.kraus])


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _haar_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    Q, R = np.linalg.qr(_complex_gaussian(rng, (rows, cols)))
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases


def random_channel(dim_in: int, dim_out: int, kraus_count: int, seed: int) -> QuantumChannel:
    """Seeded random channel from a Gaussian Stinespring isometry.

    Needs ``dim_out * kraus_count >= dim_in`` so that the isometry exists.
    """
    if kraus_count < 1:
        raise OutOfRange(f"kraus_count must be at least 1, got {kraus_count}")
    if dim_out * kraus_count < dim_in:
        raise DimensionMismatch(
            f"dim_out * kraus_count = {dim_out * kraus_count} is smaller than dim_in = {dim_in}"
        )
    rng = np.random.default_rng(seed)
    V = _haar_isometry(rng, dim_out * kraus_count, dim_in)
    K = V.reshape(dim_out, kraus_count, dim_in).transpose(1, 0, 2)
    return QuantumChannel(list(K))


def random_unitary(d: int, seed: int) -> np.ndarray:
    return _haar_isometry(np.random.default_rng(seed), d, d)


def random_density(dim: int, seed: int) -> np.ndarray:
    """Seeded full-rank random state ``G G^H / Tr(G G^H)`` with complex Gaussian ``G``."""
    if dim < 1:
        raise OutOfRange(f"dimension must be positive, got {dim}")
    G = _complex_gaussian(np.random.default_rng(seed), (dim, dim))
    rho = G @ G.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_pure_state(dim: int, seed: int) -> np.ndarray:
    psi = _complex_gaussian(np.random.default_rng(seed), dim)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())
