"""Purification-based channel quantities.

The reference system ``R`` purifies the channel input; joint states live on
``Q' ⊗ R`` with the channel output first, matching the Choi convention in
:mod:`qchannel_entropy.channels`.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .channels import QuantumChannel, _check_input, choi, completely_mixed
from .entropies import as_params, check_density_matrix, quantum_unified, unified_from_spectrum
from .exceptions import DimensionMismatch
from .numkernel import clip_spectrum, hermitian_eig, hermitian_eigvals


class Purification(NamedTuple):
    vector: np.ndarray
    dims: tuple[int, int]

    @property
    def projector(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())


def purify(rho) -> Purification:
    """Canonical purification ``sum_k sqrt(lambda_k) |v_k> ⊗ |k>`` on ``Q ⊗ R``."""
    M = check_density_matrix(rho)
    w, v = hermitian_eig(M)
    w = clip_spectrum(w)
    d = M.shape[0]
    # psi[(a, k)] = sqrt(w_k) v[a, k]
    psi = (v * np.sqrt(w)[None, :]).reshape(d * d)
    psi /= np.linalg.norm(psi)
    return Purification(psi, (d, d))


def final_joint_state(channel: QuantumChannel, rho) -> np.ndarray:
    """``(Phi ⊗ id_R)(|psi><psi|)`` on ``Q' ⊗ R`` for the canonical purification."""
    _check_input(channel, rho)
    psi = purify(rho)
    d = channel.dim_in
    Psi = psi.vector.reshape(d, d)
    # (K ⊗ I)|psi> reshaped to (dim_out, d) is K @ Psi
    outs = np.einsum("jab,bk->jak", channel.kraus_array, Psi).reshape(len(channel), -1)
    joint = np.einsum("ja,jb->ab", outs, outs.conj())
    return 0.5 * (joint + joint.conj().T)


def entanglement_fidelity(channel: QuantumChannel, rho, method: str = "kraus") -> float:
    """Entanglement fidelity ``F(rho, Phi)``.

    ``method="kraus"`` evaluates ``sum_j |Tr(rho K_j)|^2``;
    ``method="purification"`` evaluates ``<psi| (Phi ⊗ id)(|psi><psi|) |psi>``.
    Both need ``dim_in == dim_out``.
    """
    if channel.dim_in != channel.dim_out:
        raise DimensionMismatch("entanglement fidelity needs a channel with equal input and output dimension")
    M = _check_input(channel, rho)
    if method == "kraus":
        traces = np.einsum("ab,jba->j", M, channel.kraus_array)
        return float(np.sum(np.abs(traces) ** 2))
    if method == "purification":
        psi = purify(M).vector
        joint = final_joint_state(channel, M)
        return float(np.real(psi.conj() @ joint @ psi))
    raise ValueError(f"unknown fidelity method {method!r}")


def exchange_matrix(channel: QuantumChannel, rho) -> np.ndarray:
    """The matrix ``W`` with ``w_ij = Tr(K_i rho K_j^H)``, in Kraus-label order."""
    M = _check_input(channel, rho)
    K = channel.kraus_array
    n = len(channel)
    W = (K @ M).reshape(n, -1) @ K.reshape(n, -1).conj().T
    return 0.5 * (W + W.conj().T)


def exchange_spectrum(channel: QuantumChannel, rho) -> np.ndarray:
    return clip_spectrum(hermitian_eigvals(exchange_matrix(channel, rho)))


def entropy_exchange(channel: QuantumChannel, rho, params, via: str = "exchange") -> float:
    """``(q, s)``-entropy exchange of ``rho`` through ``channel``.

    ``via="exchange"`` uses the spectrum of :func:`exchange_matrix` (size = Kraus
    count); ``via="joint"`` uses the joint output on ``Q' ⊗ R``. The two share
    their nonzero spectrum.
    """
    params = as_params(params)
    if via == "exchange":
        return unified_from_spectrum(exchange_spectrum(channel, rho), params)
    if via == "joint":
        return quantum_unified(final_joint_state(channel, rho), params)
    raise ValueError(f"unknown evaluation route {via!r}")


def map_entropy(channel: QuantumChannel, params) -> float:
    """Map ``(q, s)``-entropy: the unified entropy of the rescaled dynamical matrix."""
    return quantum_unified(choi(channel).sigma, as_params(params))


def map_entropy_via_exchange(channel: QuantumChannel, params) -> float:
    return entropy_exchange(channel, completely_mixed(channel.dim_in), params)
