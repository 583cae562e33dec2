import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import sqrtm

from qchannel_entropy.channels import (
    bloch_state,
    completely_mixed,
    depolarizing,
    identity_channel,
    kraus_from_choi,
    choi,
    random_channel,
    random_density,
    random_pure_state,
    random_unitary,
    unitary_channel,
)
from qchannel_entropy.entropies import Q_ONE, shannon, unified_classical
from qchannel_entropy.exceptions import DimensionMismatch
from qchannel_entropy.exchange import (
    entanglement_fidelity,
    entropy_exchange,
    exchange_matrix,
    exchange_spectrum,
    final_joint_state,
    map_entropy,
    map_entropy_via_exchange,
    purify,
)
from qchannel_entropy.numkernel import partial_trace, psd_spectrum

seeds = st.integers(0, 2**32 - 1)
square = st.tuples(st.integers(2, 3), st.integers(1, 4))
params = st.sampled_from([(Q_ONE, 1), (0.5, 1), (2, 1), (2, 0.5), (3, 2), (0.5, -1), (2, 0)])

BELL = [
    np.array([1, 0, 0, 1]) / np.sqrt(2),
    np.array([0, 1, 1, 0]) / np.sqrt(2),
    np.array([0, -1j, 1j, 0]) / np.sqrt(2),  # (sigma_y ⊗ I)|phi+>
    np.array([1, 0, 0, -1]) / np.sqrt(2),
]


def joint_from_vector(channel, psi):
    """(Phi ⊗ id)|psi><psi| with Phi acting on the first factor, as an explicit Kraus sum."""
    d = channel.dim_in
    P = np.outer(psi, psi.conj())
    return sum(np.kron(K, np.eye(d)) @ P @ np.kron(K, np.eye(d)).conj().T for K in channel.kraus)


# purification

def test_purify_marginal_and_examples():
    pure = random_pure_state(3, 4)
    psi = purify(pure)
    np.testing.assert_allclose(partial_trace(psi.projector, 1, psi.dims), pure, atol=1e-14)
    assert psd_spectrum(partial_trace(psi.projector, 0, psi.dims))[0] == pytest.approx(1.0)
    bell = purify(completely_mixed(2))
    assert abs(np.vdot(BELL[0], bell.vector)) == pytest.approx(1.0)


@given(seeds, st.integers(1, 4))
def test_purify_random(seed, d):
    rho = random_density(d, seed)
    psi = purify(rho)
    assert np.linalg.norm(partial_trace(psi.projector, 1, (d, d)) - rho) < 1e-9


# joint state

def test_identity_joint_is_pure():
    rho = bloch_state((0.2, 0.1, -0.4))
    np.testing.assert_allclose(final_joint_state(identity_channel(2), rho), purify(rho).projector, atol=1e-15)


@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_depolarizing_joint_is_bell_diagonal(p):
    weights = [1 - p, p / 3, p / 3, p / 3]
    expected = sum(w * np.outer(b, b.conj()) for w, b in zip(weights, BELL))
    np.testing.assert_allclose(final_joint_state(depolarizing(p), completely_mixed(2)), expected, atol=1e-15)


@given(seeds, square)
def test_joint_state_reference_marginal_unchanged(seed, shape):
    d, k = shape
    ch = random_channel(d, d, k, seed)
    rho = random_density(d, seed + 1)
    before = partial_trace(purify(rho).projector, 0, (d, d))
    after = partial_trace(final_joint_state(ch, rho), 0, (d, d))
    assert np.linalg.norm(after - before) < 1e-9
    np.testing.assert_allclose(final_joint_state(ch, rho), joint_from_vector(ch, purify(rho).vector), atol=1e-13)


# fidelity

def test_fidelity_examples():
    rho = random_density(3, 2)
    assert entanglement_fidelity(identity_channel(3), rho) == pytest.approx(1.0, abs=1e-14)
    for p in (0.0, 0.3, 0.9):
        assert entanglement_fidelity(depolarizing(p), completely_mixed(2)) == pytest.approx(1 - p, abs=1e-15)
    with pytest.raises(DimensionMismatch):
        entanglement_fidelity(random_channel(2, 3, 2, 0), completely_mixed(2))
    with pytest.raises(ValueError):
        entanglement_fidelity(identity_channel(2), completely_mixed(2), method="trace")


@given(seeds, square)
def test_fidelity_routes_agree(seed, shape):
    d, k = shape
    ch = random_channel(d, d, k, seed)
    rho = random_density(d, seed + 1)
    F = entanglement_fidelity(ch, rho)
    assert 0 <= F <= 1 + 1e-12
    assert F == pytest.approx(entanglement_fidelity(ch, rho, method="purification"), abs=1e-9)


@given(seeds, square)
def test_fidelity_independent_of_purification(seed, shape):
    # |psi'> = sum_ij (sqrt rho)_ij |i>|j> is a different purification of rho
    d, k = shape
    ch = random_channel(d, d, k, seed)
    rho = random_density(d, seed + 1)
    psi = sqrtm(rho).reshape(d * d)
    F_alt = np.real(psi.conj() @ joint_from_vector(ch, psi) @ psi)
    assert entanglement_fidelity(ch, rho) == pytest.approx(F_alt, abs=1e-9)


@given(seeds, st.integers(2, 3))
def test_unit_fidelity_means_no_exchange(seed, d):
    U = random_unitary(d, seed)
    rho = random_density(d, seed + 1)
    ch = unitary_channel(U)
    if entanglement_fidelity(ch, rho) > 1 - 1e-12:
        assert entropy_exchange(ch, rho, (2, 1)) < 1e-8
    ident = identity_channel(d)
    assert entanglement_fidelity(ident, rho) > 1 - 1e-12
    for p in [(Q_ONE, 1), (0.5, 1), (2, 1), (3, 0)]:
        assert entropy_exchange(ident, rho, p) < 1e-8


# exchange matrix and entropy

def test_exchange_matrix_examples():
    np.testing.assert_allclose(exchange_matrix(identity_channel(2), bloch_state((0, 0.3, 0))), [[1.0]], atol=1e-15)
    np.testing.assert_allclose(exchange_matrix(depolarizing(0.3), completely_mixed(2)), np.diag([0.7, 0.1, 0.1, 0.1]), atol=1e-15)


@given(seeds, square)
def test_exchange_matrix_entries(seed, shape):
    d, k = shape
    ch = random_channel(d, d, k, seed)
    rho = random_density(d, seed + 1)
    W = exchange_matrix(ch, rho)
    for i, Ki in enumerate(ch.kraus):
        for j, Kj in enumerate(ch.kraus):
            assert W[i, j] == pytest.approx(np.trace(Ki @ rho @ Kj.conj().T), abs=1e-13)


@given(seeds, st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 4)).filter(lambda t: t[1] * t[2] >= t[0]))
def test_exchange_spectrum_matches_joint(seed, shape):
    din, dout, k = shape
    ch = random_channel(din, dout, k, seed)
    rho = random_density(din, seed + 1)
    w = exchange_spectrum(ch, rho)
    joint = psd_spectrum(final_joint_state(ch, rho))
    n = max(w.size, joint.size)
    assert np.max(np.abs(np.pad(w, (0, n - w.size)) - np.pad(joint, (0, n - joint.size)))) < 1e-9


def test_entropy_exchange_examples():
    dep, mixed = depolarizing(0.3), completely_mixed(2)
    assert entropy_exchange(dep, mixed, (Q_ONE, 1)) == pytest.approx(shannon([0.7, 0.1, 0.1, 0.1]), abs=1e-14)
    assert entropy_exchange(dep, mixed, (Q_ONE, 1)) == pytest.approx(0.94045, abs=5e-6)
    assert entropy_exchange(dep, mixed, (2, 1)) == pytest.approx(0.48, abs=1e-14)
    with pytest.raises(ValueError):
        entropy_exchange(dep, mixed, (2, 1), via="environment")


@given(seeds, square, params)
def test_entropy_exchange_routes_agree(seed, shape, p):
    d, k = shape
    ch = random_channel(d, d, k, seed)
    rho = random_density(d, seed + 1)
    assert entropy_exchange(ch, rho, p) == pytest.approx(entropy_exchange(ch, rho, p, via="joint"), abs=1e-9)


# map entropy

def test_map_entropy_examples():
    assert map_entropy(identity_channel(3), (2, 1)) == pytest.approx(0.0, abs=1e-15)
    assert map_entropy(depolarizing(0.3), (2, 1)) == pytest.approx(0.48, abs=1e-14)
    assert map_entropy(depolarizing(0.3), (0.5, 2)) == pytest.approx(
        unified_classical([0.7, 0.1, 0.1, 0.1], (0.5, 2)), abs=1e-14
    )


@given(seeds, st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 4)).filter(lambda t: t[1] * t[2] >= t[0]), params)
def test_map_entropy_equals_exchange_at_mixed_state(seed, shape, p):
    ch = random_channel(*shape, seed)
    assert map_entropy(ch, p) == pytest.approx(map_entropy_via_exchange(ch, p), abs=1e-9)


@given(seeds, square, params)
def test_map_entropy_independent_of_kraus_decomposition(seed, shape, p):
    d, k = shape
    ch = random_channel(d, d, k, seed)
    other = kraus_from_choi(choi(ch))
    assert map_entropy(other, p) == pytest.approx(map_entropy(ch, p), abs=1e-9)
    assert map_entropy_via_exchange(other, p) == pytest.approx(map_entropy(ch, p), abs=1e-9)
