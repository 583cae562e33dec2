"""Seeded verification suites.

Every random object in trial ``t`` of suite ``name`` is derived from a single
64-bit trial seed computed from ``(master_seed, name, t)``; that seed is
stored on each certificate so a failing trial can be replayed on its own
with :func:`trial_objects`.
"""

from __future__ import annotations

import zlib
from typing import Callable, Iterable

import numpy as np

from . import bounds
from .bounds import InequalityCertificate, certificate, equality_certificate
from .channels import (
    apply,
    apply_via_choi,
    bloch_state,
    choi,
    completely_mixed,
    depolarizing,
    identity_channel,
    kraus_from_choi,
    random_channel,
    random_density,
    random_unitary,
    stinespring_isometry,
    unitary_channel,
)
from .entropies import EntropyParams, quantum_unified
from .exceptions import UnknownSuite
from .exchange import (
    entanglement_fidelity,
    entropy_exchange,
    exchange_spectrum,
    final_joint_state,
    map_entropy,
)
from .numkernel import (
    birkhoff_decompose,
    birkhoff_reconstruct,
    hermitian_eig,
    partial_trace,
    psd_spectrum,
    random_doubly_stochastic,
    schatten_q,
)

DIMS = (2, 3)
KRAUS_COUNTS = (2, 3, 4)
PROP1_Q = (1, 1.5, 2, 3)
PROP2_GRID = ((0.5, 1), (0.5, -1), (1, 1), (2, 0.5), (2, 1), (3, 2))
PROP2_THETAS = tuple(round(0.1 * i, 1) for i in range(1, 10))
PROP3_Q = (0.5, 1, 2, 3)
PROP3_S = (-1, 0, 0.5, 1, 2)
PROP4_Q = (0.5, 1, 2, 3)
PROP4_S = (0, 0.5, 1, 2)
LINDBLAD_GRID = ((2, 0.5), (2, 1), (3, 1))
MINKOWSKI_Q = (-1, 0.25, 0.5, 0.75, 1, 2, 3)
DEPOLARIZING_Q = (0.5, 1, 2, 3)
IDENTITY_PARAMS = ((0.5, 1), (1, 1), (2, 1), (2, 0), (3, 2))

ROUND_TRIP_TOL = 1e-8
EXACT_TOL = 1e-12


def trial_seed(master_seed: int, suite: str, index: int) -> int:
    """64-bit seed for one trial, independent of evaluation order."""
    ss = np.random.SeedSequence([int(master_seed), zlib.crc32(suite.encode()), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sub_seed(seed: int, k: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(k)]).generate_state(1, dtype=np.uint64)[0])


def trial_shape(index: int) -> tuple[int, int]:
    """Dimension and Kraus count used by trial ``index``; cycles through all combinations."""
    return DIMS[index % len(DIMS)], KRAUS_COUNTS[(index // len(DIMS)) % len(KRAUS_COUNTS)]


def trial_objects(seed: int, d: int, kraus_count: int):
    """Two channels and two states on ``C^d`` derived from one trial seed."""
    return (
        random_channel(d, d, kraus_count, sub_seed(seed, 0)),
        random_channel(d, d, kraus_count, sub_seed(seed, 1)),
        random_density(d, sub_seed(seed, 2)),
        random_density(d, sub_seed(seed, 3)),
    )


def _trials(master_seed: int, suite: str, trials: int):
    for t in range(trials):
        d, k = trial_shape(t)
        seed = trial_seed(master_seed, suite, t)
        yield seed, trial_objects(seed, d, k)


def _params(q, s) -> EntropyParams:
    return EntropyParams(q, s)


def suite_kernel(master_seed: int, trials: int) -> list[InequalityCertificate]:
    """Eigensolvers, Birkhoff decomposition, representation round trips and exchange identities."""
    certs: list[InequalityCertificate] = []
    for t, (seed, (phi, _, rho, _)) in enumerate(_trials(master_seed, "kernel", trials)):
        rng = np.random.default_rng(sub_seed(seed, 10))
        n = 4
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H = G + G.conj().T
        scale = np.linalg.norm(H)
        for method in ("lapack", "jacobi"):
            w, v = hermitian_eig(H, method=method)
            err = np.linalg.norm(v @ np.diag(w) @ v.conj().T - H) / scale
            certs.append(certificate(f"eig_reconstruction_{method}", err, 1e-9, tolerance=0.0, params={"dim": n}, seed=seed))
        gap = np.max(np.abs(hermitian_eig(H).eigenvalues - hermitian_eig(H, method="jacobi").eigenvalues))
        certs.append(certificate("eig_methods_agree", gap, 0.0, params={"dim": n}, seed=seed))

        S = random_doubly_stochastic(4, sub_seed(seed, 11))
        terms = birkhoff_decompose(S)
        err = np.max(np.abs(birkhoff_reconstruct(terms) - S))
        certs.append(certificate("birkhoff_reconstruction", err, 0.0, tolerance=ROUND_TRIP_TOL, params={"terms": len(terms)}, seed=seed))

        desc = {"dim_in": phi.dim_in, "dim_out": phi.dim_out, "kraus_count": len(phi)}
        sigma = choi(phi)
        round_trip = np.linalg.norm(choi(kraus_from_choi(sigma)).matrix - sigma.matrix)
        certs.append(certificate("choi_round_trip", round_trip, 0.0, tolerance=ROUND_TRIP_TOL, params=desc, seed=seed))
        via = np.linalg.norm(apply_via_choi(sigma, rho) - apply(phi, rho))
        certs.append(certificate("apply_via_choi", via, 0.0, params=desc, seed=seed))
        V = stinespring_isometry(phi)
        iso = np.linalg.norm(V.conj().T @ V - np.eye(phi.dim_in))
        env = np.linalg.norm(partial_trace(V @ rho @ V.conj().T, 1, (phi.dim_out, len(phi))) - apply(phi, rho))
        certs.append(certificate("stinespring_isometry", iso, 0.0, params=desc, seed=seed))
        certs.append(certificate("stinespring_partial_trace", env, 0.0, params=desc, seed=seed))

        w = exchange_spectrum(phi, rho)
        joint = psd_spectrum(final_joint_state(phi, rho))
        m = max(len(w), len(joint))
        gap = np.max(np.abs(np.pad(w, (0, m - len(w))) - np.pad(joint, (0, m - len(joint)))))
        certs.append(certificate("exchange_spectrum_matches_joint", gap, 0.0, params=desc, seed=seed))
        F_kraus = entanglement_fidelity(phi, rho)
        F_pur = entanglement_fidelity(phi, rho, method="purification")
        certs.append(equality_certificate("fidelity_routes_agree", F_kraus, F_pur, params=desc, seed=seed))
        for q, s in IDENTITY_PARAMS:
            p = _params(q, s)
            certs.append(equality_certificate(
                "map_entropy_equals_exchange_at_mixed", map_entropy(phi, p),
                entropy_exchange(phi, completely_mixed(phi.dim_in), p), params={**desc, **p.as_dict()}, seed=seed,
            ))
    return certs


def suite_depolarizing(master_seed: int, trials: int) -> list[InequalityCertificate]:
    certs: list[InequalityCertificate] = []
    for q in DEPOLARIZING_Q:
        certs.extend(bounds.certify_depolarizing_f(q))
    for r in (0.2, 0.5, 0.9):
        rho = bloch_state((0.0, 0.0, r))
        for p in (0.1, 0.5, 1.0):
            for q in DEPOLARIZING_Q:
                certs.append(bounds.certify_depolarizing_state(q, p, rho))
    for t in range(trials):
        seed = trial_seed(master_seed, "depolarizing", t)
        rng = np.random.default_rng(seed)
        direction = rng.standard_normal(3)
        vec = direction / np.linalg.norm(direction) * rng.uniform(0.05, 0.95)
        p = rng.uniform(0.05, 1.0)
        q = DEPOLARIZING_Q[t % len(DEPOLARIZING_Q)]
        cert = bounds.certify_depolarizing_state(q, p, bloch_state(vec))
        certs.append(_with_seed(cert, seed))
    return certs


def _with_seed(cert: InequalityCertificate, seed) -> InequalityCertificate:
    return InequalityCertificate(**{**cert.to_dict(), "seed": seed})


def suite_prop1(master_seed: int, trials: int) -> list[InequalityCertificate]:
    certs = [
        bounds.certify_prop1(identity_channel(2), bloch_state((0.1, 0.2, 0.3)), 2),
        bounds.certify_prop1(depolarizing(0.5), bloch_state((0.0, 0.0, 0.5)), 2),
    ]
    for seed, (phi, _, rho, _) in _trials(master_seed, "prop1", trials):
        for q in PROP1_Q:
            certs.append(bounds.certify_prop1(phi, rho, q, seed=seed))
            certs.extend(bounds.certify_prop1_chain(phi, rho, q, seed=seed))
    return certs


def suite_prop2(master_seed: int, trials: int) -> list[InequalityCertificate]:
    certs = []
    for seed, (phi, psi, rho, upsilon) in _trials(master_seed, "prop2", trials):
        for q, s in PROP2_GRID:
            p = _params(q, s)
            for theta in PROP2_THETAS:
                certs.append(bounds.certify_concavity_state(phi, rho, upsilon, theta, p, seed=seed))
                certs.append(bounds.certify_concavity_channel(phi, psi, rho, theta, p, seed=seed))
    return certs


def suite_prop3(master_seed: int, trials: int) -> list[InequalityCertificate]:
    dep = depolarizing(0.3)
    mixed = completely_mixed(2)
    spot = _params(2, 1)
    certs = [
        equality_certificate(
            "prop3_equality_spot", entropy_exchange(dep, mixed, spot),
            bounds.fano_bound_simple(2, entanglement_fidelity(dep, mixed), 2), tolerance=EXACT_TOL, params=spot.as_dict(),
        )
    ]
    for seed, (phi, _, rho, _) in _trials(master_seed, "prop3", trials):
        for q in PROP3_Q:
            for s in PROP3_S:
                p = _params(q, s)
                certs.append(bounds.certify_prop3(phi, rho, p, seed=seed))
                if bounds.in_fano_simple_range(p):
                    certs.append(bounds.certify_prop3(phi, rho, p, form="simple", seed=seed))
    return certs


def suite_prop4(master_seed: int, trials: int) -> list[InequalityCertificate]:
    dep = depolarizing(0.3)
    worked = bounds.compare_map_bounds(dep, _params(2, 1))
    certs = list(worked["certificates"])
    certs.append(equality_certificate("prop4_worked_map_entropy", worked["map_entropy"], 0.48, tolerance=EXACT_TOL))
    certs.append(equality_certificate("prop4_worked_rhs_new", worked["rhs_new"], 0.75, tolerance=EXACT_TOL))
    certs.append(equality_certificate("prop4_worked_rhs_old", worked["rhs_old"], 1.0, tolerance=EXACT_TOL))
    for s in PROP4_S:
        vn = _params(1, s)
        certs.append(equality_certificate(
            "map_bounds_coincide_at_q1", bounds.map_bound_new(dep, vn), bounds.map_bound_old(dep, vn), tolerance=EXACT_TOL,
        ))
    for seed, (phi, _, rho, _) in _trials(master_seed, "prop4", trials):
        for q in PROP4_Q:
            for s in PROP4_S:
                p = _params(q, s)
                certs.append(bounds.certify_prop4(phi, p, seed=seed))
                certs.append(bounds.certify_subsystem_bound(phi, rho, p, seed=seed))
                if q > 1 and s >= 1 / q:
                    certs.extend(bounds.compare_map_bounds(phi, p, seed=seed)["certificates"][1:])
    return certs


def suite_lindblad(master_seed: int, trials: int) -> list[InequalityCertificate]:
    certs = []
    rho = bloch_state((0.3, -0.2, 0.4))
    for q, s in LINDBLAD_GRID:
        certs.extend(bounds.certify_lindblad_extension(identity_channel(2), rho, _params(q, s)))
    for seed, (phi, _, rho, _) in _trials(master_seed, "lindblad", trials):
        U = unitary_channel(random_unitary(rho.shape[0], sub_seed(seed, 20)))
        for q, s in LINDBLAD_GRID:
            p = _params(q, s)
            certs.extend(bounds.certify_lindblad_extension(phi, rho, p, seed=seed))
            certs.append(equality_certificate(
                "unitary_output_entropy", quantum_unified(apply(U, rho), p), quantum_unified(rho, p), params=p.as_dict(), seed=seed,
            ))
            certs.append(certificate("unitary_exchange_zero", abs(entropy_exchange(U, rho, p)), 0.0, params=p.as_dict(), seed=seed))
    return certs


def random_positive_pair(seed: int, d: int = 3):
    """Two strictly positive matrices with independent random scales."""
    rng = np.random.default_rng(sub_seed(seed, 30))
    A = random_density(d, sub_seed(seed, 31)) * rng.uniform(0.2, 5.0)
    Z = random_density(d, sub_seed(seed, 32)) * rng.uniform(0.2, 5.0)
    return A, Z


def suite_minkowski(master_seed: int, trials: int) -> list[InequalityCertificate]:
    I2 = np.eye(2)
    certs = [
        bounds.certify_minkowski(I2, I2, 0.5),
        equality_certificate("minkowski_identity_pair", schatten_q(2 * I2, 0.5), 8.0, tolerance=EXACT_TOL),
    ]
    for t in range(trials):
        seed = trial_seed(master_seed, "minkowski", t)
        A, Z = random_positive_pair(seed)
        certs.append(bounds.certify_ky_fan(A, Z, seed=seed))
        for q in MINKOWSKI_Q:
            certs.append(bounds.certify_minkowski(A, Z, q, seed=seed))
    return certs


SUITES: dict[str, Callable[[int, int], list[InequalityCertificate]]] = {
    "kernel": suite_kernel,
    "depolarizing": suite_depolarizing,
    "prop1": suite_prop1,
    "prop2": suite_prop2,
    "prop3": suite_prop3,
    "prop4": suite_prop4,
    "lindblad": suite_lindblad,
    "minkowski": suite_minkowski,
}


def resolve_suites(name: str) -> list[str]:
    if name == "all":
        return list(SUITES)
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    return [name]


def run_suite(name: str, master_seed: int = 42, trials: int = 200) -> list[InequalityCertificate]:
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    (name,) = resolve_suites(name)
    return SUITES[name](master_seed, trials)


def run_verification(suite: str = "all", master_seed: int = 42, trials: int = 200) -> dict:
    """Run one suite or all of them and assemble a report dictionary."""
    names = resolve_suites(suite)
    certs: list[InequalityCertificate] = []
    summary = {}
    for name in names:
        batch = run_suite(name, master_seed, trials)
        summary[name] = {"certificates": len(batch), "failed": sum(not c.holds for c in batch)}
        certs.extend(batch)
    return {
        "inputs": {"suite": suite, "seed": master_seed, "trials": trials},
        "quantities": {"suites": summary, "total": len(certs), "failed": sum(not c.holds for c in certs)},
        "certificates": [c.to_dict() for c in certs],
    }


def failures(certs: Iterable[InequalityCertificate]) -> list[InequalityCertificate]:
    return [c for c in certs if not c.holds]
