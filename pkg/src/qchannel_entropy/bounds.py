"""Certificates for the entropic inequalities obeyed by quantum channels.

Each ``certify_*`` function evaluates both sides of one inequality written
as ``lhs <= rhs`` and returns an :class:`InequalityCertificate`. Equalities
are certified as ``|difference| <= 0`` so the same record shape covers them.
Parameter domains are enforced: asking for a certificate outside the range
where the inequality is known to hold raises :class:`ParameterOutOfDomain`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Union

import numpy as np

from .channels import (
    QuantumChannel,
    _check_input,
    apply,
    completely_mixed,
    depolarizing,
    mix_channels,
    particular_outputs,
)
from .entropies import (
    EntropyParams,
    Q_ONE,
    as_params,
    binary_tsallis,
    max_entropy,
    q_log,
    quantum_q_entropy,
    quantum_unified,
)
from .exceptions import DimensionMismatch, OutOfRange, ParameterOutOfDomain
from .exchange import entanglement_fidelity, entropy_exchange, final_joint_state, map_entropy
from .numkernel import (
    check_majorization,
    partial_trace,
    psd_spectrum,
    schatten_q,
)

CERT_TOL = 1e-9
STRICT_MARGIN = 1e-12
F_TOL = 1e-12
DEPOLARIZING_P_GRID = tuple(i / 100 for i in range(101))

Seed = Union[int, str]


@dataclass(frozen=True)
class InequalityCertificate:
    """Outcome of evaluating ``lhs <= rhs`` (``holds`` iff ``slack >= -tolerance``)."""

    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    params: dict = field(default_factory=dict)
    seed: Seed = "constructed"
    tolerance: float = CERT_TOL

    def to_dict(self) -> dict:
        return asdict(self)


def certificate(name, lhs, rhs, *, tolerance=CERT_TOL, params=None, seed: Seed = "constructed"):
    lhs, rhs = float(lhs), float(rhs)
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        raise ValueError(f"certificate {name!r} has non-finite sides: lhs={lhs}, rhs={rhs}")
    slack = rhs - lhs
    return InequalityCertificate(
        name=name,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        holds=bool(slack >= -tolerance),
        params=dict(params or {}),
        seed=seed,
        tolerance=float(tolerance),
    )


def equality_certificate(name, a, b, *, tolerance=CERT_TOL, params=None, seed: Seed = "constructed"):
    params = dict(params or {})
    params.update(left=float(a), right=float(b))
    return certificate(name, abs(float(a) - float(b)), 0.0, tolerance=tolerance, params=params, seed=seed)


def _describe(channel: QuantumChannel, params: EntropyParams | None = None, **extra) -> dict:
    out = {"dim_in": channel.dim_in, "dim_out": channel.dim_out, "kraus_count": len(channel)}
    if params is not None:
        out.update(params.as_dict())
    out.update(extra)
    return out


# q-average output entropy

def q_average_output_entropy(channel: QuantumChannel, rho, q) -> float:
    """``sum_j p_j^q S_q(rho'_j)`` over effects with nonzero probability."""
    qv = as_params(q).q_value
    return float(
        sum(e.probability**qv * quantum_q_entropy(e.state, q) for e in particular_outputs(channel, rho))
    )


def certify_prop1(channel: QuantumChannel, rho, q, seed: Seed = "constructed") -> InequalityCertificate:
    """q-average output entropy is at most the input q-entropy, for ``q >= 1``."""
    params = EntropyParams(q, 1.0)
    if params.q_value < 1:
        raise ParameterOutOfDomain(f"the q-average output bound needs q >= 1, got q = {params.q_value}")
    lhs = q_average_output_entropy(channel, rho, params.q)
    rhs = quantum_q_entropy(rho, params.q)
    return certificate("prop1_q_average_output", lhs, rhs, params=_describe(channel, params), seed=seed)


class OmegaExtension(NamedTuple):
    state: np.ndarray
    dims: tuple[int, int, int]
    blocks: list
    marginal_qs: np.ndarray
    marginal_r: np.ndarray


def omega_extension(channel: QuantumChannel, rho) -> OmegaExtension:
    """Three-party state ``V rho V^H`` on ``Q' ⊗ R ⊗ S`` with ``V psi = sum_j K_j psi ⊗ e_j ⊗ e_j``.

    ``R`` and ``S`` have dimension equal to the Kraus count. ``blocks`` holds
    ``A_jj = K_j rho K_j^H``; the marginals are obtained by partial trace of
    ``state`` rather than assembled from the blocks.
    """
    M = _check_input(channel, rho)
    K = channel.kraus_array
    n, dout, din = K.shape
    V = np.zeros((dout, n, n, din), dtype=complex)
    for j in range(n):
        V[:, j, j, :] = K[j]
    V = V.reshape(dout * n * n, din)
    omega = V @ M @ V.conj().T
    omega = 0.5 * (omega + omega.conj().T)
    dims = (dout, n, n)
    blocks = [K[j] @ M @ K[j].conj().T for j in range(n)]
    return OmegaExtension(
        state=omega,
        dims=dims,
        blocks=blocks,
        marginal_qs=partial_trace(omega, 1, dims),
        marginal_r=partial_trace(omega, (0, 2), dims),
    )


def certify_prop1_chain(channel: QuantumChannel, rho, q, seed: Seed = "constructed") -> list[InequalityCertificate]:
    """Check the rewriting ``S_q(Omega^{Q'S}) - S_q(Omega^R) = <S_q(rho'_j)>_q`` and
    the triangle step ``S_q(Omega^{Q'S}) - S_q(Omega^R) <= S_q(Omega) = S_q(rho)``."""
    params = EntropyParams(q, 1.0)
    if params.q_value < 1:
        raise ParameterOutOfDomain(f"the triangle step needs q >= 1, got q = {params.q_value}")
    ext = omega_extension(channel, rho)
    difference = quantum_q_entropy(ext.marginal_qs, params.q) - quantum_q_entropy(ext.marginal_r, params.q)
    average = q_average_output_entropy(channel, rho, params.q)
    whole = quantum_q_entropy(ext.state, params.q)
    desc = _describe(channel, params)
    return [
        equality_certificate("prop1_chain_identity", difference, average, params=desc, seed=seed),
        certificate("prop1_triangle_step", difference, whole, params=desc, seed=seed),
        equality_certificate("prop1_isometry_entropy", whole, quantum_q_entropy(rho, params.q), params=desc, seed=seed),
    ]


# depolarizing example

def depolarizing_f(q: float, p: float) -> float:
    """``f_q(p) = (1-p)^q + 3^(1-q) p^q``: the ratio of both sides of the q-average
    bound for the qubit depolarizing channel on any impure input."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"p must lie in [0, 1], got {p}")
    if not q > 0:
        raise OutOfRange(f"q must be positive, got {q}")
    return (1.0 - p) ** q + 3.0 ** (1.0 - q) * p**q


def certify_depolarizing_f(q: float, grid=DEPOLARIZING_P_GRID) -> list[InequalityCertificate]:
    """Sweep ``f_q`` over ``grid``.

    For ``q >= 1``: ``f <= 1`` everywhere, strictly below 1 for ``q > 1`` and
    ``p > 0``. For ``0 < q < 1``: ``f > 1`` for every ``p > 0`` (the bound is
    violated, and the certificate passes when the violation is observed).
    """
    certs = [
        equality_certificate("depolarizing_f_at_0", depolarizing_f(q, 0.0), 1.0, tolerance=F_TOL, params={"q": q, "p": 0.0}),
        equality_certificate(
            "depolarizing_f_at_1", depolarizing_f(q, 1.0), 3.0 ** (1.0 - q), tolerance=F_TOL, params={"q": q, "p": 1.0}
        ),
    ]
    for p in grid:
        f = depolarizing_f(q, p)
        desc = {"q": q, "p": p}
        if q >= 1:
            certs.append(certificate("depolarizing_f_le_one", f, 1.0, tolerance=F_TOL, params=desc))
            if q > 1 and p > 0:
                certs.append(certificate("depolarizing_f_strict", f, 1.0 - STRICT_MARGIN, tolerance=0.0, params=desc))
        elif p > 0:
            certs.append(certificate("depolarizing_f_violation", 1.0 + STRICT_MARGIN, f, tolerance=0.0, params=desc))
    return certs


def certify_depolarizing_state(q: float, p: float, rho) -> InequalityCertificate:
    """State-level form of the depolarizing example for an impure qubit input.

    ``q > 1``: the q-average output entropy is strictly below the input entropy.
    ``q = 1``: they are equal. ``0 < q < 1``: strictly above (violation regime).
    """
    if not 0 < p <= 1:
        raise OutOfRange(f"the depolarizing comparison needs p in (0, 1], got {p}")
    channel = depolarizing(p)
    average = q_average_output_entropy(channel, rho, q)
    entropy = quantum_q_entropy(rho, q)
    desc = _describe(channel, EntropyParams(q, 1.0), p=p)
    if q == 1:
        return equality_certificate("depolarizing_state_equal", average, entropy, params=desc)
    if q > 1:
        return certificate("depolarizing_state_strict", average, entropy - STRICT_MARGIN, tolerance=0.0, params=desc)
    return certificate("depolarizing_state_violation", entropy + STRICT_MARGIN, average, tolerance=0.0, params=desc)


# concavity of the entropy exchange

def in_concavity_domain(params) -> bool:
    """``{0 < q <= 1, s <= 1/q}  U  {q >= 1, s >= 1/q}``."""
    params = as_params(params)
    if params.is_von_neumann:
        return True
    q, s = params.q_value, params.s_value
    return (q <= 1 and s <= 1 / q) or (q >= 1 and s >= 1 / q)


def _require_concavity_domain(params: EntropyParams):
    if not in_concavity_domain(params):
        raise ParameterOutOfDomain(f"concavity of the entropy exchange is not established at {params}")


def certify_concavity_state(
    channel: QuantumChannel, rho, upsilon, theta: float, params, seed: Seed = "constructed"
) -> InequalityCertificate:
    """Concavity in the input state."""
    params = as_params(params)
    _require_concavity_domain(params)
    if not 0 <= theta <= 1:
        raise OutOfRange(f"theta must lie in [0, 1], got {theta}")
    mixture = theta * np.asarray(rho) + (1 - theta) * np.asarray(upsilon)
    lhs = theta * entropy_exchange(channel, rho, params) + (1 - theta) * entropy_exchange(channel, upsilon, params)
    rhs = entropy_exchange(channel, mixture, params)
    return certificate("prop2_concavity_state", lhs, rhs, params=_describe(channel, params, theta=theta), seed=seed)


def certify_concavity_channel(
    phi: QuantumChannel, psi: QuantumChannel, rho, theta: float, params, seed: Seed = "constructed"
) -> InequalityCertificate:
    """Concavity in the channel, with the mixture realized on the joined Kraus list."""
    params = as_params(params)
    _require_concavity_domain(params)
    mixed = mix_channels(phi, psi, theta)
    lhs = theta * entropy_exchange(phi, rho, params) + (1 - theta) * entropy_exchange(psi, rho, params)
    rhs = entropy_exchange(mixed, rho, params)
    return certificate("prop2_concavity_channel", lhs, rhs, params=_describe(phi, params, theta=theta), seed=seed)


# Fano-type bounds

def _check_fidelity(F: float):
    if not -1e-12 <= F <= 1 + 1e-12:
        raise OutOfRange(f"fidelity must lie in [0, 1], got {F}")
    return min(max(float(F), 0.0), 1.0)


def fano_bound_simple(q, F: float, d: int) -> float:
    """``h_q(F) + (1-F)^q ln_q(d^2 - 1)`` with ``h_q`` the binary Tsallis entropy."""
    F = _check_fidelity(F)
    qv = as_params(q).q_value
    tail = d * d - 1
    second = (1.0 - F) ** qv * q_log(tail, q) if tail > 0 and F < 1 else 0.0
    return binary_tsallis(F, q) + second


def fano_bound_general(q, s, F: float, d: int) -> float:
    """Fano-type bound valid for every ``q > 0`` and real ``s``.

    Equal to ``ln_{1-s}{1 + (1-q) B} / (1-q)`` with ``B`` the simple bound;
    ``1 + (1-q) B = F^q + (d^2-1)^(1-q) (1-F)^q`` is evaluated in that form,
    which is positive for every ``F``.
    """
    params = EntropyParams(q, s)
    F = _check_fidelity(F)
    if params.is_von_neumann:
        return fano_bound_simple(Q_ONE, F, d)
    qv = params.q_value
    tail = d * d - 1
    y = F**qv + ((tail ** (1.0 - qv)) * (1.0 - F) ** qv if tail > 0 and F < 1 else 0.0)
    a = 1.0 - qv
    if params.is_renyi:
        return math.log(y) / a + 0.0
    sv = params.s_value
    return math.expm1(sv * math.log(y)) / (a * sv) + 0.0


def in_fano_simple_range(params) -> bool:
    """``{0 < q <= 1, s <= 1}  U  {q >= 1, s >= 1}``."""
    params = as_params(params)
    if params.is_von_neumann:
        return True
    q, s = params.q_value, params.s_value
    return (q <= 1 and s <= 1) or (q >= 1 and s >= 1)


def certify_prop3(
    channel: QuantumChannel, rho, params, form: str = "general", seed: Seed = "constructed"
) -> InequalityCertificate:
    """Entropy exchange against a Fano-type bound in the entanglement fidelity."""
    params = as_params(params)
    if channel.dim_in != channel.dim_out:
        raise DimensionMismatch("Fano-type bounds need equal input and output dimension")
    d = channel.dim_in
    F = entanglement_fidelity(channel, rho)
    if form == "general":
        bound = fano_bound_general(params.q, params.s, F, d)
    elif form == "simple":
        if not in_fano_simple_range(params):
            raise ParameterOutOfDomain(f"the simplified Fano bound is not established at {params}")
        bound = fano_bound_simple(params.q, F, d)
    else:
        raise ValueError(f"unknown bound form {form!r}")
    lhs = entropy_exchange(channel, rho, params)
    return certificate(f"prop3_fano_{form}", lhs, bound, params=_describe(channel, params, fidelity=F), seed=seed)


def unified_of_tsallis(x: float, q: float, s: float) -> float:
    """The map ``x -> [(1 + (1-q) x)^s - 1] / ((1-q) s)`` turning a Tsallis value
    into the unified entropy with the same power sum (``s = 0``: Rényi)."""
    a = 1.0 - q
    y = 1.0 + a * x
    if y <= 0:
        raise OutOfRange(f"1 + (1-q) x must be positive, got {y}")
    if s == 0:
        return math.log(y) / a
    return math.expm1(s * math.log(y)) / (a * s)


# Lindblad-type triangle

def in_lindblad_domain(params) -> bool:
    params = as_params(params)
    if params.is_von_neumann:
        return True
    return params.q_value > 1 and not params.is_renyi and params.s_value >= 1 / params.q_value


def certify_lindblad_extension(
    channel: QuantumChannel, rho, params, seed: Seed = "constructed"
) -> list[InequalityCertificate]:
    """Each of output entropy, input entropy and entropy exchange is at most the sum of the other two."""
    params = as_params(params)
    if not in_lindblad_domain(params):
        raise ParameterOutOfDomain(f"the Lindblad-type triangle needs q > 1 and s >= 1/q, got {params}")
    out = quantum_unified(apply(channel, rho), params)
    inp = quantum_unified(rho, params)
    exc = entropy_exchange(channel, rho, params)
    desc = _describe(channel, params, output_entropy=out, input_entropy=inp, exchange=exc)
    return [
        certificate("lindblad_exchange_le_sum", exc, out + inp, params=desc, seed=seed),
        certificate("lindblad_output_le_sum", out, inp + exc, params=desc, seed=seed),
        certificate("lindblad_input_le_sum", inp, out + exc, params=desc, seed=seed),
    ]


# map entropy bounds

def _subsystem_bound(output_entropy: float, d: int, params: EntropyParams) -> float:
    if params.is_von_neumann or params.is_renyi:
        return output_entropy + math.log(d)
    factor = math.exp((1.0 - params.q_value) * params.s_value * math.log(d))
    return factor * output_entropy + max_entropy(d, params)


def map_bound_new(channel: QuantumChannel, params) -> float:
    """``d^((1-q)s) E(Phi(rho_*)) + (1/s) ln_q(d^s)``; ``R_q(Phi(rho_*)) + ln d`` at ``s = 0``."""
    params = as_params(params)
    d = channel.dim_in
    out = quantum_unified(apply(channel, completely_mixed(d)), params)
    return _subsystem_bound(out, d, params)


def map_bound_old(channel: QuantumChannel, params) -> float:
    """``E(Phi(rho_*)) + (1/s) ln_q(d^s)``, from the Lindblad-type triangle."""
    params = as_params(params)
    d = channel.dim_in
    return quantum_unified(apply(channel, completely_mixed(d)), params) + max_entropy(d, params)


def certify_prop4(channel: QuantumChannel, params, seed: Seed = "constructed") -> InequalityCertificate:
    params = as_params(params)
    return certificate(
        "prop4_map_entropy", map_entropy(channel, params), map_bound_new(channel, params),
        params=_describe(channel, params), seed=seed,
    )


def certify_subsystem_bound(channel: QuantumChannel, rho, params, seed: Seed = "constructed") -> InequalityCertificate:
    """Entropy of the joint output on ``Q' ⊗ R`` against its ``Q'`` marginal."""
    params = as_params(params)
    joint = final_joint_state(channel, rho)
    lhs = quantum_unified(joint, params)
    out = quantum_unified(apply(channel, rho), params)
    rhs = _subsystem_bound(out, channel.dim_in, params)
    return certificate("prop4_subsystem", lhs, rhs, params=_describe(channel, params), seed=seed)


def compare_map_bounds(channel: QuantumChannel, params, seed: Seed = "constructed") -> dict:
    """Both upper bounds on the map entropy where the older one applies (``q > 1, s >= 1/q``)."""
    params = as_params(params)
    if not in_lindblad_domain(params):
        raise ParameterOutOfDomain(f"the older map-entropy bound needs q > 1 and s >= 1/q, got {params}")
    m = map_entropy(channel, params)
    new, old = map_bound_new(channel, params), map_bound_old(channel, params)
    desc = _describe(channel, params)
    return {
        "params": params.as_dict(),
        "map_entropy": m,
        "rhs_new": new,
        "rhs_old": old,
        "certificates": [
            certificate("prop4_map_entropy", m, new, params=desc, seed=seed),
            certificate("map_bound_old", m, old, params=desc, seed=seed),
            certificate("map_bound_new_le_old", new, old, params=desc, seed=seed),
        ],
    }


# tracial Minkowski inequality

def certify_minkowski(A, Z, q: float, seed: Seed = "constructed") -> InequalityCertificate:
    """``G_q(A + Z)`` against ``G_q(A) + G_q(Z)`` with ``G_q(X) = [Tr X^q]^(1/q)``.

    Super-additive for ``q < 1`` (``q != 0``), subadditive for ``q > 1`` and
    additive at ``q = 1``.
    """
    if q == 0:
        raise ParameterOutOfDomain("the functional is undefined at q = 0")
    A = np.asarray(A, dtype=complex)
    Z = np.asarray(Z, dtype=complex)
    joint = schatten_q(A + Z, q)
    separate = schatten_q(A, q) + schatten_q(Z, q)
    desc = {"q": q, "dim": A.shape[0]}
    if q == 1:
        return equality_certificate("minkowski_additivity", joint, separate, params=desc, seed=seed)
    if q < 1:
        return certificate("minkowski_superadditivity", separate, joint, params=desc, seed=seed)
    return certificate("minkowski_triangle", joint, separate, params=desc, seed=seed)


def certify_ky_fan(A, Z, seed: Seed = "constructed") -> InequalityCertificate:
    """``lambda(A + Z)`` is majorized by ``lambda(A) + lambda(Z)`` (both sorted decreasingly)."""
    joint = psd_spectrum(A + Z)
    summed = psd_spectrum(A) + psd_spectrum(Z)
    gaps = np.cumsum(summed) - np.cumsum(joint)
    # worst partial-sum excess, or the trace mismatch if that is larger
    lhs = max(-float(np.min(gaps)), abs(float(gaps[-1])), 0.0)
    return InequalityCertificate(
        name="ky_fan_majorization", lhs=lhs, rhs=0.0, slack=-lhs,
        holds=check_majorization(joint, summed, atol=CERT_TOL),
        params={"dim": len(joint)}, seed=seed, tolerance=CERT_TOL,
    )


def certify_subadditivity(rho_ab, dims, q, seed: Seed = "constructed") -> InequalityCertificate:
    """``S_q(rho_AB) <= S_q(rho_A) + S_q(rho_B)`` for ``q >= 1``."""
    params = EntropyParams(q, 1.0)
    if params.q_value < 1:
        raise ParameterOutOfDomain(f"subadditivity of the q-entropy needs q >= 1, got {params.q_value}")
    whole = quantum_q_entropy(rho_ab, params.q)
    parts = quantum_q_entropy(partial_trace(rho_ab, 1, dims), params.q) + quantum_q_entropy(
        partial_trace(rho_ab, 0, dims), params.q
    )
    return certificate("q_entropy_subadditivity", whole, parts, params={"q": params.q_value, "dims": list(dims)}, seed=seed)
