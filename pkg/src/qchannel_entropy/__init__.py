"""Generalized entropies of finite-dimensional quantum channels."""

from .bounds import (
    InequalityCertificate,
    certify_concavity_channel,
    certify_concavity_state,
    certify_ky_fan,
    certify_lindblad_extension,
    certify_minkowski,
    certify_prop1,
    certify_prop3,
    certify_prop4,
    compare_map_bounds,
    depolarizing_f,
    fano_bound_general,
    fano_bound_simple,
    map_bound_new,
    map_bound_old,
    q_average_output_entropy,
)
from .channels import (
    DynamicalMatrix,
    QuantumChannel,
    apply,
    apply_via_choi,
    bloch_state,
    bloch_vector,
    choi,
    completely_mixed,
    depolarizing,
    effect_probabilities,
    identity_channel,
    kraus_from_choi,
    mix_channels,
    new_channel,
    particular_outputs,
    random_channel,
    random_density,
    random_unitary,
    stinespring_isometry,
    unitary_channel,
)
from .entropies import (
    Q_ONE,
    S_ZERO,
    EntropyParams,
    binary_tsallis,
    max_entropy,
    q_average,
    q_log,
    quantum_q_entropy,
    quantum_renyi,
    quantum_unified,
    renyi,
    shannon,
    tsallis,
    unified_classical,
    von_neumann,
)
from .exceptions import *  # noqa: F401,F403
from .exchange import (
    entanglement_fidelity,
    entropy_exchange,
    exchange_matrix,
    final_joint_state,
    map_entropy,
    purify,
)
from .numkernel import (
    birkhoff_decompose,
    birkhoff_reconstruct,
    check_majorization,
    hermitian_eig,
    partial_trace,
    power_sum,
    schatten_q,
    tensor,
)
from .verify import SUITES, run_verification

__version__ = "0.1.0"
