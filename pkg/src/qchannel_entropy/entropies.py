"""Classical and quantum generalized entropies parameterized by ``(q, s)``.

Natural logarithms throughout. The two limiting families are selected by
exact tags rather than by closeness of a float: ``q = 1`` gives the
Shannon / von Neumann entropy for every ``s``, and ``s = 0`` gives the Rényi
entropy of order ``q``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import (
    InvalidDistribution,
    InvalidState,
    LengthMismatch,
    NonPositiveArgument,
    OutOfRange,
)
from .numkernel import as_matrix, check_hermitian, clip_spectrum, hermitian_eigvals

PROB_CLIP = 1e-12
PROB_SUM_ATOL = 1e-9
TRACE_ATOL = 1e-9


class Limit(enum.Enum):
    Q_ONE = "q=1"
    S_ZERO = "s=0"

    def __repr__(self):
        return self.name


Q_ONE = Limit.Q_ONE
S_ZERO = Limit.S_ZERO

Order = Union[float, Limit]


def _is_q_one(q) -> bool:
    return q is Q_ONE or q == 1


def _q_value(q) -> float:
    return 1.0 if _is_q_one(q) else float(q)


@dataclass(frozen=True)
class EntropyParams:
    """The pair ``(q, s)``.

    Passing ``q=1`` or ``s=0`` stores the exact limit tag; any other float is
    taken literally, so ``q=1 + 1e-9`` is evaluated by the generic formula.
    """

    q: Order = Q_ONE
    s: Union[float, Limit] = 1.0

    def __post_init__(self):
        q, s = self.q, self.s
        if isinstance(q, Limit):
            if q is not Q_ONE:
                raise ValueError(f"{q!r} is not a valid tag for q")
        else:
            q = float(q)
            if not math.isfinite(q) or q <= 0:
                raise OutOfRange(f"q must be positive and finite, got {q}")
            if q == 1.0:
                q = Q_ONE
        if isinstance(s, Limit):
            if s is not S_ZERO:
                raise ValueError(f"{s!r} is not a valid tag for s")
        else:
            s = float(s)
            if not math.isfinite(s):
                raise OutOfRange(f"s must be finite, got {s}")
            if s == 0.0:
                s = S_ZERO
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "s", s)

    @property
    def q_value(self) -> float:
        return _q_value(self.q)

    @property
    def s_value(self) -> float:
        return 0.0 if self.s is S_ZERO else float(self.s)

    @property
    def is_von_neumann(self) -> bool:
        return self.q is Q_ONE

    @property
    def is_renyi(self) -> bool:
        return self.s is S_ZERO

    def as_dict(self) -> dict:
        return {"q": self.q_value, "s": self.s_value}

    def __str__(self):
        return f"(q={self.q_value:g}, s={self.s_value:g})"


def as_params(params=None, s=None) -> EntropyParams:
    """Coerce ``EntropyParams``, a ``(q, s)`` pair, or a bare ``q`` (with ``s=1``)."""
    if isinstance(params, EntropyParams):
        return params
    if params is None:
        return EntropyParams()
    if isinstance(params, tuple):
        return EntropyParams(*params)
    return EntropyParams(params, 1.0 if s is None else s)


def check_probabilities(p) -> np.ndarray:
    """Validate a probability vector, clamping roundoff-level negatives to zero."""
    v = np.asarray(p, dtype=float).ravel()
    if v.size == 0:
        raise InvalidDistribution("empty probability vector")
    if not np.all(np.isfinite(v)):
        raise InvalidDistribution("probability vector has non-finite entries")
    if v.min() < -PROB_CLIP:
        raise InvalidDistribution(f"negative probability {v.min():.3e}")
    v = np.where(v < 0, 0.0, v)
    if abs(v.sum() - 1.0) > PROB_SUM_ATOL:
        raise InvalidDistribution(f"probabilities sum to {v.sum():.12g}, not 1")
    return v


def _validated_state(rho) -> tuple[np.ndarray, np.ndarray]:
    M = check_hermitian(as_matrix(rho, square=True))
    tr = np.trace(M).real
    if abs(tr - 1.0) > TRACE_ATOL:
        raise InvalidState(f"density matrix has trace {tr:.12g}, not 1")
    try:
        lam = clip_spectrum(hermitian_eigvals(M))
    except ValueError as exc:
        raise InvalidState(f"density matrix is not positive semidefinite: {exc}") from None
    return M, lam


def check_density_matrix(rho) -> np.ndarray:
    """Validate a density matrix and return its symmetrized copy."""
    return _validated_state(rho)[0]


def q_log(x: float, q: Order) -> float:
    """The q-logarithm ``(x^(1-q) - 1) / (1 - q)``; natural log at ``q = 1``."""
    if not x > 0:
        raise NonPositiveArgument(f"q-logarithm needs x > 0, got {x}")
    if _is_q_one(q):
        return math.log(x)
    a = 1.0 - float(q)
    return math.expm1(a * math.log(x)) / a


def shannon(p) -> float:
    v = check_probabilities(p)
    return _shannon(v)


def _shannon(v: np.ndarray) -> float:
    pos = v[v > 0]
    return float(-np.sum(pos * np.log(pos))) + 0.0


def tsallis(p, q: Order) -> float:
    """Tsallis entropy ``(sum p^q - 1) / (1 - q)``."""
    v = check_probabilities(p)
    if _is_q_one(q):
        return _shannon(v)
    return _power_sum_minus_one(v, q) / (1.0 - q) + 0.0


def binary_tsallis(p: float, q: Order) -> float:
    """Binary Tsallis entropy of the pair ``(p, 1 - p)``."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"binary entropy argument must lie in [0, 1], got {p}")
    if _is_q_one(q):
        return _shannon(np.array([p, 1.0 - p]))
    a = float(q) - 1.0
    total = 0.0
    for x in (p, 1.0 - p):
        if x > 0:
            # -x^q ln_q(x) written without x^(1-q), which overflows for tiny x
            total -= x * math.expm1(a * math.log(x)) / a
    return total + 0.0


def q_average(values, p, q: Order) -> float:
    """Unnormalized q-average ``sum_j p_j^q a_j``."""
    a = np.asarray(values, dtype=float).ravel()
    v = check_probabilities(p)
    if a.shape != v.shape:
        raise LengthMismatch(f"{a.size} values for {v.size} probabilities")
    qv = _q_value(q)
    mask = v > 0
    return float(np.sum(v[mask] ** qv * a[mask]))


def renyi(p, q: Order) -> float:
    """Rényi entropy ``ln(sum p^q) / (1 - q)``; Shannon at ``q = 1``."""
    v = check_probabilities(p)
    if _is_q_one(q):
        return _shannon(v)
    return math.log1p(_power_sum_minus_one(v, q)) / (1.0 - q) + 0.0


def _power_sum_minus_one(v: np.ndarray, q: float) -> float:
    # sum p^q - 1 as sum p expm1((q-1) ln p) + (sum p - 1): no cancellation near q = 1
    pos = v[v > 0]
    return float(np.sum(pos * np.expm1((q - 1.0) * np.log(pos))) + (np.sum(pos) - 1.0))


def unified_from_spectrum(eigenvalues, params) -> float:
    """Unified ``(q, s)``-entropy of a (clipped) probability spectrum.

    With ``T = sum p^q`` the value ``(T^s - 1) / ((1-q) s)`` is evaluated as
    ``expm1(s log1p(T - 1)) / ((1-q) s)``, stable for ``q`` near 1 and ``s`` near 0.
    """
    params = as_params(params)
    v = np.asarray(eigenvalues, dtype=float)
    if params.is_von_neumann:
        return _shannon(v)
    a = 1.0 - params.q_value
    log_t = math.log1p(_power_sum_minus_one(v, params.q_value))
    if params.is_renyi:
        return log_t / a + 0.0
    s = params.s_value
    # + 0.0 turns a signed zero from pure inputs into 0.0
    return math.expm1(s * log_t) / (a * s) + 0.0


def unified_classical(p, params) -> float:
    """Unified ``(q, s)``-entropy ``[(sum p^q)^s - 1] / ((1 - q) s)`` of a distribution."""
    return unified_from_spectrum(check_probabilities(p), params)


def density_spectrum(rho) -> np.ndarray:
    """Clipped eigenvalues of a density matrix, non-increasing."""
    return _validated_state(rho)[1]


def quantum_unified(rho, params) -> float:
    """Quantum unified ``(q, s)``-entropy ``{[Tr(rho^q)]^s - 1} / ((1 - q) s)``."""
    return unified_from_spectrum(density_spectrum(rho), params)


def quantum_q_entropy(rho, q: Order) -> float:
    """Quantum Tsallis entropy ``(Tr(rho^q) - 1) / (1 - q)``."""
    return quantum_unified(rho, EntropyParams(q, 1.0))


def quantum_renyi(rho, q: Order) -> float:
    return quantum_unified(rho, EntropyParams(q, S_ZERO))


def von_neumann(rho) -> float:
    return quantum_unified(rho, EntropyParams(Q_ONE, 1.0))


def max_entropy(d: int, params) -> float:
    """Largest unified entropy in dimension ``d``, reached by ``I / d``: ``(1/s) ln_q(d^s)``."""
    params = as_params(params)
    if d < 1:
        raise OutOfRange(f"dimension must be positive, got {d}")
    log_d = math.log(d)
    if params.is_von_neumann or params.is_renyi:
        return log_d
    a = 1.0 - params.q_value
    s = params.s_value
    return math.expm1(a * s * log_d) / (a * s)
