"""Dense complex linear algebra and majorization primitives.

All matrices are plain ``numpy`` arrays. Functions never mutate their inputs.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import (
    DimensionMismatch,
    LengthMismatch,
    NegativeEigenvalue,
    NoConvergence,
    NoPerfectMatching,
    NotDoublyStochastic,
    NotHermitian,
    SingularForNegativeQ,
)

HERMITIAN_RTOL = 1e-10
NEGATIVE_RTOL = 1e-10
MAJORIZATION_ATOL = 1e-9
DOUBLY_STOCHASTIC_ATOL = 1e-9
JACOBI_MAX_SWEEPS = 100
EXHAUSTIVE_MATCHING_MAX_DIM = 8

_EPS = np.finfo(float).eps


class Spectrum(NamedTuple):
    """Eigenvalues in non-increasing order and matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(A, *, square: bool = False) -> np.ndarray:
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def check_hermitian(A, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Validate Hermiticity and return the exactly symmetrized matrix."""
    M = as_matrix(A, square=True)
    scale = np.max(np.abs(M)) if M.size else 0.0
    asym = np.max(np.abs(M - M.conj().T)) if M.size else 0.0
    if asym > rtol * scale:
        raise NotHermitian(
            f"matrix is not Hermitian: max|A - A^H| = {asym:.3e} exceeds {rtol:g} * max|A| = {rtol * scale:.3e}"
        )
    return 0.5 * (M + M.conj().T)


def _jacobi_eig(M: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    # cyclic Jacobi for complex Hermitian input; M must already be symmetrized
    a = M.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if n < 2 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v
    threshold = _EPS * scale
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= threshold:
            return np.real(np.diag(a)).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-3 * threshold / n:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    raise NoConvergence(f"Jacobi eigensolver did not converge within {max_sweeps} sweeps")


def hermitian_eig(A, method: str = "lapack", max_sweeps: int = JACOBI_MAX_SWEEPS) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted non-increasing.

    ``method="lapack"`` uses :func:`numpy.linalg.eigh`; ``method="jacobi"``
    runs a self-contained cyclic Jacobi iteration, which is slower but has no
    dependency beyond array arithmetic and serves as a cross-check.
    """
    M = check_hermitian(A)
    if method == "lapack":
        w, v = np.linalg.eigh(M)
    elif method == "jacobi":
        w, v = _jacobi_eig(M, max_sweeps)
    else:
        raise ValueError(f"unknown eigensolver method {method!r}")
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], v[:, order])


def hermitian_eigvals(A) -> np.ndarray:
    M = check_hermitian(A)
    return np.linalg.eigvalsh(M)[::-1]


def clip_spectrum(eigenvalues, rtol: float = NEGATIVE_RTOL) -> np.ndarray:
    """Clamp roundoff-level eigenvalues of a positive semidefinite matrix to zero.

    Values in ``[-rtol * |A|, 0)`` become exactly zero, as do positive values
    at the level of the eigensolver's backward error. Anything more negative
    raises :class:`NegativeEigenvalue`.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.size == 0:
        return lam
    scale = np.max(np.abs(lam))
    if lam.min() < -rtol * scale:
        raise NegativeEigenvalue(
            f"eigenvalue {lam.min():.3e} is below -{rtol:g} * |A| = {-rtol * scale:.3e}"
        )
    zero_tol = 8 * lam.size * _EPS * scale
    return np.where(lam <= zero_tol, 0.0, lam)


def psd_spectrum(A) -> np.ndarray:
    """Clipped, non-increasing eigenvalues of a positive semidefinite matrix."""
    return clip_spectrum(hermitian_eigvals(A))


def power_sum(eigenvalues, q: float) -> float:
    """Sum of ``x ** q`` over the positive entries, with ``0 ** q := 0``."""
    lam = np.asarray(eigenvalues, dtype=float)
    pos = lam[lam > 0]
    return float(np.sum(pos**q))


def trace_power(A, q: float) -> float:
    """``Tr(A^q)`` for positive semidefinite ``A`` and ``q > 0``."""
    if not q > 0:
        raise ValueError(f"trace_power requires q > 0, got {q}")
    return power_sum(psd_spectrum(A), q)


def tensor(*matrices) -> np.ndarray:
    """Kronecker product of the given matrices, left factor first."""
    if not matrices:
        raise ValueError("tensor needs at least one factor")
    out = as_matrix(matrices[0])
    for m in matrices[1:]:
        out = np.kron(out, as_matrix(m))
    return out


def partial_trace(matrix, which, dims: Sequence[int]) -> np.ndarray:
    """Trace out the subsystem(s) ``which`` of an operator on a product space.

    ``dims`` lists the factor dimensions in tensor order; ``which`` is one
    index or a collection of indices into ``dims``.
    """
    M = as_matrix(matrix, square=True)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise DimensionMismatch(f"subsystem dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if M.shape[0] != total:
        raise DimensionMismatch(f"matrix of size {M.shape[0]} does not match subsystem dims {dims}")
    traced = sorted({which} if np.isscalar(which) else set(which))
    if any(not 0 <= i < len(dims) for i in traced):
        raise DimensionMismatch(f"subsystem index out of range: {which} for dims {dims}")

    n = len(dims)
    t = M.reshape(dims + dims)
    for k, i in enumerate(reversed(traced)):
        t = np.trace(t, axis1=i, axis2=i + n - k)
    kept = [d for i, d in enumerate(dims) if i not in traced]
    size = int(np.prod(kept)) if kept else 1
    return t.reshape(size, size)


def gauge_q(x, q: float) -> float:
    """``(sum_j x_j^q)^(1/q)`` for a tuple of nonnegative numbers."""
    if q == 0:
        raise ValueError("gauge_q is undefined at q = 0")
    v = np.asarray(x, dtype=float)
    if q < 0:
        if np.any(v <= 0):
            raise SingularForNegativeQ("negative exponent requires strictly positive entries")
        return float(np.sum(v**q) ** (1.0 / q))
    return power_sum(v, q) ** (1.0 / q)


def schatten_q(A, q: float) -> float:
    """The functional ``[Tr(A^q)]^(1/q)`` of a positive semidefinite matrix.

    For ``q >= 1`` this is the Schatten norm; for ``0 < q < 1`` the Schatten
    anti-norm. Negative ``q`` is accepted only for strictly positive ``A``.
    """
    if q == 0:
        raise ValueError("schatten_q is undefined at q = 0")
    lam = psd_spectrum(A)
    if q < 0 and np.any(lam <= 0):
        raise SingularForNegativeQ(
            f"q = {q} < 0 requires a strictly positive matrix; smallest eigenvalue is {lam.min():.3e}"
        )
    return gauge_q(lam, q)


def check_majorization(x, y, atol: float = MAJORIZATION_ATOL) -> bool:
    """True iff ``x`` is majorized by ``y``."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise LengthMismatch(f"cannot compare tuples of lengths {x.size} and {y.size}")
    cx = np.cumsum(np.sort(x)[::-1])
    cy = np.cumsum(np.sort(y)[::-1])
    if x.size == 0:
        return True
    return bool(np.all(cx <= cy + atol) and abs(cx[-1] - cy[-1]) <= atol)


def is_doubly_stochastic(S, atol: float = DOUBLY_STOCHASTIC_ATOL) -> bool:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        return False
    return bool(
        np.all(S >= -atol)
        and np.allclose(S.sum(axis=0), 1.0, rtol=0, atol=atol)
        and np.allclose(S.sum(axis=1), 1.0, rtol=0, atol=atol)
    )


def sinkhorn(M, tol: float = 1e-14, max_iter: int = 10_000) -> np.ndarray:
    """Alternate row and column normalization of a positive matrix until doubly stochastic."""
    S = np.array(M, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or np.any(S <= 0):
        raise ValueError("sinkhorn needs a square matrix with strictly positive entries")
    for _ in range(max_iter):
        S /= S.sum(axis=1, keepdims=True)
        S /= S.sum(axis=0, keepdims=True)
        if np.max(np.abs(S.sum(axis=1) - 1.0)) < tol:
            return S
    raise NoConvergence("row/column normalization did not converge")


def random_doubly_stochastic(d: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return sinkhorn(rng.random((d, d)) + 1e-3)


@lru_cache(maxsize=None)
def _all_permutations(d: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(d))), dtype=np.intp)


def _bottleneck_permutation(R: np.ndarray) -> np.ndarray:
    d = R.shape[0]
    if d <= EXHAUSTIVE_MATCHING_MAX_DIM:
        perms = _all_permutations(d)
        mins = R[np.arange(d), perms].min(axis=1)
        return perms[int(np.argmax(mins))]
    from scipy.optimize import linear_sum_assignment

    with np.errstate(divide="ignore"):
        cost = -np.log(np.where(R > 0, R, 0.0))
    cost[~np.isfinite(cost)] = 1e300
    _, cols = linear_sum_assignment(cost)
    return cols


def birkhoff_decompose(S, atol: float = DOUBLY_STOCHASTIC_ATOL) -> list[tuple[np.ndarray, float]]:
    """Write a doubly stochastic matrix as a convex mixture of permutation matrices.

    Greedy: at each step the permutation whose smallest supported entry is
    largest is peeled off with that entry as weight. Each step zeroes at least
    one entry, so at most ``(d-1)^2 + 1`` terms come out. Permutations are
    returned as index arrays ``perm`` meaning ``P[i, perm[i]] = 1``.
    """
    S = np.asarray(S, dtype=float)
    if not is_doubly_stochastic(S, atol):
        raise NotDoublyStochastic("matrix is not doubly stochastic within tolerance")
    d = S.shape[0]
    R = np.clip(S, 0.0, None)
    zero_tol = 1e-14
    terms: list[tuple[np.ndarray, float]] = []
    remaining = 1.0
    for _ in range((d - 1) ** 2 + 1):
        if remaining <= zero_tol * d:
            break
        perm = _bottleneck_permutation(R)
        weight = float(R[np.arange(d), perm].min())
        if weight <= zero_tol:
            raise NoPerfectMatching(
                f"no permutation fits the remaining support (residual mass {remaining:.3e})"
            )
        terms.append((perm, weight))
        R[np.arange(d), perm] -= weight
        R[R < zero_tol] = 0.0
        remaining -= weight
    if remaining > 1e-10:
        raise NoPerfectMatching(f"decomposition left residual mass {remaining:.3e}")
    return terms


def permutation_matrix(perm) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.intp)
    P = np.zeros((perm.size, perm.size))
    P[np.arange(perm.size), perm] = 1.0
    return P


def birkhoff_reconstruct(terms) -> np.ndarray:
    return sum(w * permutation_matrix(p) for p, w in terms)
