import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qchannel_entropy.channels import bloch_state, completely_mixed, random_density, random_unitary
from qchannel_entropy.entropies import (
    Q_ONE,
    S_ZERO,
    EntropyParams,
    as_params,
    binary_tsallis,
    check_probabilities,
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
from qchannel_entropy.exceptions import InvalidDistribution, InvalidState, LengthMismatch, NonPositiveArgument, OutOfRange

seeds = st.integers(0, 2**32 - 1)
orders = st.floats(0.05, 5.0).filter(lambda q: abs(q - 1) > 1e-3)
s_values = st.floats(-3.0, 3.0).filter(lambda s: abs(s) > 1e-3)


def distribution(seed, n):
    return np.random.default_rng(seed).dirichlet(np.ones(n))


def unified_oracle(p, q, s):
    """Direct transcription with plain Python floats."""
    t = sum(x**q for x in p if x > 0)
    return (t**s - 1) / ((1 - q) * s)


# parameters

def test_params_normalize_limits():
    assert EntropyParams(1, 3).q is Q_ONE
    assert EntropyParams(2, 0).s is S_ZERO
    assert EntropyParams(1.0 + 1e-9, 1).q != Q_ONE
    assert as_params((2, 0.5)) == EntropyParams(2, 0.5)
    assert as_params(3) == EntropyParams(3, 1)
    with pytest.raises(OutOfRange):
        EntropyParams(0, 1)
    with pytest.raises(OutOfRange):
        EntropyParams(2, math.inf)


# classical functions

def test_q_log_values():
    assert q_log(1, 0.3) == 0
    assert q_log(2, 2) == pytest.approx(0.5, abs=1e-15)
    assert q_log(math.e, Q_ONE) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(NonPositiveArgument):
        q_log(0, 2)


def test_tsallis_values():
    assert tsallis([0.5, 0.5], 2) == pytest.approx(0.5, abs=1e-15)
    assert tsallis([1, 0, 0], 0.7) == 0
    for d in (2, 3, 5):
        assert tsallis(np.full(d, 1 / d), 2.5) == pytest.approx(q_log(d, 2.5), abs=1e-14)


def test_binary_tsallis():
    assert binary_tsallis(0, 2) == 0 and binary_tsallis(1, 2) == 0
    assert binary_tsallis(0.5, 2) == pytest.approx(0.5, abs=1e-15)
    assert binary_tsallis(0.3, Q_ONE) == pytest.approx(shannon([0.3, 0.7]), abs=1e-15)


@given(st.floats(0, 1), orders)
def test_binary_tsallis_symmetric(p, q):
    assume(1 - (1 - p) == p)
    assert binary_tsallis(p, q) == pytest.approx(binary_tsallis(1 - p, q), abs=1e-12)


def test_q_average_values():
    assert q_average([1, 2], [0.5, 0.5], 2) == pytest.approx(0.75, abs=1e-15)
    assert q_average([1, 2], [0.25, 0.75], Q_ONE) == pytest.approx(1.75, abs=1e-15)
    with pytest.raises(LengthMismatch):
        q_average([1], [0.5, 0.5], 2)


@given(seeds, st.integers(2, 6), orders)
def test_tsallis_is_q_average_of_minus_q_log(seed, n, q):
    p = distribution(seed, n)
    assume(p.min() > 1e-12)
    values = [-q_log(x, q) for x in p]
    assert q_average(values, p, q) == pytest.approx(tsallis(p, q), abs=1e-12)


def test_renyi_values():
    for d in (2, 3, 7):
        assert renyi(np.full(d, 1 / d), 2.3) == pytest.approx(math.log(d), abs=1e-14)
    assert renyi([1, 0], 0.5) == 0


@given(seeds, st.integers(2, 5), orders, s_values)
def test_unified_against_direct_formula(seed, n, q, s):
    p = distribution(seed, n)
    expected = unified_oracle(p, q, s)
    assert unified_classical(p, (q, s)) == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_unified_reductions():
    p = [0.2, 0.3, 0.5]
    assert unified_classical(p, (2.5, 1)) == tsallis(p, 2.5)
    assert unified_classical(p, (2.5, 0)) == pytest.approx(renyi(p, 2.5), abs=1e-15)
    assert unified_classical(p, (1, 7)) == pytest.approx(shannon(p), abs=1e-15)
    assert unified_classical([0.5, 0.5], (2, 2)) == pytest.approx(0.375, abs=1e-15)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("q,s", [(0.5, 1), (2, 2), (3, -1), (0.3, 0), (1, 1)])
def test_uniform_attains_max_entropy(d, q, s):
    assert unified_classical(np.full(d, 1 / d), (q, s)) == pytest.approx(max_entropy(d, (q, s)), abs=1e-13)


def test_max_entropy_values():
    assert max_entropy(1, (2, 1)) == 0
    assert max_entropy(2, (2, 1)) == pytest.approx(0.5, abs=1e-15)
    assert max_entropy(5, (3, 0)) == pytest.approx(math.log(5), abs=1e-15)


def test_probability_validation():
    np.testing.assert_array_equal(check_probabilities([1 + 1e-13, -1e-13]), [1 + 1e-13, 0])
    with pytest.raises(InvalidDistribution):
        check_probabilities([0.5, 0.4])
    with pytest.raises(InvalidDistribution):
        check_probabilities([1.1, -0.1])


# limits: the gap to the limit is first order in the offset, so the
# analytic first-order term is removed before comparing at 1e-6

def _moments(p):
    p = np.asarray(p)
    p = p[p > 0]
    lp = np.log(p)
    return float(np.sum(p * lp)), float(np.sum(p * lp**2))


@given(seeds, st.integers(2, 6), st.sampled_from([1e-4, -1e-4]))
def test_tsallis_limit_to_shannon(seed, n, eps):
    p = distribution(seed, n)
    _, m2 = _moments(p)
    predicted = shannon(p) - eps * m2 / 2
    assert abs(unified_classical(p, (1 + eps, 1)) - predicted) <= 1e-6


@given(seeds, st.integers(2, 6), st.sampled_from([1e-4, -1e-4]))
def test_renyi_limit_to_shannon(seed, n, eps):
    p = distribution(seed, n)
    m1, m2 = _moments(p)
    predicted = shannon(p) - eps * (m2 - m1**2) / 2
    assert abs(renyi(p, 1 + eps) - predicted) <= 1e-6


@given(seeds, st.integers(2, 6), st.sampled_from([0.5, 2.0, 3.0]), st.sampled_from([1e-4, -1e-4]))
def test_unified_limit_to_renyi(seed, n, q, s):
    p = distribution(seed, n)
    R = renyi(p, q)
    predicted = R + s * (1 - q) * R**2 / 2
    assert abs(unified_classical(p, (q, s)) - predicted) <= 1e-6


def test_limits_converge_linearly():
    p = [0.1, 0.2, 0.3, 0.4]
    gaps = [abs(unified_classical(p, (1 + e, 1)) - shannon(p)) for e in (1e-2, 1e-3, 1e-4)]
    assert gaps[0] / gaps[1] == pytest.approx(10, rel=0.05)
    assert gaps[1] / gaps[2] == pytest.approx(10, rel=0.05)
    gaps = [abs(unified_classical(p, (2, e)) - renyi(p, 2)) for e in (1e-2, 1e-3, 1e-4)]
    assert gaps[1] / gaps[2] == pytest.approx(10, rel=0.05)


def test_near_limit_is_stable():
    # no cancellation blow-up very close to the tags
    p = [0.25, 0.75]
    assert unified_classical(p, (1 + 1e-12, 1)) == pytest.approx(shannon(p), abs=1e-9)
    assert unified_classical(p, (2, 1e-14)) == pytest.approx(renyi(p, 2), abs=1e-12)


# quantum entropies

def test_quantum_values():
    assert quantum_unified(bloch_state((0, 0, 0.5)), (2, 1)) == pytest.approx(0.375, abs=1e-15)
    assert quantum_unified(bloch_state((0.6, 0, 0.8)), (0.5, 2)) == 0
    assert quantum_renyi(completely_mixed(3), 2) == pytest.approx(math.log(3), abs=1e-14)
    assert von_neumann(completely_mixed(4)) == pytest.approx(math.log(4), abs=1e-14)
    assert quantum_q_entropy(np.diag([0.7, 0.1, 0.1, 0.1]), 2) == pytest.approx(0.48, abs=1e-15)


def test_quantum_rejects_bad_states():
    with pytest.raises(InvalidState):
        quantum_unified(np.diag([0.6, 0.6]), (2, 1))
    with pytest.raises(InvalidState):
        quantum_unified(np.diag([1.2, -0.2]), (2, 1))


@given(seeds, st.integers(1, 4), orders, s_values)
def test_mixed_state_is_maximal(seed, d, q, s):
    rho = random_density(d, seed)
    bound = max_entropy(d, (q, s))
    assert quantum_unified(completely_mixed(d), (q, s)) == pytest.approx(bound, abs=1e-12, rel=1e-12)
    assert quantum_unified(rho, (q, s)) <= bound + 1e-9 * max(1.0, abs(bound))


@given(seeds, st.integers(2, 4), orders, s_values)
def test_unitary_invariance(seed, d, q, s):
    rho = random_density(d, seed)
    U = random_unitary(d, seed + 1)
    assert quantum_unified(U @ rho @ U.conj().T, (q, s)) == pytest.approx(quantum_unified(rho, (q, s)), abs=1e-9)


def _in_concavity_range(q, s):
    return (q <= 1 and s <= 1 / q) or (q >= 1 and s >= 1 / q)


@given(seeds, st.integers(2, 4), orders, st.floats(-3, 3), st.floats(0, 1))
def test_concave_on_states(seed, d, q, s, theta):
    assume(_in_concavity_range(q, s))
    rho, ups = random_density(d, seed), random_density(d, seed + 7)
    mix = theta * rho + (1 - theta) * ups
    lhs = theta * quantum_unified(rho, (q, s)) + (1 - theta) * quantum_unified(ups, (q, s))
    assert quantum_unified(mix, (q, s)) >= lhs - 1e-9
