"""Unit tests for the incomplete-gamma / confluent-hypergeometric kernel.

Reference values were frozen from an independent high-precision evaluation
(mpmath at 30 digits) so the tests do not depend on the code under test.
"""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoatom.errors import ParameterRangeError, PrecisionLossError
from twoatom.special_fns import (
    g_k,
    hyp1f1_k_kp1,
    lower_incomplete_gamma,
    regularized_lower_gamma,
)

# frozen reference points (30-digit independent evaluation)
G3_REF = 0.116319320094279005612545547926 - 0.00792897784810576430595266330398j
LOWER_GAMMA_4_2 = 0.857259237008717708028019191046


def test_g_k_frozen_value():
    assert abs(g_k(3, 1.7 + 0.4j) - G3_REF) < 1e-15


def test_lower_gamma_frozen_value():
    assert abs(lower_incomplete_gamma(4, 2.0) - LOWER_GAMMA_4_2) < 1e-14


def test_g0_is_one_minus_exp():
    for s in (0.3, 2.0 + 1.0j, 40.0, 5.0 - 3.0j):
        assert abs(g_k(0, s) - (1 - cmath.exp(-s))) < 1e-14


def test_g_k_zero_argument():
    assert g_k(5, 0.0) == 0j
    assert regularized_lower_gamma(6, 0.0) == 0j


def test_regularized_endpoints():
    # P(k+1, s) -> 1 deep in the right half plane
    assert abs(regularized_lower_gamma(3, 200.0) - 1.0) < 1e-14
    assert abs(regularized_lower_gamma(3, 150.0 + 40.0j) - 1.0) < 1e-10


def test_vectorized_matches_scalar():
    s = np.array([0.5 + 0.2j, 9.0, 30.0 - 4.0j, 0.0])
    vec = regularized_lower_gamma(4, s)
    for si, vi in zip(s, vec):
        assert abs(vi - regularized_lower_gamma(4, complex(si))) < 1e-15


complex_args = st.builds(
    complex,
    st.floats(min_value=-20.0, max_value=60.0),
    st.floats(min_value=-30.0, max_value=30.0),
)


@settings(max_examples=150, deadline=None)
@given(k=st.integers(min_value=1, max_value=40), s=complex_args)
def test_gamma_recurrence(k, s):
    """P(k+1, s) = P(k, s) - s^k e^{-s} / k!, which also cross-checks the
    two evaluation routes against each other near the switch radius."""
    if s == 0:
        return
    lhs = regularized_lower_gamma(k + 1, s)
    rhs = regularized_lower_gamma(k, s) if k >= 1 else 1.0
    step = cmath.exp(k * cmath.log(s) - s - math.lgamma(k + 1)) if k else 0.0
    if k == 0:
        return
    scale = max(1.0, abs(rhs), abs(step))
    # oscillatory cancellation inside the series grows like e^{|s| - Re s}
    condition = math.exp(min(200.0, abs(s) - s.real))
    assert abs(lhs - (rhs - step)) < 1e-13 * scale * condition


@settings(max_examples=100, deadline=None)
@given(
    k=st.integers(min_value=1, max_value=30),
    s=st.builds(
        complex,
        st.floats(min_value=-8.0, max_value=8.0),
        st.floats(min_value=-8.0, max_value=8.0),
    ),
)
def test_g_k_matches_kummer_identity(k, s):
    """G_k(s) = 1F1(k, k+1, -s) - exp(-s) wherever the direct Taylor series
    of 1F1 is itself trustworthy (moderate |s|)."""
    direct = hyp1f1_k_kp1(k, -s) - cmath.exp(-s)
    scale = max(1.0, abs(direct), abs(cmath.exp(-s)))
    # the alternating 1F1 Taylor series cancels like e^{|s| + Re s}
    condition = math.exp(min(200.0, abs(s) + max(0.0, s.real)))
    assert abs(g_k(k, s) - direct) < 1e-13 * scale * condition


def test_large_order_stays_finite():
    value = regularized_lower_gamma(500, 480.0)
    assert np.isfinite(value.real) and np.isfinite(value.imag)
    assert 0.0 < value.real < 1.0


def test_order_validation():
    with pytest.raises(ParameterRangeError):
        g_k(-1, 1.0)
    with pytest.raises(ParameterRangeError):
        regularized_lower_gamma(0, 1.0)
    with pytest.raises(ParameterRangeError):
        hyp1f1_k_kp1(2.5, 1.0)
    with pytest.raises(ParameterRangeError):
        g_k(2, complex(math.nan, 0.0))


def test_left_half_plane_overflow_signaled():
    with pytest.raises(PrecisionLossError):
        regularized_lower_gamma(3, -900.0)
    with pytest.raises(PrecisionLossError):
        g_k(3, -900.0 + 1.0j)
