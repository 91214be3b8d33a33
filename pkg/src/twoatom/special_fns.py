"""Stable evaluation of the special functions behind the delayed-coupling series.

Everything here revolves around one family,

    G_k(s) = 1F1(k, k+1, -s) - exp(-s) = gamma_low(k+1, s) / s**k ,

where gamma_low(k+1, s) is the lower incomplete gamma function of integer
order, evaluated at complex argument s with Re s >= 0 in all physical uses.
Two evaluation routes are switched on |s|:

  * |s| <= k + 8: a Kummer-transformed power series with nonnegative
    coefficients (no cancellation between terms of the series itself),
  * |s| >  k + 8: the finite complement sum of the upper incomplete gamma,
    with every addend assembled in log space.

Factorial-sized magnitudes are always handled through lgamma so that orders
well beyond k = 170 stay finite.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import ParameterRangeError, PrecisionLossError

MAX_SERIES_TERMS = 10_000
MAX_ORDER = MAX_SERIES_TERMS
SERIES_RTOL = 1e-15

# above |s| = k + this, the complement-sum route is both cheaper and stabler
ROUTE_SPLIT_OFFSET = 8.0

__all__ = [
    "g_k",
    "hyp1f1_k_kp1",
    "lower_incomplete_gamma",
    "regularized_lower_gamma",
]


def _validated_order(k, minimum: int = 0) -> int:
    if k != int(k) or int(k) < minimum:
        raise ParameterRangeError(f"order must be an integer >= {minimum}, got {k!r}")
    k = int(k)
    if k > MAX_ORDER:
        raise ParameterRangeError(f"order {k} exceeds the supported cap {MAX_ORDER}")
    return k


def _validated_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ParameterRangeError(f"non-finite argument {z!r}")
    return z


def hyp1f1_k_kp1(k, z) -> complex:
    """Confluent hypergeometric 1F1(k, k+1, z) by direct Taylor summation.

    The direct series alternates for Re z < 0 and loses digits as |z| grows;
    callers switch to the incomplete-gamma route when that happens.
    """
    k = _validated_order(k, minimum=1)
    z = _validated_complex(z)
    term = 1.0 + 0j
    total = term
    for n in range(MAX_SERIES_TERMS):
        term *= z * (k + n) / ((k + 1 + n) * (n + 1))
        total += term
        if abs(term) <= SERIES_RTOL * abs(total):
            return total
    raise PrecisionLossError(
        f"1F1({k},{k + 1},z) did not converge within {MAX_SERIES_TERMS} terms at z={z!r}"
    )


def regularized_lower_gamma(k_plus_1, s):
    """Regularized lower incomplete gamma P(k+1, s) for integer order.

    Vectorized over a complex array `s`. P(k+1, 0) = 0 and P -> 1 for
    s -> +inf along directions with Re s > 0.
    """
    k = _validated_order(k_plus_1, minimum=1) - 1
    s_arr = np.asarray(s, dtype=complex)
    if not np.all(np.isfinite(s_arr)):
        raise ParameterRangeError("non-finite argument in incomplete gamma")
    scalar = s_arr.ndim == 0
    s_flat = np.atleast_1d(s_arr).ravel()
    out = np.zeros(s_flat.shape, dtype=complex)

    if np.any((s_flat.real < 0) & (np.abs(s_flat) > 700.0)):
        raise PrecisionLossError(
            "incomplete gamma with large left-half-plane argument overflows"
        )
    nonzero = s_flat != 0
    small = nonzero & ((np.abs(s_flat) <= k + ROUTE_SPLIT_OFFSET) | (s_flat.real < 0))
    large = nonzero & ~small

    if small.any():
        out[small] = _reg_lower_gamma_series(k, s_flat[small])
    if large.any():
        out[large] = 1.0 - _upper_gamma_complement(k, s_flat[large])

    out = out.reshape(np.atleast_1d(s_arr).shape)
    return complex(out[0]) if scalar else out


def _reg_lower_gamma_series(k: int, s: np.ndarray) -> np.ndarray:
    # P(k+1,s) = s^(k+1) e^(-s) / (k+1)! * sum_n s^n (k+1)!/(k+1+n)!,
    # all series coefficients positive: stable wherever the prefactor is sane.
    log_pref = (k + 1) * np.log(s) - s - math.lgamma(k + 2)
    if np.any(log_pref.real > 700.0):
        raise PrecisionLossError("incomplete-gamma prefactor overflows double range")
    term = np.ones_like(s)
    total = term.copy()
    for n in range(MAX_SERIES_TERMS):
        term = term * s / (k + 2 + n)
        total += term
        if np.all(np.abs(term) <= SERIES_RTOL * np.abs(total)):
            return np.exp(log_pref) * total
    raise PrecisionLossError(
        f"lower incomplete gamma series stalled at order {k + 1}"
    )


def _upper_gamma_complement(k: int, s: np.ndarray) -> np.ndarray:
    # Q(k+1,s) = e^(-s) sum_{m=0..k} s^m/m!, each addend built in log space so
    # that underflowed exp(-s) cannot silently zero the later, larger terms.
    log_s = np.log(s)
    acc = np.zeros_like(s)
    for m in range(k + 1):
        acc += np.exp(m * log_s - s - math.lgamma(m + 1))
    return acc


def lower_incomplete_gamma(k_plus_1, s) -> complex:
    """Lower incomplete gamma of integer order, gamma(k+1, s), complex s."""
    k = _validated_order(k_plus_1, minimum=1) - 1
    s = _validated_complex(s)
    p = regularized_lower_gamma(k + 1, s)
    if k + 1 <= 170:
        return math.gamma(k + 1) * p
    # magnitude through lgamma; the regularized value carries the phase
    return cmath.exp(math.lgamma(k + 1)) * p


def g_k(k, s) -> complex:
    """G_k(s) = 1F1(k, k+1, -s) - exp(-s); G_0(s) = 1 - exp(-s)."""
    k = _validated_order(k, minimum=0)
    s = _validated_complex(s)
    if s == 0:
        return 0j
    if s.real < 0 and abs(s) > 700.0:
        raise PrecisionLossError("G_k with large left-half-plane argument overflows")
    if abs(s) <= k + ROUTE_SPLIT_OFFSET or s.real < 0:
        # Kummer form: G_k(s) = e^(-s) * sum_{n>=1} s^n k!/(k+n)!
        term = 1.0 + 0j
        total = 0j
        for n in range(1, MAX_SERIES_TERMS + 1):
            term *= s / (k + n)
            total += term
            if abs(term) <= SERIES_RTOL * abs(total):
                return cmath.exp(-s) * total
        raise PrecisionLossError(f"G_k series stalled at k={k}, s={s!r}")
    # large |s|: gamma(k+1,s)/s^k with the factorial folded in log space
    p = regularized_lower_gamma(k + 1, s)
    return cmath.exp(math.lgamma(k + 1) - k * cmath.log(s)) * p
