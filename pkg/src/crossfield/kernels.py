"""Hot-path evaluation of the factored rate over parameter grids.

Two interchangeable backends compute the same expressions in the same
order: a numba ``@njit`` row loop (default when numba imports) and a pure
numpy vectorized path.  Set the environment variable
``CROSSFIELD_DISABLE_NUMBA=1`` before import to force the numpy fallback;
``ACTIVE_BACKEND`` records which one is live.  ``benchmarks/bench_kernels.py``
times the two against each other.

Per-element outputs depend only on that element's inputs, so a length-1
call (the scalar ``rate_factored`` path) and a batched sweep produce
bit-identical numbers for identical inputs on a given backend.

Inputs are assumed pre-validated (see ``core.resolve_state``); rows are
independent and the kernels hold no state.
"""

from __future__ import annotations

import math
import os
from typing import NamedTuple

import numpy as np

SQRT3 = math.sqrt(3.0)

# Regime flags.  Quasiclassical tunneling formulas presume a large
# suppression exponent and a field well below critical; these conservative
# thresholds surface as warnings in results, never as errors.
WEAK_SUPPRESSION_EXPONENT = 3.0
STRONG_FIELD_THRESHOLD = 0.2

FLAG_WEAK_SUPPRESSION = 1
FLAG_STRONG_FIELD = 2
FLAG_UNDERFLOW = 4
FLAG_OVERFLOW = 8

_FLAG_NAMES = (
    (FLAG_WEAK_SUPPRESSION, "weak-suppression"),
    (FLAG_STRONG_FIELD, "strong-field"),
    (FLAG_UNDERFLOW, "underflow"),
    (FLAG_OVERFLOW, "overflow"),
)


def decode_flags(bits: int) -> tuple[str, ...]:
    """Map a kernel flag bitmask to its tuple of flag names."""
    return tuple(name for bit, name in _FLAG_NAMES if bits & bit)


class GridResult(NamedTuple):
    """Per-row factored-rate results; all arrays share the input length."""

    xi: np.ndarray
    exp_factor: np.ndarray
    preexp: np.ndarray
    coulomb: np.ndarray
    ln_w: np.ndarray
    w: np.ndarray
    flags: np.ndarray


def _rate_rows(eps, q1, za, eta, c2, f, xi, exp_f, preexp, coulomb, ln_w, w, flags):
    # Row loop shared by both backends: plain source here, njit-compiled
    # below when numba is available.
    for i in range(eps.size):
        e = eps[i]
        xi2 = 2.0 * q1[i] / (2.0 + e * e + e * math.sqrt(e * e + 8.0))
        x = math.sqrt(xi2)
        one_plus = 1.0 + xi2
        three_minus = 3.0 - xi2
        fi = f[i]
        ln_f = math.log(fi)
        ln_e = -(2.0 * SQRT3 * xi2 * x / one_plus) / fi
        ln_p = ln_f - math.log(x) + 0.5 * math.log(three_minus / (3.0 * (3.0 + xi2)))
        ln_b = math.log(2.0 * xi2 * x * three_minus * three_minus / (SQRT3 * one_plus))
        ln_q = 2.0 * eta[i] * (ln_b - ln_f) + 6.0 * za[i] * math.asin(x / SQRT3)
        e_val = math.exp(ln_e)
        p_val = math.exp(ln_p)
        q_val = math.exp(ln_q)
        w_val = c2[i] * p_val * q_val * e_val
        ln_w_val = math.log(c2[i]) + ln_p + ln_q + ln_e
        if math.isnan(w_val):
            # 0 * inf between factors; the accumulated log still knows the rate.
            w_val = math.exp(ln_w_val)
        bits = 0
        if -ln_e < WEAK_SUPPRESSION_EXPONENT:
            bits |= FLAG_WEAK_SUPPRESSION
        if fi > STRONG_FIELD_THRESHOLD:
            bits |= FLAG_STRONG_FIELD
        if w_val == 0.0:
            bits |= FLAG_UNDERFLOW
        if math.isinf(p_val) or math.isinf(q_val) or math.isinf(w_val):
            bits |= FLAG_OVERFLOW
        xi[i] = x
        exp_f[i] = e_val
        preexp[i] = p_val
        coulomb[i] = q_val
        ln_w[i] = ln_w_val
        w[i] = w_val
        flags[i] = bits


def _rate_grid_numpy(eps, q1, za, eta, c2, f) -> GridResult:
    """Vectorized fallback; mirrors ``_rate_rows`` expression for expression."""
    xi2 = 2.0 * q1 / (2.0 + eps * eps + eps * np.sqrt(eps * eps + 8.0))
    xi = np.sqrt(xi2)
    one_plus = 1.0 + xi2
    three_minus = 3.0 - xi2
    ln_f = np.log(f)
    ln_e = -(2.0 * SQRT3 * xi2 * xi / one_plus) / f
    ln_p = ln_f - np.log(xi) + 0.5 * np.log(three_minus / (3.0 * (3.0 + xi2)))
    ln_b = np.log(2.0 * xi2 * xi * three_minus * three_minus / (SQRT3 * one_plus))
    ln_q = 2.0 * eta * (ln_b - ln_f) + 6.0 * za * np.arcsin(xi / SQRT3)
    exp_f = np.exp(ln_e)
    preexp = np.exp(ln_p)
    coulomb = np.exp(ln_q)
    w = c2 * preexp * coulomb * exp_f
    ln_w = np.log(c2) + ln_p + ln_q + ln_e
    nan_rows = np.isnan(w)
    if nan_rows.any():
        w = np.where(nan_rows, np.exp(ln_w), w)
    bits = np.where(-ln_e < WEAK_SUPPRESSION_EXPONENT, FLAG_WEAK_SUPPRESSION, 0)
    bits = bits | np.where(f > STRONG_FIELD_THRESHOLD, FLAG_STRONG_FIELD, 0)
    bits = bits | np.where(w == 0.0, FLAG_UNDERFLOW, 0)
    bits = bits | np.where(
        np.isinf(preexp) | np.isinf(coulomb) | np.isinf(w), FLAG_OVERFLOW, 0
    )
    return GridResult(xi, exp_f, preexp, coulomb, ln_w, w, bits.astype(np.int64))


def _env_disables_numba() -> bool:
    return os.environ.get("CROSSFIELD_DISABLE_NUMBA", "0") not in ("", "0")


_rate_rows_njit = None
if not _env_disables_numba():
    try:
        import numba

        _rate_rows_njit = numba.njit(cache=True)(_rate_rows)
    except ImportError:  # pragma: no cover - numba is a hard dependency here
        _rate_rows_njit = None

ACTIVE_BACKEND = "numba" if _rate_rows_njit is not None else "numpy"


def rate_grid(epsilon, one_minus_eps_sq, zalpha, eta, c_lambda_sq, f) -> GridResult:
    """Evaluate the factored rate on equal-length float64 parameter arrays.

    Returns xi, the three factors, the accumulated log rate, the rate
    itself (reduced units) and per-row regime/range flag bits.
    """
    eps = np.ascontiguousarray(epsilon, dtype=np.float64)
    arrs = [
        np.ascontiguousarray(a, dtype=np.float64)
        for a in (one_minus_eps_sq, zalpha, eta, c_lambda_sq, f)
    ]
    n = eps.size
    if any(a.size != n for a in arrs):
        raise ValueError("all parameter arrays must have the same length")
    q1, za, et, c2, ff = arrs
    if ACTIVE_BACKEND == "numba":
        xi = np.empty(n)
        exp_f = np.empty(n)
        preexp = np.empty(n)
        coulomb = np.empty(n)
        ln_w = np.empty(n)
        w = np.empty(n)
        flags = np.zeros(n, dtype=np.int64)
        _rate_rows_njit(eps, q1, za, et, c2, ff, xi, exp_f, preexp, coulomb, ln_w, w, flags)
        return GridResult(xi, exp_f, preexp, coulomb, ln_w, w, flags)
    return _rate_grid_numpy(eps, q1, za, et, c2, ff)
