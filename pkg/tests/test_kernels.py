import subprocess
import sys

import numpy as np
import pytest

from crossfield import kernels
from crossfield.core import HydrogenicState, rate_factored, resolve_state


def _grid_arrays():
    """Mixed (state, field) rows spanning the usable parameter space."""
    zas = [0.0073, 0.1, 0.3, 0.5, 0.67, 0.9]
    fs = [1e-4, 1e-3, 0.01, 0.05, 0.1, 0.3]
    cols = {k: [] for k in ("eps", "q1", "za", "eta", "c2", "f")}
    for za in zas:
        rs = resolve_state(HydrogenicState(za))
        for f in fs:
            cols["eps"].append(rs.epsilon)
            cols["q1"].append(rs.one_minus_eps_sq)
            cols["za"].append(rs.zalpha)
            cols["eta"].append(rs.eta)
            cols["c2"].append(rs.c_lambda_sq)
            cols["f"].append(f)
    return tuple(np.array(cols[k]) for k in ("eps", "q1", "za", "eta", "c2", "f"))


def test_backends_agree():
    if kernels.ACTIVE_BACKEND != "numba":
        pytest.skip("numba backend not active; nothing to cross-check")
    args = _grid_arrays()
    jit = kernels.rate_grid(*args)
    vec = kernels._rate_grid_numpy(*args)
    np.testing.assert_array_equal(jit.xi, vec.xi)
    np.testing.assert_array_equal(jit.flags, vec.flags)
    np.testing.assert_allclose(jit.ln_w, vec.ln_w, rtol=1e-13, atol=1e-13)
    np.testing.assert_allclose(jit.w, vec.w, rtol=1e-12)
    np.testing.assert_allclose(jit.exp_factor, vec.exp_factor, rtol=1e-13)
    np.testing.assert_allclose(jit.preexp, vec.preexp, rtol=1e-13)
    np.testing.assert_allclose(jit.coulomb, vec.coulomb, rtol=1e-13)


def test_length_one_call_matches_batch_bitwise():
    args = _grid_arrays()
    full = kernels.rate_grid(*args)
    for i in (0, 7, 17, 35):
        single = kernels.rate_grid(*(a[i : i + 1] for a in args))
        for name in ("xi", "exp_factor", "preexp", "coulomb", "ln_w", "w", "flags"):
            assert getattr(single, name)[0] == getattr(full, name)[i]


def test_rate_factored_shares_the_kernel_path():
    args = _grid_arrays()
    full = kernels.rate_grid(*args)
    zas = [0.0073, 0.1, 0.3, 0.5, 0.67, 0.9]
    fs = [1e-4, 1e-3, 0.01, 0.05, 0.1, 0.3]
    i = 0
    for za in zas:
        for f in fs:
            bd = rate_factored(HydrogenicState(za), f)
            assert bd.w_reduced == full.w[i]
            assert bd.xi == full.xi[i]
            assert bd.ln_w_reduced == full.ln_w[i]
            i += 1


def test_underflow_row_keeps_log_rate():
    rs = resolve_state(HydrogenicState(0.67))
    res = kernels.rate_grid(
        np.array([rs.epsilon]), np.array([rs.one_minus_eps_sq]),
        np.array([rs.zalpha]), np.array([rs.eta]),
        np.array([rs.c_lambda_sq]), np.array([1e-6]),
    )
    assert res.w[0] == 0.0
    assert np.isfinite(res.ln_w[0])
    assert int(res.flags[0]) & kernels.FLAG_UNDERFLOW


def test_decode_flags():
    assert kernels.decode_flags(0) == ()
    assert kernels.decode_flags(kernels.FLAG_WEAK_SUPPRESSION) == ("weak-suppression",)
    assert kernels.decode_flags(
        kernels.FLAG_STRONG_FIELD | kernels.FLAG_OVERFLOW
    ) == ("strong-field", "overflow")
    assert kernels.decode_flags(15) == (
        "weak-suppression", "strong-field", "underflow", "overflow")


def test_mismatched_lengths_rejected():
    one = np.array([0.9])
    two = np.array([0.9, 0.8])
    with pytest.raises(ValueError):
        kernels.rate_grid(one, one, one, one, one, two)


def test_numpy_fallback_selected_by_env_flag():
    code = (
        "import crossfield.kernels as k\n"
        "import crossfield as cf\n"
        "print(k.ACTIVE_BACKEND)\n"
        "print(repr(cf.rate_factored(cf.HydrogenicState(0.3), 0.05).w_reduced))\n"
    )
    proc = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True, text=True,
        env={**__import__("os").environ, "CROSSFIELD_DISABLE_NUMBA": "1"},
    )
    assert proc.returncode == 0, proc.stderr
    backend, w_repr = proc.stdout.split()
    assert backend == "numpy"
    here = rate_factored(HydrogenicState(0.3), 0.05).w_reduced
    assert float(w_repr) == pytest.approx(here, rel=1e-12)
