"""Acceptance suite: one test per release criterion, at pinned tolerances.

Each test prints a single PASS line once its assertions hold, so running
``pytest -s tests/test_acceptance.py`` gives a line-per-criterion record.
"""

import math
import time

import numpy as np
import pytest

from crossfield import refcheck
from crossfield.core import (
    HydrogenicState,
    epsilon_hydrogenic,
    eta_of,
    xi_of_epsilon,
)
from crossfield.refcheck import Fault, compare_forms, log_slope_residual, nonrel_limit_residual
from crossfield.sweep import ScanSpec, scan_grid, schwinger_scaling

ZALPHA_GRID, F_GRID, _GRID_VERSION = refcheck.standard_grid()


def _ok(n, name):
    print("criterion %d (%s): PASS" % (n, name))


def test_criterion_1_form_equivalence():
    t0 = time.perf_counter()
    extended = compare_forms(ZALPHA_GRID, F_GRID, precision="extended")
    double = compare_forms(ZALPHA_GRID, F_GRID, precision="double")
    elapsed = time.perf_counter() - t0
    assert len(extended.grid) == 40 and len(double.grid) == 40
    assert extended.max_dev <= 1e-25, extended.max_dev
    assert double.max_dev <= 1e-10, double.max_dev
    assert elapsed < 5.0, "equivalence run took %.2fs" % elapsed
    _ok(1, "form equivalence on the frozen 8x5 grid, <5s")


def test_criterion_2_hydrogenic_identity():
    for za in (0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)[:9]:
        eps = epsilon_hydrogenic(za)
        assert abs(eta_of(za, eps) - eps) <= 1e-14, za
    _ok(2, "eta == epsilon for hydrogen-like states, 9 points")


def test_criterion_3_xi_endpoints_and_identity():
    assert xi_of_epsilon(1.0) == 0.0
    assert abs(xi_of_epsilon(1e-16) - 1.0) <= 1e-15
    rng = np.random.default_rng(20240815)
    eps = rng.uniform(1e-12, 1.0, size=10_000)
    eps[0] = 1.0
    for e in eps:
        e = float(e)
        xi = xi_of_epsilon(e)
        residual = xi * xi * (2.0 + e * e + e * math.sqrt(e * e + 8.0)) - 2.0 * (1.0 - e * e)
        assert abs(residual) <= 1e-14, e
    _ok(3, "xi endpoints and cancellation-free identity, 1e4 random points")


def test_criterion_4_nonrelativistic_exponent_limit():
    deltas = [10.0**-k for k in range(2, 9)]
    residuals = nonrel_limit_residual(deltas)
    by_delta = {r.delta: r.residual for r in residuals}
    assert by_delta[1e-4] <= 1e-3
    seq = [r.residual for r in residuals]
    assert all(a > b for a, b in zip(seq, seq[1:]))
    _ok(4, "weak-binding exponent limit, monotone over delta = 1e-2 .. 1e-8")


def test_criterion_5_log_slope():
    for za in (0.1, 0.3, 0.67):
        res = log_slope_residual(HydrogenicState(za), 0.05, step=1e-4)
        assert res <= 1e-6, (za, res)
    _ok(5, "finite-difference d(ln w)/d(1/f) matches the analytic slope")


def test_criterion_6_schwinger_mass_scaling():
    ms = schwinger_scaling(273.13)
    assert 7.0e4 <= ms.field_ratio <= 8.0e4, ms.field_ratio
    assert 4.8 <= ms.orders_of_magnitude <= 5.0, ms.orders_of_magnitude
    _ok(6, "pion-atom critical-field scaling, about 5 orders of magnitude")


def test_criterion_7_fault_sensitivity():
    for name in ("sqrt3", "qbracket", "dbracket", "clambda"):
        rep = compare_forms(ZALPHA_GRID, F_GRID, precision="double",
                            fault=Fault(name, scale=1.01))
        assert rep.max_dev > 1e-3, (name, rep.max_dev)
    _ok(7, "1% perturbation of any formula constant breaks equivalence")


def test_criterion_8_determinism(run_cli, tmp_path):
    args = ["scan", "--z-range", "1:3", "--field-range", "1e-3:0.1",
            "--points", "5", "--format", "csv"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(args + ["--out", str(a)]).returncode == 0
    assert run_cli(args + ["--out", str(b)]).returncode == 0
    assert a.read_bytes() == b.read_bytes()

    states = tuple(HydrogenicState.from_z(z) for z in (1, 2, 3))
    fwd = scan_grid(ScanSpec(states, 1e-3, 0.1, 5))
    rev = scan_grid(ScanSpec(states[::-1], 1e-3, 0.1, 5))
    fwd_by_state = {s: tuple(r for r in fwd.rows if r.state == s) for s in ("Z1", "Z2", "Z3")}
    rev_by_state = {s: tuple(r for r in rev.rows if r.state == s) for s in ("Z1", "Z2", "Z3")}
    assert fwd_by_state == rev_by_state
    _ok(8, "byte-identical scans and shuffle-invariant values")


def test_criterion_9_cli_end_to_end(run_cli):
    assert run_cli(["compare"]).returncode == 0
    assert run_cli(["compare", "--inject-fault", "clambda"]).returncode == 1
    assert run_cli(["rate", "--z", "200", "--field", "0.1"]).returncode == 2
    _ok(9, "compare exit codes and supercritical-Z rejection")
