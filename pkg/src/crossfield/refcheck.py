"""Formula forensics: certify the two rate forms against each other.

The direct closed form and the factored form are algebraically identical;
this module proves it numerically before the fast kernels are trusted.

``compare_forms`` evaluates both forms over a (Z*alpha, f) grid and
reports relative deviations of the rates, computed on the logs so the
comparison survives underflow:

* ``precision="extended"`` re-derives both forms with mpmath at >= 30
  significant digits, fully independent of the double-precision code.
* ``precision="double"`` runs the production kernels in native floats.

A passing report has max_dev <= 1e-25 (extended) or <= 1e-10 (double).
The comparison must also have teeth: injecting a 1% ``Fault`` into any
single formula constant has to blow the double-precision deviation past
1e-3, which the test suite asserts for every supported fault.

``nonrel_limit_residual`` checks that the tunneling exponent collapses to
its weak-binding limit (2/3)(2*delta)^(3/2) as delta = 1 - epsilon -> 0,
and ``log_slope_residual`` cross-checks d(ln w)/d(1/f) against the
analytic slope by central differences.
"""

from __future__ import annotations

import importlib.resources
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath as mp

from . import core
from .core import DomainError, HydrogenicState, StateSpec

EXTENDED_DPS = 40

PASS_TOLERANCE = {"extended": 1e-25, "double": 1e-10}

FAULT_NAMES = ("sqrt3", "qbracket", "dbracket", "clambda")


@dataclass(frozen=True)
class Fault:
    """Deliberate perturbation of one formula constant.

    name: "sqrt3" (the sqrt(3) of the tunneling exponential), "qbracket"
    (the 2 in the Coulomb-factor bracket), "dbracket" (the 4 in the direct
    form's bracket), or "clambda" (the C_lambda^2 normalization).  The
    first, second and fourth perturb the factored form, the third the
    direct form, so any of them breaks the equivalence.
    """

    name: str
    scale: float = 1.01

    def __post_init__(self) -> None:
        if self.name not in FAULT_NAMES:
            raise ValueError("unknown fault %r; expected one of %s" % (self.name, (FAULT_NAMES,)))


@dataclass(frozen=True)
class DeviationReport:
    """Grid-wise relative deviation |w_direct / w_factored - 1|."""

    precision: str
    grid: tuple[tuple[float, float], ...]
    rel_dev: tuple[float, ...]
    max_dev: float
    worst_point: tuple[float, float]
    tolerance: float
    flagged: tuple[tuple[float, float], ...] = ()

    @property
    def passed(self) -> bool:
        return self.max_dev <= self.tolerance


@dataclass(frozen=True)
class LimitResidual:
    """Exponent-coefficient ratio against the weak-binding limit at 1 - eps = delta."""

    delta: float
    ratio: float
    residual: float


def standard_grid() -> tuple[tuple[float, ...], tuple[float, ...], str]:
    """Frozen (zalpha values, f values, version) comparison grid."""
    text = importlib.resources.files("crossfield.data").joinpath("standard_grid.json").read_text()
    doc = json.loads(text)
    return tuple(doc["zalpha"]), tuple(doc["f"]), str(doc["version"])


# ---------------------------------------------------------------------------
# independent extended-precision evaluations (mpmath)
# ---------------------------------------------------------------------------

def _mp_state(zalpha):
    za = mp.mpf(zalpha)
    eps = mp.sqrt((1 - za) * (1 + za))
    xi2 = 2 * za * za / (2 + eps * eps + eps * mp.sqrt(eps * eps + 8))
    return za, eps, xi2, mp.sqrt(xi2)


def _mp_ln_direct(zalpha, f, fault: Optional[Fault]):
    za, eps, xi2, xi = _mp_state(zalpha)
    f = mp.mpf(f)
    s3 = mp.sqrt(3)
    bracket4 = mp.mpf(4)
    if fault is not None and fault.name == "dbracket":
        bracket4 *= mp.mpf(fault.scale)
    lnw = (1 - 2 * eps) * mp.log(f)
    lnw -= mp.log(2 * s3 * xi * mp.gamma(2 * eps + 1))
    lnw += mp.log((3 - xi2) / (3 + xi2)) / 2
    lnw += 2 * eps * mp.log(bracket4 * xi2 * xi * (3 - xi2) ** 2 / (s3 * (1 + xi2)))
    lnw += 6 * za * mp.asin(xi / s3)
    lnw -= 2 * s3 * xi2 * xi / (f * (1 + xi2))
    return lnw


def _mp_ln_factored(zalpha, f, fault: Optional[Fault]):
    za, eps, xi2, xi = _mp_state(zalpha)
    f = mp.mpf(f)
    s3 = mp.sqrt(3)
    eta = eps
    exp_s3 = s3
    bracket2 = mp.mpf(2)
    c2_scale = mp.mpf(1)
    if fault is not None:
        if fault.name == "sqrt3":
            exp_s3 = s3 * mp.mpf(fault.scale)
        elif fault.name == "qbracket":
            bracket2 *= mp.mpf(fault.scale)
        elif fault.name == "clambda":
            c2_scale = mp.mpf(fault.scale)
    ln_c2 = mp.log(c2_scale * 2 ** (2 * eps - 1) / mp.gamma(2 * eps + 1))
    ln_exp = -2 * exp_s3 * xi2 * xi / ((1 + xi2) * f)
    ln_p = mp.log(f) - mp.log(xi) + mp.log((1 - xi2 / 3) / (3 + xi2)) / 2
    ln_b = mp.log(bracket2 * xi2 * xi * (3 - xi2) ** 2 / (s3 * (1 + xi2)))
    ln_q = 2 * eta * (ln_b - mp.log(f)) + 6 * za * mp.asin(xi / s3)
    return ln_c2 + ln_exp + ln_p + ln_q


# ---------------------------------------------------------------------------
# double-precision twins used only for fault injection
# ---------------------------------------------------------------------------
# With no fault the double path runs the production code in core/kernels;
# these float twins exist so a perturbed constant can be slotted in without
# touching production signatures.  A test pins them to the production
# values at scale 1.

def _f64_ln_direct(zalpha: float, f: float, fault: Optional[Fault]) -> float:
    bracket4 = 4.0
    if fault is not None and fault.name == "dbracket":
        bracket4 *= fault.scale
    eps = math.sqrt((1.0 - zalpha) * (1.0 + zalpha))
    xi2 = 2.0 * zalpha * zalpha / (2.0 + eps * eps + eps * math.sqrt(eps * eps + 8.0))
    xi = math.sqrt(xi2)
    s3 = core.SQRT3
    lnw = (1.0 - 2.0 * eps) * math.log(f)
    lnw -= math.log(2.0 * s3 * xi * core.gamma_fn(2.0 * eps + 1.0))
    lnw += 0.5 * math.log((3.0 - xi2) / (3.0 + xi2))
    lnw += 2.0 * eps * math.log(bracket4 * xi2 * xi * (3.0 - xi2) ** 2 / (s3 * (1.0 + xi2)))
    lnw += 6.0 * zalpha * math.asin(xi / s3)
    lnw -= 2.0 * s3 * xi2 * xi / (f * (1.0 + xi2))
    return lnw


def _f64_ln_factored(zalpha: float, f: float, fault: Optional[Fault]) -> float:
    exp_s3 = core.SQRT3
    bracket2 = 2.0
    c2_scale = 1.0
    if fault is not None:
        if fault.name == "sqrt3":
            exp_s3 *= fault.scale
        elif fault.name == "qbracket":
            bracket2 *= fault.scale
        elif fault.name == "clambda":
            c2_scale = fault.scale
    eps = math.sqrt((1.0 - zalpha) * (1.0 + zalpha))
    eta = eps
    xi2 = 2.0 * zalpha * zalpha / (2.0 + eps * eps + eps * math.sqrt(eps * eps + 8.0))
    xi = math.sqrt(xi2)
    s3 = core.SQRT3
    ln_c2 = math.log(c2_scale * 2.0 ** (2.0 * eps - 1.0) / core.gamma_fn(2.0 * eps + 1.0))
    ln_exp = -2.0 * exp_s3 * xi2 * xi / ((1.0 + xi2) * f)
    ln_p = math.log(f) - math.log(xi) + 0.5 * math.log((1.0 - xi2 / 3.0) / (3.0 + xi2))
    ln_b = math.log(bracket2 * xi2 * xi * (3.0 - xi2) ** 2 / (s3 * (1.0 + xi2)))
    ln_q = 2.0 * eta * (ln_b - math.log(f)) + 6.0 * zalpha * math.asin(xi / s3)
    return ln_c2 + ln_exp + ln_p + ln_q


def _ln_pair_double(zalpha: float, f: float, fault: Optional[Fault]) -> tuple[float, float]:
    if fault is None:
        ln_d = core.ln_rate_direct_1s(zalpha, f)
        ln_f = core.rate_factored(HydrogenicState(zalpha), f).ln_w_reduced
        return ln_d, ln_f
    return _f64_ln_direct(zalpha, f, fault), _f64_ln_factored(zalpha, f, fault)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def compare_forms(
    zalpha_grid: Sequence[float],
    f_grid: Sequence[float],
    precision: str = "extended",
    fault: Optional[Fault] = None,
    dps: int = EXTENDED_DPS,
) -> DeviationReport:
    """Relative deviation of the two rate forms over a grid.

    Points where either form over/underflows even in log space are
    reported in ``flagged`` instead of aborting the run.  Raises
    DomainError for an empty grid or out-of-domain points.
    """
    if precision not in PASS_TOLERANCE:
        raise ValueError("precision must be 'extended' or 'double', got %r" % (precision,))
    if not zalpha_grid or not f_grid:
        raise DomainError("empty grid")
    for za in zalpha_grid:
        core._check_zalpha(za)
    for f in f_grid:
        core._check_field(f)

    points = []
    devs = []
    flagged = []
    if precision == "extended":
        with mp.workdps(dps):
            for za in zalpha_grid:
                for f in f_grid:
                    delta = _mp_ln_direct(za, f, fault) - _mp_ln_factored(za, f, fault)
                    dev = abs(mp.expm1(delta))
                    if mp.isnan(dev) or mp.isinf(dev):
                        flagged.append((za, f))
                    else:
                        points.append((za, f))
                        devs.append(float(dev))
    else:
        for za in zalpha_grid:
            for f in f_grid:
                ln_d, ln_f = _ln_pair_double(za, f, fault)
                if not (math.isfinite(ln_d) and math.isfinite(ln_f)):
                    flagged.append((za, f))
                    continue
                diff = ln_d - ln_f
                dev = abs(math.expm1(diff)) if diff < 700.0 else math.inf
                if math.isinf(dev):
                    flagged.append((za, f))
                else:
                    points.append((za, f))
                    devs.append(dev)

    if not devs:
        raise DomainError("no grid point was evaluable; all flagged")
    max_dev = max(devs)
    worst = points[devs.index(max_dev)]
    return DeviationReport(
        precision=precision,
        grid=tuple(points),
        rel_dev=tuple(devs),
        max_dev=max_dev,
        worst_point=worst,
        tolerance=PASS_TOLERANCE[precision],
        flagged=tuple(flagged),
    )


def nonrel_limit_residual(delta_seq: Sequence[float], dps: int = EXTENDED_DPS) -> list[LimitResidual]:
    """Weak-binding limit check of the tunneling exponent coefficient.

    For each delta = 1 - epsilon computes the ratio of
    2*sqrt(3)*xi^3/(1 + xi^2) to its limit (2/3)*(2*delta)^(3/2) in
    extended precision.  The residual |ratio - 1| shrinks linearly with
    delta (the ratio is 1 - delta/12 + O(delta^2)).
    """
    if not delta_seq:
        raise DomainError("empty delta sequence")
    out = []
    with mp.workdps(dps):
        for d in delta_seq:
            if not (0.0 < d <= 0.5) or not math.isfinite(d):
                raise DomainError("delta must lie in (0, 0.5]; got %r" % (d,))
            dd = mp.mpf(d)
            eps = 1 - dd
            xi2 = 2 * (1 - eps * eps) / (2 + eps * eps + eps * mp.sqrt(eps * eps + 8))
            xi = mp.sqrt(xi2)
            coef = 2 * mp.sqrt(3) * xi2 * xi / (1 + xi2)
            limit = mp.mpf(2) / 3 * (2 * dd) ** mp.mpf("1.5")
            ratio = coef / limit
            out.append(LimitResidual(delta=float(d), ratio=float(ratio),
                                     residual=float(abs(ratio - 1))))
    return out


def analytic_log_slope(state: StateSpec, f: float) -> float:
    """Analytic d(ln w)/d(1/f) of the factored rate.

    ln w depends on u = 1/f through -a*u from the exponential, -ln u from
    the pre-exponential and +2*eta*ln u from the Coulomb bracket, so the
    slope is (2*eta - 1)*f - a with a = 2*sqrt(3)*xi^3/(1 + xi^2).
    """
    core._check_field(f)
    rs = core.resolve_state(state)
    # same 1 - eps^2 substitution as the production kernels
    xi2 = 2.0 * rs.one_minus_eps_sq / (
        2.0 + rs.epsilon * rs.epsilon + rs.epsilon * math.sqrt(rs.epsilon * rs.epsilon + 8.0)
    )
    a = 2.0 * core.SQRT3 * xi2 * math.sqrt(xi2) / (1.0 + xi2)
    return (2.0 * rs.eta - 1.0) * f - a


def log_slope_residual(state: StateSpec, f: float, step: float) -> float:
    """Central-difference check of d(ln w)/d(1/f) against the analytic slope.

    ``step`` is the relative step in u = 1/f; accepted range is
    (1e-12, 0.1).  Returns |finite-difference / analytic - 1|.
    """
    core._check_field(f)
    if not (1e-12 < step <= 0.1):
        raise DomainError(
            "step must lie in (1e-12, 0.1]: larger steps leave the asymptotic "
            "regime, smaller ones sink below the double-precision floor; got %r" % (step,)
        )
    u = 1.0 / f
    u_hi = u * (1.0 + step)
    u_lo = u * (1.0 - step)
    ln_hi = core.rate_factored(state, 1.0 / u_hi).ln_w_reduced
    ln_lo = core.rate_factored(state, 1.0 / u_lo).ln_w_reduced
    fd = (ln_hi - ln_lo) / (u_hi - u_lo)
    analytic = analytic_log_slope(state, f)
    return abs(fd / analytic - 1.0)
