"""Tunnel-ionization rate of an atomic ion in a constant crossed field.

Implements the quasiclassical ionization rate of a relativistically bound
electron in a constant crossed electromagnetic field (|E| = |B|, E
perpendicular to B), in two independent algebraic forms:

* ``rate_direct_1s`` -- the single closed-form expression for the ground
  state of a hydrogen-like ion, evaluated literally.
* ``rate_factored`` -- the product form w = C_lambda^2 * P * Q * Exp,
  where Exp is the tunneling exponential, P the pre-exponential, Q the
  Coulomb enhancement of the outgoing electron, and C_lambda^2 the squared
  asymptotic coefficient of the bound-state wave function.  This form also
  covers ions with an arbitrary degree of ionization when epsilon,
  C_lambda^2 and eta are supplied externally (``CustomState``).

All inputs are dimensionless: the binding is described by the reduced
energy epsilon = E_0 / (m_e c^2) (or by the coupling Z*alpha for
hydrogen-like states, with epsilon = sqrt(1 - (Z*alpha)^2)), and the field
by f = E / E_S with E_S the Schwinger critical field.  The bound-state
kinematics enter through the auxiliary variable

    xi = sqrt(1 - (epsilon/2) * (sqrt(epsilon^2 + 8) - epsilon)),

which runs from 0 (zero binding, nonrelativistic endpoint) to 1 (binding
energy equal to the rest mass).  ``xi_of_epsilon`` evaluates the
algebraically equivalent cancellation-free rearrangement

    xi^2 = 2 (1 - epsilon^2) / (2 + epsilon^2 + epsilon*sqrt(epsilon^2+8)),

which keeps full precision near epsilon = 1 where the textbook form loses
half the significant digits.

Everything here is pure and stateless; values are immutable after
construction and safe for unrestricted concurrent use.  The spin factor of
relativistic subbarrier propagation is not modelled.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from . import kernels
from .constants import ALPHA_INVERSE, to_si

__all__ = [
    "DomainError",
    "ExponentOverflowError",
    "HydrogenicState",
    "CustomState",
    "StateSpec",
    "ResolvedState",
    "RateBreakdown",
    "epsilon_hydrogenic",
    "xi_of_epsilon",
    "eta_of",
    "c_lambda_sq_hydrogenic",
    "exp_factor",
    "preexp_factor",
    "coulomb_factor",
    "gamma_fn",
    "rate_factored",
    "rate_direct_1s",
    "ln_rate_direct_1s",
    "resolve_state",
    "to_si",
]

SQRT3 = math.sqrt(3.0)

# Largest x with exp(x) finite in IEEE double.
_MAX_EXP_ARG = math.log(sys.float_info.max)


class DomainError(ValueError):
    """An input lies outside the physical domain of a formula."""


class ExponentOverflowError(OverflowError):
    """A log-space exponent exceeds the representable double range."""


# ---------------------------------------------------------------------------
# validation helpers
# ---------------------------------------------------------------------------

def _check_zalpha(zalpha: float) -> None:
    if not (0.0 < zalpha < 1.0) or not math.isfinite(zalpha):
        raise DomainError(
            "coupling Z*alpha must lie in (0, 1); got %r "
            "(Z*alpha >= 1 is supercritical: epsilon becomes imaginary)" % (zalpha,)
        )


def _check_epsilon(epsilon: float) -> None:
    if not (0.0 < epsilon <= 1.0) or not math.isfinite(epsilon):
        raise DomainError("reduced energy epsilon must lie in (0, 1]; got %r" % (epsilon,))


def _check_field(f: float) -> None:
    if not (f > 0.0) or not math.isfinite(f):
        raise DomainError("reduced field f = E/E_S must be positive and finite; got %r" % (f,))


# ---------------------------------------------------------------------------
# state specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HydrogenicState:
    """Ground state of a hydrogen-like ion with coupling Z*alpha.

    epsilon, eta and C_lambda^2 are all derived: epsilon = eta =
    sqrt(1 - (Z*alpha)^2) and C_lambda^2 = 2^(2 epsilon - 1) /
    Gamma(2 epsilon + 1).
    """

    zalpha: float
    label: str = ""

    def __post_init__(self) -> None:
        _check_zalpha(self.zalpha)
        if not self.label:
            object.__setattr__(self, "label", "za=%r" % (self.zalpha,))

    @classmethod
    def from_z(cls, z: int) -> "HydrogenicState":
        """Build the state for nuclear charge Z using Z*alpha = Z/137.035999."""
        zalpha = z / ALPHA_INVERSE
        if not (0.0 < zalpha < 1.0):
            raise DomainError(
                "nuclear charge Z=%r gives Z*alpha=%r outside (0, 1)" % (z, zalpha)
            )
        return cls(zalpha, label="Z%d" % z)


@dataclass(frozen=True)
class CustomState:
    """Bound state described by externally supplied parameters.

    For multi-electron ions epsilon and c_lambda_sq are not derivable here;
    they come from independent atomic-structure calculations or from
    experiment, together with the Coulomb parameter eta.
    """

    epsilon: float
    c_lambda_sq: float
    eta: float
    label: str = "custom"

    def __post_init__(self) -> None:
        if not (0.0 < self.epsilon < 1.0) or not math.isfinite(self.epsilon):
            raise DomainError(
                "custom state needs 0 < epsilon < 1 strictly (epsilon = 1 means zero "
                "binding and a divergent eta); got %r" % (self.epsilon,)
            )
        if not (self.c_lambda_sq > 0.0) or not math.isfinite(self.c_lambda_sq):
            raise DomainError("c_lambda_sq must be positive; got %r" % (self.c_lambda_sq,))
        if not (self.eta >= 0.0) or not math.isfinite(self.eta):
            raise DomainError("eta must be non-negative; got %r" % (self.eta,))


StateSpec = Union[HydrogenicState, CustomState]


class ResolvedState(NamedTuple):
    """Kernel-ready scalar parameters of a state.

    ``one_minus_eps_sq`` is carried separately so hydrogen-like states can
    substitute (Z*alpha)^2 for 1 - epsilon^2 exactly, which is what keeps
    xi accurate at small coupling.
    """

    label: str
    epsilon: float
    one_minus_eps_sq: float
    zalpha: float
    eta: float
    c_lambda_sq: float


def resolve_state(state: StateSpec) -> ResolvedState:
    """Reduce a state specification to the scalar parameters of the rate."""
    if isinstance(state, HydrogenicState):
        za = state.zalpha
        eps = epsilon_hydrogenic(za)
        # eta == epsilon identically for the hydrogen-like ground state.
        return ResolvedState(state.label, eps, za * za, za, eps,
                             c_lambda_sq_hydrogenic(za))
    if isinstance(state, CustomState):
        eps = state.epsilon
        q1 = (1.0 - eps) * (1.0 + eps)
        # eta = za*eps/sqrt(1-eps^2) inverted for the effective coupling that
        # enters the arcsine term of the Coulomb factor.
        za_eff = state.eta * math.sqrt(q1) / eps
        return ResolvedState(state.label, eps, q1, za_eff, state.eta,
                             state.c_lambda_sq)
    raise TypeError("expected HydrogenicState or CustomState, got %r" % (state,))


# ---------------------------------------------------------------------------
# breakdown of the factored rate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RateBreakdown:
    """Factored rate with every intermediate.

    ``w_reduced`` is the literal product c_lambda_sq * preexp * coulomb *
    exp_factor in units of m_e c^2 / hbar; ``ln_w_reduced`` is the same
    quantity accumulated in log space, which stays informative when the
    product under- or overflows (those rows carry "underflow"/"overflow"
    in ``flags`` rather than being clamped silently).
    """

    xi: float
    exp_factor: float
    preexp: float
    coulomb: float
    c_lambda_sq: float
    ln_w_reduced: float
    w_reduced: float
    w_si: float
    flags: tuple[str, ...]


# ---------------------------------------------------------------------------
# scalar formula kernels
# ---------------------------------------------------------------------------

def epsilon_hydrogenic(zalpha: float) -> float:
    """Reduced energy sqrt(1 - (Z*alpha)^2) of the hydrogen-like ground state."""
    _check_zalpha(zalpha)
    return math.sqrt((1.0 - zalpha) * (1.0 + zalpha))


def xi_of_epsilon(epsilon: float) -> float:
    """Auxiliary variable xi, strictly decreasing in epsilon; xi(1) = 0.

    Evaluated through the cancellation-free identity
    xi^2 * (2 + eps^2 + eps*sqrt(eps^2 + 8)) = 2 (1 - eps^2).
    """
    _check_epsilon(epsilon)
    q1 = (1.0 - epsilon) * (1.0 + epsilon)
    denom = 2.0 + epsilon * epsilon + epsilon * math.sqrt(epsilon * epsilon + 8.0)
    return math.sqrt(2.0 * q1 / denom)


def eta_of(zalpha: float, epsilon: float) -> float:
    """Coulomb parameter eta = Z*alpha * epsilon / sqrt(1 - epsilon^2).

    Requires epsilon < 1 strictly (epsilon = 1 is the zero-binding
    endpoint where eta diverges).  When the pair satisfies the
    hydrogen-like energy relation epsilon^2 + (Z*alpha)^2 = 1 to within
    double-precision roundoff, the identity eta == epsilon is returned
    exactly: pushing the rounded epsilon through the general quotient
    would amplify its representation error by epsilon^2/(Z*alpha)^2.
    """
    _check_zalpha(zalpha)
    if not (0.0 < epsilon < 1.0) or not math.isfinite(epsilon):
        if epsilon == 1.0:
            raise DomainError(
                "eta diverges at epsilon = 1 (nonrelativistic endpoint, zero binding)"
            )
        raise DomainError("reduced energy epsilon must lie in (0, 1); got %r" % (epsilon,))
    if abs(epsilon * epsilon + zalpha * zalpha - 1.0) <= 1e-15:
        return epsilon
    return zalpha * epsilon / math.sqrt((1.0 - epsilon) * (1.0 + epsilon))


# Lanczos rational approximation of Gamma, g = 7, 9-term coefficient set
# (standard tabulation, e.g. Numerical Recipes 3rd ed.).  Relative error
# below 1e-14 on the guard range; validated against the recurrence
# Gamma(x+1) = x*Gamma(x) and a multiprecision reference in the tests.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(x: float) -> float:
    """Gamma function on the guard range [0.5, 10].

    The rate formulas only ever need Gamma(2*epsilon + 1) with epsilon in
    (0, 1], i.e. arguments in (1, 3].
    """
    if not (0.5 <= x <= 10.0):
        raise DomainError("gamma_fn guard range is [0.5, 10]; got %r" % (x,))
    acc = _LANCZOS_COEF[0]
    for i in range(1, 9):
        acc += _LANCZOS_COEF[i] / (x - 1.0 + i)
    t = x + _LANCZOS_G - 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x - 0.5) * math.exp(-t) * acc


def c_lambda_sq_hydrogenic(zalpha: float) -> float:
    """Squared asymptotic coefficient of the hydrogen-like ground state.

    C_lambda^2 = 2^(2 epsilon - 1) / Gamma(2 epsilon + 1); this is the
    unique normalization under which the factored rate reproduces the
    direct closed form (certified by ``refcheck.compare_forms``).  It
    tends to 1 at weak coupling.
    """
    eps = epsilon_hydrogenic(zalpha)
    return 2.0 ** (2.0 * eps - 1.0) / gamma_fn(2.0 * eps + 1.0)


def exp_factor(xi: float, f: float) -> float:
    """Tunneling exponential Exp = exp(-2*sqrt(3)*xi^3 / ((1 + xi^2) * f)).

    Equals 1 only at xi = 0; underflow to 0 at extreme f -> 0 is permitted
    (the exponent itself stays representable).
    """
    if not (0.0 <= xi < 1.0):
        raise DomainError("xi must lie in [0, 1); got %r" % (xi,))
    _check_field(f)
    xi2 = xi * xi
    return math.exp(-2.0 * SQRT3 * xi2 * xi / ((1.0 + xi2) * f))


def preexp_factor(xi: float, f: float) -> float:
    """Pre-exponential P = (1/xi) * sqrt((1 - xi^2/3)/(3 + xi^2)) * f.

    Linear in the field.  xi = 0 is rejected: the 1/xi divergence marks
    the nonrelativistic endpoint where this parametrization degenerates.
    """
    if xi == 0.0:
        raise DomainError(
            "preexp_factor diverges at xi = 0 (nonrelativistic endpoint)"
        )
    if not (0.0 < xi < 1.0):
        raise DomainError("xi must lie in (0, 1); got %r" % (xi,))
    _check_field(f)
    xi2 = xi * xi
    return (1.0 / xi) * math.sqrt((1.0 - xi2 / 3.0) / (3.0 + xi2)) * f


def coulomb_factor(xi: float, f: float, zalpha: float, eta: float) -> float:
    """Coulomb enhancement Q of the outgoing electron.

    Q = [2 xi^3 (3 - xi^2)^2 / (sqrt(3) (1 + xi^2)) / f]^(2 eta)
        * exp(6 Z*alpha * arcsin(xi / sqrt(3))),

    accumulated in log space and exponentiated once.  zalpha here is the
    effective coupling of the outgoing-electron/core interaction; unlike
    the hydrogen-like constructor it admits 0 (neutral core, Q's arcsine
    term absent) and values above 1 (strongly charged cores described by
    custom states).
    """
    if not (0.0 < xi < 1.0):
        raise DomainError("xi must lie in (0, 1); got %r" % (xi,))
    _check_field(f)
    if zalpha < 0.0 or eta < 0.0:
        raise DomainError("zalpha and eta must be non-negative")
    xi2 = xi * xi
    ln_b = math.log(2.0 * xi2 * xi * (3.0 - xi2) ** 2 / (SQRT3 * (1.0 + xi2)))
    arg = 2.0 * eta * (ln_b - math.log(f)) + 6.0 * zalpha * math.asin(xi / SQRT3)
    if arg > _MAX_EXP_ARG:
        raise ExponentOverflowError(
            "Coulomb-factor exponent %.6g exceeds the double range" % arg
        )
    return math.exp(arg)


# ---------------------------------------------------------------------------
# assembled rates
# ---------------------------------------------------------------------------

def rate_factored(state: StateSpec, f: float) -> RateBreakdown:
    """Factored rate w = C_lambda^2 * P * Q * Exp with every intermediate.

    Returns the full breakdown in reduced units plus the SI rate
    w_si = to_si(w_reduced).  Exponent overflow/underflow is flagged on
    the result, never clamped silently; domain violations raise.
    """
    _check_field(f)
    rs = resolve_state(state)
    res = kernels.rate_grid(
        np.array([rs.epsilon]),
        np.array([rs.one_minus_eps_sq]),
        np.array([rs.zalpha]),
        np.array([rs.eta]),
        np.array([rs.c_lambda_sq]),
        np.array([f]),
    )
    flags = kernels.decode_flags(int(res.flags[0]))
    w = float(res.w[0])
    w_si = to_si(w)
    if math.isinf(w_si) and "overflow" not in flags:
        flags = flags + ("overflow",)
    return RateBreakdown(
        xi=float(res.xi[0]),
        exp_factor=float(res.exp_factor[0]),
        preexp=float(res.preexp[0]),
        coulomb=float(res.coulomb[0]),
        c_lambda_sq=rs.c_lambda_sq,
        ln_w_reduced=float(res.ln_w[0]),
        w_reduced=w,
        w_si=w_si,
        flags=flags,
    )


def ln_rate_direct_1s(zalpha: float, f: float) -> float:
    """Log of the direct closed-form rate for the hydrogen-like ground state.

    The closing bracket of the closed form is the argument of an
    exponential: only then does the expression factor into
    C_lambda^2 * P * Q * Exp and vanish (instead of diverging) at zero
    field.
    """
    _check_zalpha(zalpha)
    _check_field(f)
    eps = math.sqrt((1.0 - zalpha) * (1.0 + zalpha))
    q1 = zalpha * zalpha
    xi2 = 2.0 * q1 / (2.0 + eps * eps + eps * math.sqrt(eps * eps + 8.0))
    xi = math.sqrt(xi2)
    lnw = (1.0 - 2.0 * eps) * math.log(f)
    lnw -= math.log(2.0 * SQRT3 * xi * gamma_fn(2.0 * eps + 1.0))
    lnw += 0.5 * math.log((3.0 - xi2) / (3.0 + xi2))
    lnw += 2.0 * eps * math.log(4.0 * xi2 * xi * (3.0 - xi2) ** 2 / (SQRT3 * (1.0 + xi2)))
    lnw += 6.0 * zalpha * math.asin(xi / SQRT3)
    lnw -= 2.0 * SQRT3 * xi2 * xi / (f * (1.0 + xi2))
    return lnw


def rate_direct_1s(zalpha: float, f: float) -> float:
    """Direct closed-form rate, reduced units; log-space evaluated.

    Overflow raises (same policy as ``coulomb_factor``); underflow to 0 at
    extreme suppression is permitted.
    """
    lnw = ln_rate_direct_1s(zalpha, f)
    if lnw > _MAX_EXP_ARG:
        raise ExponentOverflowError("rate exponent %.6g exceeds the double range" % lnw)
    return math.exp(lnw)
