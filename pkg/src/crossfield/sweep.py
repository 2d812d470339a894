"""Parameter sweeps over bound states and field strengths.

``scan_grid`` evaluates the factored rate for every (state, field) pair
through the batched kernels and returns an ordered, flag-annotated table:
rows are grouped by state in the order the states were given, fields
ascending within each state.  Evaluation is deterministic, so identical
specs yield identical tables; reordering the states only regroups rows.

Rows whose rate underflows to 0 in double precision keep their log-space
rate, and rows that trip regime or range thresholds carry flags instead
of being dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .constants import to_si
from .core import DomainError, HydrogenicState, StateSpec, resolve_state

__all__ = [
    "ScanSpec",
    "ScanRow",
    "ScanTable",
    "MonotonicityViolation",
    "MassScaling",
    "field_grid",
    "scan_grid",
    "monotonicity_report",
    "schwinger_scaling",
]

SPACINGS = ("geometric", "linear")
OUTPUT_UNITS = ("reduced", "si")


@dataclass(frozen=True)
class ScanSpec:
    """Sweep specification: which states, which field grid, which units.

    The default spacing is geometric because rates vary over many decades
    in f; pass spacing="linear" for a uniform grid.
    """

    states: tuple[StateSpec, ...]
    f_min: float
    f_max: float
    count: int
    spacing: str = "geometric"
    output_units: str = "reduced"

    def __post_init__(self) -> None:
        if not self.states:
            raise DomainError("scan needs at least one state")
        if self.count < 2:
            raise DomainError("field grid needs count >= 2; got %r" % (self.count,))
        if not (0.0 < self.f_min < self.f_max) or not math.isfinite(self.f_max):
            raise DomainError(
                "field grid needs 0 < f_min < f_max; got %r .. %r" % (self.f_min, self.f_max)
            )
        if self.spacing not in SPACINGS:
            raise DomainError("spacing must be one of %s; got %r" % (SPACINGS, self.spacing))
        if self.output_units not in OUTPUT_UNITS:
            raise DomainError(
                "output_units must be one of %s; got %r" % (OUTPUT_UNITS, self.output_units)
            )

    @classmethod
    def from_z_range(cls, z_lo: int, z_hi: int, f_min: float, f_max: float,
                     count: int, **kw) -> "ScanSpec":
        """Expand an inclusive nuclear-charge range to hydrogen-like states."""
        if z_lo > z_hi:
            raise DomainError("empty Z range %r:%r" % (z_lo, z_hi))
        states = tuple(HydrogenicState.from_z(z) for z in range(z_lo, z_hi + 1))
        return cls(states, f_min, f_max, count, **kw)


@dataclass(frozen=True)
class ScanRow:
    """One (state, field) evaluation; flags mark regime and range issues."""

    state: str
    zalpha: float
    epsilon: float
    f: float
    xi: float
    ln_w_reduced: float
    w_reduced: float
    w_si: float
    flags: tuple[str, ...]


@dataclass(frozen=True)
class ScanTable:
    rows: tuple[ScanRow, ...]
    output_units: str = "reduced"

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class MonotonicityViolation:
    """Adjacent unflagged pair within one state where w failed to increase."""

    state: str
    f_lower: float
    f_upper: float
    w_lower: float
    w_upper: float


@dataclass(frozen=True)
class MassScaling:
    """Schwinger-field rescaling for a bound particle of different mass.

    The critical field grows with the square of the particle mass, so the
    field needed to reach the same reduced strength scales accordingly.
    """

    mass_ratio: float
    field_ratio: float
    orders_of_magnitude: float


def field_grid(spec: ScanSpec) -> np.ndarray:
    """Field values of the spec, ascending, endpoints exact."""
    if spec.spacing == "geometric":
        return np.geomspace(spec.f_min, spec.f_max, spec.count)
    return np.linspace(spec.f_min, spec.f_max, spec.count)


def scan_grid(spec: ScanSpec) -> ScanTable:
    """Evaluate every (state, field) pair of the spec.

    One row per pair in deterministic (state order, f ascending) order.
    A state whose parameters fail domain validation at resolution time
    produces NaN rows flagged "domain-error" instead of aborting the scan.
    """
    fs = field_grid(spec)
    n = fs.size
    rows: list[ScanRow] = []
    for state in spec.states:
        try:
            rs = resolve_state(state)
        except DomainError:
            label = getattr(state, "label", str(state))
            rows.extend(
                ScanRow(label, math.nan, math.nan, float(f), math.nan,
                        math.nan, math.nan, math.nan, ("domain-error",))
                for f in fs
            )
            continue
        res = kernels.rate_grid(
            np.full(n, rs.epsilon),
            np.full(n, rs.one_minus_eps_sq),
            np.full(n, rs.zalpha),
            np.full(n, rs.eta),
            np.full(n, rs.c_lambda_sq),
            fs,
        )
        for i in range(n):
            w = float(res.w[i])
            rows.append(
                ScanRow(
                    state=rs.label,
                    zalpha=rs.zalpha,
                    epsilon=rs.epsilon,
                    f=float(fs[i]),
                    xi=float(res.xi[i]),
                    ln_w_reduced=float(res.ln_w[i]),
                    w_reduced=w,
                    w_si=to_si(w),
                    flags=kernels.decode_flags(int(res.flags[i])),
                )
            )
    return ScanTable(tuple(rows), output_units=spec.output_units)


def monotonicity_report(table: ScanTable) -> list[MonotonicityViolation]:
    """Adjacent unflagged pairs where w fails to increase with f.

    An empty list is the passing condition: in the tunneling regime the
    rate grows strictly with the field.
    """
    violations = []
    for i in range(len(table.rows) - 1):
        lo, hi = table.rows[i], table.rows[i + 1]
        if lo.state != hi.state or lo.flags or hi.flags:
            continue
        if not (hi.w_reduced > lo.w_reduced):
            violations.append(
                MonotonicityViolation(lo.state, lo.f, hi.f, lo.w_reduced, hi.w_reduced)
            )
    return violations


def schwinger_scaling(mass_ratio: float) -> MassScaling:
    """Critical-field ratio for a particle mass_ratio times the electron mass."""
    if not (mass_ratio > 0.0) or not math.isfinite(mass_ratio):
        raise DomainError("mass ratio must be positive and finite; got %r" % (mass_ratio,))
    return MassScaling(
        mass_ratio=mass_ratio,
        field_ratio=mass_ratio ** 2,
        orders_of_magnitude=2.0 * math.log10(mass_ratio),
    )
