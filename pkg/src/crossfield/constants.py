"""Frozen physical-constants table (CODATA 2018) and unit conversions.

Everything downstream works in relativistic units (hbar = m_e = c = 1):
energies are fractions of m_e c^2, fields are fractions of the Schwinger
critical field E_S = m_e^2 c^3 / (e hbar), and rates are multiples of
m_e c^2 / hbar.  This module is the single place where SI re-enters.

The table is versioned; every output document embeds CONSTANTS_VERSION so
that archived results cannot silently drift when a constant is revised.
"""

CONSTANTS_VERSION = "codata2018.1"

# CODATA 2018 recommended values (c is exact by definition of the metre).
ELECTRON_MASS_KG = 9.1093837015e-31
SPEED_OF_LIGHT_M_S = 299792458.0
HBAR_J_S = 1.054571817e-34

# Coupling convention: Z*alpha = Z / ALPHA_INVERSE.
ALPHA_INVERSE = 137.035999

# m_e c^2 / hbar in 1/s, frozen from the three values above.  The value is
# the double-precision result of ELECTRON_MASS_KG * SPEED_OF_LIGHT_M_S**2
# / HBAR_J_S; tests recompute it from the inputs.
RATE_UNIT_PER_SECOND = 7.76344071105011e+20

# Charged-pion to electron mass ratio, 139.57039 MeV / 0.51099895000 MeV.
PION_ELECTRON_MASS_RATIO = 273.13243990031685


def to_si(w_reduced: float) -> float:
    """Convert a rate from reduced units (m_e c^2 / hbar) to 1/s."""
    return w_reduced * RATE_UNIT_PER_SECOND
