"""Physical constants (SI).

Only primitive constants live here; keep this module import-light so any
layer can use it without dragging in the solvers.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants in SI units.

    k_coulomb is 1/(4 pi eps0); vacuum permittivity is assumed for the
    medium between the resonator and the charged body.
    """

    hbar: float = 1.054571817e-34      # J s
    e_charge: float = 1.602176634e-19  # C
    k_coulomb: float = 8.9875517923e9  # N m^2 / C^2
    c_light: float = 299792458.0       # m / s


# CODATA 2018 values; e and c are exact in the 2019 SI.
CODATA = PhysicalConstants()

# Reference value used to sanity-check user-supplied constants.
K_COULOMB_REFERENCE = 8.9875e9
