"""Physical constants, in SI units, used throughout the simulation."""

from dataclasses import dataclass
from functools import lru_cache

from scipy import constants as codata


HELIUM4_MASS_AMU = 4.002602

# The metastable 2^3S_1 state carries a moment of two Bohr magnetons
MOMENT_IN_BOHR_MAGNETONS = 2


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float
    bohr_magneton: float
    amu: float
    helium4_mass: float
    metastable_he_moment: float


@lru_cache(maxsize=None)
def constants() -> PhysicalConstants:
    """Returns CODATA values for hbar (J s), the Bohr magneton (J/T) and masses (kg)."""

    bohr_magneton = codata.physical_constants['Bohr magneton'][0]
    amu = codata.physical_constants['atomic mass constant'][0]

    return PhysicalConstants(
        hbar=codata.hbar,
        bohr_magneton=bohr_magneton,
        amu=amu,
        helium4_mass=HELIUM4_MASS_AMU * amu,
        metastable_he_moment=MOMENT_IN_BOHR_MAGNETONS * bohr_magneton,
    )
