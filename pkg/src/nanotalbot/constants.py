"""Physical constants frozen at fixed CODATA-2018 values.

The values are pinned (rather than imported from scipy.constants) so that
regression tests stay bit-reproducible across library upgrades.
"""
from dataclasses import dataclass

import math


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34   # J s (reduced Planck constant)
    c: float = 299792458.0          # m/s (exact)
    eps0: float = 8.8541878128e-12  # F/m
    G_N: float = 6.67430e-11        # m^3 / (kg s^2)
    g: float = 9.80665              # m/s^2 (standard gravity, exact)
    k_B: float = 1.380649e-23       # J/K (exact)

    @property
    def h(self) -> float:
        """Planck constant, exactly 2*pi*hbar."""
        return 2.0 * math.pi * self.hbar


CONST = PhysicalConstants()

# Bulk densities used for the source-mass wall, kg/m^3 (standard handbook values).
DENSITY_GOLD = 19300.0
DENSITY_SILICON = 2330.0
DENSITY_SILICA = 2300.0
