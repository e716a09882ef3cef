"""Parameter records and closed-form derived quantities for the interferometer.

Everything here is pure arithmetic on the experiment parameters: sphere mass
and polarizability, ground-state / thermal spreads, Talbot time, the grating
phase amplitude phi0, the grating Fourier coefficients b_m, and the Rayleigh
scattering rate at the grating.

Spread convention: sigma_x and sigma_p are standard deviations (variance
convention, Gaussian exponent -x^2 / 2 sigma_x^2).  With that convention the
released ground state is a minimum-uncertainty state,

    sigma_x = sqrt(hbar / 2 M omega),  sigma_p = sqrt(hbar M omega / 2),
    sigma_x * sigma_p = hbar / 2,      sigma_v = omega * sigma_x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import jv

from .constants import CONST


@dataclass(frozen=True)
class SphereSpec:
    """Dielectric nanosphere: radius [m], density [kg/m^3], dielectric constant."""
    radius: float
    density: float
    dielectric: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("sphere radius must be positive")
        if self.density <= 0:
            raise ValueError("sphere density must be positive")
        if self.dielectric <= 1:
            raise ValueError("dielectric constant must exceed 1")


@dataclass(frozen=True)
class TrapSpec:
    """Release trap: angular frequency omega [rad/s] and temperature [K] (0 = ground state)."""
    omega: float
    temperature: float = 0.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("trap frequency must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")


@dataclass(frozen=True)
class GratingSpec:
    """Standing-wave phase grating: period d [m], peak intensity [W/m^2], pulse duration [s].

    The grating is a retro-reflected standing wave, so the laser wavelength
    defaults to 2*d.
    """
    period: float
    intensity: float
    pulse_duration: float
    wavelength: float = field(default=0.0)

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("grating period must be positive")
        if self.intensity < 0:
            raise ValueError("grating intensity must be non-negative")
        if self.pulse_duration <= 0:
            raise ValueError("pulse duration must be positive")
        if self.wavelength == 0.0:
            object.__setattr__(self, "wavelength", 2.0 * self.period)
        elif self.wavelength <= 0:
            raise ValueError("wavelength must be positive")


def sphere_mass(spec: SphereSpec) -> float:
    """Mass of a uniform sphere, (4/3) pi rho R^3 [kg]."""
    return (4.0 / 3.0) * math.pi * spec.density * spec.radius**3


def polarizability(spec: SphereSpec) -> float:
    """Static-limit polarizability 4 pi eps0 R^3 (eps-1)/(eps+2) [C m^2/V]."""
    eps = spec.dielectric
    return 4.0 * math.pi * CONST.eps0 * spec.radius**3 * (eps - 1.0) / (eps + 2.0)


def ground_state_spread(mass: float, omega: float) -> float:
    """Ground-state position standard deviation sqrt(hbar / 2 M omega) [m]."""
    if mass <= 0 or omega <= 0:
        raise ValueError("mass and omega must be positive")
    return math.sqrt(CONST.hbar / (2.0 * mass * omega))


def mean_occupation(omega: float, temperature: float) -> float:
    """Bose occupation nbar = 1/(exp(hbar omega / kT) - 1); 0 at T=0."""
    if temperature == 0.0:
        return 0.0
    return 1.0 / math.expm1(CONST.hbar * omega / (CONST.k_B * temperature))


def temperature_for_occupation(omega: float, nbar: float) -> float:
    """Temperature [K] giving mean occupation nbar at trap frequency omega; 0 for nbar=0."""
    if nbar < 0:
        raise ValueError("nbar must be non-negative")
    if nbar == 0.0:
        return 0.0
    return CONST.hbar * omega / (CONST.k_B * math.log1p(1.0 / nbar))


def thermal_spreads(mass: float, omega: float, temperature: float) -> tuple[float, float]:
    """Thermal position and momentum standard deviations (sigma_x, sigma_p).

    sigma_x^2 = (hbar / 2 M omega)(2 nbar + 1), sigma_p^2 = (hbar M omega / 2)(2 nbar + 1).
    """
    nbar = mean_occupation(omega, temperature)
    widen = 2.0 * nbar + 1.0
    sigma_x = math.sqrt(CONST.hbar / (2.0 * mass * omega) * widen)
    sigma_p = math.sqrt(CONST.hbar * mass * omega / 2.0 * widen)
    return sigma_x, sigma_p


def talbot_time(mass: float, period: float) -> float:
    """Talbot self-imaging time M d^2 / h [s]."""
    if mass <= 0 or period <= 0:
        raise ValueError("mass and period must be positive")
    return mass * period**2 / CONST.h


def grating_velocity(mass: float, period: float) -> float:
    """Recoil-scale velocity hbar / (d M) [m/s]."""
    return CONST.hbar / (period * mass)


def eikonal_phase_amplitude(alpha: float, intensity: float, pulse_duration: float) -> float:
    """Peak eikonal phase phi0 = alpha I tau / (hbar c eps0) of the light grating."""
    if intensity < 0 or pulse_duration < 0:
        raise ValueError("intensity and pulse duration must be non-negative")
    return alpha * intensity * pulse_duration / (CONST.hbar * CONST.c * CONST.eps0)


@dataclass(frozen=True)
class DerivedSphere:
    """All closed-form single-sphere quantities for one parameter set."""
    spec: SphereSpec
    mass: float
    alpha: float
    sigma_x: float      # ground-state position spread at the trap frequency used
    sigma_v: float      # ground-state velocity spread
    talbot_time: float  # for the grating period used

    @classmethod
    def from_specs(cls, sphere: SphereSpec, trap: TrapSpec, grating: GratingSpec) -> "DerivedSphere":
        mass = sphere_mass(sphere)
        sig_x = ground_state_spread(mass, trap.omega)
        return cls(
            spec=sphere,
            mass=mass,
            alpha=polarizability(sphere),
            sigma_x=sig_x,
            sigma_v=trap.omega * sig_x,
            talbot_time=talbot_time(mass, grating.period),
        )


MAX_COEFF_INDEX = 512


def talbot_lau_coefficients(phi0: float, tail_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Fourier coefficients b_m of the grating transmission exp(i phi0 sin^2(pi x/d)).

    exp(i phi0 sin^2(pi x / d)) = sum_m b_m exp(2 pi i m x / d) with
    b_m = (-i)^m exp(i phi0/2) J_m(phi0/2).

    Returns (m, b_m) for |m| <= J_max, where J_max is the smallest index with
    sum_{|m| > J_max} |b_m|^2 < tail_tol (using sum_m J_m^2 = 1).  Bessel
    values come from scipy's J_m (relative accuracy well below 1e-12 at these
    small orders/arguments); the tests cross-check them against an independent
    power-series summation.
    """
    if phi0 < 0:
        raise ValueError("phi0 must be non-negative")
    if not 0.0 < tail_tol < 1.0:
        raise ValueError("tail_tol must be in (0, 1)")
    z = phi0 / 2.0
    total = jv(0, z) ** 2
    j_max = 0
    while 1.0 - total >= tail_tol:
        j_max += 1
        if j_max > MAX_COEFF_INDEX:
            raise RuntimeError(f"coefficient tail did not reach {tail_tol} within index {MAX_COEFF_INDEX}")
        total += 2.0 * jv(j_max, z) ** 2
    m = np.arange(-j_max, j_max + 1)
    b = (-1j) ** m * np.exp(0.5j * phi0) * jv(m, z)
    return m, b


def rayleigh_scattering_rate(spec: SphereSpec, intensity: float, wavelength: float) -> float:
    """Photon scattering rate [1/s] of the sphere in light of the given peak intensity.

    Rayleigh cross-section sigma = (8 pi / 3) k^4 (alpha / 4 pi eps0)^2 with
    k = 2 pi / wavelength; rate = I sigma / (photon energy).
    """
    if intensity < 0 or wavelength <= 0:
        raise ValueError("intensity must be non-negative and wavelength positive")
    k = 2.0 * math.pi / wavelength
    alpha_vol = polarizability(spec) / (4.0 * math.pi * CONST.eps0)
    sigma_sc = (8.0 * math.pi / 3.0) * k**4 * alpha_vol**2
    photon_energy = CONST.hbar * 2.0 * math.pi * CONST.c / wavelength
    return intensity * sigma_sc / photon_energy


def scattering_decoherence_time(spec: SphereSpec, intensity: float, wavelength: float) -> float:
    """Time for one scattering event, 1/rate [s]; inf at zero intensity."""
    rate = rayleigh_scattering_rate(spec, intensity, wavelength)
    return math.inf if rate == 0.0 else 1.0 / rate


def table1_sphere() -> SphereSpec:
    """The baseline silica sphere (R = 6.5 nm, rho = 2300 kg/m^3, eps = 2)."""
    return SphereSpec(radius=6.5e-9, density=2300.0, dielectric=2.0)


def table1_trap(temperature: float = 0.0) -> TrapSpec:
    return TrapSpec(omega=2.0 * math.pi * 100.0, temperature=temperature)


def table1_grating() -> GratingSpec:
    return GratingSpec(period=0.25e-6, intensity=55e3, pulse_duration=1e-6)
