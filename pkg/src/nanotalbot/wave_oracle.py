"""Direct wavefunction propagation on a grid: the brute-force validation path.

Free flight of a free particle admits an exact one-step spectral propagator,
so there is no time-discretization error.  A constant transverse acceleration
is handled exactly as well: propagate at a = 0, displace the result by a t^2/2,
then attach the boost phase exp(i M a t x / hbar) and the accumulated global
phase exp(-i M a^2 t^3 / 6 hbar).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CONST
from .core import (
    DerivedSphere,
    GratingSpec,
    SphereSpec,
    TrapSpec,
    eikonal_phase_amplitude,
)
from .fringes import FringePattern
from .phase_space import fringe_period

BOUNDARY_MASS_TOL = 1e-8


@dataclass
class WaveGrid:
    """Complex amplitudes on a uniform spatial grid (length a power of two)."""
    x: np.ndarray
    psi: np.ndarray

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.dx)

    def density(self) -> np.ndarray:
        return np.abs(self.psi) ** 2

    def boundary_fraction(self) -> float:
        """Peak-relative amplitude magnitude in the outer 1% of the grid."""
        edge = max(1, self.x.size // 100)
        amp = np.abs(self.psi)
        return float(max(amp[:edge].max(), amp[-edge:].max()) / amp.max())


def make_grid(half_width: float, n: int, center: float = 0.0) -> np.ndarray:
    if n & (n - 1):
        raise ValueError("grid size must be a power of two")
    # endpoint excluded so the grid is exactly FFT-periodic
    return center - half_width + 2.0 * half_width * np.arange(n) / n


def init_gaussian_packet(sigma_x: float, mean_x: float, mean_p: float,
                         x: np.ndarray) -> WaveGrid:
    """Normalized minimum-uncertainty packet exp(-(x-x0)^2/4 sigma^2 + i p0 x/hbar)."""
    dx = x[1] - x[0]
    if sigma_x < 4.0 * dx:
        raise ValueError("packet width not resolvable on this grid (need sigma_x >= 4 dx)")
    psi = np.exp(-((x - mean_x) ** 2) / (4.0 * sigma_x**2) + 1j * mean_p * x / CONST.hbar)
    psi = psi.astype(complex)
    psi /= math.sqrt(np.sum(np.abs(psi) ** 2) * dx)
    return WaveGrid(x=x, psi=psi)


def free_propagate(grid: WaveGrid, t: float, a: float, mass: float) -> WaveGrid:
    """Exact single-step propagation for time t under constant acceleration a."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return WaveGrid(x=grid.x, psi=grid.psi.copy())
    k = 2.0 * math.pi * np.fft.fftfreq(grid.x.size, grid.dx)
    shift = 0.5 * a * t**2
    psi_k = np.fft.fft(grid.psi)
    psi_k *= np.exp(-1j * CONST.hbar * k**2 * t / (2.0 * mass) - 1j * k * shift)
    psi = np.fft.ifft(psi_k)
    psi *= np.exp(1j * mass * a * t * grid.x / CONST.hbar
                  - 1j * mass * a**2 * t**3 / (6.0 * CONST.hbar))
    out = WaveGrid(x=grid.x, psi=psi)
    if out.boundary_fraction() > BOUNDARY_MASS_TOL:
        raise RuntimeError("wavefunction reached the grid boundary (wrap-around)")
    return out


def apply_phase_grating(grid: WaveGrid, phi0: float, period: float) -> WaveGrid:
    """Pointwise eikonal phase imprint exp(i phi0 sin^2(pi x/d))."""
    if period < 8.0 * grid.dx:
        raise ValueError("grating undersampled (need >= 8 samples per period)")
    psi = grid.psi * np.exp(1j * phi0 * np.sin(math.pi * grid.x / period) ** 2)
    return WaveGrid(x=grid.x, psi=psi)


def oracle_grid_spec(sphere: SphereSpec, trap: TrapSpec, grating: GratingSpec,
                     t0: float, t1: float, a: float,
                     mean_x: float = 0.0, mean_p: float = 0.0) -> tuple[float, float]:
    """(center, half_width) for a wrap-safe oracle grid."""
    derived = DerivedSphere.from_specs(sphere, trap, grating)
    mass = derived.mass
    sigma_v = derived.sigma_v
    t = t0 + t1
    sigma_env = math.sqrt(derived.sigma_x**2 + (sigma_v * t) ** 2)
    phi0 = eikonal_phase_amplitude(derived.alpha, grating.intensity, grating.pulse_duration)
    kick_span = (0.5 * phi0 + 10.0) * CONST.h / grating.period * t1 / mass
    final_mean = mean_x + mean_p * t / mass + 0.5 * a * t**2
    half = max(8.0 * sigma_env, 64.0 * grating.period) + kick_span + abs(final_mean) + abs(mean_x)
    center = 0.0
    return center, half


def oracle_fringe(sphere: SphereSpec, trap: TrapSpec, grating: GratingSpec,
                  t0: float, t1: float, a: float,
                  n: int = 2**15,
                  mean_x: float = 0.0, mean_p: float = 0.0) -> FringePattern:
    """End-to-end pure-state oracle: init -> fall t0 -> grating -> fall t1 -> |psi|^2.

    Ground-state (pure) path only; thermal states go through
    oracle_thermal_fringe as an incoherent mixture.
    """
    derived = DerivedSphere.from_specs(sphere, trap, grating)
    center, half = oracle_grid_spec(sphere, trap, grating, t0, t1, a, mean_x, mean_p)
    x = make_grid(half, n, center)
    wave = init_gaussian_packet(derived.sigma_x, mean_x, mean_p, x)
    wave = free_propagate(wave, t0, a, derived.mass)
    phi0 = eikonal_phase_amplitude(derived.alpha, grating.intensity, grating.pulse_duration)
    wave = apply_phase_grating(wave, phi0, grating.period)
    wave = free_propagate(wave, t1, a, derived.mass)
    return FringePattern(
        x=wave.x,
        density=wave.density(),
        fringe_period=fringe_period(grating.period, t0, t1),
        metadata={
            "t0_s": t0, "t1_s": t1, "a_m_s2": a, "phi0": phi0,
            "mass_kg": derived.mass, "period_m": grating.period,
            "mean_x_m": mean_x, "mean_p_kg_m_s": mean_p,
            "source": "oracle",
        },
    )


def oracle_thermal_fringe(sphere: SphereSpec, trap: TrapSpec, grating: GratingSpec,
                          t0: float, t1: float, a: float,
                          n_draws: int = 2000, seed: int = 0,
                          n: int = 2**15) -> FringePattern:
    """Thermal-state oracle: average pure-state densities over coherent displacements.

    A harmonic thermal state is a Gaussian mixture of displaced ground states
    with displacement variances 2 nbar sigma_x^2 and 2 nbar sigma_p^2, so each
    draw is exact and the only error is Monte Carlo.
    """
    from .core import mean_occupation
    derived = DerivedSphere.from_specs(sphere, trap, grating)
    nbar = mean_occupation(trap.omega, trap.temperature)
    sigma_p = CONST.hbar / (2.0 * derived.sigma_x)
    rng = np.random.default_rng(seed)
    dx = rng.normal(0.0, math.sqrt(2.0 * nbar) * derived.sigma_x, n_draws) if nbar else np.zeros(n_draws)
    dp = rng.normal(0.0, math.sqrt(2.0 * nbar) * sigma_p, n_draws) if nbar else np.zeros(n_draws)
    pure_trap = TrapSpec(omega=trap.omega, temperature=0.0)
    # common grid wide enough for the displaced draws
    center, half = oracle_grid_spec(sphere, pure_trap, grating, t0, t1, a)
    spread = 4.0 * math.sqrt(2.0 * nbar + 1.0) * (derived.sigma_x + sigma_p * (t0 + t1) / derived.mass)
    x = make_grid(half + spread, n, center)
    acc = np.zeros(n, dtype=float)
    phi0 = eikonal_phase_amplitude(derived.alpha, grating.intensity, grating.pulse_duration)
    for x0, p0 in zip(dx, dp):
        wave = init_gaussian_packet(derived.sigma_x, x0, p0, x)
        wave = free_propagate(wave, t0, a, derived.mass)
        wave = apply_phase_grating(wave, phi0, grating.period)
        wave = free_propagate(wave, t1, a, derived.mass)
        acc += wave.density()
    acc /= n_draws
    return FringePattern(
        x=x, density=acc,
        fringe_period=fringe_period(grating.period, t0, t1),
        metadata={"t0_s": t0, "t1_s": t1, "a_m_s2": a, "n_draws": n_draws,
                  "seed": seed, "source": "oracle-thermal"},
    )
