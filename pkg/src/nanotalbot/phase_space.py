"""Gaussian Wigner-function pipeline: release, free fall, grating kick, detection.

The center-of-mass state is Gaussian throughout free flight, so it is carried
exactly as (means, covariance).  The light grating multiplies the wavefunction
by exp(i phi0 sin^2(pi x/d)); in the Wigner picture this splits the state into
a finite sum of terms, each the original Gaussian displaced in momentum by a
half-integer number of kick quanta h/d and modulated by a position harmonic
exp(2 pi i m x / d).  The detector density is then the momentum integral of
each term after the second free flight, which is a closed-form Gaussian
integral; the terms are summed and the (numerically tiny) imaginary residue
discarded.
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
    talbot_lau_coefficients,
    thermal_spreads,
)
from .fringes import FringePattern

TERM_WEIGHT_CUTOFF = 1e-14


@dataclass(frozen=True)
class GaussianWignerState:
    """Gaussian Wigner distribution: means and covariance of (x, p)."""
    mean_x: float
    mean_p: float
    var_x: float
    var_p: float
    cov_xp: float = 0.0

    def __post_init__(self):
        if self.var_x <= 0 or self.var_p <= 0:
            raise ValueError("variances must be positive")
        det = self.var_x * self.var_p - self.cov_xp**2
        if det < (CONST.hbar / 2.0) ** 2 * (1.0 - 1e-9):
            raise ValueError("state violates the uncertainty bound")

    @property
    def det(self) -> float:
        return self.var_x * self.var_p - self.cov_xp**2


@dataclass(frozen=True)
class PostGratingState:
    """Pre-kick Gaussian plus the finite (j, m) term table of the grating kernel.

    weights[i] = b_j conj(b_{j-m}); each term carries harmonic index m (factor
    exp(2 pi i m x/d)) and a momentum displacement (j - m/2) * kick_quantum.
    """
    state: GaussianWignerState
    j: np.ndarray
    m: np.ndarray
    weights: np.ndarray
    period: float

    @property
    def kick_quantum(self) -> float:
        return 2.0 * math.pi * CONST.hbar / self.period


def initial_state(trap: TrapSpec, mass: float) -> GaussianWignerState:
    """Released trap state: zero-mean thermal (or ground-state) Gaussian."""
    sigma_x, sigma_p = thermal_spreads(mass, trap.omega, trap.temperature)
    return GaussianWignerState(0.0, 0.0, sigma_x**2, sigma_p**2, 0.0)


def propagate_free(state: GaussianWignerState, t: float, a: float, mass: float) -> GaussianWignerState:
    """Shear the Wigner distribution by free flight with constant transverse acceleration.

    Phase-space points follow x -> x + (p/M) t + a t^2/2, p -> p + M a t; the
    map is symplectic, so var_x*var_p - cov^2 is preserved exactly.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    return GaussianWignerState(
        mean_x=state.mean_x + state.mean_p * t / mass + 0.5 * a * t**2,
        mean_p=state.mean_p + mass * a * t,
        var_x=state.var_x + 2.0 * t * state.cov_xp / mass + t**2 * state.var_p / mass**2,
        var_p=state.var_p,
        cov_xp=state.cov_xp + t * state.var_p / mass,
    )


def apply_grating(state: GaussianWignerState, coeff_m: np.ndarray, coeff_b: np.ndarray,
                  period: float) -> PostGratingState:
    """Apply the eikonal grating kernel, keeping (j, m) pairs above the weight cutoff."""
    if coeff_b.size == 0:
        raise ValueError("empty coefficient table")
    # all pairs (j, j'), weight b_j conj(b_j'), harmonic m = j - j'
    jj, jp = np.meshgrid(coeff_m, coeff_m, indexing="ij")
    ww = coeff_b[:, None] * np.conj(coeff_b)[None, :]
    keep = np.abs(ww) > TERM_WEIGHT_CUTOFF
    return PostGratingState(
        state=state,
        j=jj[keep].astype(float),
        m=(jj - jp)[keep].astype(float),
        weights=ww[keep],
        period=period,
    )


def detect_density(post: PostGratingState, t1: float, a: float, mass: float,
                   grid: np.ndarray) -> np.ndarray:
    """Momentum-integrated density at the detector, evaluated on the given grid [1/m].

    Each (j, m) term contributes a Gaussian integral over momentum done in
    closed form; the per-term expressions are validated against the direct
    wavefunction oracle in the test suite.
    """
    if t1 < 0:
        raise ValueError("t1 must be non-negative")
    st = post.state
    vx, vp, c = st.var_x, st.var_p, st.cov_xp
    det = st.det
    kick = post.kick_quantum

    x = np.asarray(grid, dtype=float)
    beta = -t1 / mass
    alpha = x + 0.5 * a * t1**2 - st.mean_x          # vector over x
    a2 = (vp * beta**2 - 2.0 * c * beta + vx) / det  # scalar, > 0
    prefac = 1.0 / (2.0 * math.pi * math.sqrt(det)) * math.sqrt(2.0 * math.pi / a2)

    total = np.zeros(x.size, dtype=complex)
    for j, m, w in zip(post.j, post.m, post.weights):
        kappa = 2.0 * math.pi * m / post.period
        s = (j - 0.5 * m) * kick
        gamma = -mass * a * t1 - s - st.mean_p
        a1 = (vp * alpha * beta - c * (alpha + beta * gamma) + vx * gamma) / det \
            - 1j * kappa * beta
        a0 = 0.5 * (vp * alpha**2 - 2.0 * c * alpha * gamma + vx * gamma**2) / det \
            - 1j * kappa * (x + 0.5 * a * t1**2)
        total += w * np.exp(a1**2 / (2.0 * a2) - a0)
    return prefac * total.real


def envelope_sigma_at_detector(state: GaussianWignerState, post: PostGratingState | None,
                               t1: float, mass: float) -> float:
    """Position spread of the smooth (m = 0) envelope after the final flight."""
    var = state.var_x + 2.0 * t1 * state.cov_xp / mass + t1**2 * state.var_p / mass**2
    sigma = math.sqrt(var)
    if post is not None and post.j.size:
        kick_spread = float(np.max(np.abs(post.j))) * post.kick_quantum * t1 / mass
        sigma = math.sqrt(var) + kick_spread / 8.0  # mild padding for sidebands
    return sigma


def default_grid(post: PostGratingState, t1: float, a: float, mass: float,
                 n: int | None = None, half_widths: float = 8.0,
                 samples_per_period: int = 16) -> np.ndarray:
    """Uniform detector grid centered on the envelope, spanning +-half_widths sigma
    plus the full momentum-kick fan.

    When n is None the point count is chosen as a power of two giving at least
    samples_per_period samples per grating period (min 2^13, capped at 2^19 so
    hot, wide states stay tractable).
    """
    st = post.state
    center = st.mean_x + st.mean_p * t1 / mass + 0.5 * a * t1**2
    sigma = envelope_sigma_at_detector(st, post, t1, mass)
    kick_span = float(np.max(np.abs(post.j))) * post.kick_quantum * t1 / mass if post.j.size else 0.0
    half = half_widths * sigma + kick_span
    if n is None:
        needed = 2.0 * half / (post.period / samples_per_period)
        n = int(min(max(2**13, 2 ** math.ceil(math.log2(max(needed, 1.0)))), 2**19))
    return np.linspace(center - half, center + half, n)


def fringe_period(period: float, t0: float, t1: float) -> float:
    """Geometric fringe period d (t0 + t1) / t0 at the detector (2d for t0 = t1)."""
    return period * (t0 + t1) / t0


def simulate_pipeline(sphere: SphereSpec, trap: TrapSpec, grating: GratingSpec,
                      t0: float, t1: float, a: float,
                      grid: np.ndarray | None = None,
                      n_grid: int | None = None,
                      mean_x: float = 0.0, mean_p: float = 0.0) -> FringePattern:
    """Full pipeline: release -> free fall t0 -> grating -> free fall t1 -> density."""
    derived = DerivedSphere.from_specs(sphere, trap, grating)
    mass = derived.mass
    state0 = initial_state(trap, mass)
    state0 = GaussianWignerState(mean_x, mean_p, state0.var_x, state0.var_p, state0.cov_xp)
    at_grating = propagate_free(state0, t0, a, mass)
    phi0 = eikonal_phase_amplitude(derived.alpha, grating.intensity, grating.pulse_duration)
    cm, cb = talbot_lau_coefficients(phi0)
    post = apply_grating(at_grating, cm, cb, grating.period)
    if grid is None:
        grid = default_grid(post, t1, a, mass, n=n_grid)
    density = detect_density(post, t1, a, mass, grid)
    return FringePattern(
        x=grid,
        density=density,
        fringe_period=fringe_period(grating.period, t0, t1),
        metadata={
            "t0_s": t0, "t1_s": t1, "a_m_s2": a, "phi0": phi0,
            "mass_kg": mass, "period_m": grating.period,
            "mean_x_m": mean_x, "mean_p_kg_m_s": mean_p,
            "temperature_k": trap.temperature,
            "source": "phase-space",
        },
    )


def phase_prediction(a: float, t0: float, t1: float, period: float) -> float:
    """Lowest-order fringe phase pi t0 t1 a / d [rad] (magnitude convention)."""
    return math.pi * t0 * t1 * a / period
