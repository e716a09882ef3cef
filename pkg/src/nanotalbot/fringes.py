"""Fringe patterns, phase/contrast extraction, and single-shot sampling."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

CONTRAST_FLOOR = 0.01


@dataclass
class FringePattern:
    """Sampled transverse probability density of the sphere at the detector.

    x is a uniform grid [m], density the probability density [1/m],
    fringe_period the nominal period of the interference fringes [m]
    (geometric magnification d*(t0+t1)/t0 of the grating period).
    """
    x: np.ndarray
    density: np.ndarray
    fringe_period: float
    metadata: dict = field(default_factory=dict)

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    def norm(self) -> float:
        return float(np.trapezoid(self.density, self.x))

    def centroid(self) -> float:
        return float(np.trapezoid(self.x * self.density, self.x) / self.norm())

    def envelope_sigma(self) -> float:
        mu = self.centroid()
        var = np.trapezoid((self.x - mu) ** 2 * self.density, self.x) / self.norm()
        return float(np.sqrt(var))


@dataclass(frozen=True)
class PhaseReadout:
    """Result of fitting the known-period fringe model to a pattern.

    phase:    fringe phase in (-pi, pi]; a fringe displacement of +dx0 along x
              advances the phase by 2 pi dx0 / period, so an acceleration a > 0
              (fringes move by +a*t0*t1) shifts it by +pi*t0*t1*a/d.
    contrast: modulation depth chi of the fitted model, in [0, 1].
    residual: rms fit residual relative to the peak density.
    centroid: envelope centroid [m].
    """
    phase: float
    contrast: float
    residual: float
    centroid: float


def _model(x, amp, mu, width, p, q, k):
    env = amp * np.exp(-((x - mu) ** 2) / (2.0 * width**2))
    return env * (1.0 + p * np.cos(k * x) + q * np.sin(k * x))


def extract_phase(pattern: FringePattern, period: float | None = None) -> PhaseReadout:
    """Fit Gaussian-envelope * (1 + chi cos(2 pi x/period + Phi)) to the pattern.

    The periodic part is fit linearly in quadratures (p, q) to avoid phase
    wrapping during optimization; chi = hypot(p, q), Phi = atan2(q, p).  The
    fit is deterministic: seeds come from moments of the pattern and from the
    Fourier quadratures at the known period.
    """
    if period is None:
        period = pattern.fringe_period
    x, w = pattern.x, pattern.density
    if x.size < 16:
        raise ValueError("pattern too coarse to fit")
    if pattern.dx > period / 8.0:
        raise ValueError("need at least 8 samples per fringe period")
    k = 2.0 * np.pi / period

    norm = np.trapezoid(w, x)
    mu0 = float(np.trapezoid(x * w, x) / norm)
    sig0 = float(np.sqrt(np.trapezoid((x - mu0) ** 2 * w, x) / norm))
    amp0 = float(np.max(w))
    # Fourier quadratures at the known frequency seed (p, q).
    c = np.trapezoid(w * np.exp(-1j * k * x), x) / norm
    p0, q0 = float(2.0 * c.real), float(-2.0 * c.imag)

    def f(xv, amp, mu, width, p, q):
        return _model(xv, amp, mu, width, p, q, k)

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, _ = curve_fit(
                f, x, w,
                p0=[amp0, mu0, sig0, np.clip(p0, -1, 1), np.clip(q0, -1, 1)],
                maxfev=20000,
            )
    except RuntimeError as exc:
        raise RuntimeError(f"fringe fit did not converge: {exc}") from exc
    amp, mu, width, p, q = popt
    chi = float(np.hypot(p, q))
    # fitted lattice is cos(k x - phi_fit); a pattern displaced by +dx0 reads
    # phi_fit + k*dx0, which makes the phase slope versus acceleration come
    # out at +pi*t0*t1/d for the interferometer pipeline
    phi_fit = float(np.arctan2(q, p))
    resid = float(np.sqrt(np.mean((w - f(x, *popt)) ** 2)) / np.max(w))
    phase = float(np.remainder(phi_fit + np.pi, 2.0 * np.pi) - np.pi)
    if phase == -np.pi:
        phase = np.pi
    return PhaseReadout(phase=phase, contrast=min(chi, 1.0), residual=resid, centroid=float(mu))


def sample_positions(pattern: FringePattern, n: int, seed: int) -> np.ndarray:
    """Draw n detector positions from the pattern via inverse-CDF interpolation.

    Deterministic given seed (numpy default_rng stream).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    w = np.clip(pattern.density, 0.0, None)
    cdf = np.concatenate([[0.0], np.cumsum((w[1:] + w[:-1]) * 0.5 * pattern.dx)])
    total = cdf[-1]
    if not np.isfinite(total) or total <= 0:
        raise ValueError("pattern is not normalizable")
    cdf /= total
    # de-duplicate flat CDF stretches for interpolation
    keep = np.concatenate([[True], np.diff(cdf) > 0])
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    return np.interp(u, cdf[keep], pattern.x[keep])
