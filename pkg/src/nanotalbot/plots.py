"""Static SVG renderings of already-computed CSV data (no hidden computation)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "nanotalbot"
matplotlib.rcParams["svg.fonttype"] = "none"

_UM = 1e6


def _save(fig, path: Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_fringes(patterns: list[tuple[str, "object"]], path: Path) -> None:
    """Density lineouts; first curve solid, second dashed, further ones dotted."""
    fig, ax = plt.subplots(figsize=(7, 4))
    styles = ["-", "--", ":", "-."]
    for i, (label, pat) in enumerate(patterns):
        ax.plot(pat.x * _UM, pat.density / _UM, styles[i % len(styles)], label=label)
    ax.set_xlabel("x [um]")
    ax.set_ylabel("probability density [1/um]")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def plot_exclusion(curves: list[tuple[str, "object"]], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for label, curve in curves:
        ax.loglog(curve.lam * _UM, curve.alpha_min, label=label)
    ax.set_xlabel("lambda [um]")
    ax.set_ylabel("minimum detectable |alpha|")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def plot_beta_table(mass_scales, occupations, beta, path: Path) -> None:
    """beta vs mass (units of the baseline mass M0), one curve per occupation."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for i, nbar in enumerate(occupations):
        ax.loglog(mass_scales, beta[i], label=f"nbar = {nbar:g}")
    ax.axhline(1.0, color="k", lw=0.8, alpha=0.5)
    ax.set_xlabel("mass [M0]")
    ax.set_ylabel("improvement factor beta")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def plot_yscan(y, accel, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(y * _UM, accel)
    ax.set_xlabel("y position along wall [um]")
    ax.set_ylabel("differential acceleration a_x [m/s^2]")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


