"""Transverse accelerations sensed by the interferometer.

Casimir-Polder attraction to the coated wall, Newtonian plus Yukawa-type
gravity from the segmented source-mass wall, and an order-of-magnitude patch
potential estimate.

Geometry convention: the sphere sits at the origin; the wall surface is the
plane x = s (separation s), with material extending toward +x.  Sections
alternate along y with width w_y; the fall axis is z.  All accelerations are
the x-components, positive toward the wall.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CONST, DENSITY_GOLD, DENSITY_SILICON
from .core import DerivedSphere


@dataclass(frozen=True)
class YukawaParams:
    """Yukawa correction to gravity: strength alpha (relative, any sign), range lam [m]."""
    alpha: float
    lam: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("Yukawa range must be positive")


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangular volume [m]."""
    x0: float
    x1: float
    y0: float
    y1: float
    z0: float
    z1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1 and self.z0 < self.z1):
            raise ValueError("box must have positive extent on every axis")


@dataclass(frozen=True)
class WallGeometry:
    """Source-mass wall: uniform coating plus alternating-density sections.

    separation:      sphere-to-wall distance s [m]
    coating_density / coating_thickness: uniform layer facing the sphere
    section_width:   width w_y of each section along y (period of the pattern is 2 w_y)
    density_a / density_b: alternating section densities (gold / silicon by default)
    section_depth:   extent of the sections along x
    section_height:  extent along the fall axis z
    n_pairs:         number of A/B section pairs, centered on y = 0
    """
    separation: float
    section_width: float = 40e-6
    coating_density: float = DENSITY_GOLD
    coating_thickness: float = 200e-9
    density_a: float = DENSITY_GOLD
    density_b: float = DENSITY_SILICON
    section_depth: float = 100e-6
    section_height: float = 1.5
    n_pairs: int = 13

    def __post_init__(self):
        if self.separation <= 0:
            raise ValueError("separation must be positive")
        for name in ("section_width", "coating_thickness", "section_depth", "section_height"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.n_pairs < 1:
            raise ValueError("need at least one section pair")

    def sections(self) -> list[tuple[float, float, float]]:
        """(y_min, y_max, density) for every section, alternating A/B along y.

        Section boundaries sit at odd multiples of w_y/2, so y = 0 is the
        center of an A section and y = w_y the center of the adjacent B
        section.
        """
        w = self.section_width
        n = 2 * self.n_pairs
        out = []
        for i in range(-n, n):
            ymin = (i - 0.5) * w
            rho = self.density_a if i % 2 == 0 else self.density_b
            out.append((ymin, ymin + w, rho))
        return out

    def section_x_range(self) -> tuple[float, float]:
        x0 = self.separation + self.coating_thickness
        return x0, x0 + self.section_depth


@dataclass(frozen=True)
class PatchModel:
    """Patch potential amplitude V_p [V] varying on spatial scale Lambda [m]."""
    amplitude: float
    scale: float

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("patch amplitude must be non-negative")
        if self.scale <= 0:
            raise ValueError("patch scale must be positive")


def casimir_polder_accel(sphere: DerivedSphere, separation: float) -> float:
    """Casimir-Polder acceleration 3 hbar c alpha / (8 pi^2 eps0 s^5 M), toward the wall [m/s^2]."""
    if separation <= 0:
        raise ValueError("separation must be positive")
    force = 3.0 * CONST.hbar * CONST.c * sphere.alpha / (8.0 * math.pi**2 * CONST.eps0 * separation**5)
    return force / sphere.mass


def yukawa_accel_slab_inf(rho: float, yk: YukawaParams, separation: float, thickness: float) -> float:
    """Exact Yukawa acceleration of an infinite slab: 2 pi G rho alpha lam e^(-s/lam)(1 - e^(-t/lam)).

    Serves as the closed-form oracle for the volume quadrature.
    """
    if separation <= 0 or thickness <= 0:
        raise ValueError("separation and thickness must be positive")
    return (2.0 * math.pi * CONST.G_N * rho * yk.alpha * yk.lam
            * math.exp(-separation / yk.lam) * -math.expm1(-thickness / yk.lam))


# ---------------------------------------------------------------------------
# adaptive tensor-product Gauss-Legendre quadrature over boxes

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def _gl3d(f, box: Box, order: int) -> float:
    t, w = _gl_nodes(order)
    hx, hy, hz = (box.x1 - box.x0) / 2, (box.y1 - box.y0) / 2, (box.z1 - box.z0) / 2
    cx, cy, cz = (box.x1 + box.x0) / 2, (box.y1 + box.y0) / 2, (box.z1 + box.z0) / 2
    x = cx + hx * t
    y = cy + hy * t
    z = cz + hz * t
    vals = f(x[:, None, None], y[None, :, None], z[None, None, :])
    return float(hx * hy * hz * np.einsum("i,j,k,ijk->", w, w, w, vals))


def _adaptive_box_quad(f, box: Box, rel_tol: float, abs_floor: float, depth: int = 0) -> float:
    """Integrate f over the box; refine by GL order doubling, bisect on failure."""
    coarse = _gl3d(f, box, 16)
    fine = _gl3d(f, box, 24)
    err = abs(fine - coarse)
    if err <= rel_tol * abs(fine) + abs_floor or depth >= 12:
        if depth >= 12 and err > 10.0 * (rel_tol * abs(fine) + abs_floor):
            raise RuntimeError("box quadrature did not converge within the refinement budget")
        return fine
    # bisect the longest edge
    spans = (box.x1 - box.x0, box.y1 - box.y0, box.z1 - box.z0)
    axis = int(np.argmax(spans))
    lo = [box.x0, box.y0, box.z0]
    hi = [box.x1, box.y1, box.z1]
    mid = 0.5 * (lo[axis] + hi[axis])
    a_hi, b_lo = list(hi), list(lo)
    a_hi[axis] = mid
    b_lo[axis] = mid
    box_a = Box(lo[0], a_hi[0], lo[1], a_hi[1], lo[2], a_hi[2])
    box_b = Box(b_lo[0], hi[0], b_lo[1], hi[1], b_lo[2], hi[2])
    return (_adaptive_box_quad(f, box_a, rel_tol, abs_floor / 2, depth + 1)
            + _adaptive_box_quad(f, box_b, rel_tol, abs_floor / 2, depth + 1))


def _clip_box_for_range(box: Box, pos: tuple[float, float, float], lam: float,
                        n_decay: float = 45.0) -> Box | None:
    """Shrink the box to the region within ~n_decay Yukawa lengths of the sphere."""
    px, py, pz = pos
    reach = n_decay * lam
    x0, x1 = max(box.x0, px - reach), min(box.x1, px + reach)
    y0, y1 = max(box.y0, py - reach), min(box.y1, py + reach)
    z0, z1 = max(box.z0, pz - reach), min(box.z1, pz + reach)
    if x0 >= x1 or y0 >= y1 or z0 >= z1:
        return None
    return Box(x0, x1, y0, y1, z0, z1)


def yukawa_accel_box(box: Box, rho: float, yk: YukawaParams,
                     position: tuple[float, float, float] = (0.0, 0.0, 0.0),
                     rel_tol: float = 1e-4) -> float:
    """x-acceleration of the Yukawa term from a homogeneous box, by adaptive quadrature.

    Kernel: G rho alpha (1 + r/lam) e^(-r/lam) (dx/r) / r^2 integrated over the
    volume, with dx the x-offset of the source element from the sphere.
    """
    if yk.alpha == 0.0:
        return 0.0
    px, py, pz = position
    if box.x0 <= px <= box.x1 and box.y0 <= py <= box.y1 and box.z0 <= pz <= box.z1:
        raise ValueError("sphere position must lie outside the source box")
    lam = yk.lam
    clipped = _clip_box_for_range(box, position, lam)
    if clipped is None:
        return 0.0

    def integrand(x, y, z):
        dx, dy, dz = x - px, y - py, z - pz
        r = np.sqrt(dx * dx + dy * dy + dz * dz)
        return (1.0 + r / lam) * np.exp(-r / lam) * dx / r**3

    scale = 2.0 * math.pi * CONST.G_N * abs(rho * yk.alpha) * lam * math.exp(-max(box.x0 - px, 0.0) / lam)
    abs_floor = max(scale, 1e-300) * 1e-10 / (CONST.G_N * max(abs(rho * yk.alpha), 1e-300))
    val = _adaptive_box_quad(integrand, clipped, rel_tol, abs_floor)
    return CONST.G_N * rho * yk.alpha * val


def newtonian_accel_box(box: Box, rho: float,
                        position: tuple[float, float, float] = (0.0, 0.0, 0.0),
                        rel_tol: float = 1e-6) -> float:
    """x-acceleration of Newtonian gravity from a homogeneous box, by adaptive quadrature."""
    px, py, pz = position
    if box.x0 <= px <= box.x1 and box.y0 <= py <= box.y1 and box.z0 <= pz <= box.z1:
        raise ValueError("sphere position must lie outside the source box")

    def integrand(x, y, z):
        dx, dy, dz = x - px, y - py, z - pz
        r2 = dx * dx + dy * dy + dz * dz
        return dx / (r2 * np.sqrt(r2))

    typical = abs(integrand((box.x0 + box.x1) / 2, (box.y0 + box.y1) / 2, (box.z0 + box.z1) / 2))
    vol = (box.x1 - box.x0) * (box.y1 - box.y0) * (box.z1 - box.z0)
    val = _adaptive_box_quad(integrand, box, rel_tol, abs_floor=typical * vol * 1e-12)
    return CONST.G_N * rho * val


def _wall_boxes(wall: WallGeometry, yk: YukawaParams, y_pos: float) -> list[tuple[Box, float]]:
    """Section boxes (with densities) within the Yukawa cutoff of the lateral position."""
    x0, x1 = wall.section_x_range()
    zh = wall.section_height / 2.0
    cutoff = 6.0 * yk.lam + 3.0 * wall.section_width
    out = []
    for ymin, ymax, rho in wall.sections():
        if ymax < y_pos - cutoff or ymin > y_pos + cutoff:
            continue
        out.append((Box(x0, x1, ymin, ymax, -zh, zh), rho))
    return out


def wall_accel(wall: WallGeometry, yk: YukawaParams, y_pos: float,
               include_coating: bool = True, rel_tol: float = 1e-4) -> float:
    """Yukawa x-acceleration from the wall for a sphere at lateral position y_pos."""
    total = 0.0
    if include_coating:
        total += yukawa_accel_slab_inf(wall.coating_density, yk, wall.separation,
                                       wall.coating_thickness)
    for box, rho in _wall_boxes(wall, yk, y_pos):
        total += yukawa_accel_box(box, rho, yk, position=(0.0, y_pos, 0.0), rel_tol=rel_tol)
    return total


def differential_accel(wall: WallGeometry, yk: YukawaParams, y0: float = 0.0,
                       rel_tol: float = 1e-4) -> float:
    """a_x(sphere over an A section at y0) - a_x(over the adjacent B section at y0 + w_y).

    The uniform coating is common to both positions and cancels exactly; it is
    still computed on both sides as a consistency guard.
    """
    a_side = wall_accel(wall, yk, y0, rel_tol=rel_tol)
    b_side = wall_accel(wall, yk, y0 + wall.section_width, rel_tol=rel_tol)
    return a_side - b_side


def scan_y(wall: WallGeometry, yk: YukawaParams, y_grid: np.ndarray,
           rel_tol: float = 1e-4) -> np.ndarray:
    """Yukawa acceleration profile a_x(y) along the wall (2 w_y periodic)."""
    return np.array([wall_accel(wall, yk, float(y), include_coating=False, rel_tol=rel_tol)
                     for y in y_grid])


def patch_accel_estimate(patch: PatchModel, sphere: DerivedSphere, separation: float) -> float:
    """Order-of-magnitude acceleration from patch potentials on the coating.

    Model: a periodic patch array of scale Lambda produces an evanescent field
    E(s) = (pi V_p / Lambda) e^(-pi s / Lambda); the induced dipole feels
    F = alpha E |dE/ds|.  This is a documented estimate, not an exact result.
    """
    if separation <= 0:
        raise ValueError("separation must be positive")
    field = math.pi * patch.amplitude / patch.scale * math.exp(-math.pi * separation / patch.scale)
    grad = field * math.pi / patch.scale
    return sphere.alpha * field * grad / sphere.mass
