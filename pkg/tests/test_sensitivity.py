import math

import numpy as np
import pytest

from nanotalbot import (
    CONST,
    ShotBudget,
    WallGeometry,
    ballistic_accel_resolution,
    ballistic_sigma_v,
    error_budget,
    exclusion_curve,
    extract_phase,
    histogram_pattern,
    improvement_factor,
    min_detectable_accel,
    phase_resolution,
    sample_positions,
    simulate_pipeline,
    sphere_mass,
    talbot_time,
    thermal_spreads,
)
from nanotalbot.core import DerivedSphere


def test_phase_resolution_formula():
    assert phase_resolution(ShotBudget(100000, 1.0)) == pytest.approx(
        math.pi / math.sqrt(1e5), rel=1e-12)
    # finite contrast degrades the resolution as 1/chi
    assert phase_resolution(ShotBudget(100, 0.5)) == pytest.approx(
        2 * phase_resolution(ShotBudget(100, 1.0)), rel=1e-12)
    with pytest.raises(ValueError):
        ShotBudget(0)
    with pytest.raises(ValueError):
        ShotBudget(10, contrast=1.5)


def test_min_detectable_accel_anchor(sphere, grating):
    # dphi = pi/300 at the baseline flight times lands at the 1e-8 m/s^2 scale
    tt = talbot_time(sphere_mass(sphere), grating.period)
    a_min = min_detectable_accel(math.pi / 300.0, tt, tt, grating.period)
    assert a_min == pytest.approx(1.3e-8, rel=0.5)


def test_ballistic_resolution(sphere, trap):
    mass = sphere_mass(sphere)
    sv = ballistic_sigma_v(mass, trap.omega)
    _, sp = thermal_spreads(mass, trap.omega, 0.0)
    assert sv == pytest.approx(sp / mass, rel=1e-12)
    assert ballistic_accel_resolution(sv, 0.5, 10000) == pytest.approx(
        2 * sv / (0.5 * 100), rel=1e-12)


def test_improvement_factor_relates_methods(sphere, trap, grating):
    # beta = chi sigma_v t / d is twice the ratio of ballistic to
    # interferometric a_min at equal N and t0 = t1 = t/2
    mass = sphere_mass(sphere)
    t = 2 * talbot_time(mass, grating.period)
    beta = improvement_factor(mass, 0.0, t, grating, trap,
                              density=sphere.density, dielectric=sphere.dielectric)
    pat = simulate_pipeline(sphere, trap, grating, t / 2, t / 2, 0.0)
    chi = extract_phase(pat).contrast
    n = 10000
    a_ball = ballistic_accel_resolution(ballistic_sigma_v(mass, trap.omega), t, n)
    a_int = min_detectable_accel(phase_resolution(ShotBudget(n, chi)), t / 2, t / 2,
                                 grating.period)
    assert beta == pytest.approx(2 * a_ball / a_int, rel=1e-6)
    assert beta > 1.0


def test_improvement_factor_zero_when_contrast_lost(sphere, trap, grating):
    # far from the Talbot condition the hot fringe washes out and beta -> 0
    from nanotalbot import temperature_for_occupation
    mass = sphere_mass(sphere)
    temp = temperature_for_occupation(trap.omega, 1000.0)
    beta = improvement_factor(100 * mass, temp, 0.05, grating, trap,
                              density=sphere.density, dielectric=sphere.dielectric)
    assert beta == 0.0


def test_exclusion_curve_scales_inverse_signal(sphere, grating):
    wall = WallGeometry(separation=10e-6)
    tt = talbot_time(sphere_mass(sphere), grating.period)
    lam = np.array([5e-6])
    c1 = exclusion_curve(wall, math.pi / 300.0, tt, tt, grating.period, lam)
    c2 = exclusion_curve(wall, 2 * math.pi / 300.0, tt, tt, grating.period, lam)
    assert c2.alpha_min[0] == pytest.approx(2 * c1.alpha_min[0], rel=1e-9)
    assert c1.alpha_min[0] > 0


def test_error_budget_entries(sphere, trap, grating):
    derived = DerivedSphere.from_specs(sphere, trap, grating)
    wall = WallGeometry(separation=10e-6)
    entries = error_budget(derived, grating, wall, a_min=1.3e-8, signal_accel=4e-12)
    names = {e.name for e in entries}
    assert names == {"alignment", "vibration", "grating_decoherence", "patch_potentials"}
    by_name = {e.name: e for e in entries}
    assert by_name["alignment"].value == pytest.approx(CONST.g * 0.5e-6, rel=1e-9)
    assert by_name["vibration"].threshold == pytest.approx(1e-9)
    assert by_name["grating_decoherence"].verdict == "PASS"
    assert by_name["patch_potentials"].verdict == "DOMINANT-SYSTEMATIC"
    for e in entries:
        assert e.unit and e.note and e.verdict


def test_histogram_pattern_recovers_phase(sphere, trap, grating):
    mass = sphere_mass(sphere)
    tt = talbot_time(mass, grating.period)
    pat = simulate_pipeline(sphere, trap, grating, tt, tt, 0.0)
    xs = sample_positions(pat, 200000, seed=3)
    hist = histogram_pattern(pat, xs)
    r_hist, r_true = extract_phase(hist), extract_phase(pat)
    dphi = abs((r_hist.phase - r_true.phase + math.pi) % (2 * math.pi) - math.pi)
    assert dphi < 0.05
    assert r_hist.contrast == pytest.approx(r_true.contrast, abs=0.1)


def test_sampling_is_seed_deterministic(sphere, trap, grating):
    mass = sphere_mass(sphere)
    tt = talbot_time(mass, grating.period)
    pat = simulate_pipeline(sphere, trap, grating, tt, tt, 0.0)
    a = sample_positions(pat, 1000, seed=11)
    b = sample_positions(pat, 1000, seed=11)
    c = sample_positions(pat, 1000, seed=12)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
