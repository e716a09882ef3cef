"""Acceptance gate: one test (and one printed PASS/FAIL line) per criterion.

Run with `pytest -v tests/test_acceptance.py`; the printed lines summarize the
measured values so a failure is diagnosable from the log alone.
"""
import math
from pathlib import Path

import numpy as np
import pytest

from nanotalbot import (
    CONST,
    Box,
    ShotBudget,
    SphereSpec,
    YukawaParams,
    eikonal_phase_amplitude,
    extract_phase,
    ground_state_spread,
    improvement_factor,
    min_detectable_accel,
    monte_carlo_phase_std,
    phase_prediction,
    phase_resolution,
    polarizability,
    simulate_pipeline,
    sphere_mass,
    talbot_time,
    temperature_for_occupation,
    thermal_spreads,
)
from nanotalbot.cli import main
from nanotalbot.config import load_config, preset_path
from nanotalbot.core import DerivedSphere, scattering_decoherence_time
from nanotalbot.forces import (
    casimir_polder_accel,
    differential_accel,
    yukawa_accel_box,
    yukawa_accel_slab_inf,
)
from nanotalbot.io import sha256_file
from nanotalbot.sensitivity import error_budget
from nanotalbot.wave_oracle import oracle_fringe


def check(num, name, ok, detail=""):
    print(f"criterion {num:>2} {name}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


@pytest.fixture(scope="module")
def base():
    cfg = load_config("table1")
    mass = sphere_mass(cfg.sphere)
    tt = talbot_time(mass, cfg.grating.period)
    return cfg, mass, tt


@pytest.fixture(scope="module")
def base_patterns(base):
    cfg, mass, tt = base
    a_pi = cfg.grating.period / tt**2
    pat0 = simulate_pipeline(cfg.sphere, cfg.trap, cfg.grating, tt, tt, 0.0)
    pat_pi = simulate_pipeline(cfg.sphere, cfg.trap, cfg.grating, tt, tt, a_pi)
    return pat0, pat_pi, a_pi


def wrap(phi):
    return (phi + math.pi) % (2 * math.pi) - math.pi


def test_criterion_01_parameter_web(base):
    cfg, mass, tt = base
    sig_x = ground_state_spread(mass, cfg.trap.omega)
    phi0 = eikonal_phase_amplitude(polarizability(cfg.sphere), cfg.grating.intensity,
                                   cfg.grating.pulse_duration)
    ok = (abs(sig_x - 6e-9) / 6e-9 < 0.10
          and abs(tt - 0.25) / 0.25 < 0.02
          and abs(phi0 - 1.5) / 1.5 < 0.05)
    check(1, "parameter web", ok,
          f"sigma_x={sig_x * 1e9:.3f} nm, T_talbot={tt:.4f} s, phi0={phi0:.4f}")


def test_criterion_02_pi_shift(base_patterns):
    pat0, pat_pi, _ = base_patterns
    dphi = abs(wrap(extract_phase(pat_pi).phase - extract_phase(pat0).phase))
    ok = abs(dphi - math.pi) < 0.01 * math.pi
    check(2, "a_pi identity", ok, f"|dphi| = {dphi / math.pi:.5f} pi")


def test_criterion_03_oracle_equivalence(base):
    cfg, mass, tt = base
    a_pi = cfg.grating.period / tt**2
    worst = 0.0
    for a in (0.0, a_pi):
        orc = oracle_fringe(cfg.sphere, cfg.trap, cfg.grating, tt, tt, a, n=2**15)
        step = orc.x.size // 2**13
        sub = orc.x[::step]
        eng = simulate_pipeline(cfg.sphere, cfg.trap, cfg.grating, tt, tt, a, grid=sub)
        worst = max(worst, float(np.max(np.abs(eng.density - orc.density[::step]))
                                 / orc.density.max()))
    ok = worst <= 1e-4
    check(3, "oracle equivalence", ok, f"Linf = {worst:.2e} of peak on 2^13 grid")


def test_criterion_04_fringe_doubling(base_patterns, base):
    cfg, mass, tt = base
    pat0, _, _ = base_patterns
    spec = np.abs(np.fft.rfft(pat0.density - pat0.density.mean()))
    freqs = np.fft.rfftfreq(pat0.x.size, pat0.dx)
    mask = freqs > 1.0 / (8 * cfg.grating.period)  # above the envelope band
    f_peak = freqs[mask][np.argmax(spec[mask])]
    ok = abs(f_peak - 1.0 / (2 * cfg.grating.period)) < 0.02 / (2 * cfg.grating.period)
    check(4, "fringe doubling", ok,
          f"dominant frequency = 1/({1.0 / f_peak * 1e6:.4f} um), 2d = {2 * cfg.grating.period * 1e6:.4f} um")


def test_criterion_05_momentum_kick_invariance(base, base_patterns):
    cfg, mass, tt = base
    pat0, _, _ = base_patterns
    _, sigma_p = thermal_spreads(mass, cfg.trap.omega, 0.0)
    ph0 = extract_phase(pat0).phase
    worst = 0.0
    for k in (1.0, 3.0, 5.0):
        pat = simulate_pipeline(cfg.sphere, cfg.trap, cfg.grating, tt, tt, 0.0,
                                mean_p=k * sigma_p)
        worst = max(worst, abs(wrap(extract_phase(pat).phase - ph0)))
    ok = worst < 1e-3
    check(5, "momentum-kick invariance", ok, f"max |dphi| = {worst:.2e} rad at 5 sigma_p")


def test_criterion_06_phase_linearity(base, base_patterns):
    cfg, mass, tt = base
    pat0, _, a_pi = base_patterns
    ph0 = extract_phase(pat0).phase
    accels = np.array([-1.0, -0.5, 0.5, 1.0]) * a_pi * 0.9
    worst = 0.0
    for a in accels:
        pat = simulate_pipeline(cfg.sphere, cfg.trap, cfg.grating, tt, tt, float(a))
        dphi = wrap(extract_phase(pat).phase - ph0)
        expect = phase_prediction(float(a), tt, tt, cfg.grating.period)
        worst = max(worst, abs(dphi / expect - 1.0))
    ok = worst < 0.01
    check(6, "phase linearity", ok, f"max slope error = {worst * 100:.3f}%")


def test_criterion_07_casimir_polder(base):
    cfg, mass, tt = base
    derived = DerivedSphere.from_specs(cfg.sphere, cfg.trap, cfg.grating)
    a_cp = casimir_polder_accel(derived, 10e-6)
    ok1 = abs(a_cp - 4e-7 * CONST.g) / (4e-7 * CONST.g) < 0.10

    small = SphereSpec(radius=5e-9, density=cfg.sphere.density,
                       dielectric=cfg.sphere.dielectric)
    der5 = DerivedSphere.from_specs(small, cfg.trap, cfg.grating)
    tt5 = talbot_time(der5.mass, cfg.grating.period)
    phase = phase_prediction(casimir_polder_accel(der5, 6e-6), tt5, tt5,
                             cfg.grating.period)
    ok2 = abs(phase - 3 * math.pi) / (3 * math.pi) < 0.30
    check(7, "Casimir-Polder anchors", ok1 and ok2,
          f"a_cp(10um)={a_cp / CONST.g:.3e} g, phase(R=5nm, 6um)={phase / math.pi:.2f} pi")


def test_criterion_08_yukawa_quadrature():
    s, t, rho = 10e-6, 200e-9, 19300.0
    worst = 0.0
    for lam in (1e-6, 5e-6, 25e-6):
        half = 60 * lam
        box = Box(s, s + t, -half, half, -half, half)
        got = yukawa_accel_box(box, rho, YukawaParams(1.0, lam), rel_tol=1e-5)
        ref = yukawa_accel_slab_inf(rho, YukawaParams(1.0, lam), s, t)
        worst = max(worst, abs(got - ref) / ref)
    ok = worst <= 1e-3
    check(8, "Yukawa quadrature oracle", ok, f"max slab deviation = {worst:.2e}")


def _alpha_min_curve(preset, lambdas):
    cfg = load_config(preset_path(preset))
    pat = simulate_pipeline(cfg.sphere, cfg.trap, cfg.grating, cfg.t0, cfg.t1, 0.0)
    chi = extract_phase(pat).contrast
    dphi = phase_resolution(ShotBudget(cfg.n_shots, chi))
    a_min = min_detectable_accel(dphi, cfg.t0, cfg.t1, cfg.grating.period)
    return np.array([a_min / abs(differential_accel(cfg.wall, YukawaParams(1.0, lam)))
                     for lam in lambdas])


def test_criterion_09_exclusion_anchor():
    lambdas = [2e-6, 3e-6, 4e-6, 5e-6]
    curve_a = _alpha_min_curve("curveA", lambdas)
    curve_b = _alpha_min_curve("curveB", lambdas)
    ok_anchor = curve_b[-1] < 3 * 400 and curve_b[-1] > 400 / 3
    ok_order = bool(np.all(curve_a[:3] < curve_b[:3]))
    check(9, "exclusion anchor", ok_anchor and ok_order,
          f"alpha_min_B(5um)={curve_b[-1]:.0f} (target 400 x/÷3); "
          f"A<B at lambda<=4um: {ok_order} "
          f"(A={np.round(curve_a[:3]).astype(int).tolist()}, "
          f"B={np.round(curve_b[:3]).astype(int).tolist()})")


def test_criterion_10_shot_noise(base_patterns):
    pat0, _, _ = base_patterns
    chi = extract_phase(pat0).contrast
    sigmas = {}
    for n in (10**3, 10**4, 10**5):
        sigmas[n] = monte_carlo_phase_std(pat0, n, repeats=60, seed=42)
    ref = phase_resolution(ShotBudget(10**5, chi))
    ratio = sigmas[10**5] / ref
    ok_abs = abs(ratio - 1.0) < 0.20
    logn = np.log(list(sigmas.keys()))
    logs = np.log(list(sigmas.values()))
    slope = np.polyfit(logn, logs, 1)[0]
    ok_scaling = abs(slope + 0.5) < 0.1
    check(10, "shot-noise law", ok_abs and ok_scaling,
          f"sigma(1e5)/[pi/(chi sqrt N)] = {ratio:.3f} (need 1.0 +- 0.2); "
          f"scaling exponent = {slope:.3f} (need -0.5 +- 0.1)")


def test_criterion_11_improvement_factor_properties(base):
    cfg, mass, tt = base
    t = 0.5
    kw = dict(density=cfg.sphere.density, dielectric=cfg.sphere.dielectric)
    b_m0 = improvement_factor(mass, 0.0, t, cfg.grating, cfg.trap, **kw)
    b_heavy = improvement_factor(100 * mass, 0.0, t, cfg.grating, cfg.trap, **kw)
    ok_cold = b_m0 > 1.0 and b_heavy < 0.1 * b_m0

    scales = [0.3, 1.0, 3.0, 10.0, 30.0]
    peaks = []
    rpf = []
    for nbar in (100.0, 1000.0):
        temp = temperature_for_occupation(cfg.trap.omega, nbar)
        betas = [improvement_factor(s * mass, temp, t, cfg.grating, cfg.trap, **kw)
                 for s in scales]
        i_pk = int(np.argmax(betas))
        peaks.append(scales[i_pk])
        rpf.append(betas[i_pk] > betas[0] and betas[i_pk] > betas[-1] and betas[i_pk] > 1)
    ok_hot = all(rpf) and peaks[1] > peaks[0]
    check(11, "improvement-factor properties", ok_cold and ok_hot,
          f"beta(M0, T=0)={b_m0:.2f}, beta(100 M0)={b_heavy:.3f}; "
          f"hot peaks at {peaks[0]:g} M0 (nbar=100) and {peaks[1]:g} M0 (nbar=1000)")


def test_criterion_12_systematics_report(base):
    cfg, mass, tt = base
    derived = DerivedSphere.from_specs(cfg.sphere, cfg.trap, cfg.grating)
    entries = {e.name: e for e in error_budget(derived, cfg.grating, cfg.wall,
                                               a_min=1.3e-8, patch=cfg.patch)}
    t_dec = scattering_decoherence_time(cfg.sphere, cfg.grating.intensity,
                                        cfg.grating.wavelength)
    ok_dec = 1e-3 / 5 < t_dec < 1e-3 * 5
    a_patch = entries["patch_potentials"].value
    ok_patch = 1e-7 * CONST.g / 10 < a_patch < 1e-7 * CONST.g * 10
    ok_align = entries["alignment"].value == pytest.approx(CONST.g * 0.5e-6, rel=1e-9)
    ok_vib = entries["vibration"].threshold == pytest.approx(1e-9, rel=1e-9)
    check(12, "systematics report", ok_dec and ok_patch and ok_align and ok_vib,
          f"t_dec={t_dec * 1e3:.2f} ms (need 1 x/÷5), a_patch={a_patch:.2e} m/s^2, "
          f"alignment@0.5ppm={ok_align}, vibration@1e-3um/rtHz={ok_vib}")


def test_criterion_13_cli_determinism(tmp_path):
    tiny = tmp_path / "tiny.toml"
    tiny.write_text(
        "[wall]\nseparation_um = 10.0\nn_pairs = 3\n"
        "[yukawa]\nlambda_min_um = 5.0\nlambda_max_um = 10.0\nn_lambda = 2\n"
        "[beta]\nmass_scales = [1.0]\noccupations = [0.0]\nfall_time_s = 0.5\n"
        "[run]\nseed = 3\n"
    )
    commands = [
        ["fringe", "--config", str(tiny)],
        ["oracle-check", "--config", str(tiny)],
        ["exclusion", "--config", str(tiny)],
        ["beta", "--config", str(tiny)],
        ["forces", "--config", str(tiny)],
        ["shots", "--config", str(tiny), "--shots", "2000"],
    ]
    mismatches = []
    for cmd in commands:
        outs = []
        for run in range(2):
            out = tmp_path / f"{cmd[0]}-{run}"
            assert main(cmd + ["--out", str(out)]) == 0
            run_dir = sorted((out / "runs").iterdir())[-1]
            outs.append({p.name: sha256_file(p) for p in sorted(run_dir.glob("*.csv"))})
        if outs[0] != outs[1]:
            mismatches.append(cmd[0])
    ok = not mismatches
    check(13, "CLI determinism", ok,
          "all CSV outputs byte-identical across reruns" if ok
          else f"mismatched: {mismatches}")
