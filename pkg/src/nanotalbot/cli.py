"""Command-line entry point: fringe, oracle-check, exclusion, beta, forces, shots.

Every run writes into runs/<timestamp>-<confighash>/ under the output base
directory: a manifest.json with config hash, tool version, seed and per-output
checksums, plus the CSV data and SVG renderings of that data.  All randomness
is routed through the config seed (or the --seed override), so re-running a
command with the same config and seed reproduces byte-identical CSV files.

Exit codes: 0 success, 1 validation/tolerance failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config, preset_path
from .core import (
    DerivedSphere,
    temperature_for_occupation,
)
from .forces import (
    YukawaParams,
    casimir_polder_accel,
    differential_accel,
    scan_y,
)
from .fringes import extract_phase, sample_positions
from .io import sha256_file, write_csv, write_json, write_pattern
from .phase_space import simulate_pipeline
from .sensitivity import (
    ExclusionCurve,
    ShotBudget,
    error_budget,
    histogram_pattern,
    improvement_factor,
    min_detectable_accel,
    monte_carlo_phase_std,
    phase_resolution,
)
from .wave_oracle import oracle_fringe

ORACLE_LINF_TOL = 1e-4
ORACLE_PHASE_TOL = 0.01 * math.pi
COMPARE_GRID = 2**13


def _make_run_dir(base: Path, cfg_hash: str) -> Path:
    stamp = time.strftime("%Y%m%dT%H%M%SZ", time.gmtime())
    for suffix in [""] + [f"-{i}" for i in range(1, 1000)]:
        run_dir = base / "runs" / f"{stamp}-{cfg_hash}{suffix}"
        if not run_dir.exists():
            run_dir.mkdir(parents=True)
            return run_dir
    raise RuntimeError("could not allocate a run directory")


def _write_manifest(run_dir: Path, cfg: RunConfig, seed: int, extra: dict | None = None) -> None:
    outputs = {
        p.name: sha256_file(p)
        for p in sorted(run_dir.iterdir())
        if p.is_file() and p.name != "manifest.json"
    }
    payload = {
        "config_hash": cfg.content_hash,
        "config_source": cfg.source,
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "seed": seed,
        "outputs": outputs,
    }
    if extra:
        payload.update(extra)
    write_json(run_dir / "manifest.json", payload)


def _pipeline(cfg: RunConfig, a: float, **kwargs):
    return simulate_pipeline(cfg.sphere, cfg.trap, cfg.grating, cfg.t0, cfg.t1, a, **kwargs)


def _a_pi(cfg: RunConfig) -> float:
    """Acceleration producing a pi fringe shift: d / (t0 t1)."""
    return cfg.grating.period / (cfg.t0 * cfg.t1)


def _contrast(cfg: RunConfig) -> float:
    return extract_phase(_pipeline(cfg, 0.0)).contrast


def cmd_fringe(args) -> int:
    cfg = load_config(args.config or "table1")
    seed = args.seed if args.seed is not None else cfg.seed
    run_dir = _make_run_dir(args.out, cfg.content_hash)
    from .plots import plot_fringes

    report = {}
    if args.compare:
        pat0 = _pipeline(cfg, 0.0)
        pat_pi = _pipeline(cfg, _a_pi(cfg), grid=pat0.x)
        write_pattern(pat0, run_dir / "fringe_a0.csv")
        write_pattern(pat_pi, run_dir / "fringe_api.csv")
        plot_fringes([("a = 0", pat0), ("a = a_pi", pat_pi)], run_dir / "fringe.svg")
        r0, rpi = extract_phase(pat0), extract_phase(pat_pi)
        report = {
            "phase_a0_rad": r0.phase, "phase_api_rad": rpi.phase,
            "contrast_a0": r0.contrast, "contrast_api": rpi.contrast,
            "a_pi_m_s2": _a_pi(cfg),
        }
    else:
        pat = _pipeline(cfg, args.a)
        write_pattern(pat, run_dir / "fringe.csv")
        plot_fringes([(f"a = {args.a:g} m/s^2", pat)], run_dir / "fringe.svg")
        readout = extract_phase(pat)
        report = {"a_m_s2": args.a, "phase_rad": readout.phase,
                  "contrast": readout.contrast, "residual": readout.residual}
    write_json(run_dir / "report.json", report)
    _write_manifest(run_dir, cfg, seed)
    print(f"wrote {run_dir}")
    return 0


def cmd_oracle_check(args) -> int:
    cfg = load_config(args.config or "table1")
    seed = args.seed if args.seed is not None else cfg.seed
    run_dir = _make_run_dir(args.out, cfg.content_hash)

    checks = []
    ok = True
    for label, a in (("a0", 0.0), ("api", _a_pi(cfg))):
        try:
            oracle = oracle_fringe(cfg.sphere, cfg.trap, cfg.grating,
                                   cfg.t0, cfg.t1, a, n=args.oracle_points)
        except (ValueError, RuntimeError) as exc:
            checks.append({"case": label, "verdict": "FAIL",
                           "diagnostic": f"oracle did not converge: {exc}"})
            ok = False
            continue
        step = max(1, oracle.x.size // COMPARE_GRID)
        sub_x = oracle.x[::step]
        engine = _pipeline(cfg, a, grid=sub_x)
        diff = float(np.max(np.abs(engine.density - oracle.density[::step])))
        linf_rel = diff / float(np.max(oracle.density))
        dphi = abs(extract_phase(engine).phase - extract_phase(oracle).phase)
        dphi = min(dphi, 2.0 * math.pi - dphi)
        passed = linf_rel <= ORACLE_LINF_TOL and dphi < ORACLE_PHASE_TOL
        ok &= passed
        checks.append({
            "case": label, "a_m_s2": a, "linf_rel": linf_rel,
            "phase_diff_rad": dphi, "grid_points": int(sub_x.size),
            "verdict": "PASS" if passed else "FAIL",
        })
    report = {"linf_tol": ORACLE_LINF_TOL, "phase_tol_rad": ORACLE_PHASE_TOL,
              "checks": checks, "verdict": "PASS" if ok else "FAIL"}
    write_json(run_dir / "oracle_check.json", report)
    _write_manifest(run_dir, cfg, seed)
    for c in checks:
        line = f"oracle-check [{c['case']}]: {c['verdict']}"
        if "linf_rel" in c:
            line += f"  Linf={c['linf_rel']:.2e}  dphi={c['phase_diff_rad']:.2e} rad"
        else:
            line += f"  {c['diagnostic']}"
        print(line)
    return 0 if ok else 1


def _diff_point(task) -> float:
    wall, lam, rel_tol = task
    return differential_accel(wall, YukawaParams(1.0, lam), rel_tol=rel_tol)


def _exclusion_for(cfg: RunConfig, jobs: int, rel_tol: float = 1e-4) -> ExclusionCurve:
    chi = _contrast(cfg)
    dphi = phase_resolution(ShotBudget(cfg.n_shots, chi))
    a_min = min_detectable_accel(dphi, cfg.t0, cfg.t1, cfg.grating.period)
    tasks = [(cfg.wall, float(lam), rel_tol) for lam in cfg.lambda_grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            signals = list(pool.map(_diff_point, tasks))
    else:
        signals = [_diff_point(t) for t in tasks]
    alpha_min = np.array([a_min / abs(s) for s in signals])
    return ExclusionCurve(lam=cfg.lambda_grid, alpha_min=alpha_min,
                          config={"config_hash": cfg.content_hash, "dphi_rad": dphi,
                                  "a_min_m_s2": a_min, "contrast": chi})


def cmd_exclusion(args) -> int:
    from .plots import plot_exclusion
    if args.config:
        configs = [("curve", load_config(args.config))]
    else:
        configs = [("A", load_config(preset_path("curveA"))),
                   ("B", load_config(preset_path("curveB")))]
    cfg0 = configs[0][1]
    seed = args.seed if args.seed is not None else cfg0.seed
    run_dir = _make_run_dir(args.out, cfg0.content_hash)

    curves = []
    for label, cfg in configs:
        curve = _exclusion_for(cfg, args.jobs)
        curves.append((label, curve))
        write_csv(run_dir / f"exclusion_{label}.csv", ["lambda_m", "alpha_min"],
                  zip(curve.lam, curve.alpha_min))
        write_json(run_dir / f"exclusion_{label}.meta.json", curve.config)
    plot_exclusion(curves, run_dir / "exclusion.svg")
    _write_manifest(run_dir, cfg0, seed)
    for label, curve in curves:
        i = int(np.argmin(np.abs(curve.lam - 5e-6)))
        print(f"exclusion {label}: alpha_min({curve.lam[i] * 1e6:.3g} um) = "
              f"{curve.alpha_min[i]:.3g}")
    return 0


def _beta_point(task) -> float:
    mass, temp, t, grating, trap, density, dielectric = task
    return improvement_factor(mass, temp, t, grating, trap,
                              density=density, dielectric=dielectric)


def cmd_beta(args) -> int:
    from .plots import plot_beta_table
    cfg = load_config(args.config or "fig4")
    seed = args.seed if args.seed is not None else cfg.seed
    run_dir = _make_run_dir(args.out, cfg.content_hash)

    m0 = DerivedSphere.from_specs(cfg.sphere, cfg.trap, cfg.grating).mass
    masses = cfg.beta_mass_scales * m0
    temps = [temperature_for_occupation(cfg.trap.omega, n) for n in cfg.beta_occupations]
    tasks = [(float(m), float(temp), cfg.beta_fall_time, cfg.grating, cfg.trap,
              cfg.sphere.density, cfg.sphere.dielectric)
             for temp in temps for m in masses]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            flat = list(pool.map(_beta_point, tasks))
    else:
        flat = [_beta_point(t) for t in tasks]
    beta = np.array(flat).reshape(len(temps), len(masses))

    rows = []
    for i, (nbar, temp) in enumerate(zip(cfg.beta_occupations, temps)):
        for k, scale in enumerate(cfg.beta_mass_scales):
            rows.append((scale, masses[k], nbar, temp, beta[i, k]))
    write_csv(run_dir / "beta.csv",
              ["mass_scale_m0", "mass_kg", "occupation", "temperature_k", "beta"], rows)
    plot_beta_table(cfg.beta_mass_scales, cfg.beta_occupations, beta, run_dir / "beta.svg")
    _write_manifest(run_dir, cfg, seed, extra={"baseline_mass_kg": m0})
    print(f"beta table over {len(masses)} masses x {len(temps)} occupations -> {run_dir}")
    return 0


def cmd_forces(args) -> int:
    from .plots import plot_yscan
    cfg = load_config(args.config or "table1")
    seed = args.seed if args.seed is not None else cfg.seed
    run_dir = _make_run_dir(args.out, cfg.content_hash)
    derived = DerivedSphere.from_specs(cfg.sphere, cfg.trap, cfg.grating)

    write_csv(run_dir / "cp_scan.csv", ["s_m", "a_cp_m_s2"],
              ((s, casimir_polder_accel(derived, float(s))) for s in cfg.s_scan))

    profile = scan_y(cfg.wall, cfg.yukawa_ref, cfg.y_scan)
    write_csv(run_dir / "yscan.csv", ["y_m", "a_x_m_per_s2"], zip(cfg.y_scan, profile))
    plot_yscan(cfg.y_scan, profile, run_dir / "yscan.svg")

    chi = _contrast(cfg)
    dphi = phase_resolution(ShotBudget(cfg.n_shots, chi))
    a_min = min_detectable_accel(dphi, cfg.t0, cfg.t1, cfg.grating.period)
    signal = abs(differential_accel(cfg.wall, cfg.yukawa_ref))
    entries = error_budget(derived, cfg.grating, cfg.wall, a_min,
                           signal_accel=signal, patch=cfg.patch)
    write_json(run_dir / "budget.json", {
        "a_min_m_s2": a_min, "dphi_rad": dphi, "contrast": chi,
        "yukawa_signal_m_s2": signal,
        "entries": [e.as_dict() for e in entries],
    })
    with open(run_dir / "budget.txt", "w") as fh:
        for e in entries:
            fh.write(f"{e.name:22s} {e.value:.3e} {e.unit:8s} "
                     f"threshold {e.threshold:.3e}  {e.verdict}  ({e.note})\n")
    _write_manifest(run_dir, cfg, seed)
    print(f"a_min = {a_min:.3e} m/s^2, yukawa signal = {signal:.3e} m/s^2")
    for e in entries:
        print(f"  {e.name}: {e.value:.3e} {e.unit} [{e.verdict}]")
    return 0


def cmd_shots(args) -> int:
    from .plots import plot_fringes
    cfg = load_config(args.config or "table1")
    seed = args.seed if args.seed is not None else cfg.seed
    n = args.shots if args.shots is not None else cfg.n_shots
    run_dir = _make_run_dir(args.out, cfg.content_hash)

    pattern = _pipeline(cfg, args.a)
    xs = sample_positions(pattern, n, seed)
    write_csv(run_dir / "positions.csv", ["shot", "x_m"], enumerate(xs))
    hist = histogram_pattern(pattern, xs)
    write_csv(run_dir / "histogram.csv", ["x_m", "density_per_m"],
              zip(hist.x, hist.density))
    plot_fringes([(f"{n} shots", hist), ("expected", pattern)], run_dir / "shots.svg")

    readout = extract_phase(hist)
    sigma_phi = phase_resolution(ShotBudget(n, readout.contrast))
    report = {
        "n_shots": n, "seed": seed, "a_m_s2": args.a,
        "phase_rad": readout.phase, "contrast": readout.contrast,
        "phase_uncertainty_rad": sigma_phi,
    }
    if args.repeats > 1:
        emp = monte_carlo_phase_std(pattern, n, args.repeats, seed)
        report["repeats"] = args.repeats
        report["empirical_phase_std_rad"] = emp
    write_json(run_dir / "report.json", report)
    _write_manifest(run_dir, cfg, seed)
    print(f"fitted phase = {readout.phase:.4f} +- {sigma_phi:.4f} rad "
          f"(contrast {readout.contrast:.3f}, N={n})")
    if args.repeats > 1:
        print(f"empirical phase std over {args.repeats} repeats: "
              f"{report['empirical_phase_std_rad']:.4f} rad")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML config file or preset name "
                        "(table1, curveA, curveB, fig4)")
    common.add_argument("--out", type=Path, default=Path("."),
                        help="base directory for runs/ output (default: cwd)")
    common.add_argument("--jobs", type=int, default=1, help="worker pool size for sweeps")
    common.add_argument("--seed", type=int, default=None, help="override the config seed")

    parser = argparse.ArgumentParser(
        prog="nanotalbot",
        description="Nanosphere Talbot interferometer simulation and force-sensing analysis",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fringe", parents=[common], help="detector fringe pattern")
    p.add_argument("--a", type=float, default=0.0, help="transverse acceleration [m/s^2]")
    p.add_argument("--compare", action="store_true",
                   help="overlay a=0 (solid) and a=a_pi (dashed)")
    p.set_defaults(func=cmd_fringe)

    p = sub.add_parser("oracle-check", parents=[common],
                       help="phase-space engine vs direct wavefunction propagation")
    p.add_argument("--oracle-points", type=int, default=2**15,
                   help="oracle grid size (power of two)")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("exclusion", parents=[common],
                       help="minimum detectable Yukawa strength vs range "
                            "(presets A and B overlaid when --config is omitted)")
    p.set_defaults(func=cmd_exclusion)

    p = sub.add_parser("beta", parents=[common],
                       help="interference-vs-ballistic improvement factor sweep")
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("forces", parents=[common],
                       help="force scans, patch estimate, and the error budget")
    p.set_defaults(func=cmd_forces)

    p = sub.add_parser("shots", parents=[common], help="single-shot detection Monte Carlo")
    p.add_argument("--shots", type=int, default=None, help="number of shots (default: config)")
    p.add_argument("--a", type=float, default=0.0, help="transverse acceleration [m/s^2]")
    p.add_argument("--repeats", type=int, default=1,
                   help="repeat the experiment to measure the empirical phase scatter")
    p.set_defaults(func=cmd_shots)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - single operator-facing failure path
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
