"""Nanosphere Talbot interferometer simulation and force-sensing analysis."""

__version__ = "0.1.0"

from .constants import CONST, PhysicalConstants
from .config import ConfigError, RunConfig, load_config, preset_path, resolve_config
from .core import (
    DerivedSphere,
    GratingSpec,
    SphereSpec,
    TrapSpec,
    eikonal_phase_amplitude,
    grating_velocity,
    ground_state_spread,
    mean_occupation,
    polarizability,
    rayleigh_scattering_rate,
    scattering_decoherence_time,
    sphere_mass,
    talbot_lau_coefficients,
    talbot_time,
    temperature_for_occupation,
    thermal_spreads,
)
from .forces import (
    Box,
    PatchModel,
    WallGeometry,
    YukawaParams,
    casimir_polder_accel,
    differential_accel,
    newtonian_accel_box,
    patch_accel_estimate,
    scan_y,
    wall_accel,
    yukawa_accel_box,
    yukawa_accel_slab_inf,
)
from .fringes import FringePattern, PhaseReadout, extract_phase, sample_positions
from .phase_space import (
    GaussianWignerState,
    PostGratingState,
    apply_grating,
    detect_density,
    initial_state,
    phase_prediction,
    propagate_free,
    simulate_pipeline,
)
from .sensitivity import (
    BallisticComparison,
    BudgetEntry,
    ExclusionCurve,
    ShotBudget,
    ballistic_accel_resolution,
    ballistic_sigma_v,
    beta_sweep,
    error_budget,
    exclusion_curve,
    histogram_pattern,
    improvement_factor,
    min_detectable_accel,
    monte_carlo_phase_std,
    phase_resolution,
)
from .wave_oracle import oracle_fringe, oracle_thermal_fringe
