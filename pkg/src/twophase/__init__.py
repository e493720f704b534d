"""Finite-volume toolkit for a two-phase macroscopic traffic model."""

from .model import (
    ModelParams,
    Phase,
    SpeedProfile,
    State,
    VACUUM,
    classify,
    lambda1,
    lambda2,
    lax1,
    lax2,
    linear_speed_profile,
    validate_params,
    velocity,
)
from .riemann import (
    Wave,
    WaveFan,
    WaveKind,
    boundary_state,
    godunov_flux,
    middle_state_congested,
    sample,
    solve,
)
from .godunov import (
    Boundary,
    CflPolicy,
    Grid,
    InstabilityError,
    RunResult,
    SimState,
    Snapshot,
    init_from_profiles,
    run,
    stable_dt,
    step,
)
from .bwgpb import (
    BwgpbParams,
    BwgpbState,
    BwgpbWave,
    bwgpb_lambda1,
    bwgpb_middle_state,
    bwgpb_pt_speed,
    bwgpb_solve,
    bwgpb_velocity,
    compare_wave_counts,
)
from .scenarios import ScenarioConfig, builtin_scenario

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
