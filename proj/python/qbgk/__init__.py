"""Conservative quantum BGK relaxation and transport for gas mixtures."""

from ._core import (
    ConfigError,
    DomainError,
    Error,
    IntraAlpha,
    InvariantViolation,
    MomentumGrid,
    Moments,
    SolverError,
    Statistics,
    alpha_to_abc,
    build_grid,
    compute_moments,
    eta_integrals,
    evaluate_equilibrium,
    format_config,
    kinetic_temperature,
    maxwellian_alpha,
    parse_config,
    preset,
    preset_names,
    run,
    sample_maxwellian,
    solve_intra,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "IntraAlpha",
    "InvariantViolation",
    "MomentumGrid",
    "Moments",
    "SolverError",
    "Statistics",
    "alpha_to_abc",
    "build_grid",
    "compute_moments",
    "eta_integrals",
    "evaluate_equilibrium",
    "format_config",
    "kinetic_temperature",
    "maxwellian_alpha",
    "parse_config",
    "preset",
    "preset_names",
    "run",
    "sample_maxwellian",
    "solve_intra",
]
