"""Semi-Lagrangian multi-component liquid chromatography solver."""

from chromsim._core import (
    ColumnSpec,
    GridSpec,
    InjectionProfile,
    IsothermParams,
    MassLedger,
    ScenarioConfig,
    ScenarioError,
    Snapshot,
    SolverError,
    SolverOptions,
    Trajectory,
    __version__,
    analytic_outlet,
    derive_coefficients,
    fine_grid_reference,
    injection_value,
    l1_error,
    langmuir_jacobian,
    langmuir_q,
    load_scenario,
    run,
    secant_derivative,
    u_of_w,
    validate_scenario,
    w_of_u,
)

__all__ = [
    "ColumnSpec",
    "GridSpec",
    "InjectionProfile",
    "IsothermParams",
    "MassLedger",
    "ScenarioConfig",
    "ScenarioError",
    "Snapshot",
    "SolverError",
    "SolverOptions",
    "Trajectory",
    "__version__",
    "analytic_outlet",
    "derive_coefficients",
    "fine_grid_reference",
    "injection_value",
    "l1_error",
    "langmuir_jacobian",
    "langmuir_q",
    "load_scenario",
    "run",
    "secant_derivative",
    "u_of_w",
    "validate_scenario",
    "w_of_u",
]
