"""Mobile reaction networks: CTMC simulation, fluid ODE and finite-difference PDE solver."""

from ._mrn import (
    IoError,
    NetworkSpec,
    NumericError,
    ParseError,
    ValidationError,
    auto_dt,
    builtin_scenarios,
    heat_spec,
    initial_state,
    load_spec,
    msd,
    onoff_spec,
    parse_delta_s,
    parse_spec,
    refine,
    replica_fraction,
    scenario,
    simulate,
    solve_ode,
    solve_pde,
    step_size_for,
    validate,
)

__all__ = [
    "IoError",
    "NetworkSpec",
    "NumericError",
    "ParseError",
    "ValidationError",
    "auto_dt",
    "builtin_scenarios",
    "heat_spec",
    "initial_state",
    "load_spec",
    "msd",
    "onoff_spec",
    "parse_delta_s",
    "parse_spec",
    "refine",
    "replica_fraction",
    "scenario",
    "simulate",
    "solve_ode",
    "solve_pde",
    "step_size_for",
    "validate",
]
