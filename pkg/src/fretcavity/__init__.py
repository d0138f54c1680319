"""
fretcavity: resonant energy transfer between a donor and an acceptor.

Steady states of the donor-acceptor(-cavity) master equation, the linear
moment theory, closed-form weak-pump flow rates, polaritons, concurrence,
and configuration-driven parameter sweeps.
"""

from .analytic import evaluate, flow_for_spec
from .const import VERSION
from .exceptions import (
    ConfigError,
    FretCavityError,
    NonUniqueSteadyStateError,
    ParseError,
    UnstableError,
)
from .models import (
    EmitterRates,
    FlowReport,
    GeometrySpec,
    Normalization,
    PumpMode,
    PumpSpec,
    SweepConfig,
    SweepResult,
    SystemSpec,
)
from .moments import moment_steady_state
from .polariton import optimal_cavity_detuning, polariton_modes
from .solver import MasterEquationSolver
from .sweeps import SweepRunner, load_config, parse_config, run_sweep

__version__ = VERSION
__author__ = "fretcavity developers"

__all__ = [
    "MasterEquationSolver",
    "SweepRunner",
    "SystemSpec",
    "EmitterRates",
    "GeometrySpec",
    "PumpMode",
    "PumpSpec",
    "Normalization",
    "FlowReport",
    "SweepConfig",
    "SweepResult",
    "evaluate",
    "flow_for_spec",
    "moment_steady_state",
    "optimal_cavity_detuning",
    "polariton_modes",
    "load_config",
    "parse_config",
    "run_sweep",
    "FretCavityError",
    "ConfigError",
    "ParseError",
    "NonUniqueSteadyStateError",
    "UnstableError",
]
