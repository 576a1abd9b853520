from .check import check_assignment, holds
from .memory import STRATEGIES, BacktrackError, Copying, Trailing, make_memory
from .propagators import REGISTRY, VARIANTS, Propagator, UnsupportedKind, make_propagator
from .search import (
    VAL_ORDERS,
    VAR_ORDERS,
    EngineOptions,
    PropagationEngine,
    SearchConfig,
    SolveResult,
    Solver,
    propagate,
    solve,
)
from .store import REPS, WIDTHS, DomainStore, StoreError, default_rep, fits_width, width_for_range

__all__ = [
    "REGISTRY", "REPS", "STRATEGIES", "VAL_ORDERS", "VARIANTS", "VAR_ORDERS", "WIDTHS",
    "BacktrackError", "Copying", "DomainStore", "EngineOptions", "PropagationEngine",
    "Propagator", "SearchConfig", "SolveResult", "Solver", "StoreError", "Trailing",
    "UnsupportedKind", "check_assignment", "default_rep", "fits_width", "holds",
    "make_memory", "make_propagator", "propagate", "solve", "width_for_range",
]
