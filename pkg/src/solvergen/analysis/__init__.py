from .analyser import (
    MAX_ROUNDS,
    Analysis,
    ProbeEntry,
    analyse,
    analyse_detailed,
    fold_probes,
    options_from,
    probe,
    probe_candidates,
)
from .costs import DEFAULT_COSTS, CostTable
from .metamodel import (
    AnalysisError,
    Compatibility,
    Decision,
    Metamodel,
    build_metamodel,
    solve_metamodel,
)

__all__ = [
    "DEFAULT_COSTS", "MAX_ROUNDS", "Analysis", "AnalysisError", "Compatibility", "CostTable",
    "Decision", "Metamodel", "ProbeEntry", "analyse", "analyse_detailed", "build_metamodel",
    "fold_probes", "options_from", "probe", "probe_candidates", "solve_metamodel",
]
