from .generators import (
    CLASS_GENERATORS,
    gen_bibd,
    gen_golfers,
    gen_golomb,
    gen_queens,
)
from .harness import (
    CSV_COLUMNS,
    BenchmarkReport,
    Instance,
    InstanceResult,
    SweepEntry,
    conformance_sweep,
    default_suite,
    miscount_solutions,
    instance_of,
    run_comparison,
    select,
    write_models,
)

__all__ = [
    "CLASS_GENERATORS", "CSV_COLUMNS", "BenchmarkReport", "Instance", "InstanceResult",
    "SweepEntry", "conformance_sweep", "default_suite", "miscount_solutions", "gen_bibd",
    "gen_golfers", "gen_golomb", "gen_queens", "instance_of", "run_comparison", "select",
    "write_models",
]
