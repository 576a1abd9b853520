from ..engine.store import width_for_range
from .components import COMPONENTS, Component, pruning_violations
from .generate import (
    BuildResult,
    ConformanceReport,
    GenerationError,
    RunOutput,
    SourceTree,
    build,
    class_arguments,
    conformance_check,
    generate,
    parse_output,
    run,
    solver_args,
)
from .resolve import ResolvedSpec, default_spec, resolve_defaults

__all__ = [
    "COMPONENTS", "BuildResult", "Component", "ConformanceReport", "GenerationError",
    "ResolvedSpec", "RunOutput", "SourceTree", "build", "class_arguments", "conformance_check",
    "default_spec", "generate", "parse_output", "pruning_violations", "resolve_defaults", "run",
    "solver_args", "width_for_range",
]
