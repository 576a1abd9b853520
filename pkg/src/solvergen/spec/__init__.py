from .solver_spec import (
    DEFAULT,
    EMBED_MODES,
    SPEC_VERSION,
    PartialSpec,
    PartialVarClass,
    SolverSpec,
    SpecError,
    VarClassChoice,
    check_structure,
    deserialize,
    deserialize_partial,
    merge_partial,
    serialize,
    serialize_partial,
    validate_against_model,
)

__all__ = [
    "DEFAULT", "EMBED_MODES", "SPEC_VERSION", "PartialSpec", "PartialVarClass", "SolverSpec",
    "SpecError", "VarClassChoice", "check_structure", "deserialize", "deserialize_partial",
    "merge_partial", "serialize", "serialize_partial", "validate_against_model",
]
