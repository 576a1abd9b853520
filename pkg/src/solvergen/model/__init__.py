from .features import FeatureSet, VarClass, class_of, extract_features, var_classes
from .ir import (
    BOOL_DOMAIN,
    KINDS,
    ConstraintDecl,
    DomainLiteral,
    ProblemModel,
    VarDecl,
    render_model,
)
from .parser import ModelError, parse_model
from .validate import Finding, ValidationReport, validate_model

__all__ = [
    "BOOL_DOMAIN",
    "KINDS",
    "ConstraintDecl",
    "DomainLiteral",
    "FeatureSet",
    "Finding",
    "ModelError",
    "ProblemModel",
    "ValidationReport",
    "VarClass",
    "VarDecl",
    "class_of",
    "extract_features",
    "parse_model",
    "render_model",
    "validate_model",
    "var_classes",
]
