"""Feature extraction: what a solver must support to handle a model."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .ir import ProblemModel, VarDecl


def var_kind(d: VarDecl) -> str:
    if d.kind == "bool":
        return "bool"
    return "int-sparse" if d.domain.is_sparse else "int-range"


@dataclass(frozen=True)
class VarClass:
    """Variables sharing one declaration; arrays form one class, scalars their own."""

    name: str
    kind: str  # bool | int-range | int-sparse
    count: int
    lo: int
    hi: int

    @property
    def extent(self) -> int:
        return self.hi - self.lo + 1


@dataclass(frozen=True)
class FeatureSet:
    constraint_kinds: dict[str, int] = field(default_factory=dict)
    var_kinds: frozenset = frozenset()
    global_min: Optional[int] = None
    global_max: Optional[int] = None
    max_arity: int = 0
    var_count: int = 0
    constraint_count: int = 0
    classes: tuple[VarClass, ...] = ()
    kind_max_arity: dict[str, int] = field(default_factory=dict)
    has_objective: bool = False
    kind_var_kinds: dict[str, frozenset] = field(default_factory=dict)  # kind -> var kinds in scope

    def class_named(self, name: str) -> VarClass:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(name)

    def same_class_as(self, other: "FeatureSet") -> bool:
        """Problem-class equality: same constraint kinds and variable kinds."""
        return (set(self.constraint_kinds) == set(other.constraint_kinds)
                and self.var_kinds == other.var_kinds)


def var_classes(m: ProblemModel) -> tuple[VarClass, ...]:
    return tuple(
        VarClass(d.name, var_kind(d), d.size, d.domain.lo, d.domain.hi) for d in m.variables
    )


def class_of(m: ProblemModel) -> list[str]:
    """Class name for each flattened variable, in declaration order."""
    return [d.name for _, d in m.scalars]


def extract_features(m: ProblemModel) -> FeatureSet:
    kinds = Counter(c.kind for c in m.constraints)
    arity: dict[str, int] = {}
    for c in m.constraints:
        arity[c.kind] = max(arity.get(c.kind, 0), len(c.scope))
    classes = var_classes(m)
    decl_kind = {n: var_kind(d) for n, d in m.scalars}
    scoped: dict[str, set] = {}
    for c in m.constraints:
        scoped.setdefault(c.kind, set()).update(decl_kind[r] for r in c.scope if r in decl_kind)
    lows = [c.lo for c in classes]
    highs = [c.hi for c in classes]
    return FeatureSet(
        constraint_kinds=dict(sorted(kinds.items())),
        var_kinds=frozenset(c.kind for c in classes),
        global_min=min(lows) if lows else None,
        global_max=max(highs) if highs else None,
        max_arity=max(arity.values(), default=0),
        var_count=len(m.scalars),
        constraint_count=len(m.constraints),
        classes=classes,
        kind_max_arity=dict(sorted(arity.items())),
        has_objective=m.objective is not None,
        kind_var_kinds={k: frozenset(v) for k, v in sorted(scoped.items())},
    )
