"""Replace every ``default`` in a spec by the baseline engine's concrete choice."""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..engine import VARIANTS, EngineOptions, SearchConfig, default_rep, width_for_range
from ..model import ProblemModel
from ..model.features import var_classes
from ..spec import DEFAULT, SolverSpec, SpecError, VarClassChoice, validate_against_model


@dataclass(frozen=True)
class ResolvedSpec(SolverSpec):
    def __post_init__(self):
        super().__post_init__()
        if self.backtracking == DEFAULT or self.search == DEFAULT:
            raise SpecError("resolved specification still contains a default")
        for kind, variant in self.propagators.items():
            if variant == DEFAULT:
                raise SpecError(f"resolved specification leaves propagator:{kind} default")
        for name, c in self.var_classes.items():
            if DEFAULT in (c.rep, c.width, c.range):
                raise SpecError(f"resolved specification leaves var-class:{name} default")

    def engine_options(self) -> EngineOptions:
        return EngineOptions(
            strategy=self.backtracking,
            variants=dict(self.propagators),
            reps={n: c.rep for n, c in self.var_classes.items()},
            widths={n: c.width for n, c in self.var_classes.items()},
        )

    def search_config(self, **overrides) -> SearchConfig:
        return replace(self.search, **overrides) if overrides else self.search


def resolve_defaults(s: SolverSpec, m: ProblemModel) -> ResolvedSpec:
    report = validate_against_model(s, m)
    if not report.ok:
        raise SpecError(f"cannot resolve: {report.findings[0].message}")
    props = {k: (VARIANTS[k][0] if v == DEFAULT else v) for k, v in s.propagators.items()}
    classes = dict(s.var_classes)
    for vc in var_classes(m):
        c = classes[vc.name]
        lo, hi = c.range if c.range != DEFAULT else (vc.lo, vc.hi)
        rep = c.rep
        if rep == DEFAULT:
            rep = default_rep(range(lo, hi + 1), vc.kind == "int-sparse")
        width = c.width
        if width == DEFAULT:
            width = 8 if rep == "boolean" else width_for_range(lo, hi)
        classes[vc.name] = VarClassChoice(rep, width, (lo, hi))
    return ResolvedSpec(
        version=s.version,
        backtracking="trailing" if s.backtracking == DEFAULT else s.backtracking,
        propagators=props,
        var_classes=classes,
        search=SearchConfig() if s.search == DEFAULT else s.search,
        embed=s.embed,
        embedded_model=s.embedded_model if s.embed != "instance" or s.embedded_model else m,
        provenance=s.provenance,
    )


def default_spec(m: ProblemModel, embed: str = "none") -> SolverSpec:
    """The all-``default`` spec covering ``m``."""
    kinds = sorted({c.kind for c in m.constraints})
    return SolverSpec(
        propagators={k: DEFAULT for k in kinds},
        var_classes={vc.name: VarClassChoice() for vc in var_classes(m)},
        embed=embed,
        embedded_model=m if embed == "instance" else None,
    )
