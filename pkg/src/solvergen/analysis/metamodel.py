"""The metamodel: solver design decisions as a constraint optimisation problem.

Each decision becomes an integer variable ranging over option indices, each
decision's cost a variable tied to it by a table constraint, and the total a
linear sum that is minimised. The general engine solves it by branch and
bound, branching on decisions first in canonical order with ascending values,
so the optimum it reports is the lexicographically first one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..engine import REPS, STRATEGIES, VAR_ORDERS, VARIANTS, WIDTHS, SearchConfig, solve
from ..engine.store import width_for_range
from ..model import ConstraintDecl, DomainLiteral, ProblemModel, VarDecl, validate_model
from ..model.features import FeatureSet
from .costs import CostTable, cost_of


class AnalysisError(RuntimeError):
    pass


@dataclass(frozen=True)
class Decision:
    name: str  # backtracking | var-order | variant:<kind> | rep:<class> | width:<class>
    options: tuple

    @property
    def ident(self) -> str:
        return "d_" + self.name.replace(":", "_").replace("-", "_")


@dataclass(frozen=True)
class Compatibility:
    """Allowed option combinations over two or more decisions."""

    decisions: tuple[str, ...]
    allowed: tuple[tuple, ...]  # option values, not indices
    reason: str


@dataclass(frozen=True)
class Metamodel:
    decisions: tuple[Decision, ...]
    compat: tuple[Compatibility, ...]
    costs: dict  # (decision, option) -> int
    features: FeatureSet

    def decision(self, name: str) -> Decision:
        for d in self.decisions:
            if d.name == name:
                return d
        raise KeyError(name)

    def combinations(self) -> int:
        n = 1
        for d in self.decisions:
            n *= len(d.options)
        return n

    def total(self, assignment: dict) -> int:
        return sum(self.costs[(d.name, assignment[d.name])] for d in self.decisions)

    def admissible(self, assignment: dict) -> bool:
        return all(tuple(assignment[n] for n in c.decisions) in c.allowed for c in self.compat)

    def to_problem_model(self) -> ProblemModel:
        variables, constraints, cost_refs = [], [], []
        for d in self.decisions:
            variables.append(VarDecl(d.ident, "int", DomainLiteral(0, len(d.options) - 1)))
        for d in self.decisions:
            cs = [self.costs[(d.name, o)] for o in d.options]
            ref = "c_" + d.ident[2:]
            variables.append(VarDecl(ref, "int", DomainLiteral(min(cs), max(cs))))
            constraints.append(ConstraintDecl(
                "table", (d.ident, ref), tuples=tuple((i, c) for i, c in enumerate(cs))))
            cost_refs.append(ref)
        for c in self.compat:
            decs = [self.decision(n) for n in c.decisions]
            rows = tuple(tuple(dec.options.index(v) for dec, v in zip(decs, row))
                         for row in c.allowed)
            constraints.append(ConstraintDecl("table", tuple(d.ident for d in decs), tuples=rows))
        lo = sum(min(self.costs[(d.name, o)] for o in d.options) for d in self.decisions)
        hi = sum(max(self.costs[(d.name, o)] for o in d.options) for d in self.decisions)
        variables.append(VarDecl("total", "int", DomainLiteral(lo, hi)))
        constraints.append(ConstraintDecl(
            "sum-eq", tuple(cost_refs) + ("total",), coeffs=(1,) * len(cost_refs) + (-1,),
            const=0))
        return ProblemModel("metamodel", (), tuple(variables), tuple(constraints),
                            ("minimise", "total"))


def _rep_options(vc) -> tuple[str, ...]:
    if vc.kind == "bool":
        return REPS
    if vc.kind == "int-sparse":
        return ("bitset",)
    return ("interval", "bitset")


def build_metamodel(f: FeatureSet, c: Optional[CostTable] = None) -> Metamodel:
    table = cost_of(c)
    decisions = [Decision("backtracking", STRATEGIES), Decision("var-order", VAR_ORDERS)]
    compat = []
    for kind in sorted(f.constraint_kinds):
        if kind not in VARIANTS:
            raise AnalysisError(f"unsupported feature: no propagator options for kind {kind!r}")
        options = VARIANTS[kind]
        if kind == "alldifferent" and "bool" in f.kind_var_kinds.get(kind, ()):
            options = tuple(o for o in options if o != "hall-bounds")
        decisions.append(Decision(f"variant:{kind}", options))
    for vc in f.classes:
        reps = _rep_options(vc)
        widths = tuple(w for w in WIDTHS if w >= width_for_range(vc.lo, vc.hi))
        decisions.append(Decision(f"rep:{vc.name}", reps))
        decisions.append(Decision(f"width:{vc.name}", widths))
        if "boolean" in reps:
            allowed = tuple((r, w) for r in reps for w in widths if r != "boolean" or w == 8)
            compat.append(Compatibility((f"rep:{vc.name}", f"width:{vc.name}"), allowed,
                                        f"boolean representation of {vc.name} needs width 8"))
    for d in decisions:
        if not d.options:
            raise AnalysisError(f"decision {d.name} has no applicable option")
    costs = {(d.name, o): table.cost(d.name, o, f) for d in decisions for o in d.options}
    mm = Metamodel(tuple(decisions), tuple(compat), costs, f)
    report = validate_model(mm.to_problem_model())
    if not report.ok:
        raise AnalysisError(f"metamodel is malformed: {report.findings[0].message}")
    return mm


def solve_metamodel(mm: Metamodel) -> tuple[dict, int]:
    """Optimal assignment ``{decision: option}`` and its total cost."""
    pm = mm.to_problem_model()
    result = solve(pm, SearchConfig("static", "ascending"), record=True)
    if not result.solutions:
        for c in mm.compat:
            if not c.allowed:
                raise AnalysisError(f"infeasible metamodel: {c.reason} cannot be satisfied")
        raise AnalysisError("infeasible metamodel: compatibility constraints conflict")
    best = result.named()
    assignment = {d.name: d.options[best[d.ident]] for d in mm.decisions}
    return assignment, best["total"]

