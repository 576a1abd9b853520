from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..engine import EngineOptions, SearchConfig, Solver
from ..model import ProblemModel, validate_model
from ..model.features import extract_features
from ..spec import PartialSpec, SolverSpec, SpecError, VarClassChoice, merge_partial
from ..spec import validate_against_model
from .costs import CostTable, cost_of
from .metamodel import AnalysisError, Metamodel, build_metamodel, solve_metamodel

MAX_ROUNDS = 3
PROBE_BUDGET = 2000


@dataclass(frozen=True)
class ProbeEntry:
    decision: str
    option: object
    nodes: int
    solutions: int
    status: str
    elapsed_us: int

    @property
    def us_per_node(self) -> float:
        return self.elapsed_us / max(self.nodes, 1)


def options_from(assignment: dict) -> tuple[EngineOptions, SearchConfig]:
    """Engine settings for a metamodel assignment."""
    variants, reps, widths = {}, {}, {}
    for name, value in assignment.items():
        head, _, arg = name.partition(":")
        if head == "variant":
            variants[arg] = value
        elif head == "rep":
            reps[arg] = value
        elif head == "width":
            widths[arg] = value
    opts = EngineOptions(assignment["backtracking"], variants, reps, widths)
    return opts, SearchConfig(assignment["var-order"])


def probe(m: ProblemModel, candidates: Sequence[tuple[str, object, dict]],
          node_budget: int) -> list[ProbeEntry]:
    """Time the general engine on ``m`` under each candidate option set.

    Each candidate is ``(decision, option, assignment)``; the run stops after
    ``node_budget`` nodes. Entries come back in candidate order.
    """
    if node_budget < 1:
        raise ValueError(f"node budget must be at least 1, got {node_budget}")
    entries = []
    for decision, option, assignment in candidates:
        opts, cfg = options_from(assignment)
        cfg = SearchConfig(cfg.var_order, cfg.val_order, node_limit=node_budget)
        t0 = time.perf_counter()
        result = Solver(m, opts, cfg).solve(record=False)
        elapsed = time.perf_counter() - t0
        entries.append(ProbeEntry(decision, option, result.nodes, result.solution_count,
                                  result.status, max(1, round(elapsed * 1e6))))
    return entries


def probe_candidates(mm: Metamodel, assignment: dict) -> list[tuple[str, object, dict]]:
    """Vary one search-affecting decision at a time around ``assignment``."""
    out = []
    for d in mm.decisions:
        if len(d.options) < 2 or d.name.startswith(("rep:", "width:")):
            continue
        for o in d.options:
            out.append((d.name, o, {**assignment, d.name: o}))
    return out


def fold_probes(table: CostTable, entries: Sequence[ProbeEntry]) -> CostTable:
    """Measured elapsed microseconds replace the static cost of every probed option."""
    return table.with_probes({(e.decision, e.option): e.elapsed_us for e in entries})


@dataclass
class Analysis:
    spec: SolverSpec
    metamodel: Metamodel
    assignment: dict
    cost: int
    costs: CostTable
    probes: list = field(default_factory=list)


def _spec_from(m: ProblemModel, mm: Metamodel, assignment: dict) -> SolverSpec:
    props = {name.split(":", 1)[1]: v for name, v in assignment.items()
             if name.startswith("variant:")}
    classes = {vc.name: VarClassChoice(assignment[f"rep:{vc.name}"],
                                       assignment[f"width:{vc.name}"], (vc.lo, vc.hi))
               for vc in mm.features.classes}
    spec = SolverSpec(backtracking=assignment["backtracking"], propagators=props,
                      var_classes=classes, search=SearchConfig(assignment["var-order"]))
    prov = {k: "analyser" for k in spec.decisions() if k != "embed"}
    return SolverSpec(backtracking=spec.backtracking, propagators=props, var_classes=classes,
                      search=spec.search, provenance=prov)


def analyse_detailed(m: ProblemModel, p: Optional[PartialSpec] = None, rounds: int = 1,
                     costs: Optional[CostTable] = None,
                     node_budget: int = PROBE_BUDGET) -> Analysis:
    if rounds < 1:
        raise ValueError(f"rounds must be at least 1, got {rounds}")
    rounds = min(rounds, MAX_ROUNDS)
    report = validate_model(m)
    if not report.ok:
        raise AnalysisError(f"invalid model: {report.findings[0].message}")
    f = extract_features(m)
    table = cost_of(costs)
    probes: list[ProbeEntry] = []
    for _ in range(rounds - 1):
        mm = build_metamodel(f, table)
        assignment, _ = solve_metamodel(mm)
        batch = probe(m, probe_candidates(mm, assignment), node_budget)
        probes.extend(batch)
        table = fold_probes(table, batch)
    mm = build_metamodel(f, table)
    assignment, cost = solve_metamodel(mm)
    spec = _spec_from(m, mm, assignment)
    if p is not None:
        try:
            spec = merge_partial(p, spec, m)
        except SpecError as e:
            raise AnalysisError(str(e)) from None
    report = validate_against_model(spec, m)
    if not report.ok:
        raise AnalysisError(f"analysis produced an unsound spec: {report.findings[0].message}")
    return Analysis(spec, mm, assignment, cost, table, probes)


def analyse(m: ProblemModel, p: Optional[PartialSpec] = None, rounds: int = 1,
            costs: Optional[CostTable] = None, node_budget: int = PROBE_BUDGET) -> SolverSpec:
    """Derive a solver specification for ``m``; ``p`` overrides individual decisions."""
    return analyse_detailed(m, p, rounds, costs, node_budget).spec
