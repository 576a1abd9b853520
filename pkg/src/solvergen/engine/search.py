"""Propagation queue and depth-first search with optional branch-and-bound."""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..model.ir import ProblemModel
from .memory import make_memory
from .propagators import VARIANTS, Propagator, UnsupportedKind, make_propagator
from .store import DomainStore, default_rep, width_for_range

VAR_ORDERS = ("static", "smallest-domain-first")
VAL_ORDERS = ("ascending", "descending")


@dataclass(frozen=True)
class SearchConfig:
    var_order: str = "static"
    val_order: str = "ascending"
    node_limit: Optional[int] = None
    solution_limit: Optional[int] = None

    def __post_init__(self):
        if self.var_order not in VAR_ORDERS:
            raise ValueError(f"unknown var-order {self.var_order!r}")
        if self.val_order not in VAL_ORDERS:
            raise ValueError(f"unknown val-order {self.val_order!r}")
        for name in ("node_limit", "solution_limit"):
            lim = getattr(self, name)
            if lim is not None and lim <= 0:
                raise ValueError(f"{name} must be positive, got {lim}")


@dataclass(frozen=True)
class EngineOptions:
    """Design choices the engine honours; anything unset takes the baseline."""

    strategy: str = "trailing"
    variants: dict = field(default_factory=dict)  # kind -> variant
    reps: dict = field(default_factory=dict)  # var class -> representation
    widths: dict = field(default_factory=dict)  # var class -> width class


@dataclass
class SolveResult:
    solutions: list[tuple[int, ...]]
    solution_count: int
    nodes: int
    failures: int
    status: str  # all-found | limit-hit | unsat
    best_objective: Optional[int] = None
    var_names: list[str] = field(default_factory=list)

    def named(self, k: int = -1) -> dict[str, int]:
        return dict(zip(self.var_names, self.solutions[k]))


class PropagationEngine:
    """FIFO propagation to fixpoint; a propagator is queued at most once."""

    def __init__(self, store: DomainStore, props: Sequence[Propagator]):
        self.store = store
        self.props = list(props)
        self.watch: list[list[int]] = [[] for _ in range(store.n)]
        for i, p in enumerate(self.props):
            for v in dict.fromkeys(p.scope):
                self.watch[v].append(i)
        self.queued = [False] * len(self.props)

    def propagate(self, initial: Sequence[int] = ()) -> bool:
        store, props, watch, queued = self.store, self.props, self.watch, self.queued
        changed = store.changed
        q = deque()
        for i in initial:
            if not queued[i]:
                queued[i] = True
                q.append(i)
        while True:
            if changed:
                for v in changed:
                    for i in watch[v]:
                        if not queued[i]:
                            queued[i] = True
                            q.append(i)
                changed.clear()
            if not q:
                return True
            i = q.popleft()
            queued[i] = False
            if not props[i].propagate(store):
                for j in q:
                    queued[j] = False
                changed.clear()
                return False


def propagate(store: DomainStore, queue: Sequence[Propagator]) -> str:
    """Run ``queue`` to a common fixpoint; returns ``"stable"`` or ``"failed"``."""
    engine = PropagationEngine(store, queue)
    return "stable" if engine.propagate(range(len(queue))) else "failed"


def build_store(m: ProblemModel, options: EngineOptions) -> DomainStore:
    domains, reps, widths = [], [], []
    for _, d in m.scalars:
        dom = list(d.domain)
        domains.append(dom)
        reps.append(options.reps.get(d.name) or default_rep(dom, d.domain.is_sparse))
        w = options.widths.get(d.name)
        if w is None:
            w = width_for_range(d.domain.lo, d.domain.hi) if dom else 8
        widths.append(w)
    return DomainStore(domains, reps, widths)


def build_propagators(m: ProblemModel, variants: dict) -> list[Propagator]:
    props = []
    for c in m.constraints:
        if c.kind not in VARIANTS:
            raise UnsupportedKind(f"no propagator registered for kind {c.kind!r}")
        props.append(make_propagator(c, m.index, variants.get(c.kind)))
    return props


class Solver:
    def __init__(self, m: ProblemModel, options: EngineOptions | None = None,
                 config: SearchConfig | None = None):
        self.model = m
        self.options = options or EngineOptions()
        self.config = config or SearchConfig()
        self.store = build_store(m, self.options)
        self.props = build_propagators(m, self.options.variants)
        self.memory = make_memory(self.options.strategy, self.store)
        self.engine = PropagationEngine(self.store, self.props)
        self.objective = None
        if m.objective is not None:
            sense, ref = m.objective
            self.objective = (sense == "minimise", m.index[ref])

    def solve(self, record: bool = True) -> SolveResult:
        self.nodes = self.failures = self.count = 0
        self.solutions: list[tuple[int, ...]] = []
        self.best: Optional[int] = None
        self.stopped = False
        self.record = record
        cfg = self.config
        self._node_limit = cfg.node_limit
        self._solution_limit = cfg.solution_limit
        names = self.model.var_names

        if self.store.empty or not self.engine.propagate(range(len(self.props))):
            self.failures += 1
            return SolveResult([], 0, 0, self.failures, "unsat", None, names)

        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 4 * self.store.n + 1000))
        try:
            self._dfs()
        finally:
            sys.setrecursionlimit(old)

        if self.stopped:
            status = "limit-hit"
        else:
            status = "all-found" if self.count else "unsat"
        return SolveResult(self.solutions, self.count, self.nodes, self.failures,
                           status, self.best, names)

    def _select(self) -> Optional[int]:
        s = self.store
        lo, hi = s.lo, s.hi
        if self.config.var_order == "static":
            for v in range(s.n):
                if lo[v] != hi[v]:
                    return v
            return None
        best, best_size = None, None
        for v in range(s.n):
            if lo[v] != hi[v]:
                size = s.size(v)
                if best is None or size < best_size:
                    best, best_size = v, size
        return best

    def _bound(self) -> bool:
        if self.objective is None or self.best is None:
            return True
        minimise, o = self.objective
        if minimise:
            return self.store.set_hi(o, self.best - 1)
        return self.store.set_lo(o, self.best + 1)

    def _on_solution(self) -> None:
        self.count += 1
        sol = self.store.assignment()
        if self.objective is not None:
            self.best = sol[self.objective[1]]
        if self.record:
            self.solutions.append(sol)
        if self._solution_limit is not None and self.count >= self._solution_limit:
            self.stopped = True

    def _dfs(self) -> None:
        v = self._select()
        if v is None:
            self._on_solution()
            return
        store, memory, engine = self.store, self.memory, self.engine
        values = store.values(v)
        if self.config.val_order == "descending":
            values.reverse()
        for x in values:
            if self._node_limit is not None and self.nodes >= self._node_limit:
                self.stopped = True
                return
            self.nodes += 1
            d = memory.mark_depth()
            if store.assign(v, x) and self._bound() and engine.propagate():
                self._dfs()
            else:
                store.changed.clear()
                self.failures += 1
            memory.restore_to_depth(d)
            if self.stopped:
                return


def solve(m: ProblemModel, cfg: SearchConfig | None = None,
          options: EngineOptions | None = None, record: bool = True) -> SolveResult:
    return Solver(m, options, cfg).solve(record=record)
