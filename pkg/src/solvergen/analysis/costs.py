"""Cost table for the metamodel: static feature-scaled weights plus probe overrides.

The static weights are configuration, not measurements. They are chosen so that
small benchmark models get decisive answers:

* bitset is cheaper than interval while a class spans at most 128 values;
* wider storage costs more;
* hall-bounds is cheaper than pairwise once an alldifferent has 4 or more variables;
* trailing is cheaper than copying above 32 variables (and wins ties below);
* static variable order wins ties against smallest-domain-first.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from ..model.features import FeatureSet, VarClass


@dataclass(frozen=True)
class CostTable:
    # backtracking
    trailing_base: int = 10
    copying_base: int = 10
    copying_threshold: int = 32  # variables; copying pays beyond this
    copying_step: int = 32
    # search
    static_order: int = 1
    sdf_order: int = 2
    # representation, per variable
    interval_rep: int = 6
    bitset_rep_per_word: int = 2  # per started 64-value word
    boolean_rep: int = 1
    width_per_byte: int = 1
    # propagator variants, per constraint
    hall_per_var: int = 4
    hall_offset: int = -1
    other_variant: int = 1
    # measured overrides: (decision, option) -> cost
    probes: dict = field(default_factory=dict)

    def with_probes(self, entries: dict) -> "CostTable":
        merged = dict(self.probes)
        merged.update(entries)
        return replace(self, probes=merged)

    def cost(self, decision: str, option, f: FeatureSet) -> int:
        key = (decision, option)
        if key in self.probes:
            return self.probes[key]
        c = self._static(decision, option, f)
        if c < 0:
            raise ValueError(f"negative cost for {decision}={option}")
        return c

    def _static(self, decision: str, option, f: FeatureSet) -> int:
        if decision == "backtracking":
            if option == "trailing":
                return self.trailing_base
            extra = 0
            if f.var_count > self.copying_threshold:
                extra = 1 + (f.var_count - self.copying_threshold - 1) // self.copying_step
            return self.copying_base + extra
        if decision == "var-order":
            return self.static_order if option == "static" else self.sdf_order
        head, _, arg = decision.partition(":")
        if head == "variant":
            n = f.constraint_kinds.get(arg, 0)
            if arg == "alldifferent":
                s = f.kind_max_arity.get(arg, 0)
                per = s * s if option == "pairwise" else self.hall_per_var * s + self.hall_offset
                return n * max(per, 0)
            return n * self.other_variant
        vc = f.class_named(arg)
        if head == "rep":
            return vc.count * self._rep_unit(option, vc)
        if head == "width":
            return vc.count * (option // 8) * self.width_per_byte
        raise KeyError(decision)

    def _rep_unit(self, rep: str, vc: VarClass) -> int:
        if rep == "interval":
            return self.interval_rep
        if rep == "bitset":
            return self.bitset_rep_per_word * (1 + (vc.extent - 1) // 64)
        return self.boolean_rep


DEFAULT_COSTS = CostTable()


def cost_of(table: Optional[CostTable]) -> CostTable:
    return table if table is not None else DEFAULT_COSTS
