"""Component library of the generator and the identifiers that betray each component.

Pruning is verified by text search: when a component is left out of a tree,
none of its identifier tokens may occur in any file (case-insensitive
substring match). A family token is checked only when every member of the
family is left out, e.g. ``sum`` when neither linear kind is included.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import REPS, STRATEGIES, VARIANTS, VAR_ORDERS


@dataclass(frozen=True)
class Component:
    name: str
    idents: tuple[str, ...]
    family: str = ""


FAMILIES: dict[str, tuple[str, ...]] = {
    "linear": ("sum", "linear"),
    "alldifferent": ("alldiff",),
}

_PROP_IDENTS = {
    ("neq-offset", "value"): ("neq",),
    ("alldifferent", "pairwise"): ("pairwise",),
    ("alldifferent", "hall-bounds"): ("hall",),
    ("sum-eq", "bounds"): ("sum-eq", "sum_eq"),
    ("sum-leq", "bounds"): ("sum-leq", "sum_leq"),
    ("element", "bounds"): ("element",),
    ("table", "gac"): ("table", "gac"),
    ("product", "bounds"): ("product",),
    ("lex-leq", "incremental"): ("lex",),
}

_PROP_FAMILY = {"sum-eq": "linear", "sum-leq": "linear", "alldifferent": "alldifferent"}


def _registry() -> dict[str, Component]:
    comps = [
        Component("memory:trailing", ("trail",)),
        Component("memory:copying", ("copying", "snapshot")),
        Component("rep:interval", ("interval",)),
        Component("rep:bitset", ("bitset", "bits")),
        Component("rep:boolean", ("boolean",)),
        Component("search:static", ("first_open",)),
        Component("search:smallest-domain-first", ("smallest",)),
        Component("objective:bound", ("objective", "minimise", "maximise")),
        Component("frontend:instance", ("baked",)),
        Component("frontend:class", ("class_params",)),
        Component("frontend:file", ("model_path",)),
        Component("frontend:reader", ("read_model", "token_re")),
    ]
    for kind, variants in VARIANTS.items():
        for v in variants:
            comps.append(Component(f"propagator:{kind}@{v}", _PROP_IDENTS[(kind, v)],
                                   _PROP_FAMILY.get(kind, "")))
    assert {f"memory:{s}" for s in STRATEGIES} <= {c.name for c in comps}
    assert {f"rep:{r}" for r in REPS} <= {c.name for c in comps}
    assert {f"search:{o}" for o in VAR_ORDERS} <= {c.name for c in comps}
    return {c.name: c for c in comps}


COMPONENTS: dict[str, Component] = _registry()


def pruning_violations(files: dict[str, str], included: set[str]) -> list[tuple[str, str, str]]:
    """``(component, identifier, path)`` for every excluded identifier found in ``files``."""
    lowered = {path: text.lower() for path, text in files.items()}
    found = []

    def scan(owner: str, idents: tuple[str, ...]):
        for ident in idents:
            for path, text in sorted(lowered.items()):
                if ident.lower() in text:
                    found.append((owner, ident, path))

    for name, comp in COMPONENTS.items():
        if name not in included:
            scan(name, comp.idents)
    for family, idents in FAMILIES.items():
        members = [n for n, c in COMPONENTS.items() if c.family == family]
        if not any(n in included for n in members):
            scan(f"family:{family}", idents)
    return found
