"""Structural checks over a ProblemModel. Findings are data, never raised."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .ir import KINDS, ProblemModel

_REF = re.compile(r"^([A-Za-z_]\w*)((?:\[\d+\])*)$")


@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    constraint: Optional[int] = None
    name: Optional[str] = None

    def __str__(self) -> str:
        return self.message


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def add(self, code, message, constraint=None, name=None):
        self.findings.append(Finding(code, message, constraint, name))

    def __len__(self):
        return len(self.findings)

    def __iter__(self):
        return iter(self.findings)


def classify_ref(m: ProblemModel, ref: str) -> Optional[tuple[str, str]]:
    """Return ``None`` for a declared scalar name, else ``(code, message)``."""
    if ref in m.index:
        return None
    match = _REF.match(ref)
    if match:
        base, dims = match.groups()
        for d in m.variables:
            if d.name == base and d.shape:
                idx = [int(i) for i in re.findall(r"\d+", dims)]
                if len(idx) != len(d.shape):
                    return "arity", f"wrong number of indices in {ref!r}"
                return "index", f"index out of bounds in {ref!r} (extent {list(d.shape)})"
    return "undeclared", f"undeclared variable {ref!r}"


def _arity_problem(c) -> Optional[str]:
    k, n = c.kind, len(c.scope)
    if k == "neq-offset" and n != 2:
        return "neq-offset takes exactly 2 variables"
    if k == "product" and n != 3:
        return "product takes exactly 3 variables"
    if k in ("sum-eq", "sum-leq") and len(c.coeffs) != n:
        return f"{k} has {len(c.coeffs)} coefficients for {n} variables"
    if k == "element" and n < 3:
        return "element needs a non-empty array, an index and a value"
    if k == "lex-leq" and n % 2:
        return "lex-leq vectors differ in length"
    if k == "table":
        for t in c.tuples:
            if len(t) != n:
                return f"table tuple {t} has arity {len(t)}, scope has {n}"
    return None


def validate_model(m: ProblemModel) -> ValidationReport:
    rep = ValidationReport()
    seen: set[str] = set()
    for d in m.variables:
        if d.name in seen:
            rep.add("duplicate", f"duplicate variable {d.name!r}", name=d.name)
        seen.add(d.name)
        if any(e <= 0 for e in d.shape):
            rep.add("shape", f"array {d.name!r} has a non-positive extent", name=d.name)
        dom = d.domain
        if d.kind == "bool":
            if (dom.lo, dom.hi) != (0, 1) or dom.is_sparse:
                rep.add("domain", f"bool variable {d.name!r} must have domain {{0,1}}", name=d.name)
        elif d.kind != "int":
            rep.add("kind", f"variable {d.name!r} has unknown kind {d.kind!r}", name=d.name)
        elif dom.is_sparse:
            vals = dom.values
            if not vals:
                rep.add("domain", f"malformed domain for {d.name!r}: empty value list", name=d.name)
            elif list(vals) != sorted(set(vals)):
                rep.add("domain", f"malformed domain for {d.name!r}: values not sorted and distinct",
                        name=d.name)
        elif dom.hi < dom.lo:
            rep.add("domain", f"malformed domain for {d.name!r}: {dom.lo}..{dom.hi}", name=d.name)
    if len(seen) == len(m.variables) and len(m.index) != len(m.scalars):
        rep.add("duplicate", "flattened variable names collide")

    for i, c in enumerate(m.constraints):
        if c.kind not in KINDS:
            rep.add("kind", f"constraint {i}: unknown kind {c.kind!r}", constraint=i)
            continue
        for ref in c.scope:
            problem = classify_ref(m, ref)
            if problem:
                code, msg = problem
                rep.add(code, f"constraint {i}: {msg}", constraint=i, name=ref)
        problem = _arity_problem(c)
        if problem:
            rep.add("arity", f"constraint {i}: arity mismatch: {problem}", constraint=i)

    if m.objective is not None:
        sense, ref = m.objective
        if sense not in ("minimise", "maximise"):
            rep.add("objective", f"unknown objective sense {sense!r}")
        if ref not in m.index:
            rep.add("objective", f"objective references undeclared variable {ref!r}", name=ref)
        elif dict(m.scalars)[ref].kind != "int":
            rep.add("objective", f"objective variable {ref!r} is not an int variable", name=ref)
    return rep
