"""Problem model types and the canonical text renderer."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

KINDS = (
    "neq-offset",
    "alldifferent",
    "sum-eq",
    "sum-leq",
    "element",
    "table",
    "product",
    "lex-leq",
)


@dataclass(frozen=True)
class DomainLiteral:
    """Either a contiguous range ``lo..hi`` or an explicit sorted value list."""

    lo: int
    hi: int
    values: Optional[tuple[int, ...]] = None

    @classmethod
    def range(cls, lo: int, hi: int) -> "DomainLiteral":
        return cls(lo, hi)

    @classmethod
    def sparse(cls, values) -> "DomainLiteral":
        vals = tuple(values)
        if not vals:
            return cls(1, 0, ())
        return cls(min(vals), max(vals), vals)

    @property
    def is_sparse(self) -> bool:
        return self.values is not None

    def __iter__(self) -> Iterator[int]:
        if self.values is not None:
            return iter(self.values)
        return iter(range(self.lo, self.hi + 1))

    def __len__(self) -> int:
        if self.values is not None:
            return len(self.values)
        return max(0, self.hi - self.lo + 1)

    def __contains__(self, x: int) -> bool:
        if self.values is not None:
            return x in self.values
        return self.lo <= x <= self.hi

    def render(self) -> str:
        if self.values is not None:
            return "int{" + ",".join(map(str, self.values)) + "}"
        return f"int({self.lo}..{self.hi})"


BOOL_DOMAIN = DomainLiteral(0, 1)


@dataclass(frozen=True)
class VarDecl:
    name: str
    kind: str  # "bool" | "int"
    domain: DomainLiteral
    shape: tuple[int, ...] = ()

    def flat_names(self) -> list[str]:
        if not self.shape:
            return [self.name]
        idx = itertools.product(*(range(n) for n in self.shape))
        return [self.name + "".join(f"[{i}]" for i in ix) for ix in idx]

    @property
    def size(self) -> int:
        n = 1
        for e in self.shape:
            n *= e
        return n

    def render(self) -> str:
        dims = "".join(f"[{n}]" for n in self.shape)
        dom = "bool" if self.kind == "bool" else self.domain.render()
        return f"var {self.name}{dims} : {dom}"


@dataclass(frozen=True)
class ConstraintDecl:
    """One constraint over flattened variable names.

    Argument layout per kind:

    - ``neq-offset``: scope ``(x, y)``, ``const`` c, meaning x != y + c
    - ``alldifferent``: scope is the variable list
    - ``sum-eq``/``sum-leq``: ``coeffs`` pairs with scope, ``const`` is the rhs
    - ``element``: scope is ``array + (idx, val)``
    - ``table``: scope plus ``tuples`` of allowed rows
    - ``product``: scope ``(x, y, z)`` meaning x*y = z
    - ``lex-leq``: scope is ``xs + ys`` (equal halves)
    """

    kind: str
    scope: tuple[str, ...]
    coeffs: tuple[int, ...] = ()
    const: int = 0
    tuples: tuple[tuple[int, ...], ...] = ()

    def render(self) -> str:
        k, s = self.kind, self.scope
        lst = lambda xs: "[" + ",".join(map(str, xs)) + "]"  # noqa: E731
        if k == "neq-offset":
            body = f"{s[0]} {s[1]} {self.const}"
        elif k == "alldifferent":
            body = lst(s)
        elif k in ("sum-eq", "sum-leq"):
            body = f"{lst(self.coeffs)} {lst(s)} {self.const}"
        elif k == "element":
            body = f"{lst(s[:-2])} {s[-2]} {s[-1]}"
        elif k == "table":
            rows = " ; ".join("(" + ",".join(map(str, t)) + ")" for t in self.tuples)
            body = f"{lst(s)} {{ {rows} }}"
        elif k == "product":
            body = " ".join(s)
        elif k == "lex-leq":
            h = len(s) // 2
            body = f"{lst(s[:h])} {lst(s[h:])}"
        else:
            raise ValueError(f"unknown constraint kind {k!r}")
        return f"constraint {k} {body}"


@dataclass(frozen=True)
class ProblemModel:
    name: str
    params: tuple[tuple[str, int], ...] = ()
    variables: tuple[VarDecl, ...] = ()
    constraints: tuple[ConstraintDecl, ...] = ()
    objective: Optional[tuple[str, str]] = None  # ("minimise" | "maximise", var)

    @cached_property
    def scalars(self) -> list[tuple[str, VarDecl]]:
        """Flattened ``(name, declaration)`` pairs in declaration order."""
        return [(n, d) for d in self.variables for n in d.flat_names()]

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, (n, _) in enumerate(self.scalars)}

    @property
    def var_names(self) -> list[str]:
        return [n for n, _ in self.scalars]

    def param(self, name: str) -> int:
        return dict(self.params)[name]


def render_model(m: ProblemModel) -> str:
    lines = [f"model {m.name}"]
    lines += [f"param {k} = {v}" for k, v in m.params]
    lines += [d.render() for d in m.variables]
    lines += [c.render() for c in m.constraints]
    if m.objective is not None:
        lines.append(f"{m.objective[0]} {m.objective[1]}")
    return "\n".join(lines) + "\n"
