"""Direct semantic evaluation of constraints; the oracle primitive."""

from __future__ import annotations

from typing import Mapping, Sequence, Union

from ..model.ir import ConstraintDecl, ProblemModel


def holds(c: ConstraintDecl, val: Mapping[str, int]) -> bool:
    xs = [val[n] for n in c.scope]
    k = c.kind
    if k == "neq-offset":
        return xs[0] != xs[1] + c.const
    if k == "alldifferent":
        return len(set(xs)) == len(xs)
    if k == "sum-eq":
        return sum(a * x for a, x in zip(c.coeffs, xs)) == c.const
    if k == "sum-leq":
        return sum(a * x for a, x in zip(c.coeffs, xs)) <= c.const
    if k == "element":
        arr, idx, v = xs[:-2], xs[-2], xs[-1]
        return 0 <= idx < len(arr) and arr[idx] == v
    if k == "table":
        return tuple(xs) in set(c.tuples)
    if k == "product":
        return xs[0] * xs[1] == xs[2]
    if k == "lex-leq":
        h = len(xs) // 2
        return xs[:h] <= xs[h:]
    raise ValueError(f"unknown constraint kind {k!r}")


def check_assignment(m: ProblemModel, assignment: Union[Mapping[str, int], Sequence[int]]) -> bool:
    """True iff every constraint holds and every value lies in its domain."""
    names = m.var_names
    if isinstance(assignment, Mapping):
        missing = [n for n in names if n not in assignment]
        if missing:
            raise ValueError(f"incomplete assignment: missing {missing[:5]}")
        val = dict(assignment)
    else:
        if len(assignment) != len(names):
            raise ValueError(
                f"incomplete assignment: {len(assignment)} values for {len(names)} variables")
        val = dict(zip(names, assignment))
    for n, d in m.scalars:
        if val[n] not in d.domain:
            return False
    return all(holds(c, val) for c in m.constraints)
