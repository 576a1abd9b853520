"""Propagator catalogue: one class per (constraint kind, variant).

Every propagator is contracting and sound, and every one rejects a fully
fixed scope that violates its constraint, so search never reports a
non-solution even when a representation cannot hold the holes it would like
to punch.
"""

from __future__ import annotations

from ..model.ir import ConstraintDecl
from .store import DomainStore

# Variants per kind; the first entry is the baseline default.
VARIANTS: dict[str, tuple[str, ...]] = {
    "neq-offset": ("value",),
    "alldifferent": ("pairwise", "hall-bounds"),
    "sum-eq": ("bounds",),
    "sum-leq": ("bounds",),
    "element": ("bounds",),
    "table": ("gac",),
    "product": ("bounds",),
    "lex-leq": ("incremental",),
}


class UnsupportedKind(ValueError):
    """A constraint kind (or variant) with no registered propagator."""


def _cdiv(a: int, b: int) -> int:
    return -((-a) // b)


class Propagator:
    kind = ""
    variant = ""

    def __init__(self, scope):
        self.scope = tuple(scope)

    def propagate(self, s: DomainStore) -> bool:
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.kind}@{self.variant} {self.scope}>"


class NeqOffset(Propagator):
    """x != y + c, pruning once either side is fixed."""

    kind, variant = "neq-offset", "value"

    def __init__(self, scope, c):
        super().__init__(scope)
        self.x, self.y = scope
        self.c = c

    def propagate(self, s):
        x, y, c = self.x, self.y, self.c
        lo, hi = s.lo, s.hi
        if lo[x] == hi[x] and not s.remove(y, lo[x] - c):
            return False
        if lo[y] == hi[y] and not s.remove(x, lo[y] + c):
            return False
        return True


class AllDiffPairwise(Propagator):
    kind, variant = "alldifferent", "pairwise"

    def propagate(self, s):
        lo, hi = s.lo, s.hi
        scope = self.scope
        for i, v in enumerate(scope):
            if lo[v] == hi[v]:
                val = lo[v]
                for j, w in enumerate(scope):
                    if j != i and not s.remove(w, val):
                        return False
        return True


def hall_intervals(lo, hi, scope):
    """All Hall intervals ``(a, b)`` over current bounds, or ``None`` on overflow.

    For each distinct lower bound ``a`` the variables with ``lo >= a`` are swept
    by increasing upper bound; after the last variable with upper bound ``b``
    the sweep has counted exactly those inside ``[a, b]``, which is a Hall
    interval when the count equals ``b - a + 1``.
    """
    pairs = sorted((hi[v], lo[v]) for v in scope)
    found = []
    for a in sorted({l for _, l in pairs}):
        ups = [b for b, l in pairs if l >= a]
        last = len(ups) - 1
        for k, b in enumerate(ups):
            if k < last and ups[k + 1] == b:
                continue
            if k + 1 > b - a + 1:
                return None
            if k + 1 == b - a + 1:
                found.append((a, b))
    return found


class AllDiffHallBounds(Propagator):
    """Fixed-value elimination plus Hall-interval bounds filtering."""

    kind, variant = "alldifferent", "hall-bounds"

    def propagate(self, s):
        lo, hi = s.lo, s.hi
        scope = self.scope
        while True:
            for i, v in enumerate(scope):
                if lo[v] == hi[v]:
                    val = lo[v]
                    for j, w in enumerate(scope):
                        if j != i and not s.remove(w, val):
                            return False
            halls = hall_intervals(lo, hi, scope)
            if halls is None:
                return False
            changed = False
            for a, b in halls:
                for v in scope:
                    lv, hv = lo[v], hi[v]
                    if lv >= a and hv <= b:
                        continue
                    if a <= lv <= b:
                        if not s.set_lo(v, b + 1):
                            return False
                        changed = True
                        hv = hi[v]
                    if a <= hv <= b:
                        if not s.set_hi(v, a - 1):
                            return False
                        changed = True
            if not changed:
                return True


class LinearBounds(Propagator):
    """sum(c_i * x_i) = rhs (or <= rhs) filtered on bounds."""

    variant = "bounds"

    def __init__(self, scope, coeffs, rhs, kind):
        super().__init__(scope)
        self.kind = kind
        self.terms = tuple(zip(coeffs, scope))
        self.rhs = rhs
        self.eq = kind == "sum-eq"

    def propagate(self, s):
        lo, hi = s.lo, s.hi
        mins, maxs = [], []
        smin = smax = 0
        for c, v in self.terms:
            if c >= 0:
                a, b = c * lo[v], c * hi[v]
            else:
                a, b = c * hi[v], c * lo[v]
            mins.append(a)
            maxs.append(b)
            smin += a
            smax += b
        rhs = self.rhs
        if smin > rhs or (self.eq and smax < rhs):
            return False
        for k, (c, v) in enumerate(self.terms):
            if c == 0:
                continue
            upper = rhs - (smin - mins[k])  # c*x <= upper
            if c > 0:
                if upper // c < hi[v] and not s.set_hi(v, upper // c):
                    return False
            elif _cdiv(upper, c) > lo[v] and not s.set_lo(v, _cdiv(upper, c)):
                return False
            if self.eq:
                lower = rhs - (smax - maxs[k])  # c*x >= lower
                if c > 0:
                    if not s.set_lo(v, _cdiv(lower, c)):
                        return False
                elif not s.set_hi(v, lower // c):
                    return False
        return True


class ElementBounds(Propagator):
    """array[idx] = val with idx zero-based."""

    kind, variant = "element", "bounds"

    def __init__(self, scope):
        super().__init__(scope)
        self.array = self.scope[:-2]
        self.idx, self.val = self.scope[-2], self.scope[-1]

    def propagate(self, s):
        lo, hi = s.lo, s.hi
        arr, idx, val = self.array, self.idx, self.val
        if not (s.set_lo(idx, 0) and s.set_hi(idx, len(arr) - 1)):
            return False
        for i in s.values(idx):
            a = arr[i]
            if (hi[a] < lo[val] or lo[a] > hi[val]) and not s.remove(idx, i):
                return False
        live = [arr[i] for i in s.values(idx)]
        if not (s.set_lo(val, min(lo[a] for a in live))
                and s.set_hi(val, max(hi[a] for a in live))):
            return False
        if lo[idx] == hi[idx]:
            a = arr[lo[idx]]
            if not (s.set_lo(a, lo[val]) and s.set_hi(a, hi[val])
                    and s.set_lo(val, lo[a]) and s.set_hi(val, hi[a])):
                return False
        return True


class TableGAC(Propagator):
    """Positive table filtered by scanning every tuple for support."""

    kind, variant = "table", "gac"

    def __init__(self, scope, tuples):
        super().__init__(scope)
        self.tuples = tuple(tuples)

    def propagate(self, s):
        scope = self.scope
        n = len(scope)
        supported = [set() for _ in range(n)]
        contains = s.contains
        any_live = False
        for t in self.tuples:
            for j in range(n):
                if not contains(scope[j], t[j]):
                    break
            else:
                any_live = True
                for j in range(n):
                    supported[j].add(t[j])
        if not any_live:
            return False
        for j in range(n):
            if not s.keep_only(scope[j], supported[j]):
                return False
        return True


def _quotient_hull(zlo, zhi, slo, shi):
    """Hull of {q : q*y in [zlo, zhi] for some y in [slo, shi]}, 0 not in [slo, shi]."""
    return (min(_cdiv(z, y) for z in (zlo, zhi) for y in (slo, shi)),
            max(z // y for z in (zlo, zhi) for y in (slo, shi)))


class ProductBounds(Propagator):
    """x * y = z filtered on bounds."""

    kind, variant = "product", "bounds"

    def __init__(self, scope):
        super().__init__(scope)
        self.x, self.y, self.z = scope

    def _divide(self, s, target, other):
        lo, hi = s.lo, s.hi
        z = self.z
        zlo, zhi = lo[z], hi[z]
        olo, ohi = lo[other], hi[other]
        if olo <= 0 <= ohi and zlo <= 0 <= zhi:
            return True
        parts = []
        if olo <= -1:
            parts.append(_quotient_hull(zlo, zhi, olo, min(ohi, -1)))
        if ohi >= 1:
            parts.append(_quotient_hull(zlo, zhi, max(olo, 1), ohi))
        if not parts:
            return False  # other is fixed to 0 while z excludes 0
        return (s.set_lo(target, min(p[0] for p in parts))
                and s.set_hi(target, max(p[1] for p in parts)))

    def propagate(self, s):
        x, y, z = self.x, self.y, self.z
        lo, hi = s.lo, s.hi
        corners = (lo[x] * lo[y], lo[x] * hi[y], hi[x] * lo[y], hi[x] * hi[y])
        if not (s.set_lo(z, min(corners)) and s.set_hi(z, max(corners))):
            return False
        if not (lo[z] <= 0 <= hi[z]):
            if not (s.remove(x, 0) and s.remove(y, 0)):
                return False
        return self._divide(s, x, y) and self._divide(s, y, x)


class LexLeq(Propagator):
    """xs <=lex ys; the first not-yet-equal position is recomputed per call."""

    kind, variant = "lex-leq", "incremental"

    def __init__(self, scope):
        super().__init__(scope)
        h = len(self.scope) // 2
        self.pairs = tuple(zip(self.scope[:h], self.scope[h:]))

    def propagate(self, s):
        lo, hi = s.lo, s.hi
        pairs = self.pairs
        n = len(pairs)
        i = 0
        while i < n:
            x, y = pairs[i]
            if lo[x] == hi[x] == lo[y] == hi[y]:
                i += 1
                continue
            break
        if i == n:
            return True
        x, y = pairs[i]
        strict = not self._tail_can_be_leq(s, i + 1)
        bump = 1 if strict else 0
        if not (s.set_hi(x, hi[y] - bump) and s.set_lo(y, lo[x] + bump)):
            return False
        return True

    def _tail_can_be_leq(self, s, start):
        lo, hi = s.lo, s.hi
        for x, y in self.pairs[start:]:
            if lo[x] < hi[y]:
                return True
            if lo[x] > hi[y]:
                return False
        return True


REGISTRY: dict[tuple[str, str], type] = {
    ("neq-offset", "value"): NeqOffset,
    ("alldifferent", "pairwise"): AllDiffPairwise,
    ("alldifferent", "hall-bounds"): AllDiffHallBounds,
    ("sum-eq", "bounds"): LinearBounds,
    ("sum-leq", "bounds"): LinearBounds,
    ("element", "bounds"): ElementBounds,
    ("table", "gac"): TableGAC,
    ("product", "bounds"): ProductBounds,
    ("lex-leq", "incremental"): LexLeq,
}


def make_propagator(c: ConstraintDecl, index: dict[str, int], variant: str | None = None):
    variant = variant or VARIANTS.get(c.kind, ("",))[0]
    cls = REGISTRY.get((c.kind, variant))
    if cls is None:
        raise UnsupportedKind(f"no propagator for {c.kind}@{variant}")
    scope = [index[n] for n in c.scope]
    if c.kind == "neq-offset":
        return cls(scope, c.const)
    if c.kind in ("sum-eq", "sum-leq"):
        return cls(scope, c.coeffs, c.const, c.kind)
    if c.kind == "table":
        return cls(scope, c.tuples)
    return cls(scope)
