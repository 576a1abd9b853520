"""Domain store: one flat array per field, per-variable representation.

``interval`` and ``boolean`` variables keep bounds only; ``bitset`` variables
additionally keep a Python int bit mask relative to a fixed offset. Bounds live
in :class:`array.array` buffers whose item size is the storage width class.
"""

from __future__ import annotations

from array import array
from typing import Iterable, Optional, Sequence

REPS = ("interval", "bitset", "boolean")
WIDTHS = (8, 16, 32, 64)
TYPECODES = {8: "b", 16: "h", 32: "i", 64: "q"}


class StoreError(ValueError):
    pass


def width_for_range(lo: int, hi: int) -> int:
    """Smallest signed width class holding both bounds and the extent."""
    if lo > hi:
        raise ValueError(f"empty range {lo}..{hi}")
    for w in WIDTHS:
        top = (1 << (w - 1)) - 1
        if -top - 1 <= lo and hi <= top and hi - lo <= top:
            return w
    raise StoreError(f"range {lo}..{hi} does not fit a 64-bit signed width")


def fits_width(lo: int, hi: int, width: int) -> bool:
    try:
        return width_for_range(lo, hi) <= width
    except StoreError:
        return False


def default_rep(values: Sequence[int] | range, sparse: bool) -> str:
    """Baseline representation: interval above 128 values, else bitset."""
    return "bitset" if sparse or len(values) <= 128 else "interval"


class DomainStore:
    def __init__(
        self,
        domains: Sequence[Iterable[int]],
        reps: Optional[Sequence[str]] = None,
        widths: Optional[Sequence[int]] = None,
    ):
        doms = [sorted(set(d)) for d in domains]
        n = len(doms)
        self.n = n
        self.reps = list(reps) if reps is not None else [
            default_rep(d, len(d) != (d[-1] - d[0] + 1) if d else False) for d in doms]
        self.widths = list(widths) if widths is not None else [64] * n
        self.width = max(self.widths, default=8)
        self.empty = any(not d for d in doms)
        lows, highs = [], []
        self.bits: list[Optional[int]] = [None] * n
        self.off = [0] * n
        for v, d in enumerate(doms):
            rep = self.reps[v]
            if rep not in REPS:
                raise StoreError(f"unknown representation {rep!r}")
            lo, hi = (d[0], d[-1]) if d else (0, 0)
            if d and not fits_width(lo, hi, self.widths[v]):
                raise StoreError(f"domain {lo}..{hi} exceeds width {self.widths[v]}")
            if rep == "boolean" and not (0 <= lo and hi <= 1):
                raise StoreError("boolean representation needs a domain within {0,1}")
            if rep != "bitset" and d and len(d) != hi - lo + 1:
                raise StoreError(f"{rep} representation cannot hold a sparse domain")
            if rep == "bitset" and d:
                self.off[v] = lo
                mask = 0
                for x in d:
                    mask |= 1 << (x - lo)
                self.bits[v] = mask
            lows.append(lo)
            highs.append(hi)
        tc = TYPECODES[self.width]
        self.lo = array(tc, lows)
        self.hi = array(tc, highs)
        self.trail: Optional[list] = None
        self.changed: list[int] = []

    # queries

    def is_fixed(self, v: int) -> bool:
        return self.lo[v] == self.hi[v]

    def size(self, v: int) -> int:
        b = self.bits[v]
        if b is None:
            return self.hi[v] - self.lo[v] + 1
        return b.bit_count()

    def contains(self, v: int, x: int) -> bool:
        if x < self.lo[v] or x > self.hi[v]:
            return False
        b = self.bits[v]
        return b is None or (b >> (x - self.off[v])) & 1 == 1

    def values(self, v: int) -> list[int]:
        lo, hi, b = self.lo[v], self.hi[v], self.bits[v]
        if b is None:
            return list(range(lo, hi + 1))
        off = self.off[v]
        return [x for x in range(lo, hi + 1) if (b >> (x - off)) & 1]

    def domain(self, v: int) -> frozenset:
        return frozenset(self.values(v))

    # updates; each returns False when the domain would become empty

    def set_lo(self, v: int, x: int) -> bool:
        lo = self.lo
        old = lo[v]
        if x <= old:
            return True
        if x > self.hi[v]:
            return False
        trail = self.trail
        b = self.bits[v]
        if b is None:
            if trail is not None:
                trail.append((lo, v, old))
            lo[v] = x
        else:
            s = x - self.off[v]
            nb = (b >> s) << s
            if trail is not None:
                trail.append((self.bits, v, b))
                trail.append((lo, v, old))
            self.bits[v] = nb
            lo[v] = self.off[v] + (nb & -nb).bit_length() - 1
        self.changed.append(v)
        return True

    def set_hi(self, v: int, x: int) -> bool:
        hi = self.hi
        old = hi[v]
        if x >= old:
            return True
        if x < self.lo[v]:
            return False
        trail = self.trail
        b = self.bits[v]
        if b is None:
            if trail is not None:
                trail.append((hi, v, old))
            hi[v] = x
        else:
            nb = b & ((1 << (x - self.off[v] + 1)) - 1)
            if trail is not None:
                trail.append((self.bits, v, b))
                trail.append((hi, v, old))
            self.bits[v] = nb
            hi[v] = self.off[v] + nb.bit_length() - 1
        self.changed.append(v)
        return True

    def remove(self, v: int, x: int) -> bool:
        lo, hi = self.lo[v], self.hi[v]
        if x < lo or x > hi:
            return True
        if x == lo:
            return lo != hi and self.set_lo(v, x + 1)
        if x == hi:
            return self.set_hi(v, x - 1)
        b = self.bits[v]
        if b is None:
            return True  # holes are not representable
        m = 1 << (x - self.off[v])
        if b & m:
            if self.trail is not None:
                self.trail.append((self.bits, v, b))
            self.bits[v] = b ^ m
            self.changed.append(v)
        return True

    def assign(self, v: int, x: int) -> bool:
        if not self.contains(v, x):
            return False
        return self.set_lo(v, x) and self.set_hi(v, x)

    def keep_only(self, v: int, allowed: Iterable[int]) -> bool:
        """Intersect with ``allowed``; interval variables keep the hull."""
        lo, hi, b = self.lo[v], self.hi[v], self.bits[v]
        inside = [a for a in allowed if lo <= a <= hi]
        if not inside:
            return False
        if b is None:
            return self.set_lo(v, min(inside)) and self.set_hi(v, max(inside))
        off = self.off[v]
        mask = 0
        for a in inside:
            mask |= 1 << (a - off)
        nb = b & mask
        if nb == 0:
            return False
        if nb != b:
            if self.trail is not None:
                self.trail.append((self.bits, v, b))
                self.trail.append((self.lo, v, lo))
                self.trail.append((self.hi, v, hi))
            self.bits[v] = nb
            self.lo[v] = off + (nb & -nb).bit_length() - 1
            self.hi[v] = off + nb.bit_length() - 1
            self.changed.append(v)
        return True

    # whole-store state

    def snapshot(self) -> tuple:
        return (self.lo[:], self.hi[:], self.bits[:])

    def restore(self, snap: tuple) -> None:
        lo, hi, bits = snap
        self.lo[:] = lo
        self.hi[:] = hi
        self.bits[:] = bits

    def assignment(self) -> tuple[int, ...]:
        return tuple(self.lo)
