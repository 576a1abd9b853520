"""Backtracking memory: trailing and copying share one mark/restore interface."""

from __future__ import annotations

from .store import DomainStore

STRATEGIES = ("trailing", "copying")


class BacktrackError(RuntimeError):
    """Restore to a depth that was never marked (or already released)."""


class Trailing:
    name = "trailing"

    def __init__(self, store: DomainStore):
        self.store = store
        self.trail: list = []
        self.marks: list[int] = []
        store.trail = self.trail

    def mark_depth(self) -> int:
        self.marks.append(len(self.trail))
        return len(self.marks) - 1

    def restore_to_depth(self, d: int) -> None:
        if not 0 <= d < len(self.marks):
            raise BacktrackError(f"no mark at depth {d} (have {len(self.marks)})")
        target = self.marks[d]
        trail = self.trail
        while len(trail) > target:
            container, i, old = trail.pop()
            container[i] = old
        del self.marks[d:]

    @property
    def depth(self) -> int:
        return len(self.marks)


class Copying:
    name = "copying"

    def __init__(self, store: DomainStore):
        self.store = store
        self.snapshots: list[tuple] = []
        store.trail = None

    def mark_depth(self) -> int:
        self.snapshots.append(self.store.snapshot())
        return len(self.snapshots) - 1

    def restore_to_depth(self, d: int) -> None:
        if not 0 <= d < len(self.snapshots):
            raise BacktrackError(f"no mark at depth {d} (have {len(self.snapshots)})")
        self.store.restore(self.snapshots[d])
        del self.snapshots[d:]

    @property
    def depth(self) -> int:
        return len(self.snapshots)


def make_memory(strategy: str, store: DomainStore):
    if strategy == "trailing":
        return Trailing(store)
    if strategy == "copying":
        return Copying(store)
    raise ValueError(f"unknown backtracking strategy {strategy!r}")
