"""Fixed-capacity implicit binary tree storage for the stabilizing heap.

The tree has ``capacity`` slots addressed ``0 .. capacity-1`` in the usual
array layout: the children of slot ``i`` sit at ``2i+1`` and ``2i+2`` and the
parent of ``i > 0`` at ``(i-1)//2``.  Slot addresses are computed, never
stored, so the tree shape survives arbitrary corruption of the per-slot
fields.

Each slot carries four corruptible fields:

* ``val`` -- the stored item (an ``int``) or ``None`` for an empty slot.
  ``None`` compares as plus infinity: an empty slot is "larger" than any
  item, so any integer written into a slot by a fault is a legal item.
* ``height`` -- cached height of the occupied subtree below the slot
  (a single occupied slot has height 0).  May hold any int after a fault.
* ``nextslot`` -- cached distance to the nearest descendant with a free
  child position; values ``>= capacity`` mean "subtree full".  May hold any
  int after a fault.
* ``toggle`` -- one direction bit (``LEFT`` or ``RIGHT``) steering the scan
  rotation of :func:`stabheap.ops.verify`.  Writes normalize any raw value
  to a single bit, so this field cannot become invalid.
"""

from __future__ import annotations

LEFT = 0
RIGHT = 1


class HeapState:
    """Mutable storage for one heap: parallel field arrays plus a step meter.

    ``steps`` accumulates slot visits made by the routines in
    :mod:`stabheap.ops` (one count per slot whose fields a routine activation
    reads or writes).  Setting ``trace`` to a list additionally records
    ``(routine, slot)`` pairs for every routine activation.

    A state is mutated by one logical thread at a time; there is no internal
    locking.
    """

    __slots__ = ("capacity", "vals", "heights", "nextslots", "toggles",
                 "steps", "trace")

    def __init__(self, capacity: int):
        if not isinstance(capacity, int) or isinstance(capacity, bool):
            raise TypeError(f"capacity must be an int, got {capacity!r}")
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self.vals: list[int | None] = [None] * capacity
        self.heights: list[int] = [0] * capacity
        self.nextslots: list[int] = [capacity] * capacity
        self.toggles: list[int] = [LEFT] * capacity
        self.steps: int = 0
        self.trace: list[tuple[str, int]] | None = None

    def clone(self) -> "HeapState":
        """Deep copy of the field arrays (step meter and trace reset)."""
        other = HeapState(self.capacity)
        other.vals = list(self.vals)
        other.heights = list(self.heights)
        other.nextslots = list(self.nextslots)
        other.toggles = list(self.toggles)
        return other

    def fields_equal(self, other: "HeapState") -> bool:
        """True when every slot field matches exactly (meters ignored)."""
        return (self.capacity == other.capacity
                and self.vals == other.vals
                and self.heights == other.heights
                and self.nextslots == other.nextslots
                and self.toggles == other.toggles)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"HeapState(capacity={self.capacity}, vals={self.vals})"


def child_of(state: HeapState, x: int, side: int) -> int | None:
    """Child slot of ``x`` on ``side`` (LEFT/RIGHT), or None when absent."""
    c = 2 * x + 1 + side
    return c if c < state.capacity else None


def parent_of(state: HeapState, x: int) -> int | None:
    """Parent slot of ``x``, or None for the root."""
    return (x - 1) // 2 if x > 0 else None


def encounter_check(state: HeapState, x: int) -> int:
    """Truncate children of ``x`` that violate heap order against it.

    A child holding a value smaller than ``x``'s is not part of the active
    tree, so its ``val`` is reset to ``None`` on the spot.  Ordinary
    traversals apply this at every occupied slot they visit; only the two
    heapify routines skip it, since they walk through value reversals of
    their own making.

    Returns the number of children truncated.  A second immediate call at
    the same slot returns 0.  ``x`` must hold an item; an empty slot is not
    an active-tree member and the call does nothing.
    """
    vals = state.vals
    xv = vals[x]
    visits = 1
    cut = 0
    if xv is not None:
        k = state.capacity
        left = 2 * x + 1
        if left < k:
            visits += 1
            lv = vals[left]
            if lv is not None and lv < xv:
                vals[left] = None
                cut += 1
            right = left + 1
            if right < k:
                visits += 1
                rv = vals[right]
                if rv is not None and rv < xv:
                    vals[right] = None
                    cut += 1
    state.steps += visits
    if state.trace is not None:
        state.trace.append(("check", x))
    return cut
