"""Reference heap strategies the history checkers are exercised against.

Two deliberately simple designs bracket the behavior space:

* :class:`AlwaysFailHeap` answers every operation with a failure.  Its
  content is perpetually empty, which satisfies the availability contract
  (with an empty witness prefix) but not the strict insert rule, so it is
  not stabilizing under any mixed workload.
* :class:`ResettingHeap` is a conventional contiguous array heap that
  clears itself to empty the moment an operation notices damage on the
  path it is about to use.  From the reset point on it behaves like a
  textbook heap, so it satisfies the stabilization contract with the reset
  point as the convergence point -- at the price of discarding all content.
"""

from __future__ import annotations

from .core import HeapState
from .ops import OpResponse, ResponseKind


class AlwaysFailHeap:
    """Answers heap_full / heap_empty to everything; holds nothing."""

    def __init__(self, capacity: int):
        self._view = HeapState(capacity)

    @property
    def capacity(self) -> int:
        return self._view.capacity

    def insert(self, value: int) -> OpResponse:
        return OpResponse(ResponseKind.HEAP_FULL, steps=1)

    def delete_min(self) -> OpResponse:
        return OpResponse(ResponseKind.HEAP_EMPTY, steps=1)

    def state_view(self) -> HeapState:
        return self._view


class ResettingHeap:
    """Contiguous array min-heap that resets to empty on detected damage.

    Items live in ``slots[0:count]``.  Before every operation the heap
    sanity-checks its size and the ancestor chain of the slot it is about
    to touch (an O(log n) walk); any violation empties the heap, after
    which the operation proceeds normally.  Damage hiding off those paths
    goes undetected until some later operation walks into it.
    """

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.slots: list = [None] * capacity
        self.count = 0
        self._steps = 0

    def _reset_if_damaged(self) -> None:
        if (not isinstance(self.count, int) or isinstance(self.count, bool)
                or not 0 <= self.count <= self.capacity):
            self.count = 0
            return
        x = self.count - 1
        while 0 <= x < self.count:
            self._steps += 1
            v = self.slots[x]
            if not isinstance(v, int) or isinstance(v, bool):
                self.count = 0
                return
            if x == 0:
                return
            p = (x - 1) >> 1
            pv = self.slots[p]
            if not isinstance(pv, int) or isinstance(pv, bool) or pv > v:
                self.count = 0
                return
            x = p

    def insert(self, value: int) -> OpResponse:
        self._steps = 1
        self._reset_if_damaged()
        if self.count == self.capacity:
            return OpResponse(ResponseKind.HEAP_FULL, steps=self._steps)
        x = self.count
        self.slots[x] = value
        self.count += 1
        while x > 0:
            self._steps += 1
            p = (x - 1) >> 1
            if self.slots[p] <= self.slots[x]:
                break
            self.slots[p], self.slots[x] = self.slots[x], self.slots[p]
            x = p
        return OpResponse(ResponseKind.ACK, steps=self._steps)

    def delete_min(self) -> OpResponse:
        self._steps = 1
        self._reset_if_damaged()
        if self.count == 0:
            return OpResponse(ResponseKind.HEAP_EMPTY, steps=self._steps)
        top = self.slots[0]
        self.count -= 1
        self.slots[0] = self.slots[self.count]
        self.slots[self.count] = None
        n = self.count
        x = 0
        while True:
            self._steps += 1
            left = 2 * x + 1
            if left >= n:
                break
            small = left
            right = left + 1
            if right < n and self.slots[right] < self.slots[left]:
                small = right
            if self.slots[small] >= self.slots[x]:
                break
            self.slots[small], self.slots[x] = self.slots[x], self.slots[small]
            x = small
        return OpResponse(ResponseKind.ITEM, value=top, steps=self._steps)

    def corrupt_root(self, bump: int = 10 ** 9) -> None:
        """Deterministically visible damage: bump the root above its children."""
        if self.count > 0 and isinstance(self.slots[0], int):
            self.slots[0] += bump

    def state_view(self) -> HeapState:
        """The content as a tree-state image with ground-truth cached fields.

        Slots outside the live prefix (or holding non-items) appear empty.
        The image is legitimate exactly when the live prefix is a proper
        heap, which is what the stabilization checker probes for.
        """
        k = self.capacity
        state = HeapState(k)
        n = self.count if isinstance(self.count, int) else 0
        n = min(max(n, 0), k)
        for i in range(n):
            v = self.slots[i]
            if isinstance(v, int) and not isinstance(v, bool):
                state.vals[i] = v
        for i in range(k - 1, -1, -1):
            left = 2 * i + 1
            right = left + 1
            occ = [c for c in (left, right)
                   if c < k and state.vals[c] is not None]
            if occ:
                state.heights[i] = 1 + max(state.heights[c] for c in occ)
            else:
                state.heights[i] = 0
            free = any(c < k and state.vals[c] is None
                       for c in (left, right))
            if free:
                state.nextslots[i] = 0
            elif left >= k:
                state.nextslots[i] = k
            else:
                children = [c for c in (left, right) if c < k]
                state.nextslots[i] = min(
                    k, 1 + min(state.nextslots[c] for c in children))
        return state
