"""Capacity-bounded sorted-multiset heap used as the differential baseline."""

from __future__ import annotations

import heapq

from .ops import OpResponse, ResponseKind


class ReferenceHeap:
    """The behavior a correct bounded min-heap must show from empty.

    Backed by ``heapq``; duplicates allowed.  Responses carry no meaningful
    step counts.
    """

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.items: list[int] = []

    def __len__(self) -> int:
        return len(self.items)

    def insert(self, value: int) -> OpResponse:
        if len(self.items) == self.capacity:
            return OpResponse(ResponseKind.HEAP_FULL)
        heapq.heappush(self.items, value)
        return OpResponse(ResponseKind.ACK)

    def delete_min(self) -> OpResponse:
        if not self.items:
            return OpResponse(ResponseKind.HEAP_EMPTY)
        return OpResponse(ResponseKind.ITEM, value=heapq.heappop(self.items))
