"""Heap operations that behave sensibly from arbitrarily corrupted states.

The public operations :func:`insert` and :func:`delete_min` each run a repair
prefix -- one :func:`verify` scan and one :func:`balance` step -- before the
conventional heap work.  Every traversal (except the two heapify routines)
truncates heap-violating children on the slots it visits, so the routines
always navigate the *active* tree: the maximal root fragment whose values
respect heap order.  Successive ``verify`` scans rotate across the active
tree's leaves via the per-slot ``toggle`` bits, refreshing the cached
``height``/``nextslot`` fields bottom-up one root-to-leaf path at a time.

Tie-breaking is deterministic: whenever two children qualify equally
(equal cached heights in :func:`deep_leaf`, equal cached distances in
:func:`find_slot`), the left child wins.

Step accounting: every routine adds one count to ``state.steps`` per slot
whose fields it reads or writes in an activation, and appends a
``(routine, slot)`` pair to ``state.trace`` per activation when tracing is
enabled.  The per-operation totals are reported in :class:`OpResponse`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import LEFT, RIGHT, HeapState


class ResponseKind(Enum):
    ACK = "ack"
    HEAP_FULL = "heap_full"
    ITEM = "item"
    HEAP_EMPTY = "heap_empty"


@dataclass(frozen=True)
class OpResponse:
    """Outcome of one public operation.

    ``insert`` answers ACK or HEAP_FULL; ``delete_min`` answers ITEM (with
    the removed value) or HEAP_EMPTY.  ``steps`` is the number of slot
    visits the whole operation performed.
    """

    kind: ResponseKind
    value: int | None = None
    steps: int = 0


def deep_leaf(state: HeapState, x: int) -> int | None:
    """Descend from ``x`` to a leaf of the active tree, or None if empty.

    Follows the child with the larger cached ``height`` (left on ties),
    truncating heap-violating children at every slot on the way.  With
    correct height fields this reaches a maximum-depth slot; with corrupted
    ones it still lands on some active-tree leaf.
    """
    vals = state.vals
    heights = state.heights
    k = state.capacity
    tr = state.trace
    visits = 0
    if vals[x] is None:
        state.steps += 1
        if tr is not None:
            tr.append(("deep_leaf", x))
        return None
    while True:
        visits += 1
        if tr is not None:
            tr.append(("deep_leaf", x))
        xv = vals[x]
        left = 2 * x + 1
        if left >= k:
            break
        visits += 1
        lv = vals[left]
        if lv is not None and lv < xv:
            vals[left] = None
            lv = None
        right = left + 1
        if right >= k:
            if lv is None:
                break
            x = left
            continue
        visits += 1
        rv = vals[right]
        if rv is not None and rv < xv:
            vals[right] = None
            rv = None
        if lv is None:
            if rv is None:
                break
            x = right
        elif rv is None:
            x = left
        else:
            x = right if heights[right] > heights[left] else left
    state.steps += visits
    return x


def find_slot(state: HeapState, x: int) -> int | None:
    """Locate a free slot adjacent to the active tree below ``x``.

    Returns a child of an active slot whose ``val`` is empty (preferring
    left), ``x`` itself when the active tree is empty, or None when the
    descent bottoms out without meeting a free position.  Follows the child
    with the smaller cached ``nextslot`` (left on ties); corrupted distance
    fields can steer the walk into a full subtree, which is why the result
    may be None even when free slots exist elsewhere.
    """
    vals = state.vals
    nextslots = state.nextslots
    k = state.capacity
    tr = state.trace
    if vals[x] is None:
        state.steps += 1
        if tr is not None:
            tr.append(("find_slot", x))
        return x
    visits = 0
    result: int | None = None
    while True:
        visits += 1
        if tr is not None:
            tr.append(("find_slot", x))
        xv = vals[x]
        left = 2 * x + 1
        if left >= k:
            break
        visits += 1
        lv = vals[left]
        if lv is not None and lv < xv:
            vals[left] = None
            lv = None
        right = left + 1
        if right >= k:
            # both children must be checked before returning a slot, so the
            # single-child case decides only after the one check above
            if lv is None:
                result = left
                break
            x = left
            continue
        visits += 1
        rv = vals[right]
        if rv is not None and rv < xv:
            vals[right] = None
            rv = None
        if lv is None:
            result = left
            break
        if rv is None:
            result = right
            break
        x = left if nextslots[left] <= nextslots[right] else right
    state.steps += visits
    return result


def _refresh(vals: list, heights: list, nextslots: list, k: int, x: int) -> int:
    """Recompute the cached fields of ``x`` from its children's stored fields.

    height: 0 with no occupied child, else 1 + the larger child height.
    nextslot: 0 when a child slot exists and is empty, ``k`` when there are
    no child slots, else 1 + the smaller child distance, clamped at ``k``.
    Returns the number of child slots read.
    """
    left = 2 * x + 1
    if left >= k:
        heights[x] = 0
        nextslots[x] = k
        return 0
    lv = vals[left]
    right = left + 1
    if right >= k:
        if lv is None:
            heights[x] = 0
            nextslots[x] = 0
        else:
            heights[x] = 1 + heights[left]
            ns = 1 + nextslots[left]
            nextslots[x] = k if ns > k else ns
        return 1
    rv = vals[right]
    if lv is None:
        heights[x] = 0 if rv is None else 1 + heights[right]
        nextslots[x] = 0
    elif rv is None:
        heights[x] = 1 + heights[left]
        nextslots[x] = 0
    else:
        hl = heights[left]
        hr = heights[right]
        heights[x] = 1 + (hl if hl >= hr else hr)
        nl = nextslots[left]
        nr = nextslots[right]
        ns = 1 + (nl if nl <= nr else nr)
        nextslots[x] = k if ns > k else ns
    return 2


def refresh_path(state: HeapState, y: int) -> None:
    """Recompute cached fields on the walk from ``y`` up to the root."""
    vals = state.vals
    heights = state.heights
    nextslots = state.nextslots
    k = state.capacity
    tr = state.trace
    visits = 0
    x = y
    while True:
        visits += 1 + _refresh(vals, heights, nextslots, k, x)
        if tr is not None:
            tr.append(("refresh", x))
        if x == 0:
            break
        x = (x - 1) >> 1
    state.steps += visits


def up_heapify(state: HeapState, y: int) -> None:
    """Bubble the value at ``y`` toward the root and refresh the path fields.

    Swaps parent/child values while the parent's is larger (an empty parent
    counts as larger), and recomputes ``height``/``nextslot`` at every slot
    from ``y`` to the root whether or not swapping has stopped.  Performs no
    truncation: the walk crosses value reversals it is itself resolving.
    """
    vals = state.vals
    heights = state.heights
    nextslots = state.nextslots
    k = state.capacity
    tr = state.trace
    visits = 0
    x = y
    while True:
        visits += 1 + _refresh(vals, heights, nextslots, k, x)
        if tr is not None:
            tr.append(("up_heapify", x))
        if x == 0:
            break
        p = (x - 1) >> 1
        visits += 1
        pv = vals[p]
        xv = vals[x]
        if xv is not None and (pv is None or pv > xv):
            vals[p] = xv
            vals[x] = pv
        x = p
    state.steps += visits


def down_heapify(state: HeapState, x: int, floor: int | None = None) -> None:
    """Sift the value at ``x`` down along smallest-child links.

    Repeatedly swaps ``x``'s value with its smallest-valued occupied child
    (left on ties) while that child's value is smaller, leaving the cached
    fields untouched: swaps move values, never structure.  Performs no
    truncation.

    ``floor``, when given, is the smallest value the sift may swap with;
    occupied children holding smaller values were outside the active tree
    before the operation began and are skipped, and the floor rises to each
    value the sift moves up.  ``delete_min`` passes the minimum it removed,
    which keeps stale sub-slot garbage from riding up into the active tree.
    """
    vals = state.vals
    k = state.capacity
    tr = state.trace
    visits = 0
    while True:
        visits += 1
        if tr is not None:
            tr.append(("down_heapify", x))
        xv = vals[x]
        left = 2 * x + 1
        if left >= k:
            break
        visits += 1
        best = None
        bv = None
        lv = vals[left]
        if lv is not None and (floor is None or lv >= floor):
            best = left
            bv = lv
        right = left + 1
        if right < k:
            visits += 1
            rv = vals[right]
            if (rv is not None and (floor is None or rv >= floor)
                    and (bv is None or rv < bv)):
                best = right
                bv = rv
        if best is None or (xv is not None and bv >= xv):
            break
        vals[x] = bv
        vals[best] = xv
        floor = bv
        x = best
    state.steps += visits


def sw_ancestor(state: HeapState, x: int) -> int | None:
    """Nearest ancestor of ``x`` with toggle LEFT and two active children.

    Walks ``x`` toward the root, truncating heap-violating children at each
    ancestor visited, and returns the first ancestor whose toggle is LEFT
    and whose two child slots both exist and hold active values; None when
    no ancestor qualifies.
    """
    vals = state.vals
    toggles = state.toggles
    k = state.capacity
    tr = state.trace
    visits = 0
    found = None
    while x > 0:
        w = (x - 1) >> 1
        visits += 1
        if tr is not None:
            tr.append(("sw_ancestor", w))
        wv = vals[w]
        left = 2 * w + 1
        visits += 1
        lv = vals[left]
        if lv is not None and lv < wv:
            vals[left] = None
            lv = None
        right = left + 1
        if right < k:
            visits += 1
            rv = vals[right]
            if rv is not None and rv < wv:
                vals[right] = None
                rv = None
            if lv is not None and rv is not None and toggles[w] == LEFT:
                found = w
                break
        x = w
    state.steps += visits
    return found


def left_fringe(state: HeapState, x: int | None) -> None:
    """Point the toggles along the leftmost active path below ``x``.

    Descends into the leftmost active child at every slot (taking the right
    child only when the left one is absent from the active tree), setting
    each slot's toggle to match, and stops at an active-tree leaf.  Children
    violating heap order are truncated before the leaf test.
    """
    if x is None:
        return
    vals = state.vals
    toggles = state.toggles
    k = state.capacity
    tr = state.trace
    visits = 0
    while True:
        visits += 1
        if tr is not None:
            tr.append(("left_fringe", x))
        xv = vals[x]
        left = 2 * x + 1
        lv = None
        rv = None
        if left < k:
            visits += 1
            lv = vals[left]
            if lv is not None and lv < xv:
                vals[left] = None
                lv = None
            right = left + 1
            if right < k:
                visits += 1
                rv = vals[right]
                if rv is not None and rv < xv:
                    vals[right] = None
                    rv = None
        if lv is None and rv is None:
            break
        if lv is None:
            toggles[x] = RIGHT
            x = left + 1
        else:
            toggles[x] = LEFT
            x = left
    state.steps += visits


def next_path(state: HeapState, x: int) -> None:
    """Retarget the toggles so the next verify scan takes a fresh path.

    Called with ``x`` the active-tree leaf the current scan just reached.
    When some ancestor still has an unexplored right side (toggle LEFT with
    two active children), flip it to RIGHT and prime the leftmost path of
    that right subtree; otherwise wrap around to the leftmost path from the
    root.
    """
    state.steps += 1
    if state.trace is not None:
        state.trace.append(("next_path", x))
    w = sw_ancestor(state, x)
    if w is not None:
        state.toggles[w] = RIGHT
        state.steps += 1
        left_fringe(state, 2 * w + 2)
    else:
        left_fringe(state, 0)


def verify(state: HeapState, x: int = 0) -> None:
    """Scan one toggle-directed path of the active tree and repair it.

    Starting at ``x`` (the root for public operations), descend along the
    toggle directions to an active-tree leaf, truncating heap-violating
    children at every slot; at the leaf, retarget the toggles via
    :func:`next_path`; then recompute ``height``/``nextslot`` bottom-up
    along the scanned path.  Slots missing a child on one side have their
    toggle forced away from the gap (both gaps force LEFT).  A scan on an
    empty active tree does nothing.
    """
    vals = state.vals
    toggles = state.toggles
    heights = state.heights
    nextslots = state.nextslots
    k = state.capacity
    tr = state.trace
    if vals[x] is None:
        state.steps += 1
        if tr is not None:
            tr.append(("verify", x))
        return
    path = []
    visits = 0
    while True:
        visits += 1
        if tr is not None:
            tr.append(("verify", x))
        xv = vals[x]
        left = 2 * x + 1
        lin = False
        rin = False
        if left < k:
            visits += 1
            lv = vals[left]
            if lv is not None:
                if lv < xv:
                    vals[left] = None
                else:
                    lin = True
            right = left + 1
            if right < k:
                visits += 1
                rv = vals[right]
                if rv is not None:
                    if rv < xv:
                        vals[right] = None
                    else:
                        rin = True
        path.append(x)
        if not lin:
            toggles[x] = RIGHT
        if not rin:
            toggles[x] = LEFT
        if lin or rin:
            x = left + 1 if toggles[x] == RIGHT else left
        else:
            break
    state.steps += visits
    next_path(state, path[-1])
    visits = 0
    for node in reversed(path):
        visits += 1 + _refresh(vals, heights, nextslots, k, node)
    state.steps += visits


def _place(state: HeapState, y: int, p: int) -> None:
    """Write item ``p`` into free slot ``y`` the way an insert does.

    Sets the slot's fields for a fresh leaf, empties its child slots (their
    contents were unreachable garbage), and bubbles the new value up.
    """
    vals = state.vals
    k = state.capacity
    vals[y] = p
    state.heights[y] = 0
    visits = 1
    left = 2 * y + 1
    if left < k:
        state.nextslots[y] = 0
        vals[left] = None
        visits += 1
        right = left + 1
        if right < k:
            vals[right] = None
            visits += 1
    else:
        state.nextslots[y] = k
    state.steps += visits
    if state.trace is not None:
        state.trace.append(("place", y))
    up_heapify(state, y)


def balance(state: HeapState) -> None:
    """Move one deepest active item to a free slot of minimum depth.

    Deletes the leaf found by :func:`deep_leaf` and reinserts its value at
    the slot found by :func:`find_slot`; when the reinsertion cannot find a
    slot (corrupted distance fields may steer it into a full subtree) the
    deletion is reversed.  Either way the multiset of active values is
    unchanged.  Uses the raw internal routines, so no nested verify/balance
    runs.  Does nothing on an empty active tree.
    """
    y = deep_leaf(state, 0)
    if y is None:
        return
    vals = state.vals
    q = vals[y]
    vals[y] = None
    refresh_path(state, y)
    slot = find_slot(state, 0)
    if slot is None:
        vals[y] = q
        refresh_path(state, y)
    else:
        _place(state, slot, q)


def insert(state: HeapState, p: int) -> OpResponse:
    """Insert item ``p``; answers ACK, or HEAP_FULL when no slot was found.

    From any state: on ACK the active-value multiset grows by exactly
    ``{p}``; on HEAP_FULL it is unchanged.  HEAP_FULL is a normal response,
    not a fault, and in damaged states it may occur spuriously.
    """
    if p is None:
        raise ValueError("cannot insert the empty-slot marker")
    start = state.steps
    verify(state, 0)
    balance(state)
    y = find_slot(state, 0)
    if y is None:
        return OpResponse(ResponseKind.HEAP_FULL, steps=state.steps - start)
    _place(state, y, p)
    return OpResponse(ResponseKind.ACK, steps=state.steps - start)


def delete_min(state: HeapState) -> OpResponse:
    """Remove and return the smallest active item; HEAP_EMPTY when none.

    From any state: fails exactly when the active tree is empty; otherwise
    returns the minimum of the active-value multiset and removes exactly
    that one occurrence.
    """
    start = state.steps
    verify(state, 0)
    balance(state)
    y = deep_leaf(state, 0)
    if y is None:
        return OpResponse(ResponseKind.HEAP_EMPTY, steps=state.steps - start)
    vals = state.vals
    q = vals[0]
    if y == 0:
        vals[0] = None
        refresh_path(state, 0)
    else:
        vals[0] = vals[y]
        vals[y] = None
        refresh_path(state, y)
        down_heapify(state, 0, floor=q)
    return OpResponse(ResponseKind.ITEM, value=q, steps=state.steps - start)


class StabilizingHeap:
    """Bounded-capacity min-heap that recovers from arbitrary field corruption.

    A thin object wrapper over :class:`HeapState` and the module-level
    operations.  The underlying state is exposed read-write for the fault
    lab and the analyzer; ``last_steps`` reports the slot-visit count of the
    most recent operation.
    """

    def __init__(self, capacity: int, state: HeapState | None = None):
        if state is not None:
            if state.capacity != capacity:
                raise ValueError("state capacity mismatch")
            self.state = state
        else:
            self.state = HeapState(capacity)
        self.last_steps = 0

    @property
    def capacity(self) -> int:
        return self.state.capacity

    def insert(self, value: int) -> OpResponse:
        resp = insert(self.state, value)
        self.last_steps = resp.steps
        return resp

    def delete_min(self) -> OpResponse:
        resp = delete_min(self.state)
        self.last_steps = resp.steps
        return resp

    def state_view(self) -> HeapState:
        """The live state, for analyzers and history recorders."""
        return self.state

    def watch(self) -> list[tuple[str, int]]:
        """Enable tracing and return the live list of (routine, slot) visits."""
        if self.state.trace is None:
            self.state.trace = []
        return self.state.trace

    def unwatch(self) -> None:
        self.state.trace = None
