"""Read-only semantic views of a heap state.

Everything here is pure: no function mutates the state it inspects.  The
views are defined recursively from the root:

* *truncation tree* -- slots reachable from the root through occupied
  values only.
* *active tree* -- the maximal reachable fragment that also satisfies heap
  order; its value multiset is the semantically live heap content in any
  state, damaged or not.

A state is *legitimate* when four conditions hold over the truncation tree:
heap order everywhere, height bounded by the balance envelope, and the
cached ``height`` and ``nextslot`` fields matching their recomputed ground
truth.  The *gap* counts active slots lying deeper than the balance
envelope allows for the current active size; it shrinks by at least one per
operation once the order/field conditions hold, which is what drives
convergence measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import HeapState


@dataclass(frozen=True)
class BalanceParams:
    """Constants of the loose-balance envelope ``h(t) = floor(a + b*lg t)``.

    The defaults ``a=0, b=1`` give ``h(t) = floor(lg t)``, exact for the
    implicit-array layout; looser constants are accepted so convergence
    experiments can be re-run under a weaker balance reading.
    """

    a: float = 0
    b: float = 1


DEFAULT_PARAMS = BalanceParams()


def max_height(t: int, params: BalanceParams = DEFAULT_PARAMS) -> int:
    """Balance envelope: the allowed height for ``t`` occupied slots, t >= 1."""
    if t < 1:
        raise ValueError("envelope defined for t >= 1")
    if params.a == 0 and params.b == 1:
        return t.bit_length() - 1
    return math.floor(params.a + params.b * math.log2(t))


def depth_of(x: int) -> int:
    """Depth of slot ``x`` in the implicit layout (root is 0)."""
    return (x + 1).bit_length() - 1


@dataclass(frozen=True)
class AnalysisReport:
    """Everything the legitimacy check derives from one state.

    ``bag`` is the sorted multiset of active values.  ``order_ok``,
    ``balanced_ok``, ``heights_ok``, ``slots_ok`` are the four legitimacy
    conditions (heap order, balance envelope, height fields, free-slot
    distance fields); ``legitimate`` is their conjunction.  ``gap`` and
    ``m`` describe the active tree: its size and how many of its slots sit
    below the balance envelope.
    """

    t_members: frozenset[int]
    s_members: frozenset[int]
    bag: tuple[int, ...]
    order_ok: bool
    balanced_ok: bool
    heights_ok: bool
    slots_ok: bool
    legitimate: bool
    gap: int
    m: int


def truncation_tree(state: HeapState) -> set[int]:
    """Slots reachable from the root through occupied values."""
    vals = state.vals
    k = state.capacity
    if vals[0] is None:
        return set()
    members = set()
    stack = [0]
    while stack:
        x = stack.pop()
        members.add(x)
        left = 2 * x + 1
        if left < k:
            if vals[left] is not None:
                stack.append(left)
            right = left + 1
            if right < k and vals[right] is not None:
                stack.append(right)
    return members


def active_tree(state: HeapState) -> set[int]:
    """Reachable slots whose values respect heap order along the way down."""
    vals = state.vals
    k = state.capacity
    if vals[0] is None:
        return set()
    members = set()
    stack = [0]
    while stack:
        x = stack.pop()
        members.add(x)
        xv = vals[x]
        left = 2 * x + 1
        if left < k:
            lv = vals[left]
            if lv is not None and lv >= xv:
                stack.append(left)
            right = left + 1
            if right < k:
                rv = vals[right]
                if rv is not None and rv >= xv:
                    stack.append(right)
    return members


def active_bag(state: HeapState) -> tuple[int, ...]:
    """Sorted multiset of active-tree values (the live heap content)."""
    vals = state.vals
    return tuple(sorted(vals[x] for x in active_tree(state)))


def gap_value(state: HeapState, params: BalanceParams = DEFAULT_PARAMS) -> int:
    """Number of active slots deeper than the balance envelope; 0 when empty."""
    members = active_tree(state)
    if not members:
        return 0
    h = max_height(len(members), params)
    return sum(1 for x in members if depth_of(x) > h)


def check_legitimacy(state: HeapState,
                     params: BalanceParams = DEFAULT_PARAMS) -> AnalysisReport:
    """Evaluate the four legitimacy conditions and the gap in one sweep."""
    vals = state.vals
    heights = state.heights
    nextslots = state.nextslots
    k = state.capacity
    if vals[0] is None:
        return AnalysisReport(frozenset(), frozenset(), (), True, True, True,
                              True, True, 0, 0)

    order_ok = True
    t_list: list[int] = []
    s_flags: list[bool] = []
    depths: list[int] = []
    stack = [(0, 0, True)]
    while stack:
        x, d, in_s = stack.pop()
        t_list.append(x)
        s_flags.append(in_s)
        depths.append(d)
        xv = vals[x]
        left = 2 * x + 1
        if left < k:
            lv = vals[left]
            if lv is not None:
                if lv < xv:
                    order_ok = False
                stack.append((left, d + 1, in_s and lv >= xv))
            right = left + 1
            if right < k:
                rv = vals[right]
                if rv is not None:
                    if rv < xv:
                        order_ok = False
                    stack.append((right, d + 1, in_s and rv >= xv))

    # ground-truth cached fields, children before parents
    gt_h = [0] * k
    gt_d = [0] * k
    heights_ok = True
    slots_ok = True
    for x in reversed(t_list):
        left = 2 * x + 1
        if left >= k:
            gh = 0
            gd = k
        else:
            lv = vals[left]
            right = left + 1
            if right >= k:
                if lv is None:
                    gh = 0
                    gd = 0
                else:
                    gh = 1 + gt_h[left]
                    gd = min(k, 1 + gt_d[left])
            elif lv is None:
                rv = vals[right]
                gh = 0 if rv is None else 1 + gt_h[right]
                gd = 0
            else:
                rv = vals[right]
                if rv is None:
                    gh = 1 + gt_h[left]
                    gd = 0
                else:
                    gh = 1 + max(gt_h[left], gt_h[right])
                    gd = min(k, 1 + min(gt_d[left], gt_d[right]))
        gt_h[x] = gh
        gt_d[x] = gd
        if heights[x] != gh:
            heights_ok = False
        if gd >= k:
            if nextslots[x] < k:
                slots_ok = False
        elif nextslots[x] != gd:
            slots_ok = False

    t_size = len(t_list)
    t_height = max(depths)
    balanced_ok = t_size <= 1 or t_height <= max_height(t_size, params)

    s_members = [x for x, f in zip(t_list, s_flags) if f]
    m = len(s_members)
    gap = 0
    if m:
        h = max_height(m, params)
        gap = sum(1 for x, d, f in zip(t_list, depths, s_flags)
                  if f and d > h)
    bag = tuple(sorted(vals[x] for x in s_members))
    legitimate = order_ok and balanced_ok and heights_ok and slots_ok
    return AnalysisReport(frozenset(t_list), frozenset(s_members), bag,
                          order_ok, balanced_ok, heights_ok, slots_ok,
                          legitimate, gap, m)


def order_and_fields_ok(state: HeapState) -> bool:
    """Fast check of the conditions that settle first under repair scans.

    True when heap order holds on the truncation tree and every cached
    ``height``/``nextslot`` matches its ground truth -- everything
    legitimacy needs except the balance envelope.  Exits on the first
    violation found.
    """
    vals = state.vals
    heights = state.heights
    nextslots = state.nextslots
    k = state.capacity
    if vals[0] is None:
        return True
    t_list: list[int] = []
    stack = [0]
    while stack:
        x = stack.pop()
        t_list.append(x)
        xv = vals[x]
        left = 2 * x + 1
        if left < k:
            lv = vals[left]
            if lv is not None:
                if lv < xv:
                    return False
                stack.append(left)
            right = left + 1
            if right < k:
                rv = vals[right]
                if rv is not None:
                    if rv < xv:
                        return False
                    stack.append(right)
    gt_h = [0] * k
    gt_d = [0] * k
    for x in reversed(t_list):
        left = 2 * x + 1
        if left >= k:
            gh = 0
            gd = k
        else:
            lv = vals[left]
            right = left + 1
            if right >= k:
                if lv is None:
                    gh = 0
                    gd = 0
                else:
                    gh = 1 + gt_h[left]
                    gd = min(k, 1 + gt_d[left])
            elif lv is None:
                rv = vals[right]
                gh = 0 if rv is None else 1 + gt_h[right]
                gd = 0
            else:
                rv = vals[right]
                if rv is None:
                    gh = 1 + gt_h[left]
                    gd = 0
                else:
                    gh = 1 + max(gt_h[left], gt_h[right])
                    gd = min(k, 1 + min(gt_d[left], gt_d[right]))
        gt_h[x] = gh
        gt_d[x] = gd
        if heights[x] != gh:
            return False
        if gd >= k:
            if nextslots[x] < k:
                return False
        elif nextslots[x] != gd:
            return False
    return True


def convergence_probe(state: HeapState,
                      params: BalanceParams = DEFAULT_PARAMS
                      ) -> tuple[bool, int, int]:
    """(order/fields settled, gap, active size) in one fused pass.

    The workhorse of convergence experiments: when the order/field
    conditions fail the gap is reported as -1 and not computed.  A settled
    state is fully legitimate exactly when its gap is 0.
    """
    if not order_and_fields_ok(state):
        return False, -1, -1
    # settled => active tree equals truncation tree, so walk it once more
    vals = state.vals
    k = state.capacity
    if vals[0] is None:
        return True, 0, 0
    m = 0
    counts: list[int] = []
    stack = [(0, 0)]
    while stack:
        x, d = stack.pop()
        m += 1
        while d >= len(counts):
            counts.append(0)
        counts[d] += 1
        left = 2 * x + 1
        if left < k:
            if vals[left] is not None:
                stack.append((left, d + 1))
            right = left + 1
            if right < k and vals[right] is not None:
                stack.append((right, d + 1))
    h = max_height(m, params)
    gap = sum(counts[h + 1:])
    return True, gap, m


def report_doc(report: AnalysisReport, capacity: int) -> dict:
    """Serializable view of a report: flags, gap, membership bitmaps."""
    t_bits = [0] * capacity
    for x in report.t_members:
        t_bits[x] = 1
    s_bits = [0] * capacity
    for x in report.s_members:
        s_bits[x] = 1
    return {
        "m": report.m,
        "gap": report.gap,
        "order_ok": report.order_ok,
        "balanced_ok": report.balanced_ok,
        "heights_ok": report.heights_ok,
        "slots_ok": report.slots_ok,
        "legitimate": report.legitimate,
        "bag": list(report.bag),
        "truncation_members": t_bits,
        "active_members": s_bits,
    }
