"""Independent brute-force recomputations used as test oracles.

Everything here derives the semantic views from root-path enumeration and
whole-subtree scans, deliberately avoiding the recursive formulations the
package itself uses, so agreement between the two is meaningful evidence.
Costs are quadratic in capacity; intended for small states only.
"""

from __future__ import annotations

import math


def root_path(x: int) -> list[int]:
    """Slots from the root down to ``x`` inclusive."""
    path = []
    while x >= 0:
        path.append(x)
        if x == 0:
            break
        x = (x - 1) // 2
    return path[::-1]


def reachable_members(state) -> set[int]:
    """Truncation tree via path enumeration: every slot on the way occupied."""
    out = set()
    for x in range(state.capacity):
        if all(state.vals[p] is not None for p in root_path(x)):
            out.add(x)
    return out


def active_members(state) -> set[int]:
    """Active tree via path enumeration: occupied and value-sorted path."""
    out = set()
    for x in range(state.capacity):
        path = root_path(x)
        vals = [state.vals[p] for p in path]
        if any(v is None for v in vals):
            continue
        if all(a <= b for a, b in zip(vals, vals[1:])):
            out.add(x)
    return out


def subtree_slots(x: int, k: int) -> list[int]:
    """Every slot of the capacity-``k`` tree lying under ``x`` (inclusive)."""
    out = []
    frontier = [x]
    while frontier:
        y = frontier.pop()
        if y >= k:
            continue
        out.append(y)
        frontier.append(2 * y + 1)
        frontier.append(2 * y + 2)
    return out


def depth(x: int) -> int:
    return (x + 1).bit_length() - 1


def legit_flags(state, a: float = 0, b: float = 1) -> dict:
    """The four legitimacy conditions recomputed the slow way."""
    k = state.capacity
    members = reachable_members(state)

    order_ok = True
    for x in members:
        if x > 0 and state.vals[(x - 1) // 2] > state.vals[x]:
            order_ok = False

    heights_ok = True
    slots_ok = True
    for x in members:
        below = [y for y in subtree_slots(x, k) if y in members]
        want_h = max(depth(y) for y in below) - depth(x)
        if state.heights[x] != want_h:
            heights_ok = False
        with_free = [y for y in below
                     if any(c < k and c not in members
                            for c in (2 * y + 1, 2 * y + 2))]
        if with_free:
            want_d = min(depth(y) for y in with_free) - depth(x)
            if state.nextslots[x] != want_d:
                slots_ok = False
        else:
            if state.nextslots[x] < k:
                slots_ok = False

    if len(members) <= 1:
        balanced_ok = True
    else:
        h_bound = math.floor(a + b * math.log2(len(members)))
        balanced_ok = max(depth(x) for x in members) <= h_bound

    return {"order_ok": order_ok, "balanced_ok": balanced_ok,
            "heights_ok": heights_ok, "slots_ok": slots_ok,
            "legitimate": order_ok and balanced_ok and heights_ok
                          and slots_ok}


def gap(state, a: float = 0, b: float = 1) -> int:
    members = active_members(state)
    if not members:
        return 0
    h = math.floor(a + b * math.log2(len(members)))
    return sum(1 for x in members if depth(x) > h)


def is_active_leaf(state, x: int) -> bool:
    """``x`` belongs to the active tree and has no active children."""
    members = active_members(state)
    if x not in members:
        return False
    return not any(c in members for c in (2 * x + 1, 2 * x + 2))
