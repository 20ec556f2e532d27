"""Operation histories and the implementation-independent behavior checkers.

A history is the sequence of (invocation, response, step count) records an
experiment collected from some heap-like object.  *Points* sit before,
between, and after events: point ``t`` precedes event ``t``.  The *content*
``C_t`` at a point is the multiset of successfully inserted items minus the
items returned by successful removals -- derived purely from responses,
never from heap internals.

Three checkers grade a history:

* :func:`check_legitimate_history` -- the strict contract of a correct
  bounded heap run from a known initial content: removals fail exactly on
  empty content and return its minimum, inserts fail exactly on full
  content, and step counts stay within a logarithmic budget of the content
  size.
* :func:`check_availability` -- the relaxed contract an implementation must
  meet from *any* starting state, after prepending a witness prefix of
  inserts for the initial active-tree values: removals behave strictly,
  inserts may fail spuriously but must fail on full content, and step
  counts stay within a logarithmic budget of the capacity.
* :func:`check_stabilization` -- finds the first recorded point whose
  snapshot is legitimate, prepends a witness prefix for the active tree at
  that point, and requires the strict contract from there on.  The events
  before that point form the convergence period.

The checkers verify the witness the theory names (active-tree inserts, the
first legitimate point); they do not search for alternatives.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import analyzer
from .core import HeapState
from .ops import OpResponse, ResponseKind


@dataclass(frozen=True)
class HistoryEvent:
    """One invocation/response pair with its measured step count."""

    op: str                      # "insert" or "delete_min"
    arg: int | None              # inserted value, None for delete_min
    kind: ResponseKind
    value: int | None            # returned item, None otherwise
    steps: int

    def to_doc(self) -> dict:
        return {"op": self.op, "arg": self.arg, "kind": self.kind.value,
                "value": self.value, "steps": self.steps}

    @staticmethod
    def from_doc(doc: dict) -> "HistoryEvent":
        return HistoryEvent(doc["op"], doc.get("arg"),
                            ResponseKind(doc["kind"]), doc.get("value"),
                            doc["steps"])


@dataclass(frozen=True)
class Violation:
    """One constraint breach at one history point."""

    point: int
    constraint: str
    detail: str


@dataclass
class Verdict:
    """Checker outcome: the window graded and every violation found."""

    window: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_doc(self) -> dict:
        return {
            "window": self.window,
            "ok": self.ok,
            "violations": [
                {"point": v.point, "constraint": v.constraint,
                 "detail": v.detail}
                for v in self.violations
            ],
        }


class ContentTracker:
    """Heap content maintained from responses, with O(log n) minimum queries.

    Tracks inserted and removed multisets separately so that removals of
    items not actually present (possible in fabricated histories) keep
    later bookkeeping exact.  The minimum query uses a lazily pruned heap
    of inserted values.
    """

    def __init__(self, initial: Iterable[int] = ()):
        self._counts: dict[int, int] = {}
        self._heap: list[int] = []
        self._size = 0
        for x in initial:
            self.add(x)

    def __len__(self) -> int:
        return self._size

    def add(self, x: int) -> None:
        c = self._counts.get(x, 0) + 1
        self._counts[x] = c
        if c > 0:
            heapq.heappush(self._heap, x)
            self._size += 1

    def remove(self, x: int) -> None:
        c = self._counts.get(x, 0)
        self._counts[x] = c - 1
        if c > 0:
            self._size -= 1

    def minimum(self) -> int | None:
        h = self._heap
        counts = self._counts
        while h and counts.get(h[0], 0) <= 0:
            heapq.heappop(h)
        return h[0] if h else None


def _log_budget(n: int) -> int:
    """ceil(lg(n+1)), floored at 1 so tiny contents keep a sane budget."""
    return max(1, n.bit_length())


def check_legitimate_history(events: Sequence[HistoryEvent],
                             initial: Iterable[int],
                             capacity: int,
                             step_bound: tuple[int, int] | None = None,
                             ) -> Verdict:
    """Grade a history against the strict bounded-heap contract.

    Constraints per event at point ``t`` with content ``C_t``:
    (a) a removal fails iff ``C_t`` is empty and otherwise returns
    ``min(C_t)``; (b) an insert fails iff ``|C_t| = capacity``;
    (c) with ``step_bound = (c0, c1)`` given, the event's step count is at
    most ``c0 + c1 * max(1, ceil(lg(|C_t| + 1)))``.
    """
    verdict = Verdict(window=len(events))
    content = ContentTracker(initial)
    vio = verdict.violations.append
    for t, e in enumerate(events):
        n = len(content)
        if step_bound is not None:
            c0, c1 = step_bound
            budget = c0 + c1 * _log_budget(n)
            if e.steps > budget:
                vio(Violation(t, "c", f"{e.op} took {e.steps} steps, "
                                      f"budget {budget} at content size {n}"))
        if e.op == "delete_min":
            if e.kind == ResponseKind.HEAP_EMPTY:
                if n != 0:
                    vio(Violation(t, "a", f"removal failed with {n} items"))
            elif e.kind == ResponseKind.ITEM:
                if not isinstance(e.value, int):
                    vio(Violation(t, "a", f"removal returned {e.value!r}"))
                elif n == 0:
                    vio(Violation(t, "a", "removal succeeded on empty content"))
                    content.remove(e.value)
                else:
                    want = content.minimum()
                    if e.value != want:
                        vio(Violation(t, "a", f"removal returned {e.value}, "
                                              f"content minimum is {want}"))
                    content.remove(e.value)
            else:
                vio(Violation(t, "a", f"removal answered {e.kind.value}"))
        elif e.op == "insert":
            if e.kind == ResponseKind.ACK:
                if n == capacity:
                    vio(Violation(t, "b", "insert succeeded on full content"))
                if isinstance(e.arg, int):
                    content.add(e.arg)
                else:
                    vio(Violation(t, "b", f"insert of non-item {e.arg!r}"))
            elif e.kind == ResponseKind.HEAP_FULL:
                if n != capacity:
                    vio(Violation(t, "b", f"insert failed with {n}/{capacity}"))
            else:
                vio(Violation(t, "b", f"insert answered {e.kind.value}"))
        else:
            vio(Violation(t, "?", f"unknown invocation {e.op!r}"))
    return verdict


def check_availability(events: Sequence[HistoryEvent],
                       initial_state: HeapState,
                       capacity: int,
                       step_bound: tuple[int, int] | None = None,
                       ) -> Verdict:
    """Grade a history against the availability contract.

    The witness prefix is one successful insert per active-tree value of
    the initial state.  Removals obey the strict rule; inserts may fail at
    any time but must fail on full content and must not succeed on full
    content; step counts stay within the capacity budget.
    """
    verdict = Verdict(window=len(events))
    prefix = analyzer.active_bag(initial_state)
    content = ContentTracker(prefix)
    vio = verdict.violations.append
    budget = None
    if step_bound is not None:
        c0, c1 = step_bound
        budget = c0 + c1 * capacity.bit_length()
    for t, e in enumerate(events):
        n = len(content)
        if budget is not None and e.steps > budget:
            vio(Violation(t, "c", f"{e.op} took {e.steps} steps, "
                                  f"budget {budget} for capacity {capacity}"))
        if e.op == "delete_min":
            if e.kind == ResponseKind.HEAP_EMPTY:
                if n != 0:
                    vio(Violation(t, "a", f"removal failed with {n} items"))
            elif e.kind == ResponseKind.ITEM:
                if not isinstance(e.value, int):
                    vio(Violation(t, "a", f"removal returned {e.value!r}"))
                elif n == 0:
                    vio(Violation(t, "a", "removal succeeded on empty content"))
                    content.remove(e.value)
                else:
                    want = content.minimum()
                    if e.value != want:
                        vio(Violation(t, "a", f"removal returned {e.value}, "
                                              f"content minimum is {want}"))
                    content.remove(e.value)
            else:
                vio(Violation(t, "a", f"removal answered {e.kind.value}"))
        elif e.op == "insert":
            if e.kind == ResponseKind.ACK:
                if n == capacity:
                    vio(Violation(t, "b", "insert succeeded on full content"))
                if isinstance(e.arg, int):
                    content.add(e.arg)
                else:
                    vio(Violation(t, "b", f"insert of non-item {e.arg!r}"))
            elif e.kind != ResponseKind.HEAP_FULL:
                vio(Violation(t, "b", f"insert answered {e.kind.value}"))
            # failing below capacity is allowed here
        else:
            vio(Violation(t, "?", f"unknown invocation {e.op!r}"))
    return verdict


def check_stabilization(events: Sequence[HistoryEvent],
                        snapshots: Sequence[HeapState],
                        capacity: int,
                        params: analyzer.BalanceParams = analyzer.DEFAULT_PARAMS,
                        step_bound: tuple[int, int] | None = None,
                        ) -> tuple[Verdict, int | None]:
    """Grade a history against the stabilization contract.

    ``snapshots[t]`` must be the state at point ``t`` (one more snapshot
    than events).  Finds the earliest legitimate point, prepends the
    witness prefix for its active tree, and grades the remaining events
    strictly.  Returns the verdict and the convergence period length (the
    number of events before that point), or None when no recorded point is
    legitimate.
    """
    if len(snapshots) != len(events) + 1:
        raise ValueError("need one snapshot per point: len(events)+1")
    for t, snap in enumerate(snapshots):
        if analyzer.check_legitimacy(snap, params).legitimate:
            tail = check_legitimate_history(
                events[t:], analyzer.active_bag(snap), capacity, step_bound)
            verdict = Verdict(window=len(events), violations=[
                Violation(v.point + t, v.constraint, v.detail)
                for v in tail.violations
            ])
            return verdict, t
    verdict = Verdict(window=len(events), violations=[
        Violation(-1, "no-legitimate-point",
                  "no recorded point is legitimate")])
    return verdict, None


class Recorder:
    """Wraps a heap-like object and logs every operation it forwards.

    The wrapped object needs ``insert``/``delete_min`` returning
    :class:`OpResponse` and ``state_view`` returning a :class:`HeapState`.
    With ``keep_snapshots`` the recorder stores a state clone at every
    point, ready for :func:`check_stabilization`.
    """

    def __init__(self, heap, keep_snapshots: bool = False):
        self.heap = heap
        self.events: list[HistoryEvent] = []
        self.snapshots: list[HeapState] | None = None
        if keep_snapshots:
            self.snapshots = [heap.state_view().clone()]

    def insert(self, value: int) -> OpResponse:
        resp = self.heap.insert(value)
        self.events.append(HistoryEvent("insert", value, resp.kind,
                                        resp.value, resp.steps))
        if self.snapshots is not None:
            self.snapshots.append(self.heap.state_view().clone())
        return resp

    def delete_min(self) -> OpResponse:
        resp = self.heap.delete_min()
        self.events.append(HistoryEvent("delete_min", None, resp.kind,
                                        resp.value, resp.steps))
        if self.snapshots is not None:
            self.snapshots.append(self.heap.state_view().clone())
        return resp


def events_to_lines(events: Iterable[HistoryEvent]) -> str:
    """Serialize a history as line-delimited JSON records."""
    return "\n".join(json.dumps(e.to_doc(), sort_keys=True) for e in events)


def events_from_lines(text: str) -> list[HistoryEvent]:
    return [HistoryEvent.from_doc(json.loads(line))
            for line in text.splitlines() if line.strip()]
