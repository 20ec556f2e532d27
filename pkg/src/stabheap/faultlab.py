"""Deterministic generation and corruption of heap states.

Fault model: a transient fault may overwrite any per-slot field with any
value, between operations; the computed child/parent structure cannot be
touched.  Injection is expressed as :class:`FaultSpec` edit lists so
experiments replay exactly.  Generation modes:

* ``legitimate`` -- build by random inserts from empty (legitimate by
  construction).
* ``arbitrary`` -- draw every field from an adversarial pool biased toward
  boundary values (empty, 0, capacity, capacity+1, 64-bit extremes).
* ``corrupt`` -- a legitimate build followed by random field edits.

Identical specs produce identical states.  Snapshots are JSON documents
round-tripping every field bit-exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .core import LEFT, RIGHT, HeapState
from .ops import insert

FIELDS = ("val", "height", "nextslot", "toggle")

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1


@dataclass(frozen=True)
class FaultEdit:
    """One field overwrite: (slot, field name, raw value)."""

    node: int
    field: str
    value: int | None


@dataclass(frozen=True)
class FaultSpec:
    """An ordered list of field overwrites; later edits win on conflicts."""

    edits: tuple[FaultEdit, ...]

    @staticmethod
    def of(*edits: tuple) -> "FaultSpec":
        return FaultSpec(tuple(FaultEdit(*e) for e in edits))


def inject(state: HeapState, spec: FaultSpec) -> None:
    """Apply the edits in order.  Rejects bad slots, fields, or value types.

    ``None`` (the empty marker) is only meaningful for ``val``; the toggle
    keeps just the low bit of whatever is written.
    """
    k = state.capacity
    for e in spec.edits:
        if not isinstance(e.node, int) or not 0 <= e.node < k:
            raise ValueError(f"no slot {e.node!r} in a capacity-{k} heap")
        if e.field not in FIELDS:
            raise ValueError(f"unknown field {e.field!r}")
        v = e.value
        if e.field == "val":
            if v is not None and (not isinstance(v, int) or isinstance(v, bool)):
                raise ValueError(f"val must be an int or None, got {v!r}")
            state.vals[e.node] = v
        else:
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f"{e.field} must be an int, got {v!r}")
            if e.field == "height":
                state.heights[e.node] = v
            elif e.field == "nextslot":
                state.nextslots[e.node] = v
            else:
                state.toggles[e.node] = v & 1


@dataclass(frozen=True)
class StateGenSpec:
    """Reproducible recipe for one generated state.

    mode ``legitimate`` uses ``items``; mode ``corrupt`` uses ``items`` and
    ``faults``; mode ``arbitrary`` ignores both.
    """

    seed: int
    capacity: int
    mode: str = "arbitrary"
    items: int = 0
    faults: int = 0


def _value_pool(rng: random.Random, k: int) -> int | None:
    r = rng.randrange(8)
    if r == 0:
        return None
    if r == 1:
        return rng.choice((0, 1, -1, k - 1, k, k + 1))
    if r == 2:
        return rng.choice((INT64_MIN, INT64_MAX, INT64_MIN + 1, INT64_MAX - 1))
    if r < 6:
        return rng.randrange(0, 2 * k + 2)
    return rng.randrange(INT64_MIN, INT64_MAX)


def _int_pool(rng: random.Random, k: int) -> int:
    r = rng.randrange(8)
    if r == 0:
        return rng.choice((0, 1, -1, k - 1, k, k + 1))
    if r == 1:
        return rng.choice((INT64_MIN, INT64_MAX))
    if r < 6:
        return rng.randrange(-2, k + 2)
    return rng.randrange(INT64_MIN, INT64_MAX)


def random_faults(rng: random.Random, k: int, count: int) -> FaultSpec:
    """Draw ``count`` random edits from the adversarial value pool."""
    edits = []
    for _ in range(count):
        node = rng.randrange(k)
        fld = FIELDS[rng.randrange(4)]
        if fld == "val":
            value: int | None = _value_pool(rng, k)
        elif fld == "toggle":
            value = rng.randrange(2)
        else:
            value = _int_pool(rng, k)
        edits.append(FaultEdit(node, fld, value))
    return FaultSpec(tuple(edits))


def generate(spec: StateGenSpec) -> HeapState:
    """Materialize the state a spec describes (pure in the spec)."""
    rng = random.Random(spec.seed)
    k = spec.capacity
    if spec.mode == "legitimate":
        if spec.items > k:
            raise ValueError("cannot build more items than capacity")
        state = HeapState(k)
        for _ in range(spec.items):
            insert(state, rng.randrange(-(10 ** 9), 10 ** 9))
        state.steps = 0
        return state
    if spec.mode == "arbitrary":
        state = HeapState(k)
        vals = state.vals
        heights = state.heights
        nextslots = state.nextslots
        toggles = state.toggles
        for i in range(k):
            vals[i] = _value_pool(rng, k)
            heights[i] = _int_pool(rng, k)
            nextslots[i] = _int_pool(rng, k)
            toggles[i] = rng.randrange(2)
        return state
    if spec.mode == "corrupt":
        if spec.items > k:
            raise ValueError("cannot build more items than capacity")
        state = HeapState(k)
        for _ in range(spec.items):
            insert(state, rng.randrange(-(10 ** 9), 10 ** 9))
        state.steps = 0
        inject(state, random_faults(rng, k, spec.faults))
        return state
    raise ValueError(f"unknown generation mode {spec.mode!r}")


def mixed_spec(seed: int, capacity: int, index: int) -> StateGenSpec:
    """Trial-state pool for convergence and contract experiments.

    Every third state is raw ``arbitrary`` (whose active trees are almost
    always tiny); the rest are corrupted legitimate builds with sizes spread
    uniformly over ``[0, capacity]`` and fault counts scaling with the build
    size, which gives experiments their spread of both active-tree sizes
    and damage extents.
    """
    rng = random.Random((seed << 20) ^ index)
    if index % 3 == 0:
        return StateGenSpec(seed=rng.randrange(2 ** 60), capacity=capacity,
                            mode="arbitrary")
    items = rng.randrange(capacity + 1)
    faults = 1 + rng.randrange(max(8, items // 2))
    return StateGenSpec(seed=rng.randrange(2 ** 60), capacity=capacity,
                        mode="corrupt", items=items, faults=faults)


def snapshot(state: HeapState) -> dict:
    """Plain-data image of a state; ``null`` val encodes an empty slot."""
    return {
        "K": state.capacity,
        "nodes": [
            {
                "val": state.vals[i],
                "height": state.heights[i],
                "nextslot": state.nextslots[i],
                "toggle": "R" if state.toggles[i] == RIGHT else "L",
            }
            for i in range(state.capacity)
        ],
    }


def restore(doc: dict) -> HeapState:
    """Rebuild a state from a snapshot document, validating every field."""
    if not isinstance(doc, dict):
        raise ValueError("snapshot must be an object")
    k = doc.get("K")
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"bad capacity {k!r}")
    nodes = doc.get("nodes")
    if not isinstance(nodes, list) or len(nodes) != k:
        raise ValueError("nodes must be a list of length K")
    state = HeapState(k)
    for i, node in enumerate(nodes):
        if not isinstance(node, dict):
            raise ValueError(f"node {i} is not an object")
        v = node.get("val")
        if v is not None and (not isinstance(v, int) or isinstance(v, bool)):
            raise ValueError(f"node {i}: val must be an int or null")
        h = node.get("height")
        ns = node.get("nextslot")
        for name, x in (("height", h), ("nextslot", ns)):
            if not isinstance(x, int) or isinstance(x, bool):
                raise ValueError(f"node {i}: {name} must be an int")
        t = node.get("toggle")
        if t not in ("L", "R"):
            raise ValueError(f"node {i}: toggle must be 'L' or 'R'")
        state.vals[i] = v
        state.heights[i] = h
        state.nextslots[i] = ns
        state.toggles[i] = RIGHT if t == "R" else LEFT
    return state


def snapshot_text(state: HeapState) -> str:
    """Snapshot as a canonical JSON document."""
    return json.dumps(snapshot(state), sort_keys=True)


def restore_text(text: str) -> HeapState:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"snapshot is not valid JSON: {exc}") from exc
    return restore(doc)


def parse_fault_text(text: str) -> FaultSpec:
    """Parse a JSON edit list: [[node, field, value], ...]."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"fault spec is not valid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise ValueError("fault spec must be a list of edits")
    edits = []
    for entry in doc:
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise ValueError(f"bad edit {entry!r}")
        edits.append(FaultEdit(entry[0], entry[1], entry[2]))
    return FaultSpec(tuple(edits))
