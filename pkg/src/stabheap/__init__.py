"""Self-stabilizing bounded-capacity binary min-heap with analysis tooling.

The heap keeps serving insert/delete-min from arbitrarily corrupted field
states, with responses that faithfully reflect the live (active-tree)
content, and provably converges back to a legitimate state within a number
of operations linear in the initial content size.  The package bundles the
data structure itself with everything needed to measure those claims:
state analysis, fault injection, history checkers, and a benchmark CLI.
"""

from .core import LEFT, RIGHT, HeapState, child_of, encounter_check, parent_of
from .ops import (OpResponse, ResponseKind, StabilizingHeap, balance,
                  deep_leaf, delete_min, down_heapify, find_slot, insert,
                  left_fringe, next_path, refresh_path, sw_ancestor,
                  up_heapify, verify)
from .analyzer import (AnalysisReport, BalanceParams, active_bag, active_tree,
                       check_legitimacy, convergence_probe, depth_of,
                       gap_value, max_height, order_and_fields_ok,
                       truncation_tree)
from .faultlab import (FaultEdit, FaultSpec, StateGenSpec, generate, inject,
                       random_faults, restore, restore_text, snapshot,
                       snapshot_text)
from .history import (ContentTracker, HistoryEvent, Recorder, Verdict,
                      Violation, check_availability,
                      check_legitimate_history, check_stabilization)
from .reference import ReferenceHeap
from .strawmen import AlwaysFailHeap, ResettingHeap

__version__ = "0.1.0"

__all__ = [
    "LEFT", "RIGHT", "HeapState", "child_of", "parent_of", "encounter_check",
    "OpResponse", "ResponseKind", "StabilizingHeap", "insert", "delete_min",
    "verify", "balance", "deep_leaf", "find_slot", "up_heapify",
    "down_heapify", "next_path", "left_fringe", "sw_ancestor", "refresh_path",
    "AnalysisReport", "BalanceParams", "truncation_tree", "active_tree",
    "active_bag", "check_legitimacy", "gap_value", "max_height", "depth_of",
    "order_and_fields_ok", "convergence_probe",
    "FaultEdit", "FaultSpec", "StateGenSpec", "inject", "generate",
    "random_faults", "snapshot", "restore", "snapshot_text", "restore_text",
    "HistoryEvent", "Recorder", "Verdict", "Violation", "ContentTracker",
    "check_legitimate_history", "check_availability", "check_stabilization",
    "ReferenceHeap", "AlwaysFailHeap", "ResettingHeap",
]
