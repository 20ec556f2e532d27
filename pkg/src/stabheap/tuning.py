"""Harness constants frozen from pilot measurements.

The step budget constants bound slot visits per operation two ways with the
same pair: ``STEP_C0 + STEP_C1 * (floor(lg K) + 1)`` from any state, and
``STEP_C0 + STEP_C1 * (height(active tree) + 1)`` from legitimate states.
Pilot maxima were ~31 visits per level from arbitrary states and ~34 from
legitimate ones (36 on single-item heaps), so the frozen pair keeps a
15-45% margin.

The convergence budget bounds public operations until full legitimacy by
``CONVERGE_FACTOR * m + CONVERGE_SLACK`` for initial active size ``m``;
pilots never exceeded ``1.0 * m`` (worst case one operation at m = 1).
"""

STEP_C0 = 16
STEP_C1 = 38

CONVERGE_FACTOR = 2
CONVERGE_SLACK = 2

STEP_BOUND = (STEP_C0, STEP_C1)


def step_budget_capacity(capacity: int) -> int:
    """Visit budget for one operation on a capacity-``capacity`` heap."""
    return STEP_C0 + STEP_C1 * capacity.bit_length()


def step_budget_height(height: int) -> int:
    """Visit budget for one operation on a legitimate heap of this height."""
    return STEP_C0 + STEP_C1 * max(height + 1, 1)


def converge_budget(m: int) -> int:
    """Operation budget for reaching full legitimacy from active size m."""
    return CONVERGE_FACTOR * m + CONVERGE_SLACK
