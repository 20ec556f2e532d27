import random

import pytest

from stabheap.core import HeapState


def make_state(capacity, vals=None, heights=None, nextslots=None,
               toggles=None):
    st = HeapState(capacity)
    if vals is not None:
        st.vals = list(vals) + [None] * (capacity - len(vals))
    if heights is not None:
        st.heights = list(heights) + [0] * (capacity - len(heights))
    if nextslots is not None:
        st.nextslots = list(nextslots) + [0] * (capacity - len(nextslots))
    if toggles is not None:
        st.toggles = list(toggles) + [0] * (capacity - len(toggles))
    return st


@pytest.fixture
def worked_state():
    """The running 7-slot example: active values {5, 8, 9}, one stale
    subtree on each side, every cached field stale."""
    return make_state(7, vals=[5, 3, 8, None, None, 9, 2],
                      heights=[0] * 7, nextslots=[0] * 7, toggles=[0] * 7)


def random_state(rng: random.Random, capacity: int) -> HeapState:
    """Uniform junk state; helper for quick property sweeps."""
    st = HeapState(capacity)
    for i in range(capacity):
        r = rng.randrange(6)
        st.vals[i] = None if r == 0 else rng.randrange(-8, 24)
        st.heights[i] = rng.randrange(-3, capacity + 2)
        st.nextslots[i] = rng.randrange(-3, capacity + 4)
        st.toggles[i] = rng.randrange(2)
    return st
