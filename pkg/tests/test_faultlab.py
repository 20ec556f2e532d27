import json
import random

import pytest

from stabheap import faultlab
from stabheap.analyzer import active_bag, active_tree, check_legitimacy
from stabheap.core import LEFT, RIGHT, HeapState, child_of, parent_of
from stabheap.faultlab import (FaultEdit, FaultSpec, StateGenSpec, generate,
                               inject, mixed_spec, parse_fault_text,
                               random_faults, restore, restore_text, snapshot,
                               snapshot_text)

from conftest import make_state, random_state


class TestInject:
    def test_emptying_the_root_loses_everything(self):
        s = generate(StateGenSpec(seed=1, capacity=15, mode="legitimate",
                                  items=15))
        inject(s, FaultSpec.of((0, "val", None)))
        assert active_tree(s) == set()

    def test_empty_spec_changes_nothing(self):
        s = generate(StateGenSpec(seed=2, capacity=7, mode="legitimate",
                                  items=5))
        snap = s.clone()
        inject(s, FaultSpec(()))
        assert s.fields_equal(snap)

    def test_negative_height_breaks_height_condition(self):
        s = generate(StateGenSpec(seed=3, capacity=7, mode="legitimate",
                                  items=5))
        inject(s, FaultSpec.of((1, "height", -5)))
        rep = check_legitimacy(s)
        assert not rep.heights_ok

    def test_rejects_invalid_slots_and_fields(self):
        s = HeapState(7)
        with pytest.raises(ValueError):
            inject(s, FaultSpec.of((7, "val", 1)))
        with pytest.raises(ValueError):
            inject(s, FaultSpec.of((-1, "val", 1)))
        with pytest.raises(ValueError):
            inject(s, FaultSpec.of((0, "weight", 1)))
        with pytest.raises(ValueError):
            inject(s, FaultSpec.of((0, "height", None)))

    def test_later_edits_win(self):
        s = HeapState(3)
        inject(s, FaultSpec.of((0, "val", 4), (0, "val", 9)))
        assert s.vals[0] == 9

    def test_toggle_normalizes_to_one_bit(self):
        s = HeapState(3)
        inject(s, FaultSpec.of((0, "toggle", 12345), (1, "toggle", -2)))
        assert s.toggles[0] in (LEFT, RIGHT)
        assert s.toggles[1] in (LEFT, RIGHT)

    def test_structure_is_untouchable(self):
        s = HeapState(15)
        before = [(child_of(s, x, LEFT), child_of(s, x, RIGHT),
                   parent_of(s, x)) for x in range(15)]
        rng = random.Random(0)
        inject(s, random_faults(rng, 15, 60))
        after = [(child_of(s, x, LEFT), child_of(s, x, RIGHT),
                  parent_of(s, x)) for x in range(15)]
        assert before == after


class TestGenerate:
    def test_deterministic(self):
        for mode, items, faults in (("legitimate", 9, 0), ("arbitrary", 0, 0),
                                    ("corrupt", 9, 4)):
            spec = StateGenSpec(seed=77, capacity=15, mode=mode, items=items,
                                faults=faults)
            assert generate(spec).fields_equal(generate(spec))

    def test_legitimate_empty(self):
        s = generate(StateGenSpec(seed=0, capacity=7, mode="legitimate"))
        assert active_tree(s) == set()
        assert check_legitimacy(s).legitimate

    def test_legitimate_builds_are_legitimate(self):
        for seed in range(50):
            n = seed % 16
            s = generate(StateGenSpec(seed=seed, capacity=15,
                                      mode="legitimate", items=n))
            rep = check_legitimacy(s)
            assert rep.legitimate
            assert rep.m == n

    def test_arbitrary_states_never_break_the_analyzer(self):
        for seed in range(2000):
            s = generate(StateGenSpec(seed=seed, capacity=15,
                                      mode="arbitrary"))
            rep = check_legitimacy(s)
            assert rep.s_members <= rep.t_members

    def test_item_count_capped_by_capacity(self):
        with pytest.raises(ValueError):
            generate(StateGenSpec(seed=0, capacity=3, mode="legitimate",
                                  items=4))

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            generate(StateGenSpec(seed=0, capacity=3, mode="chaotic"))

    def test_mixed_pool_spreads_active_sizes(self):
        sizes = [len(active_tree(generate(mixed_spec(1, 63, i))))
                 for i in range(60)]
        assert min(sizes) <= 3
        assert max(sizes) >= 32


class TestSnapshot:
    def test_round_trip_arbitrary_states(self):
        rng = random.Random(55)
        for seed in range(1000):
            s = generate(StateGenSpec(seed=seed, capacity=rng.randrange(1, 20),
                                      mode="arbitrary"))
            assert restore(snapshot(s)).fields_equal(s)

    def test_text_round_trip_is_bit_exact(self):
        s = generate(StateGenSpec(seed=9, capacity=9, mode="arbitrary"))
        s.vals[0] = 2 ** 63 - 1
        s.heights[1] = -(2 ** 63)
        text = snapshot_text(s)
        assert restore_text(text).fields_equal(s)
        assert snapshot_text(restore_text(text)) == text

    def test_rejects_zero_capacity(self):
        with pytest.raises(ValueError):
            restore({"K": 0, "nodes": []})

    def test_rejects_malformed_documents(self):
        good = snapshot(make_state(2, vals=[1, 2]))
        for mutate in (
            lambda d: d.pop("nodes"),
            lambda d: d["nodes"].pop(),
            lambda d: d["nodes"][0].update(toggle="X"),
            lambda d: d["nodes"][0].update(val="five"),
            lambda d: d["nodes"][0].update(height=None),
            lambda d: d["nodes"][0].update(val=True),
        ):
            doc = json.loads(json.dumps(good))
            mutate(doc)
            with pytest.raises(ValueError):
                restore(doc)
        with pytest.raises(ValueError):
            restore_text("{not json")

    def test_hand_written_worked_state(self):
        doc = {"K": 7, "nodes": [
            {"val": 5, "height": 0, "nextslot": 0, "toggle": "L"},
            {"val": 3, "height": 0, "nextslot": 0, "toggle": "L"},
            {"val": 8, "height": 0, "nextslot": 0, "toggle": "L"},
            {"val": None, "height": 0, "nextslot": 0, "toggle": "L"},
            {"val": None, "height": 0, "nextslot": 0, "toggle": "L"},
            {"val": 9, "height": 0, "nextslot": 0, "toggle": "L"},
            {"val": 2, "height": 0, "nextslot": 0, "toggle": "L"},
        ]}
        s = restore(doc)
        assert active_bag(s) == (5, 8, 9)

    def test_fault_spec_text(self):
        spec = parse_fault_text('[[0, "val", null], [1, "height", -5]]')
        assert spec.edits == (FaultEdit(0, "val", None),
                              FaultEdit(1, "height", -5))
        with pytest.raises(ValueError):
            parse_fault_text('{"not": "a list"}')
        with pytest.raises(ValueError):
            parse_fault_text('[[0, "val"]]')
