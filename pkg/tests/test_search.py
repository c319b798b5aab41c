import random

import pytest

from capkit.caps import CapSet, is_cap, layers
from capkit.classify import grow_classes
from capkit.layers import MAXCAP
from capkit.search import BudgetExceeded, ScanTask, layered_caps, scan_pair, table_cell


def _pairs(seed, count):
    rng = random.Random(seed)
    grown = grow_classes(3)
    sizes = [s for s in grown if s >= 3]
    for _ in range(count):
        A = rng.choice(grown[rng.choice(sizes)])
        B = rng.choice(grown[rng.choice(sizes)])
        yield A, B


@pytest.mark.parametrize("seed", range(4))
def test_compiled_matches_python(seed):
    for A, B in _pairs(seed, 3):
        t = (2, 3)
        py = scan_pair(ScanTask(A, B, tallies=t, engine="python"))
        cc = scan_pair(ScanTask(A, B, tallies=t, engine="compiled"))
        assert (py.max_middle, py.tallies, py.probe_weight, py.probe_violations) == (
            cc.max_middle,
            cc.tallies,
            cc.probe_weight,
            cc.probe_violations,
        )
        assert py.digest == cc.digest


@pytest.mark.parametrize("seed", range(2))
def test_pruning_modes_agree(seed):
    for A, B in _pairs(100 + seed, 3):
        a = scan_pair(ScanTask(A, B, tallies=(3,), mode="symmetry"))
        b = scan_pair(ScanTask(A, B, tallies=(3,), mode="none", engine="python"))
        assert a.max_middle == b.max_middle and a.tallies == b.tallies


def test_witnesses_are_caps_with_layer_counts():
    grown = grow_classes(3)
    A, B = grown[9][0], grown[8][1]
    res = scan_pair(ScanTask(A, B))
    wit = res.witnesses()
    assert wit
    for W in wit:
        assert is_cap(W)
        lo, mid, hi = layers(W)
        assert (lo.size, mid.size, hi.size) == (9, res.max_middle, 8)
        assert lo == A


def test_empty_layers():
    E = CapSet.empty(3)
    res = scan_pair(ScanTask(E, E))
    assert res.max_middle == MAXCAP[3]


def test_table_cell_is_symmetric():
    grown = grow_classes(3)
    A, B = grown[9][0], grown[7][0]
    assert table_cell(A, B) == table_cell(B, A)


def test_layered_caps_lists_every_size():
    grown = grow_classes(3)
    A = B = grown[8][0]
    top = scan_pair(ScanTask(A, B)).max_middle
    caps, res = layered_caps(A, B, 16 + top - 1)
    assert res.max_middle == top
    assert {S.size for S in caps} == {15 + top, 16 + top}
    assert all(is_cap(S) for S in caps)


def test_checkpoint_resume(tmp_path, reps4):
    A = B = reps4["990A1"]
    log = tmp_path / "scan.log"
    with pytest.raises(BudgetExceeded) as e:
        scan_pair(ScanTask(A, B, tallies=(5,)), checkpoint=log, chunk_limit=3)
    assert e.value.partial is not None
    full = scan_pair(ScanTask(A, B, tallies=(5,)), checkpoint=log)
    fresh = scan_pair(ScanTask(A, B, tallies=(5,)))
    assert full.digest == fresh.digest and full.max_middle == 5


def test_threads_do_not_change_results(reps4):
    A, B = reps4["981A"], reps4["972A"]
    one = scan_pair(ScanTask(A, B, tallies=(4,)), threads=1)
    two = scan_pair(ScanTask(A, B, tallies=(4,)), threads=2)
    assert one.digest == two.digest
