import pytest

from tileforge.blocks4d import (
    BUMP_NAMES,
    DENT_NAMES,
    HYPERCUBE,
    NAMES_4D,
    PARTNERS_4D,
    attach,
    check_complement_4d,
    exclusivity_table,
    frame_lists,
    main_cube,
    make_block_4d,
    onion_partition,
    stack_frames,
)
from tileforge.lattice import GeometryError, VoxelSet, is_connected, translate


def test_onion_sizes():
    o = onion_partition()
    assert [len(s) for s in o.shells] == [296, 152, 56, 8]
    assert len(o.K) == 512
    assert o.J.cells.tolist() == [[4, 4, 4]]


def test_onion_shells_partition_the_cube():
    o = onion_partition()
    union = VoxelSet([], 3)
    for s in o.shells:
        assert union.isdisjoint(s)
        union = union | s
    assert union == o.K


@pytest.mark.parametrize("a,b", [("upper", "lower"), ("north", "south"), ("east", "west")])
def test_t4_halves(a, b):
    o = onion_partition()
    ha, hb = getattr(o, a), getattr(o, b)
    assert len(ha) == len(hb) == 4
    assert ha.isdisjoint(hb) and (ha | hb) == o.T4


def test_frame_counts():
    frames = frame_lists()
    for name in DENT_NAMES:
        assert len(frames[name]) == 4
    for name in BUMP_NAMES:
        assert len(frames[name]) == 7
    assert len(frames["E"]) == len(frames["S"]) == 11


def test_volumes():
    vol = {n: len(make_block_4d(n)) for n in NAMES_4D}
    assert vol["c"] == 1664 and vol["C"] == 2432
    for d, b in PARTNERS_4D.items():
        assert vol[d] + vol[b] == HYPERCUBE
    assert vol["E"] == vol["S"] == HYPERCUBE


@pytest.mark.parametrize("name", NAMES_4D)
def test_blocks_connected(name):
    assert is_connected(make_block_4d(name))


@pytest.mark.parametrize("dent", DENT_NAMES)
def test_partner_complements(dent):
    assert check_complement_4d(dent, PARTNERS_4D[dent])


def test_exclusivity_table():
    table = exclusivity_table()
    assert {k for k, ok in table.items() if ok} == set(PARTNERS_4D.items())


def test_attach_phases_align_main_parts():
    cell = (1, 0, 2)
    former = attach("c", "former", cell)
    latter = attach("c", "latter", cell)
    assert translate(former, (0, 0, 0, 4)) == latter
    assert former.mins == (8, 0, 16, 0)


def test_former_dent_and_latter_bump_fill_the_host():
    cell = (0, 1, 0)
    c = attach("c", "former", cell)
    C = attach("C", "latter", cell)
    assert c.isdisjoint(C)
    assert (c | C) == main_cube(cell)


def test_latter_dent_needs_bump_from_next_slice():
    cell = (0, 0, 0)
    c = attach("c", "latter", cell)
    C = attach("C", "former", cell, t0=8)
    assert c.isdisjoint(C)
    assert c | C == translate(main_cube(cell), (0, 0, 0, 4))


def test_interlock_phase_rules():
    with pytest.raises(GeometryError):
        attach("E", "former", (0, 0, 0))
    with pytest.raises(GeometryError):
        attach("c", "middle", (0, 0, 0))
    E = attach("E", None, (0, 0, 0))
    # three bump frames before the host's main part, dent frames at its end
    assert (E.mins[3], E.maxs[3]) == (-3, 7)


@pytest.mark.parametrize("name", ["E", "S"])
def test_interlock_stacks_with_itself_in_time(name):
    blk = make_block_4d(name)
    assert blk.isdisjoint(translate(blk, (0, 0, 0, 8)))


def test_interlocks_do_not_stack_with_each_other():
    E, S = make_block_4d("E"), make_block_4d("S")
    assert not E.isdisjoint(translate(S, (0, 0, 0, 8)))
    assert not S.isdisjoint(translate(E, (0, 0, 0, 8)))


def test_stack_frames_dimension_check():
    with pytest.raises(GeometryError):
        stack_frames([VoxelSet([(0, 0)], 2)])
