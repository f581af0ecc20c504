import pytest

from tileforge.blocks4d import HYPERCUBE, make_block_4d
from tileforge.lattice import count_components, is_connected
from tileforge.reduction4d import (
    ENCODER,
    FILLER,
    LINKER,
    SELECTOR,
    assemble_witness_4d,
    build_linker_4d,
    build_tileset_4d,
    colour_phases,
    count_labels,
    encoder_layout_4d,
    label,
    parse_label,
    selector_layout_4d,
    spatial_cell_periodic,
    tunnel_tileable,
)
from tileforge.solver import SOLVED, UNSOLVABLE, CoverInstance, solve
from tileforge.lattice import Region
from tileforge.wang import WangTiling, example_set, mismatched_set, single_tile_set
from tileforge.witness import verify_witness


def test_labels_roundtrip():
    assert label("c", "former") == "c_*"
    assert label("c", "latter") == "c^*"
    assert parse_label("A^*") == ("A", "latter")
    assert parse_label("K") == ("K", None)


def test_colour_phases_of_example():
    # red 00, green 01, blue 10, yellow 11
    assert colour_phases(0, 2) == ["latter", "latter"]
    assert colour_phases(1, 2) == ["latter", "former"]
    assert colour_phases(3, 2) == ["former", "former"]


def test_encoder_layout_counts():
    enc = encoder_layout_4d(example_set())
    assert count_labels(enc, "E") == 1
    assert count_labels(enc, "c") == 3 * 8
    assert count_labels(enc, "A") == count_labels(enc, "B") == 3
    for z in range(3):
        assert len(enc.layer(z)) == 36


def test_selector_layout_counts():
    sel = selector_layout_4d(example_set())
    assert count_labels(sel, "S") == 1
    assert count_labels(sel, "c") == 0
    for name in ("x", "y", "z", "X", "Y", "Z"):
        assert count_labels(sel, name) == 1


def test_linker_volume():
    lk = build_linker_4d()
    assert len(lk) == 2 * len(make_block_4d("C")) + 2 * HYPERCUBE == 13056
    assert is_connected(lk)


def test_tileset_example():
    ts = build_tileset_4d(example_set())
    assert len(ts) == 4
    assert ts.tiles[FILLER] == make_block_4d("C")
    assert len(ts.tiles[FILLER]) == 2432
    assert ts.all_connected()
    assert len(ts.tiles[ENCODER]) == 373968
    assert ts.tiles[ENCODER].extents == (48, 48, 24, 11)
    assert len(ts.tiles[SELECTOR]) == 321328
    assert ts.tiles[SELECTOR].extents == (72, 72, 32, 11)


def test_p1_selector_split_by_windows():
    ts = build_tileset_4d(single_tile_set())
    assert count_components(ts.tiles[SELECTOR]) == 5
    assert is_connected(ts.tiles[ENCODER])


@pytest.mark.parametrize("slices", [1, 2])
def test_coherent_witness(slices):
    ws = single_tile_set()
    ts = build_tileset_4d(ws)
    w = assemble_witness_4d(ws, WangTiling.uniform(), slices=slices, tileset=ts)
    assert w.region.extents == (48, 96, 8, 8 * slices)
    assert verify_witness(w.region, ts.tiles, w.placements)
    assert spatial_cell_periodic(w, ts.tiles)


def test_two_tile_witness(fixtures_dir):
    from tileforge.wang import load_tiling, load_wang

    ws = load_wang(fixtures_dir / "two_tiles.json")
    wt = load_tiling(fixtures_dir / "alternating_2x1.json")
    ts = build_tileset_4d(ws)
    w = assemble_witness_4d(ws, wt, tileset=ts)
    assert verify_witness(w.region, ts.tiles, w.placements)


@pytest.mark.parametrize("south,north,ok", [
    ("former", "former", True), ("latter", "latter", True),
    ("former", "latter", False), ("latter", "former", False),
])
def test_time_tunnel(south, north, ok):
    out = tunnel_tileable(south, north)
    assert out.status == (SOLVED if ok else UNSOLVABLE)


def test_mismatched_untileable():
    ts = build_tileset_4d(mismatched_set())
    out = solve(CoverInstance(Region("torus", (48, 96, 8, 8)), ts.tiles), budget=100_000)
    assert out.status == UNSOLVABLE
