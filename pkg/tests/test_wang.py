import itertools

import pytest
from hypothesis import given, strategies as st

from tileforge.wang import (
    WangError,
    WangTile,
    WangTileSet,
    WangTiling,
    decode_color,
    encode_color,
    enumerate_tilings,
    example_set,
    find_periodic_tiling,
    load_tiling,
    load_wang,
    mismatched_set,
    single_tile_set,
    validate,
    verify_tiling,
)


def test_example_set_shape():
    ws = example_set()
    assert (ws.p, ws.q, ws.t) == (3, 4, 2)
    assert ws.labels == ("red", "green", "blue", "yellow")


@pytest.mark.parametrize("q,t", [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)])
def test_bit_width(q, t):
    assert WangTileSet(q, (WangTile(0, 0, 0, 0),)).t == t


def test_encode_color_big_endian():
    assert encode_color(1, 2) == "01"
    assert encode_color(2, 2) == "10"
    assert encode_color(0, 1) == "0"
    with pytest.raises(WangError):
        encode_color(4, 2)


@given(st.integers(1, 8).flatmap(lambda t: st.tuples(st.just(t), st.integers(0, 2**t - 1))))
def test_encode_decode_roundtrip(tc):
    t, c = tc
    bits = encode_color(c, t)
    assert len(bits) == t
    assert decode_color(bits) == c


def test_validate_rejects_out_of_range_colour():
    with pytest.raises(WangError):
        validate(WangTileSet(2, (WangTile(0, 2, 0, 0),)))
    with pytest.raises(WangError):
        validate(WangTileSet(2, ()))


def test_malformed_json():
    with pytest.raises(WangError):
        WangTileSet.from_json({"q": 2, "tiles": [{"n": 0}]})


def test_json_roundtrip_and_digest():
    ws = example_set()
    again = WangTileSet.from_json(ws.to_json())
    assert again == ws
    assert again.digest() == ws.digest()
    assert single_tile_set().digest() != ws.digest()


def test_fixture_files(fixtures_dir):
    assert load_wang(fixtures_dir / "coherent.json") == single_tile_set()
    assert load_wang(fixtures_dir / "mismatched.json") == mismatched_set()
    wt = load_tiling(fixtures_dir / "uniform_1x1.json")
    assert verify_tiling(single_tile_set(), wt)


def test_mismatched_tile_has_no_tiling():
    for h in range(1, 4):
        for v in range(1, 4):
            assert find_periodic_tiling(mismatched_set(), h, v) is None


def test_example_set_periods():
    # frozen: tileable exactly when the vertical period is a multiple of 3
    ws = example_set()
    found = {(h, v) for h in range(1, 5) for v in range(1, 5) if find_periodic_tiling(ws, h, v)}
    assert found == {(h, 3) for h in range(1, 5)}
    wt = find_periodic_tiling(ws, 1, 3)
    assert wt.assignment == ((0, 2, 1),)


def test_verify_tiling_checks_wraparound():
    ws = example_set()
    assert verify_tiling(ws, WangTiling(1, 3, [[0, 2, 1]]))
    assert not verify_tiling(ws, WangTiling(1, 3, [[0, 1, 2]]))
    with pytest.raises(WangError):
        verify_tiling(ws, WangTiling(2, 1, [[0]]))


def _all_sets(p, q):
    tiles = [WangTile(*c) for c in itertools.product(range(q), repeat=4)]
    for combo in itertools.combinations(tiles, p):
        yield WangTileSet(q, combo)


@pytest.mark.parametrize("p,q", [(1, 1), (1, 2), (2, 2)])
def test_backtracking_is_exhaustive(p, q):
    for ws in _all_sets(p, q):
        for h in (1, 2):
            for v in (1, 2):
                brute = list(enumerate_tilings(ws, h, v))
                got = find_periodic_tiling(ws, h, v)
                assert (got is None) == (not brute)
                if got is not None:
                    assert verify_tiling(ws, got)
                    # ascending search returns the lexicographically first assignment in fill order
                    key = lambda wt: [wt.assignment[i][j] for j in range(v) for i in range(h)]
                    assert key(got) == min(key(b) for b in brute)
