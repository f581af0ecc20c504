import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import brute_force_tileable, random_instance, sat_satisfiable
from tileforge.lattice import GeometryError, Placement, Region, VoxelSet
from tileforge.solver import (
    BUDGET,
    SOLVED,
    UNSOLVABLE,
    CoverInstance,

    SolveConfig,
    export_sat,
    parse_dimacs,
    solve,
    solve_constrained,
    solve_tiles,
)
from tileforge.solver.dlx import DancingLinks
from tileforge.witness import TilingWitness, verify_witness

DOMINO = VoxelSet([(0, 0), (1, 0)])
DOMINO_V = VoxelSet([(0, 0), (0, 1)])
MONO = VoxelSet([(0, 0)])


def test_domino_box():
    out = solve_tiles(Region("box", (2, 2)), [DOMINO, DOMINO_V])
    assert out.status == SOLVED
    assert verify_witness(Region("box", (2, 2)), [DOMINO, DOMINO_V], out.witness.placements)


def test_odd_area_unsolvable():
    assert solve_tiles(Region("box", (3, 3)), [DOMINO, DOMINO_V]).status == UNSOLVABLE


def test_empty_region_is_trivially_solved():
    out = solve_tiles(Region("box", (0, 3)), [DOMINO])
    assert out.status == SOLVED and out.witness.placements == ()


def test_domino_torus_placement_count():
    # distinct offsets of the same cell set are kept as separate placements
    inst = CoverInstance(Region("torus", (2, 2)), (DOMINO,))
    assert len(inst.placements) == 4
    cnf = export_sat(CoverInstance(Region("box", (2, 2)), (DOMINO, DOMINO_V)))
    assert cnf.n_vars == 4


def test_self_overlapping_tile_is_skipped():
    long = VoxelSet([(0, 0), (1, 0), (2, 0)])
    inst = CoverInstance(Region("torus", (2, 2)), (long,))
    assert inst.placements == []
    assert solve(inst).status == UNSOLVABLE


def test_budget_exhaustion():
    out = solve_tiles(Region("box", (4, 6)), [DOMINO, DOMINO_V], budget=1, backend="dlx")
    assert out.status == BUDGET


def test_constrained_completion():
    region = Region("box", (2, 3))
    inst = CoverInstance(region, (DOMINO, DOMINO_V))
    fixed = [Placement(0, (0, 0)), Placement(0, (0, 1))]
    out = solve_constrained(inst, fixed, [0])
    assert out.status == SOLVED
    assert out.witness.placements[:2] == tuple(fixed)
    # one-cell hole
    inst3 = CoverInstance(Region("box", (3, 1)), (DOMINO,))
    assert solve_constrained(inst3, [Placement(0, (0, 0))], [0]).status == UNSOLVABLE


def test_allowed_tiles_out_of_range():
    inst = CoverInstance(Region("box", (2, 2)), (DOMINO,))
    with pytest.raises(GeometryError):
        solve_constrained(inst, (), [3])


def test_dimension_mismatch():
    with pytest.raises(GeometryError):
        CoverInstance(Region("box", (2, 2, 2)), (DOMINO,))


def test_dlx_exact_cover_small():
    # columns 0..2; rows {0,1}, {2}, {1,2}, {0}
    dl = DancingLinks(3, [[0, 1], [2], [1, 2], [0]])
    sol = dl.search()
    assert sorted(sol) in ([0, 1], [2, 3])


def test_dimacs_roundtrip(tmp_path):
    cnf = export_sat(CoverInstance(Region("box", (2, 2)), (DOMINO, DOMINO_V)))
    path = tmp_path / "x.cnf"
    cnf.save(path)
    again = parse_dimacs(path.read_text())
    assert again == cnf
    assert path.read_text().startswith("p cnf 4 ")


def test_unsolvable_sat_export():
    cnf = export_sat(CoverInstance(Region("box", (3, 3)), (DOMINO, DOMINO_V)))
    assert not sat_satisfiable(cnf)


@pytest.mark.parametrize("backend", ["dlx", "fft"])
def test_backends_agree_on_witness_and_nodes(backend):
    rng = np.random.default_rng(7)
    ref = None
    for _ in range(30):
        region, tiles = random_instance(rng)
        a = solve(CoverInstance(region, tuple(tiles)), config=SolveConfig(backend="dlx"))
        b = solve(CoverInstance(region, tuple(tiles)), config=SolveConfig(backend=backend))
        assert (a.status, a.nodes) == (b.status, b.nodes)
        if a.witness:
            assert a.witness.placements == b.witness.placements


def test_determinism():
    rng = np.random.default_rng(11)
    for _ in range(20):
        region, tiles = random_instance(rng)
        a = solve(CoverInstance(region, tuple(tiles)))
        b = solve(CoverInstance(region, tuple(tiles)))
        assert (a.status, a.nodes) == (b.status, b.nodes)
        assert (a.witness is None) == (b.witness is None)
        if a.witness:
            assert a.witness.placements == b.witness.placements


def test_parallel_branches_same_status(monkeypatch):
    rng = np.random.default_rng(5)
    for _ in range(6):
        region, tiles = random_instance(rng)
        region = Region("torus", region.extents)
        serial = solve(CoverInstance(region, tuple(tiles)), config=SolveConfig(threads=1))
        par = solve(CoverInstance(region, tuple(tiles)), config=SolveConfig(threads=2))
        assert serial.status == par.status


@given(st.integers(0, 2**32 - 1))
def test_soundness_and_completeness(seed):
    region, tiles = random_instance(np.random.default_rng(seed))
    inst = CoverInstance(region, tuple(tiles))
    out = solve(inst)
    assert out.solved == brute_force_tileable(region, tiles)
    if out.solved:
        assert verify_witness(region, tiles, out.witness.placements)


def test_witness_json_roundtrip(tmp_path):
    out = solve_tiles(Region("torus", (2, 4)), [DOMINO])
    path = tmp_path / "w.json"
    out.witness.save(path)
    again = TilingWitness.load(path)
    assert again.placements == out.witness.placements and again.region == out.witness.region
