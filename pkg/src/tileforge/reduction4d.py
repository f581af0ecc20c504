"""Wang tile set -> four polyhypercubes, and lifted 4D tiling witnesses.

Each 3D tile is thickened to an 8-frame slice.  Colour bits become the time
phase of a 4-frame ``c`` attachment: bit 0 is attached to the latter half
(``c^*``), bit 1 to the former half (``c_*``).  Labels in block layouts use
``name_*`` for former-half and ``name^*`` for latter-half attachments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .blocks4d import INTERLOCK_NAMES, SIDE, attach, main_cube, make_block_4d
from .lattice import Placement, Region, VoxelSet, canonicalize
from .reduction3d import (
    ConstructionError,
    SelectorLattice,
    bit_columns,
    encoder_z_origin,
    window_columns,
)
from .solver import CoverInstance, SolveConfig, solve_constrained
from .tileset import BlockLayout, TileSet
from .wang import WangError, WangTileSet, WangTiling, encode_color, validate, verify_tiling
from .witness import TilingWitness, verify_witness

ENCODER, SELECTOR, LINKER, FILLER = range(4)
NAMES_4D = ("encoder", "selector", "linker", "filler")

SLICE = 8
BIT_PHASE = {"0": "latter", "1": "former"}
SUFFIX = {"former": "_*", "latter": "^*"}


def label(name: str, phase: str) -> str:
    return name + SUFFIX[phase]


def parse_label(lab: str) -> tuple[str, str | None]:
    if lab.endswith("_*"):
        return lab[:-2], "former"
    if lab.endswith("^*"):
        return lab[:-2], "latter"
    return lab, None


def block_voxels_4d(lab: str, cell: Sequence[int]) -> VoxelSet:
    name, phase = parse_label(lab)
    if name == "K":
        return main_cube(cell)
    return attach(name, phase, cell)


def colour_phases(colour: int, t: int) -> list[str]:
    return [BIT_PHASE[b] for b in encode_color(colour, t)]


def encoder_layout_4d(ws: WangTileSet) -> BlockLayout:
    t, p, n = ws.t, ws.p, 2 * ws.t + 2
    west, east = bit_columns(t)
    cells = {}
    for z, tile in enumerate(ws.tiles):
        for i in range(n):
            for j in range(n):
                cells[(i, j, z)] = "K"
        for row, pairs in ((n - 1, ((west, tile.north), (east, tile.east))), (0, ((west, tile.west), (east, tile.south)))):
            for cols, colour in pairs:
                for i, phase in zip(cols, colour_phases(colour, t)):
                    cells[(i, row, z)] = label("c", phase)
        cells[(0, 2 * t, z)] = "A^*"
        cells[(n - 1, 2 * t, z)] = "B^*"
    cells[(t, t + 1, p - 1)] = "E"
    return BlockLayout(cells)


def selector_layout_4d(ws: WangTileSet) -> BlockLayout:
    t, p = ws.t, ws.p
    w = 2 * t + 4
    windows = set(window_columns(t))
    cells = {}
    for z in range(p):
        for i in range(w):
            for j in range(w):
                if 0 < i < w - 1 and 0 < j < w - 1:
                    continue
                if z == p - 1 and j in (0, w - 1) and i in windows:
                    continue
                cells[(i, j, z)] = "K"
        cells[(1, 2 * t + 1, z)] = "a_*"
        cells[(w - 2, 2 * t + 1, z)] = "b_*"
    cells[(0, 0, 0)] = "x_*"
    cells[(t + 2, 0, 0)] = "y_*"
    cells[(w - 1, w - 1, 0)] = "z_*"
    cells[(w, 0, 0)] = "X^*"
    cells[(0, w, 0)] = "Y^*"
    cells[(w - 1, w - 1, p)] = "Z^*"
    cells[(0, w - 1, p - 1)] = "S"
    return BlockLayout(cells)


def linker_layout_4d() -> BlockLayout:
    return BlockLayout({(0, 0, 0): "C^*", (0, 1, 0): "K", (0, 2, 0): "K", (0, 3, 0): "C^*"})


def filler_layout_4d() -> BlockLayout:
    return BlockLayout({(0, 0, 0): "C^*"})


def _realize(layout: BlockLayout) -> VoxelSet:
    return layout.realize(block_voxels_4d, 4)


def build_encoder_4d(ws: WangTileSet) -> VoxelSet:
    return canonicalize(_realize(encoder_layout_4d(validate(ws))))


def build_selector_4d(ws: WangTileSet) -> VoxelSet:
    return canonicalize(_realize(selector_layout_4d(validate(ws))))


def build_linker_4d() -> VoxelSet:
    return canonicalize(_realize(linker_layout_4d()))


def build_tileset_4d(ws: WangTileSet) -> TileSet:
    """[encoder, selector, linker, filler]; the filler is the block C itself."""
    ws = validate(ws)
    layouts = (encoder_layout_4d(ws), selector_layout_4d(ws), linker_layout_4d(), filler_layout_4d())
    raw = [_realize(lay) for lay in layouts]
    tiles = tuple(canonicalize(r) for r in raw)
    anchors = tuple(r.mins for r in raw)
    return TileSet(4, NAMES_4D, tiles, anchors, layouts, ws, expected_count=4)


TileSet4 = TileSet


def count_labels(layout: BlockLayout, name: str) -> int:
    return sum(1 for lab in layout.cells.values() if parse_label(lab)[0] == name)


# -- witnesses ------------------------------------------------------------------


def assemble_witness_4d(
    ws: WangTileSet,
    wt: WangTiling,
    slices: int = 1,
    tileset: TileSet | None = None,
) -> TilingWitness:
    """Lift the 3D construction: every slice repeats the same spatial pattern.

    Colour cells below the top layer are completed in time by one filler
    each; on the top layer linkers bridge facing colour cells, aligned with
    the slice for former-half pairs and shifted by half a slice (so they
    straddle the slice boundary) for latter-half pairs.
    """
    ws = validate(ws)
    if not verify_tiling(ws, wt):
        raise WangError("the Wang tiling does not satisfy the edge constraints")
    ts = tileset or build_tileset_4d(ws)
    t, p = ws.t, ws.p
    n = 2 * t + 2
    lat = SelectorLattice(t, p)
    region = lat.torus(wt, time=SLICE * slices)
    west, east = bit_columns(t)
    bits = west + east
    base = []
    for i, j, (sx, sy) in lat.sites(wt):
        k = wt.at(i, j)
        ez = encoder_z_origin(p, k)
        base.append(Placement(SELECTOR, ts.offset_for(SELECTOR, (SIDE * sx, SIDE * sy, 0, 0))))
        base.append(Placement(ENCODER, ts.offset_for(ENCODER, (SIDE * (sx + 1), SIDE * (sy + 1), SIDE * ez, 0))))
        for s in range(p):
            layer = ws.tiles[(s - ez) % p]
            north = colour_phases(layer.north, t) + colour_phases(layer.east, t)
            south = colour_phases(layer.west, t) + colour_phases(layer.south, t)
            for col, nph, sph in zip(bits, north, south):
                x = SIDE * (sx + 1 + col)
                ncell = (x, SIDE * (sy + n), SIDE * s)
                if s == p - 1:
                    base.append(Placement(LINKER, ts.offset_for(LINKER, ncell + (_time(nph),))))
                    continue
                base.append(Placement(FILLER, ts.offset_for(FILLER, ncell + (_time(nph),))))
                scell = (x, SIDE * (sy + 1), SIDE * s)
                base.append(Placement(FILLER, ts.offset_for(FILLER, scell + (_time(sph),))))
    placements = []
    for r in range(slices):
        for q in base:
            off = q.offset[:3] + (q.offset[3] + SLICE * r,)
            placements.append(Placement(q.tile_index, off).reduced(region))
    check = verify_witness(region, ts.tiles, placements)
    if not check:
        raise ConstructionError(f"assembled 4D witness is not an exact cover: {check.describe()}")
    source = {"dim": 4, "wang": ws.to_json(), "tiling": wt.to_json(), "slices": slices}
    return TilingWitness(region, tuple(placements), source)


def _time(phase: str) -> int:
    """Layout time origin for a latter-half attachment completing a c block of ``phase``."""
    return 0 if phase == "former" else 4


# -- time tunnel ------------------------------------------------------------------


def tunnel_fixture(south_phase: str, north_phase: str, with_filler: bool = False):
    """Two c blocks facing each other across two empty window cells, on a time torus.

    Region: torus of 1 x 4 x 1 blocks and one slice.  Tiles are
    [linker, c, (filler)]; the c blocks are fixed in block rows 0 and 3.
    """
    tiles = [build_linker_4d(), make_block_4d("c")]
    if with_filler:
        tiles.append(make_block_4d("C"))
    region = Region("torus", (SIDE, 4 * SIDE, SIDE, SLICE))
    fixed = [
        Placement(1, (0, 0, 0, 0 if south_phase == "former" else 4)),
        Placement(1, (0, 3 * SIDE, 0, 0 if north_phase == "former" else 4)),
    ]
    allowed = (0, 2) if with_filler else (0,)
    return CoverInstance(region, tuple(tiles)), fixed, allowed


def tunnel_tileable(south_phase: str, north_phase: str, with_filler: bool = False, budget: int | None = None):
    inst, fixed, allowed = tunnel_fixture(south_phase, north_phase, with_filler)
    return solve_constrained(inst, fixed, allowed, budget, SolveConfig(backend="fft"))


def spatial_cell_periodic(witness: TilingWitness, tiles: Sequence[VoxelSet], period: int = SLICE) -> bool:
    """Is cell ownership invariant under a time shift by ``period``?"""
    ext = witness.region.extents
    owner = np.full(ext, -1, dtype=np.int64)
    for idx, q in enumerate(witness.placements):
        cells = np.mod(tiles[q.tile_index].cells + np.asarray(q.offset), ext)
        owner[tuple(cells.T)] = q.tile_index
    return bool(np.array_equal(owner, np.roll(owner, period, axis=3)))
