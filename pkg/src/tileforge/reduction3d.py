"""Wang tile set -> five polycubes, and periodic tiling witnesses for them.

Block coordinates are 8-voxel cells.  The encoder occupies a
``(2t+2) x (2t+2) x p`` block grid, the selector a ring of outer size
``(2t+4) x (2t+4)`` around it, and the encoder sits in the selector well
at block offset (1, 1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import lcm
from typing import Iterator

import numpy as np
from scipy import ndimage

from . import blocks3d
from .blocks3d import BLOCK, make_block, place_in_cell
from .lattice import Placement, Region, VoxelSet, canonicalize, translate
from .solver import CoverInstance, SolveConfig, solve_constrained
from .tileset import BlockLayout, TileSet
from .wang import WangError, WangTileSet, WangTiling, encode_color, validate, verify_tiling
from .witness import TilingWitness, verify_witness

log = logging.getLogger(__name__)

ENCODER, SELECTOR, LINKER, FILLER, FILLER_PLUS = range(5)
NAMES_3D = ("encoder", "selector", "linker", "F", "F+")

NORTH_BLOCK = {"0": "c", "1": "c-"}
SOUTH_BLOCK = {"0": "d-", "1": "d"}


class ConstructionError(RuntimeError):
    """An assembled witness failed verification; this indicates a bug."""


# -- layouts ----------------------------------------------------------------


def bit_columns(t: int) -> tuple[list[int], list[int]]:
    """Encoder columns carrying the west half (first colour) and east half (second colour)."""
    return list(range(t)), list(range(t + 2, 2 * t + 2))


def encoder_layout(ws: WangTileSet) -> BlockLayout:
    t, n = ws.t, 2 * ws.t + 2
    west, east = bit_columns(t)
    cells = {}
    for z, tile in enumerate(ws.tiles):
        for i in range(n):
            for j in range(n):
                cells[(i, j, z)] = "K"
        for cols, colour in ((west, tile.north), (east, tile.east)):
            for i, bit in zip(cols, encode_color(colour, t)):
                cells[(i, n - 1, z)] = NORTH_BLOCK[bit]
        for cols, colour in ((west, tile.west), (east, tile.south)):
            for i, bit in zip(cols, encode_color(colour, t)):
                cells[(i, 0, z)] = SOUTH_BLOCK[bit]
        cells[(0, 2 * t, z)] = "A"
        cells[(n - 1, 2 * t, z)] = "B"
    return BlockLayout(cells)


def window_columns(t: int) -> list[int]:
    """Selector columns of the top-layer windows (encoder bit columns shifted by one)."""
    west, east = bit_columns(t)
    return [i + 1 for i in west + east]


def selector_layout(ws: WangTileSet) -> BlockLayout:
    t, p = ws.t, ws.p
    w = 2 * t + 4
    windows = set(window_columns(t))
    cells = {}
    for z in range(p):
        top = z == p - 1
        for i in range(w):
            for j in range(w):
                if 0 < i < w - 1 and 0 < j < w - 1:
                    continue
                if j in (0, w - 1) and i in windows:
                    if top:
                        continue
                    cells[(i, j, z)] = "c" if j == 0 else "d"
                else:
                    cells[(i, j, z)] = "K"
        cells[(0, 2 * t + 1, z)] = "a"
        cells[(w - 1, 2 * t + 1, z)] = "b"
    cells[(0, 0, 0)] = "x"
    cells[(w - 1, 0, 0)] = "X"
    cells[(t + 2, 0, 0)] = "y"
    cells[(0, w - 1, 0)] = "Y"
    cells[(w - 1, w - 1, 0)] = "z"
    cells[(w - 1, w - 1, p - 1)] = "z+Z" if p == 1 else "Z"
    return BlockLayout(cells)


def block_voxels(label: str, cell) -> VoxelSet:
    """Voxels of one labelled block placed in its host cell."""
    if label == "K":
        return VoxelSet.box((BLOCK,) * 3, tuple(BLOCK * v for v in cell))
    if label == "z+Z":
        base = np.asarray(cell) * BLOCK
        return place_in_cell("z", cell) | translate(blocks3d.bump_part("Z"), base)
    return place_in_cell(label, cell)


def build_encoder(ws: WangTileSet) -> VoxelSet:
    return canonicalize(encoder_layout(validate(ws)).realize(block_voxels, 3))


def build_selector(ws: WangTileSet) -> VoxelSet:
    return canonicalize(selector_layout(validate(ws)).realize(block_voxels, 3))


LINKER_D_PLUS_OFFSET = (0, 11, 0)


def build_linker() -> VoxelSet:
    """C with D+ directly north of it: an 8x17x8 body with a bump at each end."""
    from .lattice import disjoint_union

    return canonicalize(disjoint_union(make_block("C"), translate(make_block("D+"), LINKER_D_PLUS_OFFSET)))


def build_tileset_3d(ws: WangTileSet) -> TileSet:
    """[encoder, selector, linker, F, F+] for the given Wang set."""
    ws = validate(ws)
    enc_layout, sel_layout = encoder_layout(ws), selector_layout(ws)
    enc = enc_layout.realize(block_voxels, 3)
    sel = sel_layout.realize(block_voxels, 3)
    tiles = (canonicalize(enc), canonicalize(sel), build_linker(), make_block("F"), make_block("F+"))
    anchors = (enc.mins, sel.mins, (0, 0, 0), (0, 0, 0), (0, 0, 0))
    return TileSet(3, NAMES_3D, tiles, anchors, (enc_layout, sel_layout, None, None, None), ws, expected_count=5)


TileSet3 = TileSet


# -- lattice and torus ------------------------------------------------------


@dataclass(frozen=True)
class SelectorLattice:
    """Selector positions in block units: ``m u1 + n u2`` with vertical period ``p`` layers."""

    t: int
    p: int

    @property
    def w(self) -> int:
        return 2 * self.t + 4

    @property
    def u1(self) -> tuple[int, int, int]:
        return (self.w, 0, 0)

    @property
    def u2(self) -> tuple[int, int, int]:
        return (-(self.t + 2), self.w, 0)

    def site(self, i: int, j: int) -> tuple[int, int]:
        """Block position of the selector simulating Wang cell (i, j).

        The Wang east neighbour is the north-east selector (u1 + u2) and the
        Wang north neighbour the north-west one (u2).
        """
        return ((i - j) * (self.t + 2), (i + j) * self.w)

    def torus_blocks(self, wt: WangTiling) -> tuple[int, int, int]:
        big = lcm(wt.h, wt.v)
        return (big * self.w, 2 * big * self.w, self.p)

    def torus(self, wt: WangTiling, time: int | None = None) -> Region:
        bx, by, bz = self.torus_blocks(wt)
        ext = (BLOCK * bx, BLOCK * by, BLOCK * bz)
        if time is not None:
            ext = ext + (time,)
        return Region("torus", ext)

    def sites(self, wt: WangTiling) -> Iterator[tuple[int, int, tuple[int, int]]]:
        """One (i, j, block position) per selector on the fundamental torus."""
        big = lcm(wt.h, wt.v)
        for b in range(2 * big):
            for a in range(2 * big):
                if (a - b) % 2:
                    continue
                i, j = (a + b) // 2, (b - a) // 2
                yield i, j, (a * (self.t + 2), b * self.w)


def encoder_z_origin(p: int, k: int) -> int:
    """Block layer of the encoder's bottom so that its layer ``k`` is the selector's top layer."""
    return (p - 1 - k) % p


@dataclass(frozen=True)
class Skeleton:
    region: Region
    placements: tuple[Placement, ...]
    # (site block x, site block y, wang tile index) for each selector
    sites: tuple[tuple[int, int, int], ...]


def witness_skeleton(ts: TileSet, ws: WangTileSet, wt: WangTiling) -> Skeleton:
    """Selectors on the lattice plus one encoder in every well."""
    lat = SelectorLattice(ws.t, ws.p)
    region = lat.torus(wt)
    placements, sites = [], []
    for i, j, (sx, sy) in lat.sites(wt):
        k = wt.at(i, j)
        placements.append(Placement(SELECTOR, ts.offset_for(SELECTOR, (BLOCK * sx, BLOCK * sy, 0))))
        ez = encoder_z_origin(ws.p, k)
        origin = (BLOCK * (sx + 1), BLOCK * (sy + 1), BLOCK * ez)
        placements.append(Placement(ENCODER, ts.offset_for(ENCODER, origin)))
        sites.append((sx, sy, k))
    placements = [p.reduced(region) for p in placements]
    return Skeleton(region, tuple(placements), tuple(sites))


def constructive_fillers(ts: TileSet, ws: WangTileSet, skel: Skeleton) -> list[Placement]:
    """Filler and linker placements computed directly from the block layouts."""
    t, p = ws.t, ws.p
    n = 2 * t + 2
    west, east = bit_columns(t)
    bits = west + east
    out = []
    for sx, sy, k in skel.sites:
        ez = encoder_z_origin(p, k)
        for s in range(p):
            layer = ws.tiles[(s - ez) % p]
            north = [NORTH_BLOCK[b] for b in encode_color(layer.north, t) + encode_color(layer.east, t)]
            south = [SOUTH_BLOCK[b] for b in encode_color(layer.west, t) + encode_color(layer.south, t)]
            for col, nb, sb in zip(bits, north, south):
                x = BLOCK * (sx + 1 + col)
                north_cell = np.array((x, BLOCK * (sy + n), BLOCK * s))
                if s == p - 1:
                    dy = 5 if nb == "c" else 4
                    out.append(Placement(LINKER, tuple(north_cell + (0, dy, 0))))
                    continue
                out.append(_filler(nb, north_cell))
                out.append(_filler("c", np.array((x, BLOCK * sy, BLOCK * s)), partner=sb))
    return [q.reduced(skel.region) for q in out]


def _filler(south_block: str, cell: np.ndarray, partner: str = "d") -> Placement:
    """Filler between a north-dented block in ``cell`` and the south-dented block above it."""
    if south_block == "c" and partner == "d":
        return Placement(FILLER, tuple(cell + blocks3d.cell_offset("F")))
    if south_block == "c-" and partner == "d":
        return Placement(FILLER_PLUS, tuple(cell + (0, 4, 0)))
    if south_block == "c" and partner == "d-":
        return Placement(FILLER_PLUS, tuple(cell + blocks3d.cell_offset("F+")))
    raise ConstructionError(f"no filler closes {south_block} against {partner}")


# -- residual completion ----------------------------------------------------


def residual_components(region: Region, occupied: np.ndarray) -> list[np.ndarray]:
    """Face-connected components of the free cells of a torus.

    Each item is ``(cells, wraps)``: unwrapped lattice cells, or the raw torus
    cells with ``wraps=True`` when the component cannot be lifted to Z^n.
    """
    free = ~occupied
    structure = ndimage.generate_binary_structure(region.dim, 1)
    labels, n = ndimage.label(free, structure=structure)
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for axis in range(region.dim):
        lo = np.take(labels, 0, axis=axis)
        hi = np.take(labels, -1, axis=axis)
        both = (lo > 0) & (hi > 0)
        for a, b in zip(lo[both].tolist(), hi[both].tolist()):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    roots = np.array([find(a) for a in range(n + 1)])
    merged = roots[labels]
    comps = []
    ext = np.array(region.extents)
    for r in sorted(set(roots[1:].tolist())):
        cells = np.argwhere(merged == r)
        try:
            comps.append((_unwrap(cells, ext), False))
        except ConstructionError:
            # the hole closes on itself through the torus (e.g. a tunnel spanning the full period)
            comps.append((cells, True))
    return comps


def _unwrap(cells: np.ndarray, ext: np.ndarray) -> np.ndarray:
    """Lift a torus component to Z^n by breadth-first search over face neighbours."""
    index = {tuple(c): i for i, c in enumerate(cells.tolist())}
    lifted = np.zeros_like(cells)
    seen = np.zeros(len(cells), dtype=bool)
    seen[0] = True
    lifted[0] = cells[0]
    queue = [0]
    dim = cells.shape[1]
    steps = [s * np.eye(dim, dtype=np.int64)[a] for a in range(dim) for s in (1, -1)]
    while queue:
        i = queue.pop()
        for step in steps:
            nxt = lifted[i] + step
            j = index.get(tuple(np.mod(nxt, ext).tolist()))
            if j is None:
                continue
            if seen[j]:
                if not np.array_equal(lifted[j], nxt):
                    raise ConstructionError("residual component wraps around the torus")
                continue
            seen[j] = True
            lifted[j] = nxt
            queue.append(j)
    return lifted


def complete_residual(
    ts: TileSet,
    region: Region,
    fixed: list[Placement],
    allowed: tuple[int, ...],
    budget: int | None = None,
) -> list[Placement]:
    """Fill every residual hole with the allowed tiles, one component at a time.

    Components are independent because every allowed tile is connected, so
    a placement can never straddle two of them.
    """
    occ = np.zeros(region.extents, dtype=bool)
    for p in fixed:
        cells = np.mod(ts.tiles[p.tile_index].cells + np.asarray(p.offset), region.extents)
        occ[tuple(cells.T)] = True
    out = []
    cache: dict[bytes, list[Placement] | None] = {}
    for comp, wraps in residual_components(region, occ):
        if wraps:
            blocked = VoxelSet.box(region.extents) - VoxelSet(comp, region.dim)
            inst = CoverInstance(region, ts.tiles, blocked)
            res = solve_constrained(inst, (), allowed, budget, SolveConfig(backend="fft"))
            if not res.solved:
                raise ConstructionError("a wrapping residual component cannot be filled")
            out.extend(res.witness.placements)
            continue
        lo = comp.min(axis=0)
        local = comp - lo
        ext = tuple(int(v) for v in local.max(axis=0) + 1)
        key = np.asarray(ext).tobytes() + np.ascontiguousarray(local[np.lexsort(local.T[::-1])]).tobytes()
        if key not in cache:
            box = Region("box", ext)
            blocked = VoxelSet.box(ext) - VoxelSet(local, region.dim)
            inst = CoverInstance(box, ts.tiles, blocked)
            res = solve_constrained(inst, (), allowed, budget, SolveConfig(backend="dlx"))
            cache[key] = list(res.witness.placements) if res.solved else None
        sol = cache[key]
        if sol is None:
            raise ConstructionError(f"residual component at {tuple(lo)} cannot be filled")
        out.extend(Placement(q.tile_index, tuple(np.asarray(q.offset) + lo)).reduced(region) for q in sol)
    return out


def assemble_witness_3d(
    ws: WangTileSet,
    wt: WangTiling,
    completion: str = "solver",
    tileset: TileSet | None = None,
) -> TilingWitness:
    """Periodic tiling of the fundamental torus induced by a periodic Wang tiling.

    ``completion`` selects how the gaps left by selectors and encoders are
    closed: ``"solver"`` runs the cover solver on each residual hole with
    {linker, F, F+}; ``"constructive"`` places them from the layouts.
    """
    ws = validate(ws)
    if not verify_tiling(ws, wt):
        raise WangError("the Wang tiling does not satisfy the edge constraints")
    ts = tileset or build_tileset_3d(ws)
    skel = witness_skeleton(ts, ws, wt)
    if completion == "solver":
        extra = complete_residual(ts, skel.region, list(skel.placements), (LINKER, FILLER, FILLER_PLUS))
    elif completion == "constructive":
        extra = constructive_fillers(ts, ws, skel)
    else:
        raise ValueError(f"unknown completion mode {completion!r}")
    placements = tuple(skel.placements) + tuple(sorted(extra, key=lambda q: (q.tile_index, q.offset)))
    check = verify_witness(skel.region, ts.tiles, placements)
    if not check:
        raise ConstructionError(f"assembled 3D witness is not an exact cover: {check.describe()}")
    source = {"dim": 3, "wang": ws.to_json(), "tiling": wt.to_json()}
    return TilingWitness(skel.region, placements, source)


# -- local fixtures -----------------------------------------------------------


def linker_gap_fixture(south: str, north: str) -> tuple[CoverInstance, list[Placement]]:
    """Two colour blocks facing each other across the two top-layer window cells.

    ``south`` is ``c`` or ``c-`` in block row 0; ``north`` is ``d`` or ``d-`` in
    block row 3 of an 8x32x8 box.  Tiles are [linker, south block, north block].
    """
    if south not in ("c", "c-") or north not in ("d", "d-"):
        raise ValueError("south must be c/c-, north must be d/d-")
    tiles = (build_linker(), make_block(south), make_block(north))
    region = Region("box", (BLOCK, 4 * BLOCK, BLOCK))
    fixed = [
        Placement(1, blocks3d.cell_offset(south)),
        Placement(2, tuple(np.add(blocks3d.cell_offset(north), (0, 3 * BLOCK, 0)))),
    ]
    return CoverInstance(region, tiles), fixed


def linker_fits(south: str, north: str, budget: int | None = None) -> bool:
    inst, fixed = linker_gap_fixture(south, north)
    return solve_constrained(inst, fixed, (0,), budget).solved
