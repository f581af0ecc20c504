"""Exact-cover instances: a region, a tile list and the placements they admit."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..lattice import GeometryError, Placement, Region, VoxelSet


def self_overlaps(tile: VoxelSet, region: Region) -> bool:
    """True if the tile wraps onto itself on the torus (it can then never be placed)."""
    if not region.is_torus:
        return False
    wrapped = np.mod(tile.cells, region.extents)
    return len(np.unique(wrapped, axis=0)) != len(tile)


def offset_range(tile: VoxelSet, region: Region) -> list[range]:
    """Per-axis offsets to scan: one fundamental domain on a torus, in-box positions otherwise."""
    if region.is_torus:
        return [range(e) for e in region.extents]
    lo, hi = tile.mins, tile.maxs
    return [range(-l, e - h) for l, h, e in zip(lo, hi, region.extents)]


@dataclass(eq=False)
class CoverInstance:
    """Exact-cover problem over ``region`` with translated copies of ``tiles``.

    ``blocked`` cells are treated as already covered.  Placements are
    enumerated lazily (in tile order, then lexicographic offset order) since
    large tori are searched without ever materialising them.
    """

    region: Region
    tiles: tuple[VoxelSet, ...]
    blocked: VoxelSet | None = None
    _placements: list[Placement] | None = field(default=None, repr=False)
    _rows: list[np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.tiles = tuple(self.tiles)
        for k, tile in enumerate(self.tiles):
            if not len(tile):
                raise GeometryError(f"tile {k} is empty")
            if tile.dim != self.region.dim:
                raise GeometryError(f"tile {k} has dimension {tile.dim}, region has {self.region.dim}")
        if self.blocked is not None and len(self.blocked) == 0:
            self.blocked = None

    @property
    def dim(self) -> int:
        return self.region.dim

    def blocked_mask(self) -> np.ndarray:
        mask = np.zeros(self.region.extents, dtype=bool)
        if self.blocked is not None:
            cells = self.blocked.cells
            if self.region.is_torus:
                cells = np.mod(cells, self.region.extents)
            mask[tuple(cells.T)] = True
        return mask

    def cells_of(self, tile_index: int, offset: Sequence[int]) -> np.ndarray:
        """Flat region indices covered by a placement (wrapped on tori)."""
        cells = self.tiles[tile_index].cells + np.asarray(offset, dtype=np.int64)
        if self.region.is_torus:
            cells = np.mod(cells, self.region.extents)
        return np.ravel_multi_index(tuple(cells.T), self.region.extents)

    def _enumerate(self):
        blocked = self.blocked_mask().ravel()
        placements, rows = [], []
        for k, tile in enumerate(self.tiles):
            if self_overlaps(tile, self.region):
                continue
            for off in itertools.product(*offset_range(tile, self.region)):
                flat = self.cells_of(k, off)
                if blocked[flat].any():
                    continue
                placements.append(Placement(k, off))
                rows.append(flat)
        self._placements, self._rows = placements, rows

    @property
    def placements(self) -> list[Placement]:
        if self._placements is None:
            self._enumerate()
        return self._placements

    @property
    def rows(self) -> list[np.ndarray]:
        """Covered flat cell indices of each placement, aligned with :attr:`placements`."""
        if self._rows is None:
            self._enumerate()
        return self._rows

    def with_blocked(self, blocked: VoxelSet | None) -> "CoverInstance":
        return CoverInstance(self.region, self.tiles, blocked)


def enumerate_placements(region: Region, tiles: Sequence[VoxelSet], blocked: VoxelSet | None = None) -> CoverInstance:
    """Build a :class:`CoverInstance` with its placement list materialised."""
    inst = CoverInstance(region, tuple(tiles), blocked)
    inst._enumerate()
    return inst
