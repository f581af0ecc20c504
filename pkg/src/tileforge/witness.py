"""Tiling witnesses: a region plus placements, and the exact-cover verifier."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .lattice import GeometryError, Placement, Region, VoxelSet


@dataclass(frozen=True)
class TilingWitness:
    region: Region
    placements: tuple[Placement, ...]
    source: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(self.placements))

    def to_json(self) -> dict:
        data = {
            "region": self.region.to_json(),
            "placements": [p.to_json() for p in self.placements],
        }
        if self.source is not None:
            data["source"] = self.source
        return data

    @classmethod
    def from_json(cls, data: dict) -> "TilingWitness":
        try:
            region = Region.from_json(data["region"])
            placements = tuple(Placement.from_json(p) for p in data["placements"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GeometryError(f"malformed witness JSON: {exc}") from exc
        return cls(region, placements, data.get("source"))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "TilingWitness":
        return cls.from_json(json.loads(Path(path).read_text()))

    def count_by_tile(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.placements:
            out[p.tile_index] = out.get(p.tile_index, 0) + 1
        return dict(sorted(out.items()))


@dataclass(frozen=True)
class Coverage:
    """Outcome of :func:`verify_witness`; truthy iff the cover is exact."""

    ok: bool
    double: tuple[int, ...] | None = None
    uncovered: tuple[int, ...] | None = None
    outside: tuple[int, ...] | None = None
    bad_tile: int | None = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "exact cover"
        parts = []
        if self.bad_tile is not None:
            parts.append(f"placement {self.bad_tile} refers to an unknown tile")
        if self.outside is not None:
            parts.append(f"cell {self.outside} lies outside the box")
        if self.double is not None:
            parts.append(f"cell {self.double} covered more than once")
        if self.uncovered is not None:
            parts.append(f"cell {self.uncovered} not covered")
        return "; ".join(parts)


def coverage_counts(
    region: Region, tiles: Sequence[VoxelSet], placements: Iterable[Placement]
) -> tuple[np.ndarray, Coverage | None]:
    """Per-cell cover multiplicity; second item reports a structural failure early."""
    ext = np.asarray(region.extents, dtype=np.int64)
    counts = np.zeros(region.volume, dtype=np.int32)
    for i, p in enumerate(placements):
        if not 0 <= p.tile_index < len(tiles):
            return counts, Coverage(False, bad_tile=i)
        cells = tiles[p.tile_index].cells + np.asarray(p.offset, dtype=np.int64)
        if region.is_torus:
            cells = np.mod(cells, ext)
        else:
            bad = ((cells < 0) | (cells >= ext)).any(axis=1)
            if bad.any():
                return counts, Coverage(False, outside=tuple(int(v) for v in cells[np.argmax(bad)]))
        np.add.at(counts, np.ravel_multi_index(tuple(cells.T), tuple(ext)), 1)
    return counts, None


def verify_witness(
    region: Region,
    tiles: Sequence[VoxelSet],
    placements: Iterable[Placement],
    blocked: VoxelSet | None = None,
) -> Coverage:
    """Check that the placements cover every region cell exactly once.

    ``blocked`` cells (if given) must instead stay uncovered.  On failure the
    first doubly covered and the first uncovered cell in lexicographic order
    are reported.
    """
    if region.volume == 0:
        placements = list(placements)
        return Coverage(not placements) if placements else Coverage(True)
    counts, early = coverage_counts(region, tiles, placements)
    if early is not None:
        return early
    target = np.ones(region.volume, dtype=np.int32)
    if blocked is not None and len(blocked):
        idx = np.ravel_multi_index(tuple(np.mod(blocked.cells, region.extents).T), region.extents)
        target[idx] = 0
    shape = region.extents
    over = np.flatnonzero(counts > target)
    under = np.flatnonzero(counts < target)
    if not len(over) and not len(under):
        return Coverage(True)

    def cell(flat):
        return tuple(int(v) for v in np.unravel_index(flat, shape))

    return Coverage(
        False,
        double=cell(over[0]) if len(over) else None,
        uncovered=cell(under[0]) if len(under) else None,
    )


def witness_cells(tiles: Sequence[VoxelSet], placements: Iterable[Placement], region: Region | None = None) -> VoxelSet:
    """Union of all placed cells (wrapped when the region is a torus)."""
    parts = []
    for p in placements:
        cells = tiles[p.tile_index].cells + np.asarray(p.offset)
        if region is not None and region.is_torus:
            cells = np.mod(cells, region.extents)
        parts.append(cells)
    dim = tiles[0].dim
    return VoxelSet(np.concatenate(parts) if parts else np.zeros((0, dim), dtype=np.int64), dim)
