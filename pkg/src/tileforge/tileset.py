"""Tile sets produced by the reductions, their block layouts and on-disk form."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .lattice import GeometryError, VoxelSet, canonicalize, format_voxels, is_connected, parse_voxels
from .wang import WangTileSet

BLOCK = 8

Cell = tuple[int, ...]


@dataclass
class BlockLayout:
    """Block-unit description of a tile: host cell -> block label.

    ``cells`` keys are spatial block coordinates (x, y, z).  Labels name
    atlas blocks ("c", "d-", "A", ...) or "K" for a plain functional block;
    4D labels append the attachment phase ("c_*" former, "c^*" latter).
    """

    cells: dict[Cell, str]
    time_offset: int = 0

    def layers(self) -> list[int]:
        return sorted({c[2] for c in self.cells})

    def layer(self, z: int) -> dict[tuple[int, int], str]:
        return {(c[0], c[1]): lab for c, lab in self.cells.items() if c[2] == z}

    def footprint(self, z: int | None = None) -> tuple[int, int, int, int]:
        """(xmin, ymin, xmax, ymax) over one layer or all layers."""
        keys = [c for c in self.cells if z is None or c[2] == z]
        xs = [c[0] for c in keys]
        ys = [c[1] for c in keys]
        return min(xs), min(ys), max(xs), max(ys)

    def count(self, label: str) -> int:
        return sum(1 for lab in self.cells.values() if lab == label)

    def to_json(self) -> list:
        return [[*c, lab] for c, lab in sorted(self.cells.items())]

    @classmethod
    def from_json(cls, data: list) -> "BlockLayout":
        return cls({tuple(int(v) for v in row[:-1]): row[-1] for row in data})

    def realize(self, block: Callable[[str, Cell], VoxelSet], dim: int) -> VoxelSet:
        parts = [block(lab, c).cells for c, lab in sorted(self.cells.items())]
        return VoxelSet(np.concatenate(parts), dim)


@dataclass
class TileSet:
    """Ordered, canonicalized tiles plus what is needed to place and render them.

    ``anchors[k]`` is the layout coordinate (voxels) of tile ``k``'s canonical
    origin, so a tile whose layout origin should land at ``P`` is placed at
    offset ``P + anchors[k]``.
    """

    dim: int
    names: tuple[str, ...]
    tiles: tuple[VoxelSet, ...]
    anchors: tuple[Cell, ...]
    layouts: tuple[BlockLayout | None, ...]
    provenance: WangTileSet | None = None
    expected_count: int | None = field(default=None, repr=False)

    def __post_init__(self):
        n = len(self.tiles)
        if not (len(self.names) == len(self.anchors) == len(self.layouts) == n):
            raise GeometryError("tile set fields disagree in length")
        if self.expected_count is not None and n != self.expected_count:
            raise GeometryError(f"expected {self.expected_count} tiles, got {n}")

    def __len__(self) -> int:
        return len(self.tiles)

    def __getitem__(self, k: int) -> VoxelSet:
        return self.tiles[k]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def offset_for(self, k: int, layout_origin: Sequence[int]) -> Cell:
        return tuple(int(a) + int(b) for a, b in zip(layout_origin, self.anchors[k]))

    def all_connected(self) -> bool:
        return all(is_connected(t) for t in self.tiles)


def canonical_with_anchor(vs: VoxelSet) -> tuple[VoxelSet, Cell]:
    return canonicalize(vs), vs.mins


# -- directory format -----------------------------------------------------


def _slug(name: str) -> str:
    return name.replace("+", "_plus").replace("-", "_minus")


def save_tileset(ts: TileSet, out: str | Path) -> Path:
    """Write one voxel file per tile plus ``manifest.json``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for k, (name, tile) in enumerate(zip(ts.names, ts.tiles)):
        fname = f"{k:02d}_{_slug(name)}.vox"
        text = format_voxels(tile, [f"tile {k}: {name}", f"dim {ts.dim}, {len(tile)} cells"])
        (out / fname).write_text(text)
        entry = {
            "index": k,
            "name": name,
            "file": fname,
            "cells": len(tile),
            "extents": list(tile.extents),
            "sha256": hashlib.sha256(text.encode()).hexdigest(),
            "anchor": list(ts.anchors[k]),
        }
        if ts.layouts[k] is not None:
            entry["layout"] = ts.layouts[k].to_json()
            entry["layout_time_offset"] = ts.layouts[k].time_offset
        entries.append(entry)
    manifest = {"dim": ts.dim, "tiles": entries}
    if ts.provenance is not None:
        manifest["provenance"] = {"wang_sha256": ts.provenance.digest(), "wang": ts.provenance.to_json()}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    return out


def load_tileset(path: str | Path) -> TileSet:
    """Load a tile-set directory, verifying every file hash."""
    path = Path(path)
    manifest = json.loads((path / "manifest.json").read_text())
    names, tiles, anchors, layouts = [], [], [], []
    for entry in manifest["tiles"]:
        text = (path / entry["file"]).read_text()
        if hashlib.sha256(text.encode()).hexdigest() != entry["sha256"]:
            raise GeometryError(f"hash mismatch for {entry['file']}")
        names.append(entry["name"])
        tiles.append(parse_voxels(text))
        anchors.append(tuple(entry.get("anchor", [0] * manifest["dim"])))
        lay = entry.get("layout")
        if lay is not None:
            lay = BlockLayout.from_json(lay)
            lay.time_offset = entry.get("layout_time_offset", 0)
        layouts.append(lay)
    prov = manifest.get("provenance")
    ws = WangTileSet.from_json(prov["wang"]) if prov else None
    return TileSet(manifest["dim"], tuple(names), tuple(tiles), tuple(anchors), tuple(layouts), ws)
