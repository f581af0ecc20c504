"""Finite voxel sets over Z^n (n = 2, 3, 4).

Axis order is fixed once for the whole package: x = east, y = north,
z = up, t = future.  Cells are stored as a lexicographically sorted
``int64`` array, which gives cheap equality, hashing and deterministic
iteration.  Membership queries go through a lazily built hash index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy import ndimage

Cell = tuple[int, ...]

DIMENSIONS = (2, 3, 4)


class GeometryError(ValueError):
    """Raised for malformed or degenerate geometric input."""


class OverlapError(GeometryError):
    """Raised when two voxel sets that must be disjoint share a cell."""

    def __init__(self, cell: Cell):
        super().__init__(f"voxel sets overlap at cell {cell}")
        self.cell = cell


def _as_cell_array(cells, dim: int | None) -> np.ndarray:
    arr = np.asarray(cells, dtype=np.int64)
    if arr.size == 0:
        if dim is None:
            raise GeometryError("cannot infer dimension of an empty cell list")
        return np.zeros((0, dim), dtype=np.int64)
    if arr.ndim != 2:
        raise GeometryError("cells must be a sequence of integer tuples")
    if dim is not None and arr.shape[1] != dim:
        raise GeometryError(f"expected {dim}-dimensional cells, got {arr.shape[1]}")
    return arr


class VoxelSet:
    """Immutable finite set of integer lattice cells of a fixed dimension."""

    __slots__ = ("_cells", "_dim", "_index", "_hash")

    def __init__(self, cells: Iterable[Sequence[int]] | np.ndarray = (), dim: int | None = None):
        if not isinstance(cells, np.ndarray):
            cells = list(cells)
        arr = _as_cell_array(cells, dim)
        d = arr.shape[1]
        if d not in DIMENSIONS:
            raise GeometryError(f"dimension must be one of {DIMENSIONS}, got {d}")
        if len(arr):
            arr = np.unique(arr, axis=0)
        arr.setflags(write=False)
        self._cells = arr
        self._dim = d
        self._index = None
        self._hash = None

    @classmethod
    def _trusted(cls, arr: np.ndarray, dim: int) -> "VoxelSet":
        # arr is already unique and lexsorted
        out = cls.__new__(cls)
        arr.setflags(write=False)
        out._cells, out._dim, out._index, out._hash = arr, dim, None, None
        return out

    @classmethod
    def from_mask(cls, mask: np.ndarray, origin: Sequence[int] | None = None) -> "VoxelSet":
        """Build from a boolean array; ``origin`` is the coordinate of ``mask[0,...,0]``."""
        cells = np.argwhere(mask).astype(np.int64)
        if origin is not None:
            cells += np.asarray(origin, dtype=np.int64)
        return cls._trusted(cells, mask.ndim)

    @classmethod
    def box(cls, extents: Sequence[int], origin: Sequence[int] | None = None) -> "VoxelSet":
        return cls.from_mask(np.ones(tuple(extents), dtype=bool), origin)

    # -- basic protocol -------------------------------------------------
    @property
    def dim(self) -> int:
        return self._dim

    @property
    def cells(self) -> np.ndarray:
        """Read-only ``(N, dim)`` array of cells in lexicographic order."""
        return self._cells

    def __len__(self) -> int:
        return len(self._cells)

    def __iter__(self) -> Iterator[Cell]:
        return (tuple(int(v) for v in row) for row in self._cells)

    def __contains__(self, cell) -> bool:
        if self._index is None:
            self._index = frozenset(map(tuple, self._cells.tolist()))
        return tuple(int(v) for v in cell) in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, VoxelSet):
            return NotImplemented
        return self._dim == other._dim and np.array_equal(self._cells, other._cells)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._dim, self._cells.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        if not len(self):
            return f"VoxelSet(dim={self._dim}, empty)"
        return f"VoxelSet(dim={self._dim}, n={len(self)}, bbox={self.extents})"

    # -- geometry -------------------------------------------------------
    @property
    def mins(self) -> Cell:
        self._require_nonempty("mins")
        return tuple(int(v) for v in self._cells.min(axis=0))

    @property
    def maxs(self) -> Cell:
        self._require_nonempty("maxs")
        return tuple(int(v) for v in self._cells.max(axis=0))

    @property
    def extents(self) -> Cell:
        """Bounding-box side lengths."""
        self._require_nonempty("extents")
        return tuple(int(v) for v in np.ptp(self._cells, axis=0) + 1)

    def _require_nonempty(self, what: str):
        if not len(self._cells):
            raise GeometryError(f"{what} is undefined for an empty voxel set")

    def translate(self, v: Sequence[int]) -> "VoxelSet":
        return translate(self, v)

    def canonicalize(self) -> "VoxelSet":
        return canonicalize(self)

    def to_mask(self) -> tuple[np.ndarray, Cell]:
        """Dense boolean bounding-box array plus the coordinate of its origin."""
        lo = self.mins
        mask = np.zeros(self.extents, dtype=bool)
        mask[tuple((self._cells - np.asarray(lo)).T)] = True
        return mask, lo

    def union(self, other: "VoxelSet") -> "VoxelSet":
        _check_dims(self, other)
        return VoxelSet(np.concatenate([self._cells, other._cells]), self._dim)

    def difference(self, other: "VoxelSet") -> "VoxelSet":
        _check_dims(self, other)
        if not len(other):
            return self
        keep = ~_rows_in(self._cells, other._cells)
        return VoxelSet._trusted(self._cells[keep].copy(), self._dim)

    def intersection(self, other: "VoxelSet") -> "VoxelSet":
        _check_dims(self, other)
        keep = _rows_in(self._cells, other._cells)
        return VoxelSet._trusted(self._cells[keep].copy(), self._dim)

    __or__ = union
    __sub__ = difference
    __and__ = intersection

    def isdisjoint(self, other: "VoxelSet") -> bool:
        return not _rows_in(self._cells, other._cells).any()

    def layer(self, axis: int, value: int) -> "VoxelSet":
        """Cells whose coordinate on ``axis`` equals ``value`` (coordinates kept)."""
        keep = self._cells[:, axis] == value
        return VoxelSet._trusted(self._cells[keep].copy(), self._dim)


def _check_dims(a: VoxelSet, b: VoxelSet):
    if a.dim != b.dim:
        raise GeometryError(f"dimension mismatch: {a.dim} vs {b.dim}")


def _rows_in(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean mask of rows of ``a`` that also occur in ``b``."""
    if not len(a) or not len(b):
        return np.zeros(len(a), dtype=bool)
    lo = np.minimum(a.min(axis=0), b.min(axis=0))
    span = np.maximum(a.max(axis=0), b.max(axis=0)) - lo + 1
    ka = np.ravel_multi_index(tuple((a - lo).T), tuple(span))
    kb = np.ravel_multi_index(tuple((b - lo).T), tuple(span))
    return np.isin(ka, kb)


def translate(vs: VoxelSet, v: Sequence[int]) -> VoxelSet:
    """Shift every cell of ``vs`` by the integer vector ``v``."""
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (vs.dim,):
        raise GeometryError(f"translation vector must have length {vs.dim}")
    return VoxelSet._trusted(vs.cells + v, vs.dim)


def canonicalize(vs: VoxelSet) -> VoxelSet:
    """Translate so that the componentwise-minimal corner sits at the origin."""
    if not len(vs):
        raise GeometryError("cannot canonicalize an empty voxel set")
    return translate(vs, [-m for m in vs.mins])


def is_connected(vs: VoxelSet) -> bool:
    """True iff the face-adjacency graph of ``vs`` is connected."""
    if not len(vs):
        raise GeometryError("connectivity of an empty voxel set is undefined")
    return count_components(vs) == 1


def count_components(vs: VoxelSet) -> int:
    if not len(vs):
        return 0
    mask, _ = vs.to_mask()
    structure = ndimage.generate_binary_structure(vs.dim, 1)
    _, n = ndimage.label(mask, structure=structure)
    return int(n)


def disjoint_union(a: VoxelSet, b: VoxelSet) -> VoxelSet:
    """Union of two disjoint sets; raises :class:`OverlapError` with a shared cell."""
    _check_dims(a, b)
    shared = _rows_in(a.cells, b.cells)
    if shared.any():
        raise OverlapError(tuple(int(v) for v in a.cells[np.argmax(shared)]))
    return a.union(b)


def is_box(vs: VoxelSet, extents: Sequence[int]) -> bool:
    """True iff ``vs`` is exactly a full axis-aligned box of the given extents."""
    if not len(vs) or len(extents) != vs.dim:
        return False
    return vs.extents == tuple(extents) and len(vs) == int(np.prod(extents))


# -- regions and placements ---------------------------------------------


@dataclass(frozen=True)
class Region:
    """A finite verification domain anchored at the origin."""

    kind: str
    extents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "extents", tuple(int(e) for e in self.extents))
        if self.kind not in ("box", "torus"):
            raise GeometryError(f"region kind must be 'box' or 'torus', got {self.kind!r}")
        if any(e < 1 for e in self.extents):
            if self.kind == "torus" or any(e < 0 for e in self.extents):
                raise GeometryError(f"invalid region extents {self.extents}")

    @property
    def dim(self) -> int:
        return len(self.extents)

    @property
    def volume(self) -> int:
        return int(np.prod(self.extents))

    @property
    def is_torus(self) -> bool:
        return self.kind == "torus"

    @classmethod
    def parse(cls, text: str) -> "Region":
        """Parse ``torus:8,8,8`` or ``box:4,4``."""
        kind, _, rest = text.partition(":")
        try:
            extents = tuple(int(v) for v in rest.split(","))
        except ValueError as exc:
            raise GeometryError(f"malformed region {text!r}") from exc
        return cls(kind, extents)

    def to_json(self) -> dict:
        return {"kind": self.kind, "extents": list(self.extents)}

    @classmethod
    def from_json(cls, data: dict) -> "Region":
        return cls(data["kind"], tuple(data["extents"]))


@dataclass(frozen=True)
class Placement:
    """A translated copy of tile ``tile_index`` whose canonical origin lands at ``offset``."""

    tile_index: int
    offset: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "offset", tuple(int(v) for v in self.offset))

    def reduced(self, region: Region) -> "Placement":
        if region.is_torus:
            return Placement(self.tile_index, wrap(self.offset, region))
        return self

    def to_json(self) -> dict:
        return {"tile": self.tile_index, "offset": list(self.offset)}

    @classmethod
    def from_json(cls, data: dict) -> "Placement":
        return cls(int(data["tile"]), tuple(data["offset"]))


def wrap(cell: Sequence[int], region: Region) -> Cell:
    """Reduce a cell componentwise modulo the torus extents."""
    if len(cell) != region.dim:
        raise GeometryError("cell and region dimensions differ")
    return tuple(int(c) % e for c, e in zip(cell, region.extents))


def wrap_cells(cells: np.ndarray, region: Region) -> np.ndarray:
    return np.mod(cells, np.asarray(region.extents, dtype=np.int64))


# -- file formats ---------------------------------------------------------


def format_voxels(vs: VoxelSet, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines += [" ".join(str(int(v)) for v in row) for row in vs.cells]
    return "\n".join(lines) + "\n"


def parse_voxels(text: str) -> VoxelSet:
    """Parse the voxel text format: one cell per line, ``#`` comments allowed."""
    rows = []
    dim = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise GeometryError(f"line {lineno}: non-integer coordinate") from exc
        if dim is None:
            dim = len(row)
        elif len(row) != dim:
            raise GeometryError(f"line {lineno}: expected {dim} coordinates, got {len(row)}")
        rows.append(row)
    if dim is None:
        raise GeometryError("voxel file contains no cells")
    return VoxelSet(rows, dim)


def voxels_to_json(vs: VoxelSet) -> dict:
    return {"dim": vs.dim, "cells": vs.cells.tolist()}


def voxels_from_json(data: dict) -> VoxelSet:
    return VoxelSet(data["cells"], int(data["dim"]))


def load_voxels(path: str | Path) -> VoxelSet:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return voxels_from_json(json.loads(text))
    return parse_voxels(text)


def save_voxels(vs: VoxelSet, path: str | Path, header: Iterable[str] = ()) -> None:
    Path(path).write_text(format_voxels(vs, header))
