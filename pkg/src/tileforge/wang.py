"""Wang tile sets, the binary colour codec and a small-torus tiling oracle."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np


class WangError(ValueError):
    """Raised for invalid Wang sets or tilings."""


@dataclass(frozen=True)
class WangTile:
    north: int
    east: int
    south: int
    west: int

    def to_json(self) -> dict:
        return {"n": self.north, "e": self.east, "s": self.south, "w": self.west}


@dataclass(frozen=True)
class WangTileSet:
    """An ordered list of ``p`` Wang tiles over a palette of ``q`` colours."""

    q: int
    tiles: tuple[WangTile, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def p(self) -> int:
        return len(self.tiles)

    @property
    def t(self) -> int:
        """Bit width of the colour code, clamped to at least one bit."""
        return max(1, math.ceil(math.log2(self.q))) if self.q > 1 else 1

    def to_json(self) -> dict:
        data = {"q": self.q, "tiles": [tile.to_json() for tile in self.tiles]}
        if self.labels is not None:
            data["labels"] = list(self.labels)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "WangTileSet":
        try:
            tiles = tuple(
                WangTile(int(d["n"]), int(d["e"]), int(d["s"]), int(d["w"])) for d in data["tiles"]
            )
            labels = data.get("labels")
            return validate(cls(int(data["q"]), tiles, tuple(labels) if labels else None))
        except (KeyError, TypeError) as exc:
            raise WangError(f"malformed Wang set JSON: {exc}") from exc

    def digest(self) -> str:
        """Stable content hash used for provenance records."""
        payload = json.dumps({"q": self.q, "tiles": [t.to_json() for t in self.tiles]}, sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()


def validate(ws: WangTileSet) -> WangTileSet:
    """Check colour ranges and tile count; returns the set unchanged."""
    if ws.q < 1:
        raise WangError("q must be at least 1")
    if ws.p < 1:
        raise WangError("a Wang set needs at least one tile")
    for i, tile in enumerate(ws.tiles):
        for side in ("north", "east", "south", "west"):
            colour = getattr(tile, side)
            if not 0 <= colour < ws.q:
                raise WangError(f"tile {i}: {side} colour {colour} outside [0, {ws.q})")
    if ws.labels is not None and len(ws.labels) != ws.q:
        raise WangError("labels must name every colour")
    return ws


def load_wang(path: str | Path) -> WangTileSet:
    return WangTileSet.from_json(json.loads(Path(path).read_text()))


def encode_color(color: int, t: int) -> str:
    """Fixed-width big-endian binary code of ``color``."""
    if t < 1:
        raise WangError("bit width must be positive")
    if not 0 <= color < 2**t:
        raise WangError(f"colour {color} does not fit in {t} bits")
    return format(color, f"0{t}b")


def decode_color(bits: str) -> int:
    return int(bits, 2)


@dataclass(frozen=True)
class WangTiling:
    """An ``h x v`` periodic assignment; ``assignment[i][j]`` is column ``i``, row ``j``."""

    h: int
    v: int
    assignment: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(tuple(int(k) for k in col) for col in self.assignment))

    def at(self, i: int, j: int) -> int:
        return self.assignment[i % self.h][j % self.v]

    def to_json(self) -> dict:
        return {"h": self.h, "v": self.v, "assignment": [list(col) for col in self.assignment]}

    @classmethod
    def from_json(cls, data: dict) -> "WangTiling":
        try:
            return cls(int(data["h"]), int(data["v"]), data["assignment"])
        except (KeyError, TypeError) as exc:
            raise WangError(f"malformed Wang tiling JSON: {exc}") from exc

    @classmethod
    def uniform(cls, tile: int = 0, h: int = 1, v: int = 1) -> "WangTiling":
        return cls(h, v, [[tile] * v for _ in range(h)])


def load_tiling(path: str | Path) -> WangTiling:
    return WangTiling.from_json(json.loads(Path(path).read_text()))


def verify_tiling(ws: WangTileSet, wt: WangTiling) -> bool:
    """True iff every horizontal and vertical adjacency (with wraparound) matches."""
    if len(wt.assignment) != wt.h or any(len(col) != wt.v for col in wt.assignment):
        raise WangError("assignment shape does not match the periods")
    for i in range(wt.h):
        for j in range(wt.v):
            k = wt.assignment[i][j]
            if not 0 <= k < ws.p:
                return False
            tile = ws.tiles[k]
            if tile.east != ws.tiles[wt.at(i + 1, j)].west:
                return False
            if tile.north != ws.tiles[wt.at(i, j + 1)].south:
                return False
    return True


def find_periodic_tiling(ws: WangTileSet, h: int, v: int) -> WangTiling | None:
    """Exhaustive backtracking for an ``h x v``-periodic tiling.

    Cells are filled row by row (west to east, south to north) with tile
    indices tried in ascending order.  Each new tile is checked against its
    west and south neighbours, plus the wraparound neighbours when it closes
    a row or column.
    """
    if h < 1 or v < 1:
        raise WangError("periods must be positive")
    tiles = ws.tiles
    grid = np.full((h, v), -1, dtype=np.int64)
    order = [(i, j) for j in range(v) for i in range(h)]

    def fits(k: int, i: int, j: int) -> bool:
        tile = tiles[k]
        if i > 0 and tiles[grid[i - 1, j]].east != tile.west:
            return False
        if j > 0 and tiles[grid[i, j - 1]].north != tile.south:
            return False
        if i == h - 1 and tile.east != (tile if h == 1 else tiles[grid[0, j]]).west:
            return False
        if j == v - 1 and tile.north != (tile if v == 1 else tiles[grid[i, 0]]).south:
            return False
        return True

    def search(pos: int) -> bool:
        if pos == len(order):
            return True
        i, j = order[pos]
        for k in range(len(tiles)):
            if fits(k, i, j):
                grid[i, j] = k
                if search(pos + 1):
                    return True
        grid[i, j] = -1
        return False

    if not search(0):
        return None
    return WangTiling(h, v, grid.tolist())


def enumerate_tilings(ws: WangTileSet, h: int, v: int):
    """Brute force over all ``p^(h v)`` assignments; yields valid tilings."""
    import itertools

    for flat in itertools.product(range(ws.p), repeat=h * v):
        wt = WangTiling(h, v, [flat[i * v:(i + 1) * v] for i in range(h)])
        if verify_tiling(ws, wt):
            yield wt


def example_set() -> WangTileSet:
    """The packaged three-tile, four-colour example set."""
    from importlib import resources

    text = resources.files("tileforge.fixtures").joinpath("three_tiles.json").read_text()
    return WangTileSet.from_json(json.loads(text))


def single_tile_set(north: int = 0, east: int = 0, south: int = 0, west: int = 0, q: int = 2) -> WangTileSet:
    return validate(WangTileSet(q, (WangTile(north, east, south, west),)))


def mismatched_set(q: int = 2) -> WangTileSet:
    """Single tile whose east and west colours differ, so no row can close."""
    return single_tile_set(0, 0, 0, 1, q=q)
