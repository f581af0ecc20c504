"""Four-dimensional building blocks built frame by frame from the onion partition.

A 4D block is a list of 3D frames (subsets of the 8x8x8 cube ``K``); frame
``i`` becomes time slice ``t = i``.  Dents carve the last frames of a
4-frame block (facing the future); bumps occupy the first three frames of a
7-frame block (facing the past).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .lattice import GeometryError, VoxelSet, disjoint_union, is_box, translate, OverlapError

SIDE = 8
HYPERCUBE = SIDE**4


@dataclass(frozen=True)
class OnionPartition:
    K: VoxelSet
    T1: VoxelSet
    T2: VoxelSet
    T3: VoxelSet
    T4: VoxelSet
    upper: VoxelSet  # T4+
    lower: VoxelSet  # T4-
    north: VoxelSet  # T4^N
    south: VoxelSet  # T4^S
    east: VoxelSet  # T4^E
    west: VoxelSet  # T4^W
    J: VoxelSet

    @property
    def shells(self) -> tuple[VoxelSet, VoxelSet, VoxelSet, VoxelSet]:
        return (self.T1, self.T2, self.T3, self.T4)


def _surface(vs: VoxelSet) -> VoxelSet:
    """Cells of ``vs`` on its outer surface (a face neighbour lies outside)."""
    mask, lo = vs.to_mask()
    padded = np.pad(mask, 1)
    interior = padded.copy()
    for axis in range(mask.ndim):
        for s in (1, -1):
            interior &= np.roll(padded, s, axis=axis)
    surf = padded & ~interior
    return VoxelSet.from_mask(surf[(slice(1, -1),) * mask.ndim], lo)


@lru_cache(maxsize=None)
def onion_partition() -> OnionPartition:
    K = VoxelSet.box((SIDE,) * 3)
    rest, shells = K, []
    for _ in range(3):
        shell = _surface(rest)
        shells.append(shell)
        rest = rest - shell
    T4 = rest
    cells = T4.cells
    hi = np.array(T4.maxs)

    def half(axis, top):
        keep = (cells[:, axis] == hi[axis]) if top else (cells[:, axis] != hi[axis])
        return VoxelSet(cells[keep], 3)

    J = VoxelSet([tuple(hi)], 3)
    return OnionPartition(
        K, *shells, T4,
        upper=half(2, True), lower=half(2, False),
        north=half(1, True), south=half(1, False),
        east=half(0, True), west=half(0, False),
        J=J,
    )


def stack_frames(frames: Sequence[VoxelSet], t0: int = 0) -> VoxelSet:
    """4D set whose slice at ``t0 + i`` is ``frames[i]``."""
    parts = []
    for i, frame in enumerate(frames):
        if frame.dim != 3:
            raise GeometryError("frames must be 3-dimensional")
        if len(frame):
            t = np.full((len(frame), 1), t0 + i, dtype=np.int64)
            parts.append(np.hstack([frame.cells, t]))
    if not parts:
        return VoxelSet([], 4)
    return VoxelSet(np.concatenate(parts), 4)


def frame_lists() -> dict[str, list[VoxelSet]]:
    """The frame enumeration of every 4D block."""
    o = onion_partition()
    K, T1, T2, T3, T4, J = o.K, o.T1, o.T2, o.T3, o.T4, o.J

    def dent(extra):
        return [K, T1, T1 | T3 | extra, T1 | T2 | T3 | extra]

    def bump(half):
        return [T2 | T3 | T4, T2 | half, half, K, K, K, K]

    empty = VoxelSet([], 3)
    return {
        "c": dent(empty),
        "C": [T2 | T3 | T4, T2 | T4, T4, K, K, K, K],
        "a": dent(o.lower),
        "A": bump(o.upper),
        "b": dent(o.upper),
        "B": bump(o.lower),
        "x": dent(o.north),
        "X": bump(o.south),
        "y": dent(o.south),
        "Y": bump(o.north),
        "z": dent(o.west),
        "Z": bump(o.east),
        "E": [T2 | T3 | T4, T2 | J, J, K, K, K, K, K, T1, T1 | T3 | (T4 - J), T1 | T2 | T3 | (T4 - J)],
        "S": [T2 | T3 | T4, T2 | (T4 - J), T4 - J, K, K, K, K, K, T1, T1 | T3 | J, T1 | T2 | T3 | J],
    }


DENT_NAMES = ("c", "a", "b", "x", "y", "z")
BUMP_NAMES = ("C", "A", "B", "X", "Y", "Z")
INTERLOCK_NAMES = ("E", "S")
NAMES_4D = DENT_NAMES + BUMP_NAMES + INTERLOCK_NAMES
PARTNERS_4D = dict(zip(DENT_NAMES, BUMP_NAMES))

# Frames that make up the host's 8-frame main part start at this index.
MAIN_START = {**{n: 0 for n in DENT_NAMES}, **{n: 3 for n in BUMP_NAMES}, "E": 3, "S": 3}

DISPLAY = {"E": "𝔼", "S": "𝕊"}


@lru_cache(maxsize=None)
def make_block_4d(name: str) -> VoxelSet:
    """Stacked frames of the named block; frame 0 at t = 0."""
    frames = frame_lists()
    if name not in frames:
        raise GeometryError(f"unknown 4D block {name!r}")
    return stack_frames(frames[name])


def attach(name: str, phase: str | None, cell: Sequence[int], t0: int = 0) -> VoxelSet:
    """Block ``name`` attached to the host cell whose main part spans ``t0 .. t0+7``.

    ``phase`` is ``"former"`` (frames 1-4 of the host) or ``"latter"``
    (frames 5-8); the 11-frame interlock blocks span the whole main part and
    take ``phase=None``.
    """
    if name in INTERLOCK_NAMES:
        if phase is not None:
            raise GeometryError(f"{name} spans the whole main part and has no phase")
        start = 0
    elif phase == "former":
        start = 0
    elif phase == "latter":
        start = 4
    else:
        raise GeometryError(f"phase must be 'former' or 'latter', got {phase!r}")
    shift = (SIDE * cell[0], SIDE * cell[1], SIDE * cell[2], t0 + start - MAIN_START[name])
    return translate(make_block_4d(name), shift)


def main_cube(cell: Sequence[int], t0: int = 0) -> VoxelSet:
    return VoxelSet.box((SIDE,) * 4, (SIDE * cell[0], SIDE * cell[1], SIDE * cell[2], t0))


@dataclass(frozen=True)
class Complement4Report:
    ok: bool
    overlap: tuple[int, ...] | None = None
    gap: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_complement_4d(dent: str, bump: str) -> Complement4Report:
    """Dent block on frames 0-3 plus bump block whose half hypercube starts at frame 4."""
    a = make_block_4d(dent)
    b = translate(make_block_4d(bump), (0, 0, 0, 4 - MAIN_START[bump]))
    try:
        u = disjoint_union(a, b)
    except OverlapError as exc:
        return Complement4Report(False, overlap=exc.cell)
    box = VoxelSet.box((SIDE,) * 4)
    if is_box(u, (SIDE,) * 4):
        return Complement4Report(True)
    missing = box - u
    if len(missing):
        return Complement4Report(False, gap=tuple(int(v) for v in missing.cells[0]))
    extra = u - box
    return Complement4Report(False, gap=tuple(int(v) for v in extra.cells[0]))


def exclusivity_table() -> dict[tuple[str, str], bool]:
    """Complement check for every (dent, bump) pair at the nominal offset."""
    return {(d, b): bool(check_complement_4d(d, b)) for d in DENT_NAMES for b in BUMP_NAMES}


def atlas_text(name: str) -> str:
    """Voxel-text rendering of a 4D block, as emitted for audit."""
    from .lattice import format_voxels

    vs = make_block_4d(name)
    return format_voxels(vs, [f"4D block {name}: {len(frame_lists()[name])} frames, {len(vs)} cells"])
