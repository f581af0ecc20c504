"""Three-dimensional building blocks.

Every block is stored as a cell-list file under ``atlas/blocks3d``.  Nine
of them were digitized from layer diagrams; the rest were produced once by
rotation or by taking the complement of a dent and are re-derived by
:func:`audit_atlas` so that the two entries can never drift apart.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Sequence

import numpy as np
from scipy import signal

from .lattice import (
    GeometryError,
    OverlapError,
    VoxelSet,
    canonicalize,
    is_box,
    is_connected,
    parse_voxels,
    translate,
)

BLOCK = 8

# Integer rotation matrices acting on column vectors (x, y, z).
ROTATIONS = {
    "z90cw": np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 1]]),
    "z90ccw": np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]]),
    "z180": np.array([[-1, 0, 0], [0, -1, 0], [0, 0, 1]]),
    # about the south-north axis; sends the west face to the bottom
    "y90": np.array([[0, 0, -1], [0, 1, 0], [1, 0, 0]]),
    "y-90": np.array([[0, 0, 1], [0, 1, 0], [-1, 0, 0]]),
}

INVERSE_ROTATION = {"z90cw": "z90ccw", "z90ccw": "z90cw", "z180": "z180", "y90": "y-90", "y-90": "y90"}

BLOCK_NAMES = (
    "c", "c-", "C", "d", "d-", "D+", "a", "A", "b", "B",
    "x", "X", "y", "Y", "z", "Z", "F", "F+",
)
DENT_BLOCKS = ("c", "c-", "d", "d-", "a", "b", "x", "y", "z")
BUMP_BLOCKS = ("C", "D+", "A", "B", "X", "Y", "Z")

# intended bump -> dent pairings
PARTNERS = {
    "C": ("c", "c-"),
    "D+": ("d", "d-"),
    "A": ("a",),
    "B": ("b",),
    "X": ("x",),
    "Y": ("y",),
    "Z": ("z",),
}


class AtlasError(GeometryError):
    """Raised for unknown blocks or a corrupted atlas."""


def rotate_block(vs: VoxelSet, rotation: str) -> VoxelSet:
    """Rotate a 3D voxel set by one of the named axis rotations and canonicalize."""
    if rotation not in ROTATIONS:
        raise AtlasError(f"unsupported rotation {rotation!r}; choose from {sorted(ROTATIONS)}")
    if vs.dim != 3:
        raise AtlasError("rotations are only defined for 3D blocks")
    return canonicalize(VoxelSet(vs.cells @ ROTATIONS[rotation].T, 3))


@dataclass(frozen=True)
class ComplementSpec:
    """``dent`` plus ``bump`` translated by ``offset`` should fill a box of ``extents``."""

    dent: str
    bump: str
    offset: tuple[int, int, int]
    extents: tuple[int, int, int]


@dataclass(frozen=True)
class ComplementReport:
    ok: bool
    overlap: tuple[int, ...] | None = None
    gap: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class AtlasEntry:
    name: str
    file: str
    source: str
    extents: tuple[int, int, int]
    volume: int
    sha256: str
    cell_offset: tuple[int, int, int]
    partner: str | None


@dataclass
class BlockAtlas3:
    blocks: dict[str, VoxelSet]
    entries: dict[str, AtlasEntry]
    complements: list[ComplementSpec] = field(default_factory=list)

    def __getitem__(self, name: str) -> VoxelSet:
        return self.blocks[name]


def _atlas_dir():
    return resources.files("tileforge.atlas")


@lru_cache(maxsize=None)
def load_atlas() -> BlockAtlas3:
    """Load and checksum-verify the 3D atlas."""
    root = _atlas_dir()
    manifest = json.loads(root.joinpath("manifest3d.json").read_text())
    blocks, entries = {}, {}
    for name, meta in manifest["blocks"].items():
        raw = root.joinpath("blocks3d", meta["file"]).read_text()
        digest = hashlib.sha256(raw.encode()).hexdigest()
        if digest != meta["sha256"]:
            raise AtlasError(f"checksum mismatch for block {name}")
        vs = parse_voxels(raw)
        if vs.extents != tuple(meta["extents"]) or len(vs) != meta["volume"]:
            raise AtlasError(f"block {name} does not match its declared bounding box")
        blocks[name] = vs
        entries[name] = AtlasEntry(
            name=name,
            file=meta["file"],
            source=meta["source"],
            extents=tuple(meta["extents"]),
            volume=meta["volume"],
            sha256=digest,
            cell_offset=tuple(meta["cell_offset"]),
            partner=meta.get("partner"),
        )
    complements = [
        ComplementSpec(c["dent"], c["bump"], tuple(c["offset"]), tuple(c["extents"]))
        for c in manifest["complements"]
    ]
    return BlockAtlas3(blocks, entries, complements)


def make_block(name: str) -> VoxelSet:
    """Canonical voxel set of the named 3D block."""
    atlas = load_atlas()
    if name not in atlas.blocks:
        raise AtlasError(f"unknown 3D block {name!r}")
    return atlas.blocks[name]


def cell_offset(name: str) -> tuple[int, int, int]:
    """Where the block's canonical origin sits relative to its host cell origin (voxels)."""
    return load_atlas().entries[name].cell_offset


def place_in_cell(name: str, cell: Sequence[int]) -> VoxelSet:
    """The block translated into the 8-voxel host cell at block coordinates ``cell``."""
    off = np.asarray(cell_offset(name)) + BLOCK * np.asarray(cell)
    return translate(make_block(name), off)


def body_box(name: str) -> VoxelSet:
    """The host-cell-aligned box that a dent block is carved from (cell at origin)."""
    vs = place_in_cell(name, (0, 0, 0))
    lo, hi = np.array(vs.mins), np.array(vs.maxs)
    return VoxelSet.box(hi - lo + 1, lo)


def bump_part(name: str) -> VoxelSet:
    """Cells of a bump block lying outside its host cell."""
    return place_in_cell(name, (0, 0, 0)) - VoxelSet.box((BLOCK,) * 3)


def check_complement(spec: ComplementSpec) -> ComplementReport:
    """Does ``dent`` united with the shifted ``bump`` form exactly the declared box?"""
    dent = make_block(spec.dent)
    bump = translate(make_block(spec.bump), spec.offset)
    try:
        union = _union_disjoint(dent, bump)
    except OverlapError as exc:
        return ComplementReport(False, overlap=exc.cell)
    if is_box(union, spec.extents):
        return ComplementReport(True)
    lo = np.array(union.mins)
    full = VoxelSet.box(spec.extents, lo)
    missing = full - union
    if len(missing):
        return ComplementReport(False, gap=tuple(int(v) for v in missing.cells[0]))
    extra = union - full
    return ComplementReport(False, gap=tuple(int(v) for v in extra.cells[0]))


def _union_disjoint(a: VoxelSet, b: VoxelSet) -> VoxelSet:
    from .lattice import disjoint_union

    return disjoint_union(a, b)


def scan_complement(spec: ComplementSpec, window: int = 2) -> list[tuple[int, int, int]]:
    """All offsets within ``window`` of the nominal one that produce the declared box."""
    hits = []
    rng = range(-window, window + 1)
    for dx in rng:
        for dy in rng:
            for dz in rng:
                off = tuple(o + d for o, d in zip(spec.offset, (dx, dy, dz)))
                if check_complement(ComplementSpec(spec.dent, spec.bump, off, spec.extents)):
                    hits.append(off)
    return hits


@dataclass
class ExclusivityReport:
    """Fitting offsets for every (bump, dent) pair, relative to the dent's canonical origin."""

    fits: dict[tuple[str, str], list[tuple[int, ...]]]

    def partner_pairs(self) -> list[tuple[str, str]]:
        return [(b, d) for b, dents in PARTNERS.items() for d in dents if (b, d) in self.fits]

    @property
    def ok(self) -> bool:
        for (bump, dent), offs in self.fits.items():
            expected = 1 if dent in PARTNERS.get(bump, ()) else 0
            if len(offs) != expected:
                return False
        return True


def fit_offsets(dent: VoxelSet, cavity: VoxelSet, bump: VoxelSet) -> list[tuple[int, ...]]:
    """Offsets ``o`` with ``bump + o`` disjoint from ``dent`` and covering ``cavity``.

    All three sets are given in the same frame; every offset where the two
    bounding boxes overlap is examined at once via FFT correlation.
    """
    lo = np.minimum(dent.mins, cavity.mins) if len(cavity) else np.array(dent.mins)
    hi = np.maximum(dent.maxs, cavity.maxs) if len(cavity) else np.array(dent.maxs)
    shape = tuple(hi - lo + 1)
    d_mask = np.zeros(shape)
    d_mask[tuple((dent.cells - lo).T)] = 1
    c_mask = np.zeros(shape)
    if len(cavity):
        c_mask[tuple((cavity.cells - lo).T)] = 1
    b_mask, b_lo = bump.to_mask()
    b_mask = b_mask.astype(float)
    overlap = np.rint(signal.correlate(d_mask, b_mask, mode="full", method="fft"))
    covered = np.rint(signal.correlate(c_mask, b_mask, mode="full", method="fft"))
    good = (overlap == 0) & (covered == len(cavity))
    out = []
    for idx in np.argwhere(good):
        shift = idx - (np.array(b_mask.shape) - 1)
        out.append(tuple(int(v) for v in shift + lo - np.array(b_lo)))
    return sorted(out)


def match_exclusivity(atlas: BlockAtlas3 | None = None) -> ExclusivityReport:
    """Scan every bump block against every dent block for gapless local fits."""
    atlas = atlas or load_atlas()
    fits = {}
    for dname in DENT_BLOCKS:
        dent = atlas[dname]
        lo, hi = np.array(dent.mins), np.array(dent.maxs)
        cavity = VoxelSet.box(hi - lo + 1, lo) - dent
        for bname in BUMP_BLOCKS:
            fits[(bname, dname)] = fit_offsets(dent, cavity, atlas[bname])
    return ExclusivityReport(fits)


# -- derivations used when regenerating or auditing the atlas -------------

DERIVATIONS = {
    # name: (base, operation, argument)
    "d": ("c", "rotate", "z180"),
    "d-": ("c-", "rotate", "z180"),
    "a": ("c", "rotate", "z90cw"),
    "A": ("C", "rotate", "z90cw"),
    "b": ("c", "rotate", "z90ccw"),
    "B": ("C", "rotate", "z90ccw"),
    "X": ("x", "complement", "west"),
    "y": ("x", "rotate", "z90ccw"),
    "Y": ("X", "rotate", "z90ccw"),
    "z": ("x", "rotate", "y90"),
    "Z": ("X", "rotate", "y90"),
}


def complement_bump(dent: VoxelSet, face: str) -> VoxelSet:
    """A functional cube whose bump exactly fills the dent of ``dent`` on ``face``.

    Only the west-facing case is needed: the bump cube sits west of the dent
    block and protrudes east into it.
    """
    if face != "west":
        raise AtlasError("only west-facing dents are complemented directly")
    cavity = VoxelSet.box((BLOCK,) * 3) - dent
    body = VoxelSet.box((BLOCK,) * 3, (-BLOCK, 0, 0))
    return canonicalize(body | cavity)


def derive_block(name: str, atlas: BlockAtlas3 | None = None) -> VoxelSet:
    atlas = atlas or load_atlas()
    base, op, arg = DERIVATIONS[name]
    if op == "rotate":
        return rotate_block(atlas[base], arg)
    return complement_bump(atlas[base], arg)


@dataclass
class AuditResult:
    problems: list[str]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.problems


def audit_atlas() -> AuditResult:
    """Re-derive every derivable block and re-run all structural checks."""
    atlas = load_atlas()
    problems, checked = [], 0
    for name in BLOCK_NAMES:
        vs = atlas.blocks.get(name)
        if vs is None:
            problems.append(f"{name}: missing")
            continue
        checked += 1
        if vs != canonicalize(vs):
            problems.append(f"{name}: not canonical")
        if not is_connected(vs):
            problems.append(f"{name}: not connected")
        if name in DERIVATIONS and derive_block(name, atlas) != vs:
            problems.append(f"{name}: differs from its derivation {DERIVATIONS[name]}")
    for spec in atlas.complements:
        rep = check_complement(spec)
        if not rep:
            problems.append(f"complement {spec.dent}/{spec.bump} fails: {rep}")
        elif scan_complement(spec) != [spec.offset]:
            problems.append(f"complement {spec.dent}/{spec.bump}: offset not unique in window")
    if not match_exclusivity(atlas).ok:
        problems.append("bump/dent exclusivity violated")
    return AuditResult(problems, checked)
