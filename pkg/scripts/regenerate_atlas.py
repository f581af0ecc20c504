"""Regenerate derived 3D atlas files and the manifest from the digitized blocks.

The digitized files (c, c-, C, d, D+, a, x, F, F+) are never rewritten.
Derived blocks are written only when missing or when --force is given; the
manifest (checksums, bounding boxes, complement specs) is always rebuilt.

    python scripts/regenerate_atlas.py [--force]
"""

from __future__ import annotations

import argparse
import hashlib
import json
from pathlib import Path

from tileforge.blocks3d import DERIVATIONS, complement_bump, rotate_block
from tileforge.lattice import format_voxels, parse_voxels

ATLAS = Path(__file__).resolve().parents[1] / "src" / "tileforge" / "atlas"

FILES = {
    "c": "c.vox", "c-": "c_minus.vox", "C": "C_bump.vox", "d": "d.vox", "d-": "d_minus.vox",
    "D+": "D_plus_bump.vox", "a": "a.vox", "A": "A_bump.vox", "b": "b.vox", "B": "B_bump.vox",
    "x": "x.vox", "X": "X_bump.vox", "y": "y.vox", "Y": "Y_bump.vox", "z": "z.vox",
    "Z": "Z_bump.vox", "F": "F_filler.vox", "F+": "F_plus_filler.vox",
}
DIGITIZED = ("c", "c-", "C", "d", "D+", "a", "x", "F", "F+")

# canonical origin relative to the host cell origin, in voxels
CELL_OFFSETS = {
    "c": (0, 0, 0), "c-": (0, 0, 0), "C": (0, -3, 0), "d": (0, 0, 0), "d-": (0, 1, 0),
    "D+": (0, 0, 0), "a": (0, 0, 0), "A": (-3, 0, 0), "b": (0, 0, 0), "B": (0, 0, 0),
    "x": (0, 0, 0), "X": (0, 0, 0), "y": (0, 0, 0), "Y": (0, 0, 0), "z": (0, 0, 0),
    "Z": (0, 0, 0), "F": (1, 5, 1), "F+": (0, 5, 0),
}
PARTNER = {
    "c": "C", "c-": "C", "d": "D+", "d-": "D+", "a": "A", "b": "B", "x": "X", "y": "Y", "z": "Z",
    "C": "c", "D+": "d", "A": "a", "B": "b", "X": "x", "Y": "y", "Z": "z",
}
COMPLEMENTS = [
    ("c", "C", (0, 5, 0), (8, 16, 8)),
    ("c-", "C", (0, 4, 0), (8, 15, 8)),
    ("d", "D+", (0, -9, 0), (8, 17, 8)),
    ("d-", "D+", (0, -9, 0), (8, 16, 8)),
    ("a", "A", (5, 0, 0), (16, 8, 8)),
    ("b", "B", (-8, 0, 0), (16, 8, 8)),
    ("x", "X", (-8, 0, 0), (16, 8, 8)),
    ("y", "Y", (0, -8, 0), (8, 16, 8)),
    ("z", "Z", (0, 0, -8), (8, 8, 16)),
]
DESCRIPTIONS = {
    "d-": "8x7x8 cube, dent on the south face",
    "A": "functional cube, bump on the west face",
    "b": "functional cube, dent on the west face",
    "B": "functional cube, bump on the east face",
    "X": "functional cube, narrow bump on the east face",
    "y": "functional cube, narrow dent on the south face",
    "Y": "functional cube, narrow bump on the north face",
    "z": "functional cube, narrow dent on the bottom face",
    "Z": "functional cube, narrow bump on the top face",
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--force", action="store_true", help="rewrite derived block files")
    args = ap.parse_args()

    blocks_dir = ATLAS / "blocks3d"
    blocks = {n: parse_voxels((blocks_dir / FILES[n]).read_text()) for n in DIGITIZED}
    order = ["d-", "A", "b", "B", "X", "y", "Y", "z", "Z"]
    for name in order:
        base, op, arg = DERIVATIONS[name]
        vs = rotate_block(blocks[base], arg) if op == "rotate" else complement_bump(blocks[base], arg)
        blocks[name] = vs
        path = blocks_dir / FILES[name]
        if args.force or not path.exists():
            how = f"{op} of {base} ({arg})"
            path.write_text(format_voxels(vs, [f"block {name}: {DESCRIPTIONS[name]}", f"derived: {how}"]))

    manifest = {"dim": 3, "block_size": 8, "blocks": {}, "complements": []}
    for name, fname in FILES.items():
        raw = (blocks_dir / fname).read_text()
        vs = parse_voxels(raw)
        if name in DIGITIZED:
            source = "digitized"
        else:
            base, op, arg = DERIVATIONS[name]
            source = f"{op}:{base}:{arg}"
        manifest["blocks"][name] = {
            "file": fname,
            "source": source,
            "extents": list(vs.extents),
            "volume": len(vs),
            "sha256": hashlib.sha256(raw.encode()).hexdigest(),
            "cell_offset": list(CELL_OFFSETS[name]),
            "partner": PARTNER.get(name),
        }
    for dent, bump, off, ext in COMPLEMENTS:
        manifest["complements"].append({"dent": dent, "bump": bump, "offset": list(off), "extents": list(ext)})
    (ATLAS / "manifest3d.json").write_text(json.dumps(manifest, indent=1) + "\n")
    print(f"wrote manifest with {len(FILES)} blocks")


if __name__ == "__main__":
    main()
