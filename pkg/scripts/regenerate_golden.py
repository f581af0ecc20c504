"""Rewrite the level-1 golden diagrams of the 3D atlas under tests/golden/.

Run only after an intentional atlas change; the test suite compares the
renderer against these files byte for byte.

    python scripts/regenerate_golden.py
"""

from __future__ import annotations

from pathlib import Path

from tileforge.blocks3d import BLOCK_NAMES, load_atlas, make_block
from tileforge.render import RenderSpec, render

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden"


def golden_name(block: str) -> str:
    """Named after the atlas file, so c and C stay distinct on case-insensitive disks."""
    return "level1_" + load_atlas().entries[block].file.replace(".vox", ".txt")


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name in BLOCK_NAMES:
        doc = render(RenderSpec(make_block(name), 1, "text", f"block {name}"))
        (GOLDEN / golden_name(name)).write_text(doc)
        print("wrote", golden_name(name))


if __name__ == "__main__":
    main()
