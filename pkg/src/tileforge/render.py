"""Layer diagrams in text and SVG.

Level 1 draws unit cells (one panel per z layer, and per time frame in 4D);
level 2 draws labelled building blocks from a :class:`BlockLayout`.  Panels
run bottom layer first and rows are printed north at the top, so a panel
reads like the figures it reproduces.  Output is byte-for-byte deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union
from xml.sax.saxutils import escape

import numpy as np

from .lattice import GeometryError, VoxelSet
from .tileset import BlockLayout

CELL_PX = 16
GRAY = "#cccccc"  # the light gray fill of the printed diagrams
FILLED, EMPTY = "#", "."


@dataclass(frozen=True)
class RenderSpec:
    source: Union[VoxelSet, BlockLayout]
    level: int = 1
    format: str = "text"
    title: str = ""


@dataclass(frozen=True)
class Panel:
    caption: str
    grid: list[list[str]]  # grid[row][col], row 0 is the northmost

    @property
    def filled(self) -> int:
        return sum(1 for row in self.grid for v in row if v)


def level1_panels(vs: VoxelSet) -> list[Panel]:
    if vs.dim not in (3, 4):
        raise GeometryError("level-1 diagrams need 3D or 4D voxel sets")
    lo, hi = np.array(vs.mins), np.array(vs.maxs)
    nx, ny = hi[0] - lo[0] + 1, hi[1] - lo[1] + 1
    frames = range(lo[3], hi[3] + 1) if vs.dim == 4 else [None]
    panels = []
    for f in frames:
        sub = vs.cells if f is None else vs.cells[vs.cells[:, 3] == f]
        for k, z in enumerate(range(lo[2], hi[2] + 1), 1):
            layer = sub[sub[:, 2] == z]
            grid = [["" for _ in range(nx)] for _ in range(ny)]
            for x, y in (layer[:, :2] - lo[:2]).tolist():
                grid[ny - 1 - y][x] = FILLED
            caption = f"layer {k}" if f is None else f"frame {f - lo[3] + 1} layer {k}"
            panels.append(Panel(caption, grid))
    return panels


def level2_panels(layout: BlockLayout) -> list[Panel]:
    xmin, ymin, xmax, ymax = layout.footprint()
    panels = []
    for k, z in enumerate(layout.layers(), 1):
        grid = [["" for _ in range(xmax - xmin + 1)] for _ in range(ymax - ymin + 1)]
        for (x, y), lab in layout.layer(z).items():
            grid[ymax - y][x - xmin] = "#" if lab == "K" else lab
        panels.append(Panel(f"layer {k}", grid))
    return panels


def _panels(spec: RenderSpec) -> list[Panel]:
    if spec.level == 1:
        if not isinstance(spec.source, VoxelSet):
            raise GeometryError("level-1 rendering needs a voxel set")
        return level1_panels(spec.source)
    if spec.level == 2:
        if not isinstance(spec.source, BlockLayout):
            raise GeometryError("level-2 rendering needs block-unit annotations")
        return level2_panels(spec.source)
    raise GeometryError(f"unknown diagram level {spec.level}")


def _text(panels: list[Panel], title: str) -> str:
    width = max((len(v) for p in panels for row in p.grid for v in row), default=1)
    width = max(width, 1)
    out = [title] if title else []
    for p in panels:
        out.append(f"{p.caption} ({p.filled} filled)")
        for row in p.grid:
            cells = [(v if v else EMPTY).ljust(width) for v in row]
            out.append(" ".join(cells).rstrip())
        out.append("")
    return "\n".join(out)


def _svg(panels: list[Panel], title: str) -> str:
    gap = 2 * CELL_PX
    ncols = max(len(p.grid[0]) for p in panels)
    nrows = max(len(p.grid) for p in panels)
    per_row = max(1, min(len(panels), 4))
    pw, ph = ncols * CELL_PX, nrows * CELL_PX + CELL_PX * 2
    rows = -(-len(panels) // per_row)
    width = per_row * pw + (per_row + 1) * gap
    height = rows * ph + (rows + 1) * gap + (CELL_PX if title else 0)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="serif" font-size="{CELL_PX * 3 // 4}">'
    ]
    top = gap + (CELL_PX if title else 0)
    if title:
        out.append(f'<text x="{gap}" y="{CELL_PX}">{escape(title)}</text>')
    for idx, p in enumerate(panels):
        ox = gap + (idx % per_row) * (pw + gap)
        oy = top + (idx // per_row) * (ph + gap)
        for r, row in enumerate(p.grid):
            for c, v in enumerate(row):
                if not v:
                    continue
                x, y = ox + c * CELL_PX, oy + r * CELL_PX
                out.append(f'<rect x="{x}" y="{y}" width="{CELL_PX}" height="{CELL_PX}" fill="{GRAY}" stroke="black"/>')
                if v not in (FILLED, "#"):
                    out.append(
                        f'<text x="{x + CELL_PX // 2}" y="{y + CELL_PX * 3 // 4}" text-anchor="middle">{escape(v)}</text>'
                    )
        cap_y = oy + len(p.grid) * CELL_PX + CELL_PX * 3 // 2
        out.append(f'<text x="{ox + len(p.grid[0]) * CELL_PX // 2}" y="{cap_y}" text-anchor="middle">{escape(p.caption)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(spec: RenderSpec) -> str:
    """Render a layer diagram as text or SVG."""
    panels = _panels(spec)
    if spec.format == "text":
        return _text(panels, spec.title)
    if spec.format == "svg":
        return _svg(panels, spec.title)
    raise GeometryError(f"unknown render format {spec.format!r}")


def panel_counts(spec: RenderSpec) -> list[int]:
    """Filled cells per panel, in panel order."""
    return [p.filled for p in _panels(spec)]
