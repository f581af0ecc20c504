import json

import pytest

from tileforge.blocks3d import BLOCK_NAMES, DERIVATIONS, load_atlas, make_block
from tileforge.blocks4d import make_block_4d
from tileforge.lattice import GeometryError, VoxelSet
from tileforge.reduction3d import encoder_layout
from tileforge.render import RenderSpec, level1_panels, panel_counts, render
from tileforge.wang import example_set


def golden_file(golden_dir, name):
    return golden_dir / ("level1_" + load_atlas().entries[name].file.replace(".vox", ".txt"))


@pytest.mark.parametrize("name", BLOCK_NAMES)
def test_golden_level1(golden_dir, name):
    doc = render(RenderSpec(make_block(name), 1, "text", f"block {name}"))
    assert doc == golden_file(golden_dir, name).read_text()


def _figure_counts(golden_dir):
    counts = json.loads((golden_dir / "figure_layer_counts.json").read_text())
    # rotations about the vertical axis keep the per-layer counts of their source
    for name, (base, op, arg) in DERIVATIONS.items():
        if op == "rotate" and arg.startswith("z") and base in counts:
            counts[name] = counts[base]
    return counts


def test_figure_counts_match_render(golden_dir):
    counts = _figure_counts(golden_dir)
    assert {"c", "c-", "d", "d-", "a", "b", "x", "y", "F", "F+"} <= set(counts)
    for name, expected in counts.items():
        assert panel_counts(RenderSpec(make_block(name))) == expected, name


def test_full_box_panels():
    panels = level1_panels(VoxelSet.box((8, 8, 8)))
    assert len(panels) == 8
    assert all(p.filled == 64 for p in panels)
    assert len({tuple(map(tuple, p.grid)) for p in panels}) == 1


def test_encoder_level2():
    doc = render(RenderSpec(encoder_layout(example_set()), 2))
    blocks = [b for b in doc.strip().split("\n\n")]
    assert len(blocks) == 3
    for b in blocks:
        rows = b.splitlines()[1:]
        assert len(rows) == 6 and all(len(r.split()) == 6 for r in rows)
    first = blocks[0].splitlines()[1].split()
    assert first == ["c", "c-", "#", "#", "c", "c"]


def test_4d_panels_per_frame():
    panels = level1_panels(make_block_4d("c"))
    assert len(panels) == 4 * 8
    assert panels[0].caption == "frame 1 layer 1"


def test_north_row_printed_first():
    vs = VoxelSet([(0, 0, 0), (0, 1, 0), (1, 1, 0)])
    doc = render(RenderSpec(vs))
    assert doc.splitlines()[1:3] == ["# #", "# ."]


def test_svg_is_deterministic():
    spec = RenderSpec(make_block("c"), 1, "svg", "c")
    a, b = render(spec), render(spec)
    assert a == b
    assert a.startswith("<svg")
    assert a.count('fill="#cccccc"') == sum(panel_counts(RenderSpec(make_block("c"))))
    assert 'width="16"' in a


def test_level2_needs_layout():
    with pytest.raises(GeometryError):
        render(RenderSpec(make_block("c"), 2))
    with pytest.raises(GeometryError):
        render(RenderSpec(make_block("c"), 1, "png"))
