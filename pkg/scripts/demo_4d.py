"""End-to-end 4D run: four polyhypercubes, a sliced witness and the time tunnel.

    python scripts/demo_4d.py [--slices N] [--out DIR]
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from tileforge.lattice import Region
from tileforge.reduction4d import assemble_witness_4d, build_tileset_4d, tunnel_tileable
from tileforge.solver import CoverInstance, solve
from tileforge.tileset import save_tileset
from tileforge.wang import WangTiling, example_set, mismatched_set, single_tile_set


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--slices", type=int, default=2)
    ap.add_argument("--out", default="out4d")
    args = ap.parse_args()

    ts = build_tileset_4d(example_set())
    save_tileset(ts, Path(args.out) / "tiles")
    for name, tile in zip(ts.names, ts.tiles):
        print(f"  {name:8s} {len(tile):7d} cells  bbox {tile.extents}")

    ws = single_tile_set()
    start = time.perf_counter()
    w = assemble_witness_4d(ws, WangTiling.uniform(), slices=args.slices)
    w.save(Path(args.out) / "witness.json")
    print(f"coherent witness: {len(w.placements)} placements on torus {w.region.extents}, "
          f"verified in {time.perf_counter() - start:.1f} s")

    one_slice = Region("torus", w.region.extents[:3] + (8,))
    res = solve(CoverInstance(one_slice, build_tileset_4d(mismatched_set()).tiles), budget=100_000)
    print(f"mismatched tile on one slice: {res.status} after {res.nodes} nodes")

    for south in ("former", "latter"):
        for north in ("former", "latter"):
            out = tunnel_tileable(south, north)
            print(f"time tunnel {south:6s} -> {north:6s}: {out.status} ({out.nodes} nodes)")


if __name__ == "__main__":
    main()
