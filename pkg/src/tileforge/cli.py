"""Command-line interface.

Exit codes: 0 success / solved / verified, 1 unsolvable / not verified /
no tiling, 2 budget exhausted, 3 malformed input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__

EXIT_OK, EXIT_NO, EXIT_BUDGET, EXIT_ERROR = 0, 1, 2, 3

log = logging.getLogger("tileforge")


class CliError(Exception):
    pass


def _emit(args, status: str, data: dict, text: str | None = None) -> None:
    if args.json:
        print(json.dumps({"status": status, "data": data}, sort_keys=True))
    elif text is not None:
        print(text)


def _build_tileset(dim: int, ws):
    if dim == 3:
        from .reduction3d import build_tileset_3d

        return build_tileset_3d(ws)
    if dim == 4:
        from .reduction4d import build_tileset_4d

        return build_tileset_4d(ws)
    raise CliError(f"--dim must be 3 or 4, got {dim}")


# -- subcommands --------------------------------------------------------------


def cmd_reduce(args) -> int:
    from .tileset import save_tileset
    from .wang import load_wang

    ws = load_wang(args.wang)
    ts = _build_tileset(args.dim, ws)
    out = save_tileset(ts, args.out)
    data = {"dir": str(out), "tiles": [{"name": n, "cells": len(t), "extents": list(t.extents)} for n, t in zip(ts.names, ts.tiles)]}
    lines = [f"{n}: {len(t)} cells, bounding box {t.extents}" for n, t in zip(ts.names, ts.tiles)]
    _emit(args, "ok", data, f"wrote {len(ts)} tiles to {out}\n" + "\n".join(lines))
    return EXIT_OK


def cmd_witness(args) -> int:
    from .wang import load_tiling, load_wang

    ws = load_wang(args.wang)
    wt = load_tiling(args.tiling)
    if args.dim == 3:
        from .reduction3d import assemble_witness_3d

        w = assemble_witness_3d(ws, wt, completion=args.completion)
    elif args.dim == 4:
        from .reduction4d import assemble_witness_4d

        w = assemble_witness_4d(ws, wt, slices=args.slices)
    else:
        raise CliError(f"--dim must be 3 or 4, got {args.dim}")
    w.save(args.out)
    data = {"out": args.out, "region": w.region.to_json(), "placements": len(w.placements), "by_tile": w.count_by_tile()}
    _emit(args, "ok", data, f"witness with {len(w.placements)} placements on {w.region.kind} {w.region.extents} -> {args.out}")
    return EXIT_OK


def _tiles_for_witness(w, tiles_dir):
    from .tileset import load_tileset
    from .wang import WangTileSet

    if tiles_dir:
        return load_tileset(tiles_dir).tiles
    if not w.source or "wang" not in w.source:
        raise CliError("witness has no source record; pass --tiles")
    ws = WangTileSet.from_json(w.source["wang"])
    return _build_tileset(int(w.source.get("dim", w.region.dim)), ws).tiles


def cmd_verify(args) -> int:
    from .witness import TilingWitness, verify_witness

    w = TilingWitness.load(args.witness)
    tiles = _tiles_for_witness(w, args.tiles)
    rep = verify_witness(w.region, tiles, w.placements)
    data = {"ok": rep.ok, "double": rep.double, "uncovered": rep.uncovered, "outside": rep.outside}
    _emit(args, "verified" if rep else "rejected", data, "verified: exact cover" if rep else f"rejected: {rep.describe()}")
    return EXIT_OK if rep else EXIT_NO


def _parse_allow(text):
    if text is None:
        return None
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise CliError(f"malformed --allow {text!r}") from exc


def cmd_solve(args) -> int:
    from .lattice import Region
    from .solver import BUDGET, SOLVED, CoverInstance, SolveConfig, export_sat, solve_constrained
    from .tileset import load_tileset
    from .witness import TilingWitness

    region = Region.parse(args.region)
    ts = load_tileset(args.tiles)
    inst = CoverInstance(region, ts.tiles)
    fixed = TilingWitness.load(args.fixed).placements if args.fixed else ()
    allowed = _parse_allow(args.allow)
    if args.sat:
        export_sat(inst).save(args.sat)
    cfg = SolveConfig(backend=args.backend)
    out = solve_constrained(inst, fixed, allowed, args.budget, cfg)
    if out.witness is not None and args.out:
        out.witness.save(args.out)
    data = {"status": out.status, "nodes": out.nodes, "backend": out.backend, "branches": out.branches}
    if out.witness is not None:
        data["placements"] = [p.to_json() for p in out.witness.placements]
    _emit(args, out.status, data, f"{out.status} after {out.nodes} nodes ({out.backend})")
    return {SOLVED: EXIT_OK, BUDGET: EXIT_BUDGET}.get(out.status, EXIT_NO)


def cmd_wang_solve(args) -> int:
    from .wang import find_periodic_tiling, load_wang

    ws = load_wang(args.wang)
    wt = find_periodic_tiling(ws, args.h, args.v)
    if wt is None:
        _emit(args, "none", {"h": args.h, "v": args.v}, f"no {args.h}x{args.v}-periodic tiling")
        return EXIT_NO
    if args.out:
        Path(args.out).write_text(json.dumps(wt.to_json()) + "\n")
    _emit(args, "found", wt.to_json(), json.dumps(wt.to_json()))
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import RenderSpec, render

    title = ""
    if args.block:
        if args.dim == 4:
            from .blocks4d import make_block_4d

            source = make_block_4d(args.block)
        else:
            from .blocks3d import make_block

            source = make_block(args.block)
        title = f"block {args.block}"
    elif args.voxels:
        from .lattice import load_voxels

        source = load_voxels(args.voxels)
    elif args.tiles is not None:
        from .tileset import load_tileset

        ts = load_tileset(args.tiles)
        k = args.tile
        if not 0 <= k < len(ts):
            raise CliError(f"--tile {k} out of range")
        if args.level == 2:
            source = ts.layouts[k]
            if source is None:
                raise CliError(f"tile {ts.names[k]} has no block-unit annotations")
        else:
            source = ts.tiles[k]
        title = ts.names[k]
    else:
        raise CliError("render needs --block, --voxels or --tiles")
    doc = render(RenderSpec(source, args.level, args.format, title))
    if args.out:
        Path(args.out).write_text(doc)
        _emit(args, "ok", {"out": args.out}, f"wrote {args.out}")
    else:
        _emit(args, "ok", {"document": doc}, doc.rstrip("\n"))
    return EXIT_OK


def cmd_atlas_audit(args) -> int:
    problems = []
    data = {}
    if args.dim in (3, None):
        from .blocks3d import audit_atlas

        res = audit_atlas()
        problems += res.problems
        data["blocks3d"] = res.checked
    if args.dim in (4, None):
        from . import blocks4d
        from .lattice import is_connected

        o = blocks4d.onion_partition()
        data["onion"] = [len(s) for s in o.shells]
        for name in blocks4d.NAMES_4D:
            if not is_connected(blocks4d.make_block_4d(name)):
                problems.append(f"4D block {name} not connected")
        for (d, b), ok in blocks4d.exclusivity_table().items():
            if ok != (blocks4d.PARTNERS_4D[d] == b):
                problems.append(f"4D pair {d}/{b} complement check is {ok}")
        if args.emit:
            out = Path(args.emit)
            out.mkdir(parents=True, exist_ok=True)
            for name in blocks4d.NAMES_4D:
                (out / f"{name}_4d.vox").write_text(blocks4d.atlas_text(name))
            data["emitted"] = str(out)
    data["problems"] = problems
    text = "atlas ok" if not problems else "atlas problems:\n" + "\n".join(problems)
    _emit(args, "ok" if not problems else "failed", data, text)
    return EXIT_OK if not problems else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tileforge", allow_abbrev=False, description="Wang-tile reductions to polycube tilings.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--json", action="store_true", help="machine-readable JSON envelope on stdout")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="build the tile set for a Wang set")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--wang", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("witness", help="assemble a periodic tiling witness from a Wang tiling")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--wang", required=True)
    p.add_argument("--tiling", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--completion", choices=("solver", "constructive"), default="solver")
    p.add_argument("--slices", type=int, default=1, help="time slices of the 4D torus")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="check that a witness is an exact cover")
    p.add_argument("--witness", required=True)
    p.add_argument("--tiles", help="tile-set directory (default: rebuild from the witness source)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="search for an exact cover of a region")
    p.add_argument("--region", required=True, help="e.g. torus:8,8,8 or box:4,4")
    p.add_argument("--tiles", required=True)
    p.add_argument("--fixed", help="witness JSON whose placements are kept fixed")
    p.add_argument("--allow", help="comma-separated tile indices")
    p.add_argument("--budget", type=int)
    p.add_argument("--sat", help="also write the DIMACS export here")
    p.add_argument("--backend", choices=("auto", "dlx", "fft"), default="auto")
    p.add_argument("--out", help="write the witness here when solved")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("wang-solve", help="search for an h x v periodic Wang tiling")
    p.add_argument("--wang", required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_wang_solve)

    p = sub.add_parser("render", help="draw a layer diagram")
    p.add_argument("--block", help="atlas block name")
    p.add_argument("--dim", type=int, default=3, help="atlas dimension for --block")
    p.add_argument("--voxels", help="voxel text or JSON file")
    p.add_argument("--tiles", help="tile-set directory")
    p.add_argument("--tile", type=int, default=0)
    p.add_argument("--level", type=int, choices=(1, 2), default=1)
    p.add_argument("--format", choices=("text", "svg"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("atlas-audit", help="re-check every building block")
    p.add_argument("--dim", type=int, choices=(3, 4))
    p.add_argument("--emit", help="write the 4D atlas as voxel files into this directory")
    p.set_defaults(func=cmd_atlas_audit)
    return ap


def run_cli(argv: list[str] | None = None) -> int:
    from .lattice import GeometryError
    from .wang import WangError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CliError, GeometryError, WangError, OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        msg = f"{type(exc).__name__}: {exc}"
        if args.json:
            print(json.dumps({"status": "error", "data": {"message": msg}}))
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
