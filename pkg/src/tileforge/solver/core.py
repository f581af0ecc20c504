"""Front door of the cover solver: backend choice, constraints, symmetry breaking."""

from __future__ import annotations

import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..lattice import GeometryError, Placement, Region, VoxelSet
from ..witness import TilingWitness, verify_witness
from .dlx import BudgetExhausted, DancingLinks
from .fftsearch import ImplicitSearch
from .instance import CoverInstance, offset_range, self_overlaps

log = logging.getLogger(__name__)

SOLVED = "solved"
UNSOLVABLE = "unsolvable"
BUDGET = "budget-exhausted"

# explicit matrices above this many (cells x placements) go to the implicit backend
EXPLICIT_LIMIT = 2_000_000


@dataclass(frozen=True)
class SolveConfig:
    backend: str = "auto"  # "auto", "dlx" or "fft"
    symmetry: bool | None = None  # None: break torus translations when nothing is fixed
    threads: int | None = None  # None: read TILEFORGE_THREADS, default 1


@dataclass
class SolveOutcome:
    status: str
    witness: TilingWitness | None = None
    nodes: int = 0
    runtime: float = 0.0
    backend: str = ""
    branches: list[dict] = field(default_factory=list)

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


def _threads(cfg: SolveConfig) -> int:
    if cfg.threads is not None:
        return max(1, cfg.threads)
    try:
        return max(1, int(os.environ.get("TILEFORGE_THREADS", "1")))
    except ValueError:
        return 1


def _occupancy(inst: CoverInstance, fixed: Sequence[Placement]) -> np.ndarray:
    occ = inst.blocked_mask()
    flat = occ.reshape(-1)
    for p in fixed:
        if not 0 <= p.tile_index < len(inst.tiles):
            raise GeometryError(f"fixed placement refers to unknown tile {p.tile_index}")
        cells = inst.tiles[p.tile_index].cells + np.asarray(p.offset)
        if inst.region.is_torus:
            cells = np.mod(cells, inst.region.extents)
        elif ((cells < 0) | (cells >= inst.region.extents)).any():
            raise GeometryError(f"fixed placement {p} leaves the box")
        idx = np.ravel_multi_index(tuple(cells.T), inst.region.extents)
        if flat[idx].any() or len(np.unique(idx)) != len(idx):
            raise GeometryError(f"fixed placement {p} overlaps blocked or fixed cells")
        flat[idx] = True
    return occ


def _estimate(inst: CoverInstance, allowed: Sequence[int]) -> int:
    total = 0
    for k in allowed:
        n_off = int(np.prod([len(r) for r in offset_range(inst.tiles[k], inst.region)]))
        total += n_off * len(inst.tiles[k])
    return total


def _pick_backend(inst: CoverInstance, allowed: Sequence[int], cfg: SolveConfig) -> str:
    if cfg.backend != "auto":
        return cfg.backend
    return "dlx" if _estimate(inst, allowed) <= EXPLICIT_LIMIT else "fft"


def _run_dlx(inst: CoverInstance, occ: np.ndarray, allowed: Sequence[int], budget):
    flat_occ = occ.reshape(-1)
    free = np.flatnonzero(~flat_occ)
    col_of = np.full(flat_occ.size, -1, dtype=np.int64)
    col_of[free] = np.arange(len(free))
    allowed_set = set(allowed)
    rows, chosen = [], []
    for p, cells in zip(inst.placements, inst.rows):
        if p.tile_index in allowed_set and not flat_occ[cells].any():
            rows.append(np.sort(col_of[cells]).tolist())
            chosen.append(p)
    dl = DancingLinks(len(free), rows)
    try:
        sol = dl.search(budget)
    except BudgetExhausted:
        return BUDGET, None, dl.nodes
    if sol is None:
        return UNSOLVABLE, None, dl.nodes
    return SOLVED, [chosen[r] for r in sol], dl.nodes


def _run_fft(inst: CoverInstance, occ: np.ndarray, allowed: Sequence[int], budget):
    search = ImplicitSearch(inst, occ, list(allowed))
    try:
        sol = search.search(budget)
    except BudgetExhausted:
        return BUDGET, None, search.nodes
    if sol is None:
        return UNSOLVABLE, None, search.nodes
    return SOLVED, sol, search.nodes


def _run(inst, fixed, allowed, budget, backend):
    occ = _occupancy(inst, fixed)
    runner = _run_dlx if backend == "dlx" else _run_fft
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * occ.size + 1000))
    try:
        return runner(inst, occ, allowed, budget)
    finally:
        sys.setrecursionlimit(old)


def _branch_job(args):
    inst, k, allowed, budget, backend = args
    fixed = [Placement(k, (0,) * inst.dim)]
    return _run(inst, fixed, allowed, budget, backend)


def solve_constrained(
    instance: CoverInstance,
    fixed: Iterable[Placement] = (),
    allowed_tiles: Iterable[int] | None = None,
    budget: int | None = None,
    config: SolveConfig | None = None,
) -> SolveOutcome:
    """Extend ``fixed`` to an exact cover of the instance using ``allowed_tiles`` only.

    With no fixed placements on a torus, translations are factored out by
    default: branch ``k`` pins tile ``k`` at the origin and only allows tiles
    ``>= k``, which loses no solutions because every tiling can be shifted so
    that a copy of its lowest-indexed tile sits at the origin.
    """
    cfg = config or SolveConfig()
    fixed = [p.reduced(instance.region) for p in fixed]
    allowed = sorted(set(range(len(instance.tiles)) if allowed_tiles is None else allowed_tiles))
    if any(not 0 <= k < len(instance.tiles) for k in allowed):
        raise GeometryError("allowed tile index out of range")
    backend = _pick_backend(instance, allowed, cfg)
    symmetry = cfg.symmetry
    if symmetry is None:
        symmetry = instance.region.is_torus and not fixed and instance.blocked is None
    start = time.perf_counter()

    if not symmetry:
        status, sol, nodes = _run(instance, fixed, allowed, budget, backend)
        branches = []
    else:
        if not instance.region.is_torus or fixed or instance.blocked is not None:
            raise GeometryError("translation symmetry breaking needs an unconstrained torus")
        jobs = []
        for i, k in enumerate(allowed):
            if self_overlaps(instance.tiles[k], instance.region):
                continue
            jobs.append((instance, k, allowed[i:], budget, backend))
        results = []
        threads = _threads(cfg)
        if threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_branch_job, jobs))
        else:
            remaining = budget
            for job in jobs:
                res = _branch_job((*job[:3], remaining, job[4]))
                results.append(res)
                if res[0] == SOLVED:
                    break
                if remaining is not None:
                    remaining = max(0, remaining - res[2])
        nodes = sum(r[2] for r in results)
        branches = [{"tile": j[1], "status": r[0], "nodes": r[2]} for j, r in zip(jobs, results)]
        solved = [r for r in results if r[0] == SOLVED]
        if solved:
            status, sol = SOLVED, [Placement(jobs[results.index(solved[0])][1], (0,) * instance.dim)] + solved[0][1]
        elif any(r[0] == BUDGET for r in results):
            status, sol = BUDGET, None
        else:
            status, sol = UNSOLVABLE, None

    runtime = time.perf_counter() - start
    witness = None
    if status == SOLVED:
        placements = tuple(fixed) + tuple(sol) if not symmetry else tuple(sol)
        witness = TilingWitness(instance.region, placements)
        check = verify_witness(instance.region, instance.tiles, placements, instance.blocked)
        if not check:
            raise AssertionError(f"solver produced an invalid cover: {check.describe()}")
    log.debug("solve: %s after %d nodes in %.2fs (%s)", status, nodes, runtime, backend)
    return SolveOutcome(status, witness, nodes, runtime, backend, branches)


def solve(
    instance: CoverInstance,
    budget: int | None = None,
    config: SolveConfig | None = None,
) -> SolveOutcome:
    """Decide whether the instance has an exact cover."""
    return solve_constrained(instance, (), None, budget, config)


def solve_tiles(region: Region, tiles: Sequence[VoxelSet], budget: int | None = None, **kwargs) -> SolveOutcome:
    return solve(CoverInstance(region, tuple(tiles)), budget, SolveConfig(**kwargs))
