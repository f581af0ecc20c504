"""Independent reference implementations used to cross-check the solver."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from tileforge.lattice import Region, VoxelSet, canonicalize


def random_polyform(rng: np.random.Generator, dim: int, size: int) -> VoxelSet:
    """Grow a face-connected shape cell by cell."""
    cells = {(0,) * dim}
    while len(cells) < size:
        base = list(cells)[rng.integers(len(cells))]
        axis, step = rng.integers(dim), rng.choice((-1, 1))
        n = list(base)
        n[axis] += int(step)
        cells.add(tuple(n))
    return canonicalize(VoxelSet(sorted(cells), dim))


def random_instance(rng: np.random.Generator):
    """Box or torus with at most 24 cells and up to three tiles of at most four cells."""
    dim = int(rng.choice((2, 3)))
    while True:
        ext = tuple(int(v) for v in rng.integers(1, 5, size=dim))
        if 2 <= int(np.prod(ext)) <= 24:
            break
    kind = "torus" if rng.random() < 0.5 else "box"
    tiles = [random_polyform(rng, dim, int(rng.integers(1, 5))) for _ in range(int(rng.integers(1, 4)))]
    return Region(kind, ext), tiles


def placement_masks(region: Region, tiles) -> list[int]:
    """Bitmask of every placement; written without the package's enumeration code."""
    ext = region.extents
    masks = []
    for tile in tiles:
        cells = [tuple(c) for c in tile.cells.tolist()]
        for off in itertools.product(*[range(-e, e) for e in ext]):
            moved = [tuple(c[a] + off[a] for a in range(len(ext))) for c in cells]
            if region.is_torus:
                moved = [tuple(v % e for v, e in zip(c, ext)) for c in moved]
                if len(set(moved)) != len(moved):
                    continue
            elif any(not 0 <= v < e for c in moved for v, e in zip(c, ext)):
                continue
            m = 0
            for c in moved:
                m |= 1 << int(np.ravel_multi_index(c, ext))
            masks.append(m)
    return sorted(set(masks))


def brute_force_tileable(region: Region, tiles) -> bool:
    """Is there a subset of pairwise disjoint placements whose union is the region?

    Subsets are explored with memoisation on the covered-cell mask, always
    extending by a placement that covers the lowest free cell.
    """
    full = (1 << region.volume) - 1
    masks = placement_masks(region, tiles)

    @lru_cache(maxsize=None)
    def go(covered: int) -> bool:
        if covered == full:
            return True
        free = ~covered & full
        low = free & -free
        return any(go(covered | m) for m in masks if m & low and not m & covered)

    return go(0)


def sat_satisfiable(cnf) -> bool:
    from pysat.solvers import Minisat22

    if any(len(c) == 0 for c in cnf.clauses):
        return False
    with Minisat22(bootstrap_with=[list(c) for c in cnf.clauses]) as s:
        return s.solve()
