"""Exact-cover search with an implicit placement matrix.

For tori with tens of thousands of cells and tiles with thousands of cells
the explicit matrix is far too large.  Instead, at each node the set of
fitting offsets of every tile is recomputed from the occupancy grid by FFT
cross-correlation, and the number of fitting placements through each free
cell by FFT convolution.  Cell choice, candidate order and node counting are
identical to :mod:`.dlx`, so both backends explore the same tree.
"""

from __future__ import annotations

import numpy as np
from scipy import fft as sfft

from ..lattice import Placement
from .dlx import BudgetExhausted
from .instance import CoverInstance, self_overlaps


class ImplicitSearch:
    def __init__(self, inst: CoverInstance, occupied: np.ndarray, allowed: list[int]):
        region = inst.region
        self.torus = region.is_torus
        ext = np.array(region.extents)
        tiles = [inst.tiles[k] for k in allowed]
        self.shifts = [np.array(t.mins) for t in tiles]
        canon = [t.cells - s for t, s in zip(tiles, self.shifts)]
        if self.torus:
            shape = ext
            occ = occupied.copy()
        else:
            # pad the box with occupied cells wide enough that no placement wraps
            pad = np.max([c.max(axis=0) + 1 for c in canon], axis=0) if canon else np.zeros_like(ext)
            shape = ext + pad
            occ = np.ones(tuple(shape), dtype=bool)
            occ[tuple(slice(0, e) for e in ext)] = occupied
        self.shape = tuple(int(v) for v in shape)
        self.occ = occ
        self.allowed = []
        self.cells = []
        self.kernels = []
        for k, tile, cells in zip(allowed, tiles, canon):
            if self.torus and self_overlaps(tile, region):
                continue
            cells = np.mod(cells, self.shape)
            mask = np.zeros(self.shape)
            mask[tuple(cells.T)] = 1.0
            self.allowed.append(k)
            self.cells.append(cells)
            self.kernels.append(sfft.rfftn(mask))
        self.shift_of = dict(zip(allowed, self.shifts))
        self.nodes = 0
        self.region_shape = tuple(ext)

    def _fits(self, f_occ):
        out = []
        for kern in self.kernels:
            corr = sfft.irfftn(f_occ * np.conj(kern), s=self.shape)
            out.append(corr < 0.5)
        return out

    def _counts(self, fits):
        total = np.zeros(self.shape)
        for fit, kern in zip(fits, self.kernels):
            if fit.any():
                total += sfft.irfftn(sfft.rfftn(fit.astype(float)) * kern, s=self.shape)
        return np.rint(total)

    def search(self, budget: int | None = None) -> list[Placement] | None:
        solution: list[Placement] = []
        occ = self.occ
        shape = np.array(self.shape)

        def recurse() -> bool:
            free = ~occ
            if not free.any():
                return True
            if not self.kernels:
                return False
            fits = self._fits(sfft.rfftn(occ.astype(float)))
            counts = self._counts(fits)
            counts[occ] = np.inf
            flat = int(np.argmin(counts))
            if counts.flat[flat] == 0:
                return False
            cell = np.array(np.unravel_index(flat, self.shape))
            candidates = []
            for i, (fit, cells) in enumerate(zip(fits, self.cells)):
                offs = np.mod(cell - cells, shape)
                offs = offs[fit[tuple(offs.T)]]
                if not len(offs):
                    continue
                # order by the offset of the tile as given, matching the explicit enumeration
                orig = offs - self.shift_of[self.allowed[i]]
                if self.torus:
                    orig = np.mod(orig, shape)
                for j in np.lexsort(orig.T[::-1]):
                    candidates.append((i, offs[j], orig[j]))
            for i, off, orig in candidates:
                self.nodes += 1
                if budget is not None and self.nodes > budget:
                    raise BudgetExhausted
                idx = tuple(np.mod(self.cells[i] + off, shape).T)
                occ[idx] = True
                k = self.allowed[i]
                solution.append(Placement(k, tuple(int(v) for v in orig)))
                if recurse():
                    return True
                solution.pop()
                occ[idx] = False
            return False

        return list(solution) if recurse() else None
