"""DIMACS export of exact-cover instances (one variable per placement)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .instance import CoverInstance


@dataclass(frozen=True)
class CNF:
    n_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.n_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c + (0,))) for c in self.clauses]
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_dimacs())


def export_sat(instance: CoverInstance) -> CNF:
    """Exactly-one constraint per free cell: one at-least-one clause plus pairwise exclusions.

    Variable ``i + 1`` stands for ``instance.placements[i]``.  A free cell with
    no placement gives the empty clause, so the formula is then unsatisfiable.
    """
    blocked = instance.blocked_mask().reshape(-1)
    by_cell: dict[int, list[int]] = {}
    for var, cells in enumerate(instance.rows, 1):
        for c in cells.tolist():
            by_cell.setdefault(c, []).append(var)
    clauses = []
    for cell in np.flatnonzero(~blocked).tolist():
        vars_ = by_cell.get(cell, [])
        clauses.append(tuple(vars_))
        clauses.extend((-a, -b) for a, b in combinations(vars_, 2))
    return CNF(len(instance.placements), tuple(clauses))


def parse_dimacs(text: str) -> CNF:
    n_vars, clauses, current = 0, [], []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            n_vars = int(line.split()[2])
            continue
        for tok in line.split():
            v = int(tok)
            if v == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(v)
    return CNF(n_vars, tuple(clauses))
