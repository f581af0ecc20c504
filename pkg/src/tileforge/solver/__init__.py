"""Exact-cover translational tiling of finite boxes and tori."""

from .core import (
    BUDGET,
    SOLVED,
    UNSOLVABLE,
    SolveConfig,
    SolveOutcome,
    solve,
    solve_constrained,
    solve_tiles,
)
from .instance import CoverInstance, enumerate_placements
from .sat import CNF, export_sat, parse_dimacs

__all__ = [
    "BUDGET",
    "CNF",
    "CoverInstance",
    "SOLVED",
    "SolveConfig",
    "SolveOutcome",
    "UNSOLVABLE",
    "enumerate_placements",
    "export_sat",
    "parse_dimacs",
    "solve",
    "solve_constrained",
    "solve_tiles",
]
