"""Exact linear programming and the programs used by the rent-division algorithms."""
from .program import EQ, GE, LE, Constraint, LinearProgram, LpSolution, certify
from .simplex import BACKEND, solve_lp

__all__ = [
    "BACKEND",
    "Constraint",
    "EQ",
    "GE",
    "LE",
    "LinearProgram",
    "LpSolution",
    "certify",
    "solve_lp",
]
