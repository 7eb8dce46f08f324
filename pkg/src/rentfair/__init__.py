"""Exact envy-free rent division with soft budgets."""
from .envy import check_membership, is_envy_free, tight_graph
from .model import Affine, Allocation, Economy, Family, Objective, Preference, SlopeSet, validate
from .oracle import oracle_is_optimal, oracle_solve
from .solver import SolveResult, best_for_agent, eshwar_baseline, nonnegative_rents_possible, solve

__version__ = "0.1.0"

__all__ = [
    "Affine",
    "Allocation",
    "Economy",
    "Family",
    "Objective",
    "Preference",
    "SlopeSet",
    "SolveResult",
    "best_for_agent",
    "check_membership",
    "eshwar_baseline",
    "is_envy_free",
    "nonnegative_rents_possible",
    "oracle_is_optimal",
    "oracle_solve",
    "solve",
    "tight_graph",
    "validate",
]
