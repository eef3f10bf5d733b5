"""Privacy-constrained vertical data splitting as (F, A)-coverings."""

from .boolean import (
    AlgebraLimits,
    BoolPoly,
    algebraic_optimal_size,
    buchberger_feasible,
    encode_ideal,
    enumerate_roots,
)
from .errors import BudgetExceeded, DataSplitError, InfeasibleInstance, InstanceError
from .exact import SolveLimits, decide_cover_exists, enumerate_optimal_covers, optimal_cover
from .experiments import GenParams, bench, example2_instance, gen_random_instance, medical_instance
from .family import Covering, Instance, bounds, is_covering, is_feasible, normalize
from .greedy import greedy_cover, heuristic_cover

__all__ = [
    "AlgebraLimits",
    "BoolPoly",
    "BudgetExceeded",
    "Covering",
    "DataSplitError",
    "GenParams",
    "InfeasibleInstance",
    "Instance",
    "InstanceError",
    "SolveLimits",
    "algebraic_optimal_size",
    "bench",
    "bounds",
    "buchberger_feasible",
    "decide_cover_exists",
    "encode_ideal",
    "enumerate_optimal_covers",
    "enumerate_roots",
    "example2_instance",
    "gen_random_instance",
    "greedy_cover",
    "heuristic_cover",
    "is_covering",
    "is_feasible",
    "medical_instance",
    "normalize",
    "optimal_cover",
]
