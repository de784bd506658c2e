"""Greedy packing for the packing while travelling problem."""

from .errors import (ConfigurationError, EvaluationError, OracleCapError, ParseError,
                     PWTError, ScoringError, StructureError, ValidationError)
from .hyper import HHConfig, init_sequence, mutate, run_hh
from .model import (Instance, Item, TourContext, build_context, distance, format_instance,
                    load_instance, load_tour, nn_tour, parse_instance, parse_tour)
from .objective import (PackingPlan, StochasticSpec, check_capacity, evaluate, evaluate_delta,
                        is_feasible, surrogate_weight, surrogate_weight_chebyshev,
                        surrogate_weight_hoeffding)
from .pack import (BACKEND, SolveReport, pack_iterative, pack_sequence, pack_static,
                   pack_surrogate, solve)
from .validate import brute_force_optimal, monte_carlo_violation

__version__ = "0.1.0"
