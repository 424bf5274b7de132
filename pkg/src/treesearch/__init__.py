"""Continuous-time quantum search on balanced binary trees."""

__version__ = "0.1.0"

from .errors import InvalidParameter, NoPeakFound, NumericalFailure, ReductionCheckFailed, WrongConstructor
from .tree_core import TreeParams, build_full_hamiltonian, build_tree, marked_site, uniform_state
from .reduction import ReducedSystem, comb_reduction_map, reduce, reduce_comb, reduce_root_case, verify_reduction
from .evolution import Propagator, decompose, envelope_peak, evolve_amplitude, first_peak, max_probability
from .search_analysis import beta_prediction, measure, scaling_experiment, sweep_gamma

__all__ = [
    "InvalidParameter",
    "NoPeakFound",
    "NumericalFailure",
    "ReductionCheckFailed",
    "WrongConstructor",
    "TreeParams",
    "build_full_hamiltonian",
    "build_tree",
    "marked_site",
    "uniform_state",
    "ReducedSystem",
    "comb_reduction_map",
    "reduce",
    "reduce_comb",
    "reduce_root_case",
    "verify_reduction",
    "Propagator",
    "decompose",
    "envelope_peak",
    "evolve_amplitude",
    "first_peak",
    "max_probability",
    "beta_prediction",
    "measure",
    "scaling_experiment",
    "sweep_gamma",
]
