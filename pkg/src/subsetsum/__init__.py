"""Exact SubsetSum solvers.

Randomized near-linear bounded solver (color coding over random partitions),
a deterministic near-linear unbounded solver, textbook DP oracles, and a
low-space evaluator that runs the randomized solver as an arithmetic circuit
in the Fourier domain over a prime field.
"""

from .convolve import SumSet, capped_sumset, raw_convolve, union
from .core import (
    DecideResult,
    LayerParams,
    Rng,
    color_coding,
    color_coding_layer,
    decide,
    faster_subset_sum,
    random_partition,
)
from .oracle import bellman_all_sums, unbounded_dp
from .polyspace import (
    Circuit,
    CircuitBuilder,
    FieldParams,
    Gate,
    SpaceMeter,
    build_circuit,
    dft_entry_evaluate,
    dft_explicit,
    evaluate_all_entries,
    evaluate_entry,
    find_prime,
    find_root_of_unity,
    idft_explicit,
    polyspace_decide,
)
from .preprocess import Instance, reduce_multiplicities, split_two_sets
from .unbounded import unbounded_subset_sum

__version__ = "0.1.0"

__all__ = [
    "SumSet",
    "capped_sumset",
    "raw_convolve",
    "union",
    "Instance",
    "reduce_multiplicities",
    "split_two_sets",
    "Rng",
    "LayerParams",
    "DecideResult",
    "random_partition",
    "color_coding",
    "color_coding_layer",
    "faster_subset_sum",
    "decide",
    "bellman_all_sums",
    "unbounded_dp",
    "unbounded_subset_sum",
    "Gate",
    "Circuit",
    "CircuitBuilder",
    "FieldParams",
    "SpaceMeter",
    "build_circuit",
    "find_prime",
    "find_root_of_unity",
    "dft_entry_evaluate",
    "dft_explicit",
    "idft_explicit",
    "evaluate_entry",
    "evaluate_all_entries",
    "polyspace_decide",
    "__version__",
]
