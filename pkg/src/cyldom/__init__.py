"""Certified lower bounds for domination numbers of cylindrical grids.

The package runs a min-plus transfer recurrence over ternary column
states of a strip, certifies the eventual periodicity of the per-strip
waste minima, and assembles the certified values into lower bounds for
the domination number of the full cylinder.  An independent brute-force
and exact-solver oracle validates the engine on small instances.
"""
from .bounds import (BoundReport, make_report, optimize_partition,
                     paper_lower_bound, total_waste, upper_bound_reference)
from .engine import (SeedCertificate, WasteTable, aggregate,
                     compute_waste_table, reconstruct_witness, run_seed)
from .errors import (CapacityError, CyldomError, IncompleteTableError,
                     InfeasiblePartitionError, NoWitnessError)
from .kernels import BACKEND as KERNEL_BACKEND
from .oracle import (ExactResult, brute_min_waste, count_cyclic_states,
                     exact_domination_number, waste_of)
from .states import StateTable, enumerate_valid_states, reflect, zeros_count
from .transitions import (TransitionTable, Variant, build_transition_table,
                          nd, successors)

__version__ = "1.0.0"

__all__ = [
    "BACKEND", "BoundReport", "CapacityError", "CyldomError", "ExactResult",
    "IncompleteTableError", "InfeasiblePartitionError", "KERNEL_BACKEND",
    "NoWitnessError", "SeedCertificate", "StateTable", "TransitionTable",
    "Variant", "WasteTable", "aggregate", "brute_min_waste",
    "build_transition_table", "compute_waste_table", "count_cyclic_states",
    "enumerate_valid_states", "exact_domination_number", "make_report",
    "nd", "optimize_partition", "paper_lower_bound", "reconstruct_witness",
    "reflect", "run_seed", "successors", "total_waste",
    "upper_bound_reference", "waste_of", "zeros_count", "__version__",
]
