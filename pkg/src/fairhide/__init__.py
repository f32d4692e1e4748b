"""Fair division with hidden goods: EF1 solvers, HEF-k machinery, gadgets, experiments."""

from .algorithms import (
    ALGORITHMS,
    SolverConfig,
    ef1_po_market,
    envy_graph,
    mnw,
    round_robin,
)
from .core import (
    Allocation,
    CapacityError,
    EnvyReport,
    HiddenSet,
    Instance,
    StructureError,
    bundle_value,
    envy_report,
    is_ef,
    is_ef1,
    is_hef,
    is_pareto_optimal,
    is_sef1,
    is_uhef,
    unenvied_agents,
)
from .hiding import (
    HidingResult,
    ResidualEnvyOracle,
    SearchBoundExceeded,
    exact_min_hide,
    greedy_hide,
    kappa,
    optimal_kappa,
    regret,
)

__all__ = [
    "ALGORITHMS",
    "Allocation",
    "CapacityError",
    "EnvyReport",
    "HiddenSet",
    "HidingResult",
    "Instance",
    "ResidualEnvyOracle",
    "SearchBoundExceeded",
    "SolverConfig",
    "StructureError",
    "bundle_value",
    "ef1_po_market",
    "envy_graph",
    "envy_report",
    "exact_min_hide",
    "greedy_hide",
    "is_ef",
    "is_ef1",
    "is_hef",
    "is_pareto_optimal",
    "is_sef1",
    "is_uhef",
    "kappa",
    "mnw",
    "optimal_kappa",
    "regret",
    "round_robin",
    "unenvied_agents",
]
