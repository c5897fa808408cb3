__version__ = "0.1.0"

from .bell import (
    BellFunctional,
    canonical_form,
    classical_bound_bruteforce,
    correlator,
    evaluate,
    evaluate_exact,
    functional_from_game,
    is_equivalent,
    is_violated,
)
from .catalog import (
    builtin_functional,
    builtin_functional_names,
    builtin_game,
    builtin_game_names,
    builtin_strategy,
)
from .equilibria import (
    classical_optimum,
    conflict_report,
    enumerate_profiles,
    find_pure_equilibria,
    improving_deviation,
)
from .errors import (
    BellGamesError,
    CapacityError,
    DimensionError,
    IntegrityError,
    NotFoundError,
    ParseError,
    ValidationError,
)
from .game import (
    AdviceDistribution,
    Behavior,
    GameSpec,
    PayoffPair,
    PureProfile,
    behavior_from_advice,
    behavior_from_profile,
    expected_payoffs,
    parse_profile,
)
from .quantum import (
    ProjectiveMeasurement,
    QuantumStrategy,
    StateVector,
    behavior_from_quantum,
    max_entangled_state,
)
from .seesaw import SeesawConfig, SeesawResult, optimize_game, seesaw

__all__ = [
    "__version__",
    "AdviceDistribution",
    "Behavior",
    "BellFunctional",
    "BellGamesError",
    "CapacityError",
    "DimensionError",
    "GameSpec",
    "IntegrityError",
    "NotFoundError",
    "ParseError",
    "PayoffPair",
    "ProjectiveMeasurement",
    "PureProfile",
    "QuantumStrategy",
    "SeesawConfig",
    "SeesawResult",
    "StateVector",
    "ValidationError",
    "behavior_from_advice",
    "behavior_from_profile",
    "behavior_from_quantum",
    "builtin_functional",
    "builtin_functional_names",
    "builtin_game",
    "builtin_game_names",
    "builtin_strategy",
    "canonical_form",
    "classical_bound_bruteforce",
    "classical_optimum",
    "conflict_report",
    "correlator",
    "enumerate_profiles",
    "evaluate",
    "evaluate_exact",
    "expected_payoffs",
    "find_pure_equilibria",
    "functional_from_game",
    "improving_deviation",
    "is_equivalent",
    "is_violated",
    "max_entangled_state",
    "optimize_game",
    "parse_profile",
    "seesaw",
]
