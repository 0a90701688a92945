"""Biased Maker-Breaker games on the edges of K_n.

Simulation engine for the (1:b) game with a lazily revealed random graph,
the three-player box game driving Maker's choices, explicit Breaker
strategies for the triangle and K4 factor games, exact detectors, and an
engine-independent transcript verifier.
"""

__version__ = "0.1.0"

from .analysis import (
    InvariantReport,
    k4_witness_at,
    kr_factor_search,
    regular_pair_check,
    triangle_witness,
    verify_transcript,
)
from .breaker_strategies import (
    BreakerView,
    K4Blocker,
    NullBreaker,
    RandomBreaker,
    TriangleBlocker,
    VertexFocus,
    make_breaker,
)
from .core_graph import (
    ClaimLedger,
    EdgeStatus,
    SimpleGraph,
    edge_count,
    edge_index,
    endpoint_arrays,
    endpoints,
)
from .errors import (
    ConfigError,
    GameError,
    InvariantViolation,
    ProtocolViolation,
    StrategyFault,
)
from .gamma_oracle import GammaOracle, Membership
from .maker_engine import (
    GameReport,
    GreedyDegreeMaker,
    PotentialMaker,
    RandomMaker,
    RealGameParams,
    final_report,
    make_maker,
    new_game,
    run_game,
)
from .spookybox import (
    AlwaysHauntGhost,
    BoxGameConfig,
    BoxGameState,
    ConcentrateBoxBreaker,
    NullBoxBreaker,
    NullGhost,
    PotentialParams,
    RandomBoxBreaker,
    RandomGhost,
    box_log_potential,
    derive_parameters,
    replay_box_transcript,
    run_box_game,
)
from .transcript import Transcript

__all__ = [
    "__version__",
    "AlwaysHauntGhost",
    "BoxGameConfig",
    "BoxGameState",
    "BreakerView",
    "ClaimLedger",
    "ConcentrateBoxBreaker",
    "ConfigError",
    "EdgeStatus",
    "GameError",
    "GameReport",
    "GammaOracle",
    "GreedyDegreeMaker",
    "InvariantReport",
    "InvariantViolation",
    "K4Blocker",
    "Membership",
    "NullBoxBreaker",
    "NullBreaker",
    "NullGhost",
    "PotentialMaker",
    "PotentialParams",
    "ProtocolViolation",
    "RandomBoxBreaker",
    "RandomBreaker",
    "RandomGhost",
    "RandomMaker",
    "RealGameParams",
    "SimpleGraph",
    "StrategyFault",
    "Transcript",
    "TriangleBlocker",
    "VertexFocus",
    "box_log_potential",
    "derive_parameters",
    "edge_count",
    "edge_index",
    "endpoint_arrays",
    "endpoints",
    "final_report",
    "k4_witness_at",
    "kr_factor_search",
    "make_breaker",
    "make_maker",
    "new_game",
    "regular_pair_check",
    "replay_box_transcript",
    "run_box_game",
    "run_game",
    "triangle_witness",
    "verify_transcript",
]
