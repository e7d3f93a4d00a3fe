"""Vertex-coloring games on k-uniform hypergraphs: engine, strategies, exact solver and checks."""

from .engine import GameOutcome, GameState, IllegalMove, Player, Status, new_game, play_game
from .hypergraph import (
    Hypergraph,
    HypergraphFormatError,
    ShadowGraph,
    density_stats,
    generate_random,
    parse,
    partial_degree,
    serialize,
    shadow_graph,
)
from .solver import BudgetExceeded, chromatic_number, game_chromatic_number, solve
from .strategies import STRATEGIES, make_strategy

__all__ = [
    "BudgetExceeded",
    "GameOutcome",
    "GameState",
    "Hypergraph",
    "HypergraphFormatError",
    "IllegalMove",
    "Player",
    "STRATEGIES",
    "ShadowGraph",
    "Status",
    "chromatic_number",
    "density_stats",
    "game_chromatic_number",
    "generate_random",
    "make_strategy",
    "new_game",
    "parse",
    "partial_degree",
    "play_game",
    "serialize",
    "shadow_graph",
    "solve",
]
__version__ = "0.1.0"
