"""Harsanyi AND/OR interactions and interaction-based attributions for games given as value tables."""

__version__ = "0.1.0"

from .andor import AndOrSplit, OptimizerConfig, optimize_gamma, sparsity_loss, split_fixed, split_with_gamma
from .attribution import (
    banzhaf_from_interactions,
    coalition_attribution,
    conflict_decomposition,
    efficiency_report,
    per_variable_decomposition,
    shapley_from_interactions,
)
from .game import GameSpec, ValueTable, load_value_table, parse_coalition, synth_game
from .interactions import InteractionSpectrum, compute_spectrum, reconstruct_value
from .lattice import mobius_transform, reflect, zeta_transform

__all__ = [
    "AndOrSplit",
    "GameSpec",
    "InteractionSpectrum",
    "OptimizerConfig",
    "ValueTable",
    "banzhaf_from_interactions",
    "coalition_attribution",
    "compute_spectrum",
    "conflict_decomposition",
    "efficiency_report",
    "load_value_table",
    "mobius_transform",
    "optimize_gamma",
    "parse_coalition",
    "per_variable_decomposition",
    "reconstruct_value",
    "reflect",
    "shapley_from_interactions",
    "sparsity_loss",
    "split_fixed",
    "split_with_gamma",
    "synth_game",
    "zeta_transform",
]
