"""Exact invariants of Villadsen-type inductive systems built from decorated
Bratteli diagrams: ratio functions, radii of comparison, and non-comparison
witnesses."""
from .model import (Bracket, InfeasibleError, LevelData, ParseError, SeedSpace,
                    Stratum, ValidationError, VilladsenError, VilladsenSystem,
                    generate_uhf_system, load_system)
from .ratios import StageAffine, compose, pushforward, r0_stage
from .traces import CornerProjection, rc_bracket, rc_corner

__all__ = [
    "Bracket", "CornerProjection", "InfeasibleError", "LevelData", "ParseError",
    "SeedSpace", "StageAffine", "Stratum", "ValidationError", "VilladsenError",
    "VilladsenSystem", "compose", "generate_uhf_system", "load_system", "pushforward",
    "r0_stage", "rc_bracket", "rc_corner",
]
