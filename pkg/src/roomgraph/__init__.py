"""Configuration graphs of N ranked people in M rooms where each room's smartest occupant must move."""

from .core import (
    DEFAULT_MAX_VERTICES,
    Config,
    Instance,
    decode_index,
    encode_index,
    format_config,
    interval,
    is_concentrated,
    is_edge,
    is_spread,
    low_profile,
    movers,
    parse_config,
    successors,
    validate_path,
)
from .perm import Permutation, compose, factor_into_derangements, make_derangement
from .planner import PlanOutcome, plan_path

__version__ = "0.1.0"
