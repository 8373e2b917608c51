"""Secrecy rate regions for a two-user downlink with movable transmit antennas."""

__version__ = "0.1.0"

from .channel import (ChannelRealization, PathSpec, ScenarioParams,
                      UserChannel, array_response, channel_vector,
                      dbm_to_watts, sample_channel)
from .inner import InnerProblem, InnerSolution, solve_inner
from .outer import (PsoParams, SamplingGrid, SearchState, build_grid,
                    fpa_baseline, initial_apv, pso_baseline, sequential_search)

__all__ = [
    "ChannelRealization", "PathSpec", "ScenarioParams", "UserChannel",
    "array_response", "channel_vector", "dbm_to_watts", "sample_channel",
    "InnerProblem", "InnerSolution", "solve_inner",
    "PsoParams", "SamplingGrid", "SearchState", "build_grid", "fpa_baseline",
    "initial_apv", "pso_baseline", "sequential_search",
    "__version__",
]
