"""Entropy, heat and information bounds for a single ballistic channel
carrying particles with fractional exclusion statistics."""
from .exclusion import BOSE, FERMI, SEMION, StatParam, as_stat, occupation, solve_w
from .transport import ChannelSetup, Reservoir, net_currents, side_currents

__all__ = [
    "BOSE", "FERMI", "SEMION", "StatParam", "as_stat", "occupation", "solve_w",
    "ChannelSetup", "Reservoir", "net_currents", "side_currents",
]
