"""Reduce-Construct matching for random multigraphs."""
from .multigraph import MultiGraph, read_edgelist, write_edgelist
from .rng import SplitMix64, derive_seed, stream

__all__ = ["MultiGraph", "read_edgelist", "write_edgelist", "SplitMix64", "derive_seed", "stream"]
__version__ = "0.1.0"
