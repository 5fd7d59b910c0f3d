"""Simulation preorder through two-tokens reachability games and matrix products."""

__version__ = "0.1.0"
