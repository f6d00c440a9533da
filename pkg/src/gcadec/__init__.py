"""Decide topological transitivity of group cellular automata over finite groups."""

__version__ = "0.1.0"
