"""Renormalization-group reductions of perturbed ODEs, exact where the algebra allows."""

__version__ = "0.1.0"
