"""Exact perturbative expansions: Gaussian integrals, Feynman graph sums, trees,
matrix models, one-dimensional quantum mechanics, power counting and free CFT."""

__version__ = "0.1.0"
