"""Limiting spectral laws of Wigner and Wishart ensembles of Vinberg matrices."""
