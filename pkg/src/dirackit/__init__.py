"""Symbolic Dirac-Bergmann constraint analysis and lattice quantization."""

__version__ = "0.1.0"
