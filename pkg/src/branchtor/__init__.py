"""Finite covers of branched surfaces with prescribed torsion in first homology."""

__version__ = "0.1.0"
