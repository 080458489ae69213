"""Exactly solvable bound-state spectra via the Nikiforov-Uvarov reduction."""

__version__ = "0.1.0"
