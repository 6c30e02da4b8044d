"""Seidel matrix spectra, energy bounds and the supporting power-sum optimization."""

__version__ = "0.1.0"
