"""Constructive approximation: R_k maps, Runge fits and certificates."""
