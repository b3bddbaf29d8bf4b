"""Desk-scale VQE toolkit for a tight-binding chain with Coulomb and sd-exchange terms."""

__version__ = "0.1.0"
