"""Pauli-Villars regularised one-loop QED vacuum energy in magnetic fields."""

__version__ = "0.1.0"
