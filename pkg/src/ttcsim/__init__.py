"""Desk-scale simulation toolkit for a CubeSat TT&C system."""
__version__ = "0.1.0"
