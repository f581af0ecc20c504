"""Reductions from Wang tile sets to translational polycube and polyhypercube tilings."""
__version__ = "0.1.0"
