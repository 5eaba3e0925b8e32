"""Spectra of regularized normalized Laplacians of random and lattice geometric graphs on the torus."""

__version__ = "0.1.0"
