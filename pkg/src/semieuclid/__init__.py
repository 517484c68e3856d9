"""Semi-Euclidean orders and elementary generation of SL2 over orders."""

__version__ = "0.1.0"
