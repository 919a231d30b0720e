"""Monte Carlo INR/SINR simulator for millimeter-wave cellular downlinks."""

__version__ = "0.1.0"
