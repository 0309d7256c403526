"""Certified computations for B_{n+1}^x - B_n^x = B_m over balancing numbers."""

__version__ = "0.1.0"
