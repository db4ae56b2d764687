"""Exact values at s = 0 of equivariant L-functions for towers K1/k0 over real
quadratic fields k0, with the 3-adic class field data needed to test them."""

__version__ = "0.1.0"
