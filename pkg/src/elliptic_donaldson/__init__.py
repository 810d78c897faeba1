"""Exact intersection theory and Donaldson polynomials for elliptic surfaces with two multiple fibers."""

from .donaldson import InvariantPolynomial, gamma, gamma0, gamma1, gamma2, solve_c, solve_d
from .exact import RatFunc, var
from .surface import EllipticSurface

__all__ = [
    "EllipticSurface",
    "InvariantPolynomial",
    "RatFunc",
    "gamma",
    "gamma0",
    "gamma1",
    "gamma2",
    "solve_c",
    "solve_d",
    "var",
]
