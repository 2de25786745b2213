"""Frozen reference values and independent oracles, kept apart from the package code."""

from __future__ import annotations

from fractions import Fraction
from math import comb

QUINTIC_SOCLE_KAPPA = Fraction(1, 3200000)
TOY_K3_GENERATOR = "phi - t0*t2 + t1^2"
QUINTIC_HODGE = [1, 101, 101, 1]
QUARTIC_HODGE = [1, 19, 1]


def jacobian_hilbert(num_vars: int, degree: int) -> list[int]:
    """Coefficients of ((1 - t^(d-1)) / (1 - t))^N, i.e. (1 + t + ... + t^(d-2))^N."""
    factor = [1] * (degree - 1)
    out = [1]
    for _ in range(num_vars):
        nxt = [0] * (len(out) + len(factor) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(factor):
                nxt[i + j] += a * b
        out = nxt
    return out


def count_monomials(num_vars: int, degree: int) -> int:
    return comb(num_vars + degree - 1, degree)


def in_fermat_jacobian_ideal(exp, degree: int) -> bool:
    """The Fermat Jacobian ideal is the monomial ideal (x_i^(d-1))."""
    return any(e >= degree - 1 for e in exp)
