"""Weighted monomial enumeration and sparse polynomial arithmetic.

Polynomials are ``dict[tuple[int, ...], mpq]`` keyed by exponent vectors.
Zero coefficients are never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .linalg import Q, to_q

Exponent = tuple
Poly = dict


def weight_of(exp: Sequence[int], weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(exp, weights))


def grlex_key(exp: Sequence[int], weights: Sequence[int]):
    """Sort key: weight ascending, then exponent vectors lexicographically descending."""
    return (weight_of(exp, weights), tuple(-e for e in exp))


def _enumerate(weights: Sequence[int], bound: int):
    n = len(weights)
    out = []

    def rec(i, left, acc):
        if i == n:
            out.append(tuple(acc))
            return
        w = weights[i]
        for e in range(left // w + 1):
            acc.append(e)
            rec(i + 1, left - e * w, acc)
            acc.pop()

    rec(0, bound, [])
    return out


@dataclass(frozen=True)
class WeightedMonomialBasis:
    """All monomials of total weight at most ``max_weight``, in graded-lex order."""

    variables: tuple
    max_weight: int
    monomials: tuple = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {m: i for i, m in enumerate(self.monomials)})

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.variables)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(w for _, w in self.variables)

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __contains__(self, exp):
        return exp in self._index

    def index(self, exp) -> int:
        return self._index[exp]

    def weight(self, exp) -> int:
        return weight_of(exp, self.weights)

    def of_weight(self, w: int) -> list:
        ws = self.weights
        return [m for m in self.monomials if weight_of(m, ws) == w]


def monomials_up_to_weight(variables: Iterable, bound: int) -> WeightedMonomialBasis:
    """Enumerate every monomial of weight <= ``bound`` (the constant included)."""
    variables = tuple((str(label), int(w)) for label, w in variables)
    if bound < 0:
        raise ValueError("bound must be non-negative")
    weights = [w for _, w in variables]
    if any(w <= 0 for w in weights):
        raise ValueError("variable weights must be positive")
    mons = sorted(_enumerate(weights, bound), key=lambda m: grlex_key(m, weights))
    return WeightedMonomialBasis(variables, bound, tuple(mons))


# -- sparse polynomials --------------------------------------------------------

def padd(a: Poly, b: Poly, c=1) -> Poly:
    """a + c*b"""
    out = dict(a)
    c = to_q(c)
    for m, v in b.items():
        new = out.get(m, 0) + c * v
        if new:
            out[m] = new
        else:
            out.pop(m, None)
    return out


def pscale(a: Poly, c) -> Poly:
    c = to_q(c)
    if not c:
        return {}
    return {m: c * v for m, v in a.items()}


def pmul(a: Poly, b: Poly, weights: Sequence[int] | None = None,
         cap: int | None = None) -> Poly:
    """Product, dropping terms whose weight exceeds ``cap`` when given."""
    out: dict = {}
    if not a or not b:
        return out
    if cap is not None:
        wa = {m: weight_of(m, weights) for m in a}
        wb = {m: weight_of(m, weights) for m in b}
    for ma, va in a.items():
        for mb, vb in b.items():
            if cap is not None and wa[ma] + wb[mb] > cap:
                continue
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + va * vb
    return {m: v for m, v in out.items() if v}


def ppow(a: Poly, k: int, nvars: int, weights=None, cap=None) -> Poly:
    out = {(0,) * nvars: Q(1)}
    for _ in range(k):
        out = pmul(out, a, weights, cap)
    return out


def truncate(a: Poly, weights: Sequence[int], cap: int) -> Poly:
    return {m: v for m, v in a.items() if weight_of(m, weights) <= cap}


def homogeneous_part(a: Poly, weights: Sequence[int], w: int) -> Poly:
    return {m: v for m, v in a.items() if weight_of(m, weights) == w}


def order_of(a: Poly, weights: Sequence[int]) -> int | None:
    """Lowest weight present (None for the zero polynomial)."""
    return min((weight_of(m, weights) for m in a), default=None)


def monomial(exp) -> Poly:
    return {tuple(exp): Q(1)}


def unit_exponent(n: int, i: int, e: int = 1) -> tuple:
    return tuple(e if j == i else 0 for j in range(n))


def format_monomial(exp: Sequence[int], labels: Sequence[str]) -> str:
    parts = []
    for e, label in zip(exp, labels):
        if e == 1:
            parts.append(label)
        elif e > 1:
            parts.append(f"{label}^{e}")
    return "*".join(parts) or "1"


def format_poly(p: Poly, labels: Sequence[str], key=None) -> str:
    """Human-readable form such as ``phi - t0*t2 + t1^2``."""
    if not p:
        return "0"
    terms = sorted(p, key=key) if key else sorted(p)
    out = []
    for i, m in enumerate(terms):
        c = p[m]
        mono = format_monomial(m, labels)
        neg = c < 0
        a = -c if neg else c
        if mono == "1":
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
