from __future__ import annotations

from math import comb

import pytest

from cyschottky.monomials import (format_poly, grlex_key, monomials_up_to_weight, pmul, ppow,
                                  truncate)


def _gf_count(weights, bound):
    """Coefficient sum of prod 1/(1 - t^w) up to t^bound."""
    coeffs = [1] + [0] * bound
    for w in weights:
        for k in range(w, bound + 1):
            coeffs[k] += coeffs[k - w]
    return sum(coeffs)


def test_small_enumeration():
    b = monomials_up_to_weight([("x", 1), ("y", 1), ("z", 2)], 2)
    assert len(b) == 7
    assert {b.weight(e) for e in b} == {0, 1, 2}


def test_bound_zero():
    b = monomials_up_to_weight([("a", 1), ("b", 3)], 0)
    assert list(b) == [(0, 0)]


def test_hodge_variables():
    b = monomials_up_to_weight([("t0", 1), ("t1", 1), ("psi", 2), ("phi", 3)], 3)
    assert len(b) == 14


@pytest.mark.parametrize("weights, bound", [((1, 1, 1), 5), ((1, 2, 3), 7), ((1,) * 5 + (2,) * 3, 4)])
def test_generating_function(weights, bound):
    b = monomials_up_to_weight([(f"v{i}", w) for i, w in enumerate(weights)], bound)
    assert len(b) == _gf_count(weights, bound)


def test_order_is_weight_then_lex_descending():
    b = monomials_up_to_weight([("x", 1), ("y", 1)], 2)
    assert list(b) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    keys = [grlex_key(e, (1, 1)) for e in b]
    assert keys == sorted(keys)


def test_truncated_arithmetic():
    x, y = {(1, 0): 1}, {(0, 1): 1}
    s = {(1, 0): 1, (0, 1): 1}
    cube = ppow(s, 3, 2)
    assert cube == {(3 - k, k): comb(3, k) for k in range(4)}
    assert truncate(pmul(s, cube, (1, 1)), (1, 1), 3) == {}
    assert pmul(x, y, (1, 1), cap=1) == {}
    assert format_poly({(1, 0): 1, (0, 2): -2}, ("x", "y")) in ("x - 2*y^2", "-2*y^2 + x")
