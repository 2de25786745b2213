from __future__ import annotations

import pytest

from cyschottky.artin import (ArtinAlgebra, algebra_from_dict, algebra_to_dict, cofree_chain,
                              duality_check, free_module, os_dual, quasi_scalar, residue_field,
                              standard_chain, transpose_chain, transpose_module, truncate_algebra)
from cyschottky.errors import AlgebraError
from cyschottky.fuzz import random_algebra, random_free_module_scrambled, rng_for
from cyschottky.linalg import Q


def trunc_poly(n):
    """Q[x]/(x^n)."""
    return ArtinAlgebra.from_monomial_ideal([(n,)], ["x"])


def dual_numbers():
    return trunc_poly(2)


@pytest.mark.parametrize("alg, i, dim", [
    (trunc_poly(3), 1, 2),
    (trunc_poly(4), 2, 3),
    (ArtinAlgebra.from_monomial_ideal([(2, 0), (1, 1), (0, 2)], ["x", "y"]), 1, 3),
])
def test_truncation(alg, i, dim):
    assert truncate_algebra(alg, i).dim == dim


def test_table_constructor_and_validation():
    s = ArtinAlgebra.from_table(["1", "e"], [])
    assert s.dim == 2 and s.nil_order == 1
    with pytest.raises(AlgebraError):
        algebra_from_dict({"basis": ["1", "e"], "structure": [[1, 1, 0, "1"]]})


def test_json_roundtrip():
    s = trunc_poly(3)
    again = algebra_from_dict(algebra_to_dict(s))
    assert again.dim == 3
    assert list(again.structure_entries()) == list(s.structure_entries())


def test_os_dual_dims():
    ch = os_dual(trunc_poly(4), 2)
    assert ch.dims == [1, 2, 3]
    assert ch.plus_dims == [0, 1, 2]
    assert all(ch.factors_through_filtration(i) for i in range(3))


def test_symbol_map_of_cube():
    ch = os_dual(trunc_poly(3), 2)
    k = ch.algebra.labels.index("x^2")
    assert ch.symbol_image(2, k) == {("x", "x"): Q(1), ("x^2", "1"): Q(1)}


@pytest.mark.parametrize("module, i, dim", [
    (lambda s: free_module(s, 2), 1, 4),
    (residue_field, 1, 1),
])
def test_transpose_dims(module, i, dim):
    s = dual_numbers()
    assert transpose_module(module(s), i).dim == dim


def test_transpose_level_zero_is_reduction_mod_m():
    s = trunc_poly(3)
    assert transpose_module(free_module(s, 2), 0).dim == 2
    assert transpose_module(residue_field(s), 0).dim == 1


def test_quasi_scalar_examples():
    s = dual_numbers()
    assert quasi_scalar(transpose_chain(free_module(s, 1), 1)).dim == 2
    assert quasi_scalar(standard_chain(os_dual(trunc_poly(3), 2))).dim == 3
    g0 = standard_chain(os_dual(trunc_poly(3), 0))
    assert quasi_scalar(g0).dim == g0.dims[0]


def test_unit_free_rank_three():
    rep = duality_check(free_module(trunc_poly(3), 3), 2)
    assert rep.kind == "unit" and rep.is_isomorphism
    assert rep.source_dim == 9


def test_counit_cofree():
    rep = duality_check(cofree_chain(os_dual(dual_numbers(), 1), 2))
    assert rep.kind == "counit" and rep.is_isomorphism


def test_residue_field_report():
    rep = duality_check(residue_field(dual_numbers()), 1)
    assert rep.source_dim == 1
    assert rep.to_dict()["target_dim"] == rep.target_dim


def test_unit_needs_order():
    with pytest.raises(AlgebraError):
        duality_check(free_module(dual_numbers(), 1))


@pytest.mark.parametrize("trial", range(8))
def test_scrambled_free_module_unit(trial):
    # a free module over S in a scrambled basis is S_m-free at m = nil order
    rng = rng_for("test-scramble", trial)
    alg = random_algebra(rng, max_dim=6)
    alg.validate()
    assert alg.adapted()[0].is_adapted
    e = random_free_module_scrambled(rng, alg, rng.randint(1, 2))
    assert duality_check(e, alg.nil_order).is_isomorphism
