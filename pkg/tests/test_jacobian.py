from __future__ import annotations

from itertools import combinations_with_replacement

import pytest

from oracles import QUARTIC_HODGE, QUINTIC_HODGE, count_monomials, jacobian_hilbert
from cyschottky.errors import HypersurfaceError, SingularHypersurface
from cyschottky.jacobian import (HypersurfaceSpec, build_jacobian_ring, direct_dimension,
                                 export_frame, fermat, hypersurface_from_dict, load_hypersurface,
                                 modular_dimensions, quadric_from_ring, reduce_mod_jacobian,
                                 yukawa_tensors)
from cyschottky.jet import jet_from_yukawa, leading_tensors
from cyschottky.linalg import Q


@pytest.fixture(scope="module")
def quintic():
    return build_jacobian_ring(fermat(5))


@pytest.fixture(scope="module")
def quartic():
    return build_jacobian_ring(fermat(4))


@pytest.mark.parametrize("nv", [3, 4, 5])
def test_fermat_hilbert_series(nv):
    ring = build_jacobian_ring(fermat(nv))
    oracle = jacobian_hilbert(nv, nv)
    assert ring.dims[: len(oracle)] == oracle


def test_quartic_direct_rank(quartic):
    # the 16 products x_i * df/dx_j are independent in degree 4
    assert quartic.dim(4) == count_monomials(4, 4) - 16 == 19
    assert direct_dimension(fermat(4), 4) == 19
    assert quartic.dim(8) == 1


def test_modular_agrees_with_exact(quartic):
    mod = modular_dimensions(fermat(4), 8, (101, 10007))
    for k, per in mod.items():
        assert set(per.values()) == {quartic.dim(k)}


def test_singular_rejected():
    spec = HypersurfaceSpec(5, 5, ((Q(1), (5, 0, 0, 0, 0)), (Q(1), (1, 4, 0, 0, 0)),
                                   (Q(1), (0, 0, 5, 0, 0)), (Q(1), (0, 0, 0, 5, 0))))
    with pytest.raises(SingularHypersurface):
        build_jacobian_ring(spec)


@pytest.mark.parametrize("data", [
    {"vars": 4, "degree": 5, "terms": [["1", [5, 0, 0, 0]]]},
    {"vars": 3, "degree": 3, "terms": [["1", [2, 0, 0]]]},
])
def test_spec_validation(data):
    with pytest.raises(HypersurfaceError):
        hypersurface_from_dict(data)


def test_toml_loading(tmp_path):
    p = tmp_path / "cubic.toml"
    p.write_text('vars = 3\ndegree = 3\nterms = [["1", [3, 0, 0]], ["1", [0, 3, 0]], '
                 '["1", [0, 0, 3]], ["-3", [1, 1, 1]]]\n')
    spec = load_hypersurface(p)
    assert spec.n == 1 and len(spec.terms) == 4


def test_quintic_reductions(quintic):
    assert reduce_mod_jacobian(quintic, {(5, 0, 0, 0, 0): Q(1)}) == {}
    soc = (3, 3, 3, 3, 3)
    assert quintic.reduce({soc: Q(1)}) == {soc: Q(1)}
    assert quintic.reduce({(0,) * 5: Q(2)}) == {(0,) * 5: Q(2)}


def test_quintic_kappa(quintic):
    out = yukawa_tensors(quintic)
    assert out.hodge_numbers == QUINTIC_HODGE
    e = quintic.basis(5).index((1, 1, 1, 1, 1))
    assert out.couple(e, e, e) == Q(1, 3200000)
    x4 = {(4, 1, 0, 0, 0): Q(1)}
    assert quintic.socle_value({tuple(a + b for a, b in zip((4, 1, 0, 0, 0), (0, 2, 3, 3, 2))): Q(1)}) == 0
    assert quintic.reduce(x4) == {}


def test_perfect_pairing(quintic):
    out = yukawa_tensors(quintic)
    used = set()
    for idx in out.kappa:
        used.update(idx)
    assert used == set(range(101))


def test_eta_associativity(quintic):
    # eta^3(a, b, c) computed from eta^2(a, b) times c agrees with the direct product
    out = yukawa_tensors(quintic)
    rd = quintic.basis(5)
    for a, b, c in list(combinations_with_replacement(range(8), 3))[:30]:
        ab = out.eta[2].get((a, b), {})
        lhs = quintic.reduce({tuple(x + y for x, y in zip(m, rd[c])): v for m, v in ab.items()}) if ab else {}
        assert lhs == out.eta[3].get(tuple(sorted((a, b, c))), {})


def test_exported_frames(quintic, quartic):
    f5, y5 = export_frame(quintic)
    assert list(f5.hodge) == QUINTIC_HODGE
    f4, _ = export_frame(quartic)
    assert list(f4.hodge) == QUARTIC_HODGE and f4.w_dim(1) == 20
    j = jet_from_yukawa(f5, y5, order=4)
    assert len(f5.labels[2]) == 101
    assert sum(1 for lab in f5.labels[2] if j.component(lab)) == 101
    assert leading_tensors(j) == y5


def test_quartic_quadric_uses_20_coordinates(quartic):
    q = quadric_from_ring(quartic)
    assert all(len(e) == 20 and sum(e) == 2 and e[0] == 0 for e in q)
    assert len(q) == 10
