from __future__ import annotations

import pytest

from cyschottky.errors import FrameError, RelationError
from cyschottky.hodge import build_frame, sym_basis
from cyschottky.jet import k3_quadric_jet, make_jet, period_hom
from cyschottky.linalg import Q
from cyschottky.schottky import (in_kernel, k3_period_quadric, km_generation_check, lift_chain,
                                 lift_relation, relation_kernel, render, schottky_report,
                                 verify_defining, yukawa_relations)

K3 = build_frame(2, [1, 2, 1])
N3 = build_frame(3, [1, 1, 1, 1])


@pytest.fixture
def toy():
    return k3_quadric_jet(K3, {(1, 0, 1): Q(1), (0, 2, 0): Q(-1)}, order=4)


@pytest.fixture
def n3_jet():
    return make_jet(N3, 4, {"psi": {(1, 1): Q(1)}, "phi": {(2, 1): Q(1)}})


def _texts(polys, frame, m):
    b = sym_basis(frame, m)
    return [render(p, b) for p in polys]


def test_toy_relation_ideal(toy):
    r2 = relation_kernel(period_hom(toy, 2))
    assert r2.dims["I_m"] == 1 and r2.dims["K_m"] == 1
    assert _texts(r2.i_basis, K3, 2) == ["phi - t0*t2 + t1^2"]
    assert relation_kernel(period_hom(toy, 3)).dims["I_m"] == 4


def test_n3_relation_ideal(n3_jet):
    r = relation_kernel(period_hom(n3_jet, 3))
    assert sorted(_texts(r.i_basis, N3, 3)) == sorted(
        ["psi - t0*t1", "t0*psi - t0^2*t1", "t1*psi - t0*t1^2", "phi - t0^2*t1"])


def test_yukawa_relations(toy, n3_jet):
    assert _texts(yukawa_relations(toy), K3, 2) == ["phi - t0*t2 + t1^2"]
    assert _texts(yukawa_relations(n3_jet), N3, 3) == ["psi - t0*t1", "phi - t0^2*t1"]
    assert _texts(yukawa_relations(make_jet(N3, 3, {})), N3, 3) == ["psi", "phi"]


def test_lift_picks_up_tail():
    c = Q(3, 7)
    j = make_jet(N3, 4, {"psi": {(1, 1): Q(1), (0, 4): c}, "phi": {(2, 1): Q(1)}})
    y = {(0, 0, 1, 0): Q(1), (1, 1, 0, 0): Q(-1)}
    res = lift_relation(y, j, 3)
    assert render(res.generator, sym_basis(N3, 4)) == "psi - t0*t1 - 3/7*t1^4"
    assert res.unique
    assert in_kernel(period_hom(j, 4), res.generator)


def test_lift_unchanged_without_tail(toy):
    chain = lift_chain(toy, 4)
    for m in (2, 3, 4):
        assert _texts([r.generator for r in chain[m]], K3, m) == ["phi - t0*t2 + t1^2"]
    assert all(not r.z for r in chain[3])


@pytest.mark.parametrize("m, ideal, quotient", [(2, 1, 10), (3, 4, 20), (4, 11, 35)])
def test_verify_defining_toy(toy, m, ideal, quotient):
    rep = verify_defining(toy, m)
    assert rep.isomorphism
    assert (rep.ideal_dim, rep.quotient_dim) == (ideal, quotient)


def test_verify_defining_n3(n3_jet):
    rep = verify_defining(n3_jet, 3)
    assert rep.isomorphism and rep.ideal_dim == 4 and rep.quotient_dim == 10


def test_dropping_a_generator_breaks_it(n3_jet):
    gens = [r.generator for r in lift_chain(n3_jet, 3)[3]]
    rep = verify_defining(n3_jet, 3, gens[1:])  # drop psi - t0*t1
    assert not rep.isomorphism
    assert rep.quotient_dim > rep.r_hat_dim


def test_generation_toy(toy):
    rep = km_generation_check(toy, 3)
    assert rep.k_dim == 3 and rep.equal
    assert km_generation_check(toy, 2).equal


def test_generation_n3_reports_both_dims(n3_jet):
    rep = km_generation_check(n3_jet, 4)
    d = rep.to_dict()["dims"]
    assert set(d) >= {"K_m", "span_from_K_n"}
    # psi^2 - t0^2*t1^2 lies in K_4 but has no weight-1 factor, so K_3 * S^1 misses it
    assert rep.k_dim == rep.cumulative_dim == rep.span_dim + 1


def test_k3_quadric(toy):
    assert _texts([k3_period_quadric(toy)], K3, 2) == ["phi - t0*t2 + t1^2"]
    with pytest.raises(FrameError):
        k3_period_quadric(make_jet(N3, 3, {}))


def test_order_below_n(n3_jet):
    with pytest.raises(RelationError):
        verify_defining(n3_jet, 2)
    with pytest.raises(RelationError):
        km_generation_check(n3_jet, 5)


def test_report_shape(toy):
    rep = schottky_report(toy, 3)
    assert rep["generators"] == ["phi - t0*t2 + t1^2"]
    assert rep["verdict"] is True
    assert [lv["order"] for lv in rep["levels"]] == [2, 3]
