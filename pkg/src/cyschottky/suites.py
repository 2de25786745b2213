"""Seeded property suites shared by the CLI `verify` command and the acceptance tests."""

from __future__ import annotations

from itertools import permutations

from .artin import duality_check
from .fuzz import (MASTER_SEED, random_cofree, random_free_triple, random_jet,
                   random_perturbation, rng_for)
from .jacobian import build_jacobian_ring, fermat
from .jet import period_hom
from .linalg import Q
from .schottky import km_generation_check, lift_chain, verify_defining


def _summary(name, seed, trials, failures, **extra):
    out = {"suite": name, "seed": seed, "trials": trials, "failures": failures,
           "passed": trials - len(failures), "ok": not failures}
    out.update(extra)
    return out


def os_duality(seed: int = MASTER_SEED, trials: int = 100) -> dict:
    """Each trial checks one unit map and one counit map on fresh random inputs."""
    fails, unit_ok, counit_ok = [], 0, 0
    for t in range(trials):
        alg, e, m = random_free_triple(rng_for("os-unit", t, seed))
        unit = duality_check(e, m)
        g = random_cofree(rng_for("os-counit", t, seed))
        g.check()
        counit = duality_check(g)
        unit_ok += unit.is_isomorphism
        counit_ok += counit.is_isomorphism
        if not (unit.is_isomorphism and counit.is_isomorphism):
            fails.append({"trial": t, "unit": unit.to_dict(), "counit": counit.to_dict()})
    return _summary("os-duality", seed, trials, fails, unit_passed=unit_ok, counit_passed=counit_ok)


def jet_corpus(seed: int = MASTER_SEED, trials: int = 200) -> list:
    return [random_jet(rng_for("jet", t, seed)) for t in range(trials)]


def defining(seed: int = MASTER_SEED, trials: int = 200, corpus=None) -> dict:
    """Defining-equation check at every order n..M of each jet."""
    corpus = corpus if corpus is not None else jet_corpus(seed, trials)
    fails, checks = [], 0
    for t, j in enumerate(corpus):
        chain = lift_chain(j, j.order)
        for m in range(j.n, j.order + 1):
            rep = verify_defining(j, m, [r.generator for r in chain[m]])
            checks += 1
            if not (rep.isomorphism and rep.quotient_dim == rep.r_hat_dim):
                fails.append({"trial": t, **rep.to_dict()["dims"], "order": m})
    return _summary("defining", seed, len(corpus), fails, checks=checks)


def lifts(seed: int = MASTER_SEED, trials: int = 200, corpus=None) -> dict:
    corpus = corpus if corpus is not None else jet_corpus(seed, trials)
    fails, checks = [], 0
    for t, j in enumerate(corpus):
        chain = lift_chain(j, j.order)
        for m, results in chain.items():
            h = period_hom(j, m)
            for r in results:
                checks += 1
                if h.apply(r.generator):
                    fails.append({"trial": t, "order": m, "reason": "not in kernel"})
            if m > j.n:
                for r in results:
                    if not r.unique:
                        fails.append({"trial": t, "order": m, "reason": "z not unique",
                                      "rank": r.system_rank, "columns": r.system_columns})
    return _summary("lifts", seed, len(corpus), fails, checks=checks)


def generation(seed: int = MASTER_SEED, trials: int = 200, corpus=None) -> dict:
    corpus = corpus if corpus is not None else jet_corpus(seed, trials)
    fails, checks, cumulative_fails = [], 0, 0
    for t, j in enumerate(corpus):
        for m in range(j.n, j.order + 1):
            rep = km_generation_check(j, m)
            checks += 1
            if not rep.equal:
                fails.append({"trial": t, "n": j.n, "order": m, "K_m": rep.k_dim,
                              "span_from_K_n": rep.span_dim,
                              "span_from_K_2_to_K_n": rep.cumulative_dim})
            if not rep.cumulative_equal:
                cumulative_fails += 1
    return _summary("generation", seed, len(corpus), fails, checks=checks,
                    cumulative_failures=cumulative_fails)


def homomorphism(seed: int = MASTER_SEED, trials: int = 1000, corpus_size: int = 20) -> dict:
    corpus = jet_corpus(seed, corpus_size)
    fails = []
    for t in range(trials):
        rng = rng_for("hom", t, seed)
        j = corpus[rng.randrange(len(corpus))]
        m = rng.randint(0, j.order)
        h = period_hom(j, m)
        mons, ws = h.basis.monomials.monomials, h.basis.weights
        x = mons[rng.randrange(len(mons))]
        wx = sum(a * b for a, b in zip(x, ws))
        partners = [y for y in mons if wx + sum(a * b for a, b in zip(y, ws)) <= m]
        y = partners[rng.randrange(len(partners))]
        ok = h.is_multiplicative_at(x, y) and h.respects_filtration_at(x) and h.respects_filtration_at(y)
        if not ok:
            fails.append({"trial": t, "x": list(x), "y": list(y), "order": m})
    return _summary("homomorphism", seed, trials, fails)


def gorenstein(seed: int = MASTER_SEED, trials: int = 10) -> dict:
    fails = []
    cases = [("fermat", nv, None) for nv in (4, 5)]
    for nv in (4, 5):
        for t in range(trials):
            cases.append(("perturbed", nv, t))
    for kind, nv, t in cases:
        if kind == "fermat":
            ring = build_jacobian_ring(fermat(nv))
        else:
            _, ring = random_perturbation(rng_for(f"gor{nv}", t, seed), nv)
        dims = ring.dims[: ring.top + 1]
        if any(dims[k] != dims[ring.top - k] for k in range(ring.top + 1)):
            fails.append({"case": kind, "vars": nv, "trial": t, "dims": dims})
    return _summary("gorenstein", seed, len(cases), fails)


def kappa_vanishing(seed: int = MASTER_SEED, trials: int = 100) -> dict:
    """kappa(a, b, c) = 0 whenever a*b*c lies in the Jacobian ideal of the Fermat quintic.

    Membership is decided independently of the ring: the Fermat Jacobian ideal
    is the monomial ideal (x_i^4).
    """
    ring = build_jacobian_ring(fermat(5))
    mons = ring._all_monomials(5)
    fails = []
    for t in range(trials):
        rng = rng_for("kappa", t, seed)
        while True:
            a, b, c = (mons[rng.randrange(len(mons))] for _ in range(3))
            prod = tuple(x + y + z for x, y, z in zip(a, b, c))
            if max(prod) >= 4:
                break
        scale = Q(rng.randint(1, 9), rng.randint(1, 9))
        vals = {ring.socle_value({tuple(map(sum, zip(*p))): scale}) for p in permutations([a, b, c])}
        if vals != {Q(0)}:
            fails.append({"trial": t, "a": list(a), "b": list(b), "c": list(c)})
    return _summary("kappa-vanishing", seed, trials, fails)


def kappa_socle(ring=None) -> Q:
    ring = ring or build_jacobian_ring(fermat(5))
    return ring.socle_value({(3, 3, 3, 3, 3): Q(1)})


SUITES = {
    "os-duality": os_duality,
    "defining": defining,
    "lifts": lifts,
    "generation": generation,
    "homomorphism": homomorphism,
    "gorenstein": gorenstein,
    "kappa-vanishing": kappa_vanishing,
}

