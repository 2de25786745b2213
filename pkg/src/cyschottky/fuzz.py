"""Seeded random generators for property tests and the acceptance corpus."""

from __future__ import annotations

import random
from typing import Iterator

from .artin import ArtinAlgebra, FiniteModule, cofree_chain, free_module, os_dual
from .linalg import Matrix, Q, rank

MASTER_SEED = 20240611


def rng_for(tag: str, trial: int, seed: int = MASTER_SEED) -> random.Random:
    """Independent stream per (tag, trial) so single trials can be replayed."""
    return random.Random(f"{seed}:{tag}:{trial}")


def small_rational(rng: random.Random, bound: int = 5, nonzero: bool = False) -> Q:
    while True:
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        if num or not nonzero:
            return Q(num, den)


def _random_poly(rng, nvars, degree_lo, degree_hi, terms):
    poly = {}
    for _ in range(terms):
        d = rng.randint(degree_lo, degree_hi)
        exp = [0] * nvars
        for _ in range(d):
            exp[rng.randrange(nvars)] += 1
        exp = tuple(exp)
        poly[exp] = poly.get(exp, 0) + small_rational(rng, nonzero=True)
    return {m: v for m, v in poly.items() if v}


def random_invertible(rng: random.Random, n: int, bound: int = 3) -> Matrix:
    while True:
        m = Matrix.from_rows([[small_rational(rng, bound) for _ in range(n)] for _ in range(n)])
        if rank(m) == n:
            return m


def random_algebra(rng: random.Random, max_dim: int = 8, scramble: bool = True) -> ArtinAlgebra:
    """Q[x_1..x_k] / (random relations + m^(N+1)), optionally in a scrambled basis.

    Redraws until the quotient has dimension between 2 and ``max_dim``.
    """
    while True:
        k = rng.randint(1, 3)
        top = rng.randint(1, 4)
        rels = [_random_poly(rng, k, 2, top + 1, rng.randint(1, 3))
                for _ in range(rng.randint(0, 3))]
        rels = [r for r in rels if r]
        alg = ArtinAlgebra.from_relations(k, rels, top)
        if 2 <= alg.dim <= max_dim:
            break
    if not scramble:
        return alg
    n = alg.dim
    inner = random_invertible(rng, n - 1)
    rows = [[Q(1)] + [Q(0)] * (n - 1)]
    for i in range(1, n):
        rows.append([Q(0)] + [inner[i - 1, j] for j in range(n - 1)])
    return alg.rebased(Matrix.from_rows(rows))


def random_free_triple(rng: random.Random, max_dim: int = 8, max_rank: int = 4):
    """(algebra, S_m-free module S_m^r, m) with m <= nil order."""
    alg = random_algebra(rng, max_dim)
    r = rng.randint(1, max_rank)
    m = rng.randint(0, alg.nil_order)
    return alg, free_module(alg, r, level=m), m


def _conjugate(mod_actions, p: Matrix, pinv: Matrix):
    return [pinv @ a @ p for a in mod_actions]


def random_free_module_scrambled(rng: random.Random, alg: ArtinAlgebra, r: int) -> FiniteModule:
    e = free_module(alg, r)
    from .linalg import inverse
    p = random_invertible(rng, e.dim, 2)
    return FiniteModule(alg, _conjugate(e.actions, p, inverse(p)))


def random_cofree(rng: random.Random, max_dim: int = 8, max_copies: int = 3):
    alg = random_algebra(rng, max_dim)
    m = rng.randint(0, alg.nil_order)
    return cofree_chain(os_dual(alg, m), rng.randint(1, max_copies))


def corpus(tag: str, count: int, maker, seed: int = MASTER_SEED) -> Iterator:
    for trial in range(count):
        yield trial, maker(rng_for(tag, trial, seed))


def random_perturbation(rng: random.Random, num_vars: int, max_terms: int = 3):
    """Fermat plus a few random degree-d monomials; redrawn until the ring is smooth."""
    from .errors import SingularHypersurface
    from .jacobian import build_jacobian_ring, fermat
    while True:
        extra = {}
        for _ in range(rng.randint(1, max_terms)):
            exp = [0] * num_vars
            for _ in range(num_vars):
                exp[rng.randrange(num_vars)] += 1
            extra[tuple(exp)] = small_rational(rng, 3, nonzero=True)
        spec = fermat(num_vars, extra)
        try:
            return spec, build_jacobian_ring(spec)
        except SingularHypersurface:
            continue


def random_jet(rng: random.Random, max_w1: int = 4, max_order: int = 6):
    """Valid jet with n in {2, 3}, dim W1 <= max_w1, random leading terms and tails."""
    from .hodge import build_frame
    from .jet import make_jet
    n = rng.choice([2, 3])
    h = rng.randint(1, max_w1 - 1)
    frame = build_frame(n, [1] + [h] * (n - 1) + [1])
    order = rng.randint(n, max_order)
    nt = frame.w_dim(1)
    comps = {}
    for label, i in frame.higher_labels:
        poly = {}
        for _ in range(rng.randint(0, 4)):
            d = rng.randint(i, order)
            exp = [0] * nt
            for _ in range(d):
                exp[rng.randrange(nt)] += 1
            exp = tuple(exp)
            poly[exp] = poly.get(exp, 0) + small_rational(rng, nonzero=True)
        comps[label] = {e: v for e, v in poly.items() if v}
    return make_jet(frame, order, comps)
