"""Relation ideals of a period jet and the inductive construction of its defining equations.

Elements of S_m are sparse polynomials over the full dual basis (W1 exponents
first).  Because the W1 components of a jet are the coordinates, p*_m restricts
to the identity on the B1 subring; every kernel below therefore has the
reduced-echelon basis ``mu - p*(mu)`` indexed by the non-B1 monomials ``mu``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import FrameError, RelationError
from .hodge import SymBasis, sym_basis
from .jet import PeriodHom, PeriodJet, period_hom
from .linalg import Echelon, Q, q_str, rank_sparse, solve_sparse
from .monomials import format_poly, grlex_key, padd, weight_of

PROVENANCE = {
    "construction": "inductive lift y' - z(y') of the Yukawa-type generators",
    "z_equation": "p*_{m+1}(z) = p*_{m+1}(y')",
    "generation_claim": "K_m = F_+^{n-m} S_m . K_n",
    "generation_reading": "span of (weight m-n monomials) * K_n inside S^m",
    "defining_claim": "S_m / (K_m + <Y_m>) = R_m",
}


def _wt(exp, weights) -> int:
    return weight_of(exp, weights)


def _order_key(basis: SymBasis):
    """Render order: non-B1 terms first, then B1 terms, graded-lex within each."""
    ws = basis.weights

    def key(exp):
        return (basis.is_b1(exp), grlex_key(exp, ws))
    return key


def render(poly: dict, basis: SymBasis) -> str:
    return format_poly(poly, basis.labels, key=_order_key(basis))


def poly_to_json(poly: dict, basis: SymBasis) -> list:
    key = _order_key(basis)
    return [{"coeff": q_str(poly[e]), "exp": list(e)} for e in sorted(poly, key=key)]


@dataclass
class RelationIdeal:
    order: int
    basis: SymBasis = field(repr=False)
    i_basis: list  # generators mu - p*(mu) for non-B1 mu of weight <= m
    k_basis: list  # generators of the top-slice kernel
    y_basis: list = field(default_factory=list)

    @property
    def dims(self) -> dict:
        return {"S_m": len(self.basis), "B1": len(self.basis.b1), "I_m": len(self.i_basis),
                "K_m": len(self.k_basis), "Y_m": len(self.y_basis)}


def _kernel_vector(h: PeriodHom, mu) -> dict:
    v = {tuple(mu): Q(1)}
    return padd(v, h.b1_embed(h.column(mu)), -1)


def relation_kernel(h: PeriodHom) -> RelationIdeal:
    """Bases of I_m = ker p*_m and K_m = ker(S^m -> degree-m polynomials)."""
    basis = h.basis
    i_basis = [_kernel_vector(h, mu) for mu in basis.non_b1]
    top_slice = [mu for mu in basis.slices[h.order] if not basis.is_b1(mu)]
    k_basis = [_kernel_vector(h, mu) for mu in top_slice]
    return RelationIdeal(h.order, basis, i_basis, k_basis)


def in_kernel(h: PeriodHom, poly: dict) -> bool:
    return not h.apply(poly)


def yukawa_relations(j: PeriodJet) -> list[dict]:
    """Y_n: a - w_a for each higher dual a, with w_a the B1 polynomial sharing a's image."""
    n = j.n
    if j.order < n:
        raise RelationError(f"jet order {j.order} is below n = {n}")
    h = period_hom(j, n)
    nt = j.n_coordinates
    out = []
    for k, _ in enumerate(j.frame.higher_labels):
        a = tuple([0] * nt + [int(x == k) for x in range(len(j.frame.higher_labels))])
        out.append(_kernel_vector(h, a))
    return out


@dataclass
class LiftResult:
    generator: dict
    z: dict
    residual: dict
    system_rank: int
    system_columns: int

    @property
    def unique(self) -> bool:
        return self.system_rank == self.system_columns


def lift_relation(y: dict, j: PeriodJet, m: int) -> LiftResult:
    """Lift y in I_m to Y_{m+1}: y' - z with p*_{m+1}(z) = p*_{m+1}(y')."""
    if m + 1 > j.order:
        raise RelationError(f"lifting to order {m + 1} needs a jet of order >= {m + 1}")
    h_next = period_hom(j, m + 1)
    r = h_next.apply(y)
    if any(sum(e) <= m for e in r):
        raise RelationError("element is not in the kernel at order m")
    # the degree-(m+1) B1 block of p*: unknowns are weight-(m+1) B1 monomials
    cols = [mu for mu in h_next.basis.slices[m + 1] if h_next.basis.is_b1(mu)]
    rows_index = {}
    eq_rows: dict = {}
    for c, mu in enumerate(cols):
        for e, v in h_next.column(mu).items():
            r_i = rows_index.setdefault(e, len(rows_index))
            eq_rows.setdefault(r_i, {})[c] = v
    rhs = {}
    for e, v in r.items():
        r_i = rows_index.setdefault(e, len(rows_index))
        rhs[r_i] = v
    rows = [eq_rows.get(i, {}) for i in range(len(rows_index))]
    sol = solve_sparse(rows, len(cols), rhs)
    if sol is None:
        raise RelationError("residual is not in the image of the B1 block")
    z = {cols[c]: v for c, v in sol.items()}
    gen = padd(y, z, -1)
    if h_next.apply(gen):
        raise RelationError("lifted generator is not in the kernel")
    return LiftResult(gen, z, r, rank_sparse(rows, len(cols)), len(cols))


def lift_chain(j: PeriodJet, upto: int, start: list[dict] | None = None) -> dict[int, list[LiftResult]]:
    """Y_n, Y_{n+1}, ... Y_upto; level n entries carry trivial lift data."""
    n = j.n
    gens = yukawa_relations(j) if start is None else start
    chain = {n: [LiftResult(g, {}, {}, 0, 0) for g in gens]}
    for m in range(n, upto):
        chain[m + 1] = [lift_relation(r.generator, j, m) for r in chain[m]]
    return chain


@dataclass
class DefiningReport:
    order: int
    s_dim: int
    ideal_dim: int
    quotient_dim: int
    r_hat_dim: int
    i_dim: int
    contained: bool
    generators: list = field(repr=False)
    basis: SymBasis = field(repr=False, default=None)

    @property
    def isomorphism(self) -> bool:
        return self.contained and self.ideal_dim == self.i_dim and self.quotient_dim == self.r_hat_dim

    def to_dict(self) -> dict:
        return {"order": self.order, "dims": {"S_m": self.s_dim, "ideal": self.ideal_dim,
                                              "quotient": self.quotient_dim, "R_hat": self.r_hat_dim,
                                              "I_m": self.i_dim},
                "contained_in_kernel": self.contained, "isomorphism": self.isomorphism,
                "generators": [render(g, self.basis) for g in self.generators]}


def _truncated_product(mu, poly, weights, cap) -> dict:
    out = {}
    wmu = _wt(mu, weights)
    for e, v in poly.items():
        if wmu + _wt(e, weights) <= cap:
            out[tuple(a + b for a, b in zip(mu, e))] = v
    return out


def _span_rank_in_kernel(vectors: list[dict], basis: SymBasis) -> int:
    """Rank of kernel elements, computed on their non-B1 coordinates (injective on ker p*)."""
    index = {mu: i for i, mu in enumerate(basis.non_b1)}
    ech = Echelon(len(index))
    for v in vectors:
        ech.add({index[e]: c for e, c in v.items() if e in index})
    return ech.rank


def _span_rank(vectors: list[dict], basis: SymBasis) -> int:
    order = basis.non_b1 + basis.b1
    index = {mu: i for i, mu in enumerate(order)}
    ech = Echelon(len(index))
    for v in vectors:
        ech.add({index[e]: c for e, c in v.items()})
    return ech.rank


def ideal_span(generators: Sequence[dict], basis: SymBasis) -> list[dict]:
    """mu * g truncated to S_m, over all monomials mu with weight(mu) + weight(g) <= m."""
    ws, m = basis.weights, basis.order
    out = []
    for g in generators:
        if not g:
            continue
        low = min(_wt(e, ws) for e in g)
        for mu in basis.monomials:
            if _wt(mu, ws) + low > m:
                continue
            v = _truncated_product(mu, g, ws, m)
            if v:
                out.append(v)
    return out


def verify_defining(j: PeriodJet, m: int, generators: Sequence[dict] | None = None) -> DefiningReport:
    """Compare K_m + <Y_m> with I_m; ``generators`` overrides the lifted Y_m."""
    n = j.n
    if m < n:
        raise RelationError(f"need m >= n = {n}")
    if generators is None:
        generators = [r.generator for r in lift_chain(j, m)[m]]
    h = period_hom(j, m)
    rel = relation_kernel(h)
    vectors = list(rel.k_basis) + ideal_span(generators, h.basis)
    contained = all(in_kernel(h, v) for v in vectors)
    rk = _span_rank_in_kernel(vectors, h.basis) if contained else _span_rank(vectors, h.basis)
    sdim = len(h.basis)
    return DefiningReport(m, sdim, rk, sdim - rk, len(h.basis.b1), len(rel.i_basis),
                          contained, list(generators), h.basis)


@dataclass
class GenerationReport:
    order: int
    n: int
    k_dim: int
    span_dim: int
    cumulative_dim: int

    @property
    def equal(self) -> bool:
        return self.k_dim == self.span_dim

    @property
    def cumulative_equal(self) -> bool:
        return self.k_dim == self.cumulative_dim

    def to_dict(self) -> dict:
        return {"order": self.order, "n": self.n, "reading": PROVENANCE["generation_reading"],
                "claim": PROVENANCE["generation_claim"],
                "dims": {"K_m": self.k_dim, "span_from_K_n": self.span_dim,
                         "span_from_K_2_to_K_n": self.cumulative_dim},
                "equal": self.equal, "defect": self.k_dim - self.span_dim,
                "cumulative_equal": self.cumulative_equal}


def _graded_kernel(j: PeriodJet, w: int, basis: SymBasis) -> list[dict]:
    """K_w: kernel of the graded map on the weight-w slice."""
    out = []
    nt = j.n_coordinates
    for mu in basis.slices[w]:
        if basis.is_b1(mu):
            continue
        img = {e: v for e, v in j.image(mu, w).items() if sum(e) == w}
        v = {tuple(mu): Q(1)}
        pad = (0,) * (len(mu) - nt)
        out.append(padd(v, {tuple(e) + pad: c for e, c in img.items()}, -1))
    return out


def km_generation_check(j: PeriodJet, m: int) -> GenerationReport:
    """K_m against the weight-(m-n) multiples of K_n (plus a K_2..K_n diagnostic)."""
    n = j.n
    if m < n:
        raise RelationError(f"need m >= n = {n}")
    if m > j.order:
        raise RelationError(f"order {m} exceeds the jet order {j.order}")
    basis = sym_basis(j.frame, m)
    ws = basis.weights
    km = _graded_kernel(j, m, basis)

    def multiples(src_weight):
        gens = _graded_kernel(j, src_weight, basis)
        vecs = []
        for mu in basis.slices[m - src_weight]:
            for g in gens:
                vecs.append(_truncated_product(mu, g, ws, m))
        return vecs

    def graded_rank(vecs):
        index = {mu: i for i, mu in enumerate(x for x in basis.slices[m] if not basis.is_b1(x))}
        ech = Echelon(len(index))
        for v in vecs:
            ech.add({index[e]: c for e, c in v.items() if e in index})
        return ech.rank

    span = multiples(n)
    cumulative = [v for w in range(2, n + 1) for v in multiples(w)]
    return GenerationReport(m, n, len(km), graded_rank(span), graded_rank(cumulative))


def k3_period_quadric(j: PeriodJet) -> dict:
    if j.n != 2:
        raise FrameError("the period quadric needs a K3-type frame (n = 2)")
    ys = yukawa_relations(j)
    if len(ys) != 1:
        raise RelationError(f"expected exactly one Yukawa-type relation, found {len(ys)}")
    y = ys[0]
    nt = j.n_coordinates
    lead = tuple([0] * nt + [1])
    c = y[lead]
    return {e: v / c for e, v in y.items()}


def schottky_report(j: PeriodJet, m: int) -> dict:
    """Generators, dimensions and verdicts for orders n..m."""
    n = j.n
    if m < n:
        raise RelationError(f"need m >= n = {n}")
    chain = lift_chain(j, m)
    basis = sym_basis(j.frame, m)
    levels = []
    for k in range(n, m + 1):
        gens = [r.generator for r in chain[k]]
        rep = verify_defining(j, k, gens)
        gen = km_generation_check(j, k)
        levels.append({"order": k, "dims": rep.to_dict()["dims"], "isomorphism": rep.isomorphism,
                       "contained_in_kernel": rep.contained,
                       "z_unique": all(r.unique for r in chain[k]) if k > n else True,
                       "generation": gen.to_dict()})
    top = [r.generator for r in chain[m]]
    return {"provenance": PROVENANCE, "frame": j.frame.to_dict(), "jet_order": j.order,
            "generators": [render(g, basis) for g in top],
            "generator_terms": [poly_to_json(g, basis) for g in top],
            "levels": levels,
            "verdict": all(lv["isomorphism"] for lv in levels)}
