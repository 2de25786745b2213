"""Graded Jacobian rings of Calabi-Yau hypersurfaces and their Yukawa tensors.

R = Q[x_0..x_{N-1}] / (d_0 f, ..., d_{N-1} f) with N = n + 2 = deg f.  The ring is
built one degree at a time.  Below degree d - 1 nothing is killed; in degree
d - 1 the partials are eliminated directly; from degree d on

    R_k = (V (x) R_{k-1}) / Koszul relations   (V = span of the variables),

with relations x_i (x) NF(x_j v) - x_j (x) NF(x_i v) for v in the basis of
R_{k-2}.  Each graded piece keeps an echelon form whose complement is a set of
monomials; normal forms are projections onto that complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, combinations_with_replacement, permutations
from pathlib import Path
from typing import Sequence

from .errors import HypersurfaceError, SingularHypersurface
from .hodge import HodgeFrame, build_frame
from .jet import YukawaTensors
from .linalg import DEFAULT_PRIMES, Echelon, Q, multimodular_rank, q_str, to_q
from .monomials import format_monomial, monomials_up_to_weight, padd, pmul


@dataclass(frozen=True)
class HypersurfaceSpec:
    num_vars: int
    degree: int
    terms: tuple  # ((coeff, exponent tuple), ...)

    def __post_init__(self):
        if self.num_vars < 3:
            raise HypersurfaceError("need at least 3 variables")
        if self.degree != self.num_vars:
            raise HypersurfaceError(f"Calabi-Yau condition fails: degree {self.degree} "
                                    f"!= number of variables {self.num_vars}")
        clean = {}
        for c, e in self.terms:
            e = tuple(int(x) for x in e)
            if len(e) != self.num_vars or any(x < 0 for x in e):
                raise HypersurfaceError(f"bad exponent vector {list(e)}")
            if sum(e) != self.degree:
                raise HypersurfaceError(f"term {list(e)} is not of degree {self.degree}")
            clean[e] = clean.get(e, 0) + to_q(c)
        object.__setattr__(self, "terms", tuple((v, e) for e, v in sorted(clean.items()) if v))
        if not self.terms:
            raise HypersurfaceError("f is zero")

    @property
    def n(self) -> int:
        return self.num_vars - 2

    @property
    def poly(self) -> dict:
        return {e: c for c, e in self.terms}

    def to_dict(self) -> dict:
        return {"vars": self.num_vars, "degree": self.degree,
                "terms": [[q_str(c), list(e)] for c, e in self.terms]}


def fermat(num_vars: int, extra: dict | None = None) -> HypersurfaceSpec:
    d = num_vars
    terms = [(Q(1), tuple(d if j == i else 0 for j in range(num_vars))) for i in range(num_vars)]
    terms += [(c, e) for e, c in (extra or {}).items()]
    return HypersurfaceSpec(num_vars, d, tuple(terms))


def hypersurface_from_dict(data) -> HypersurfaceSpec:
    try:
        nv, d, terms = data["vars"], data["degree"], data["terms"]
    except KeyError as exc:
        raise HypersurfaceError(f"hypersurface is missing key {exc.args[0]!r}") from None
    try:
        parsed = tuple((to_q(c), tuple(e)) for c, e in terms)
    except (TypeError, ValueError) as exc:
        raise HypersurfaceError(f"malformed term list: {exc}") from None
    return HypersurfaceSpec(int(nv), int(d), parsed)


def load_hypersurface(path) -> HypersurfaceSpec:
    from ._toml import read_toml
    return hypersurface_from_dict(read_toml(Path(path)))


def partial(poly: dict, i: int) -> dict:
    out = {}
    for e, c in poly.items():
        if e[i]:
            ee = tuple(x - (j == i) for j, x in enumerate(e))
            out[ee] = out.get(ee, 0) + c * e[i]
    return {e: v for e, v in out.items() if v}


def hessian(poly: dict, nvars: int) -> dict:
    """det of second partials, by permutation expansion on sparse polynomials."""
    first = [partial(poly, i) for i in range(nvars)]
    h = [[partial(first[i], j) for j in range(nvars)] for i in range(nvars)]
    out: dict = {}
    for perm in permutations(range(nvars)):
        term = {(0,) * nvars: Q(1)}
        for i, p in enumerate(perm):
            term = pmul(term, h[i][p])
            if not term:
                break
        if not term:
            continue
        inv = sum(1 for a in range(nvars) for b in range(a + 1, nvars) if perm[a] > perm[b])
        out = padd(out, term, -1 if inv % 2 else 1)
    return out


def _lex_desc(exp):
    return tuple(-x for x in exp)


@dataclass
class _Piece:
    degree: int
    basis: list  # monomials
    index: dict  # monomial -> position
    nf_cache: dict = field(default_factory=dict, repr=False)
    echelon: Echelon | None = field(default=None, repr=False)
    col_of: dict | None = field(default=None, repr=False)  # (i, b) or monomial -> column
    coord_of: dict | None = field(default=None, repr=False)  # free column -> basis position

    @property
    def dim(self) -> int:
        return len(self.basis)


class JacobianRing:
    def __init__(self, spec: HypersurfaceSpec, max_degree: int | None = None):
        self.spec = spec
        self.nvars = spec.num_vars
        self.f = spec.poly
        self.partials = [partial(self.f, i) for i in range(self.nvars)]
        self.top = spec.n * spec.degree
        self.max_degree = self.top + 1 if max_degree is None else max_degree
        self._pieces: list[_Piece] = []
        for k in range(self.max_degree + 1):
            self._pieces.append(self._build(k))

    # -- construction -------------------------------------------------------

    def _all_monomials(self, k):
        mons = monomials_up_to_weight([(f"x{i}", 1) for i in range(self.nvars)], k).of_weight(k)
        return sorted(mons, key=_lex_desc)

    def _build(self, k: int) -> _Piece:
        d = self.spec.degree
        if k < d - 1:
            mons = sorted(self._all_monomials(k))
            return _Piece(k, mons, {m: i for i, m in enumerate(mons)})
        if k == d - 1:
            mons = self._all_monomials(k)  # lex-descending: big monomials become pivots
            col = {m: i for i, m in enumerate(mons)}
            ech = Echelon(len(mons))
            for g in self.partials:
                ech.add({col[e]: v for e, v in g.items()})
            ech.rref()
            free = [c for c in range(len(mons)) if c not in ech._rows]
            basis = sorted(mons[c] for c in free)
            index = {m: i for i, m in enumerate(basis)}
            return _Piece(k, basis, index, {}, ech, col,
                          {c: index[mons[c]] for c in free})
        prev, prev2 = self._pieces[k - 1], self._pieces[k - 2]
        pairs = [(i, b) for i in range(self.nvars) for b in range(prev.dim)]

        def mono(pair):
            i, b = pair
            m = list(prev.basis[b])
            m[i] += 1
            return tuple(m)

        pairs.sort(key=lambda p: (_lex_desc(mono(p)), p[0]))
        col = {p: c for c, p in enumerate(pairs)}
        ech = Echelon(len(pairs))
        for nu in prev2.basis:
            for i, j in combinations(range(self.nvars), 2):
                xi = tuple(x + (t == i) for t, x in enumerate(nu))
                xj = tuple(x + (t == j) for t, x in enumerate(nu))
                vec: dict = {}
                for b, v in self._nf_monomial(k - 1, xj).items():
                    vec[col[(i, b)]] = vec.get(col[(i, b)], 0) + v
                for b, v in self._nf_monomial(k - 1, xi).items():
                    c = col[(j, b)]
                    vec[c] = vec.get(c, 0) - v
                ech.add({c: v for c, v in vec.items() if v})
        ech.rref()
        free = [c for c in range(len(pairs)) if c not in ech._rows]
        mons = [mono(pairs[c]) for c in free]
        if len(set(mons)) != len(mons):
            raise AssertionError("complement monomials are not distinct")
        order = sorted(range(len(free)), key=lambda t: mons[t])
        basis = [mons[t] for t in order]
        index = {m: i for i, m in enumerate(basis)}
        return _Piece(k, basis, index, {}, ech, col, {free[t]: index[mons[t]] for t in order})

    def _nf_monomial(self, k: int, m: tuple) -> dict:
        piece = self._pieces[k]
        hit = piece.nf_cache.get(m)
        if hit is not None:
            return hit
        d = self.spec.degree
        if k < d - 1:
            out = {piece.index[m]: Q(1)}
        elif k == d - 1:
            r = piece.echelon.reduce({piece.col_of[m]: Q(1)})
            out = {piece.coord_of[c]: v for c, v in r.items()}
        else:
            i = next(t for t, x in enumerate(m) if x)
            rest = tuple(x - (t == i) for t, x in enumerate(m))
            vec = {piece.col_of[(i, b)]: v for b, v in self._nf_monomial(k - 1, rest).items()}
            r = piece.echelon.reduce(vec)
            out = {piece.coord_of[c]: v for c, v in r.items()}
        piece.nf_cache[m] = out
        return out

    # -- queries -------------------------------------------------------------

    def dim(self, k: int) -> int:
        self._check_degree(k)
        return self._pieces[k].dim

    @property
    def dims(self) -> list[int]:
        return [p.dim for p in self._pieces]

    def basis(self, k: int) -> list:
        self._check_degree(k)
        return list(self._pieces[k].basis)

    def _check_degree(self, k: int):
        if not 0 <= k <= self.max_degree:
            raise HypersurfaceError(f"degree {k} not computed (0..{self.max_degree})")

    def reduce(self, g: dict) -> dict:
        """Normal form of a homogeneous form as {basis monomial: coefficient}."""
        if not g:
            return {}
        degs = {sum(e) for e in g}
        if len(degs) != 1:
            raise HypersurfaceError("form is not homogeneous")
        k = degs.pop()
        self._check_degree(k)
        piece = self._pieces[k]
        acc: dict = {}
        for e, c in g.items():
            for b, v in self._nf_monomial(k, tuple(e)).items():
                new = acc.get(b, 0) + c * v
                if new:
                    acc[b] = new
                else:
                    acc.pop(b, None)
        return {piece.basis[b]: v for b, v in sorted(acc.items())}

    def is_smooth(self) -> bool:
        return (self.top < len(self._pieces) and self._pieces[self.top].dim == 1
                and (self.top + 1 >= len(self._pieces) or self._pieces[self.top + 1].dim == 0)
                and bool(self.hessian_nf))

    @cached_property
    def hessian(self) -> dict:
        return hessian(self.f, self.nvars)

    @cached_property
    def hessian_nf(self) -> dict:
        if self.top > self.max_degree:
            return {}
        return self.reduce(self.hessian)

    @property
    def socle_monomial(self) -> tuple:
        return self._pieces[self.top].basis[0]

    def socle_value(self, g: dict) -> Q:
        """lambda with NF(g) = lambda * NF(Hessian)."""
        nf = self.reduce(g)
        if not nf:
            return Q(0)
        (m, c), = self.hessian_nf.items()
        return nf.get(m, Q(0)) / c

    def hilbert(self) -> list[int]:
        return self.dims

    def certify(self) -> "JacobianRing":
        if not self.is_smooth():
            top = self._pieces[self.top].dim if self.top < len(self._pieces) else None
            raise SingularHypersurface(f"singular hypersurface: dim R_{self.top} = {top}, "
                                       f"expected 1 with R_{self.top + 1} = 0")
        return self


def build_jacobian_ring(spec: HypersurfaceSpec, check: bool = True) -> JacobianRing:
    ring = JacobianRing(spec)
    return ring.certify() if check else ring


def reduce_mod_jacobian(ring: JacobianRing, g: dict) -> dict:
    return ring.reduce(g)


# -- cross-checks ----------------------------------------------------------------

def macaulay_rows(spec: HypersurfaceSpec, k: int):
    """Rows x^a * d_i f spanning the degree-k slice of the Jacobian ideal, plus the column count."""
    nv, d = spec.num_vars, spec.degree
    cols = monomials_up_to_weight([(f"x{i}", 1) for i in range(nv)], k).of_weight(k)
    index = {m: i for i, m in enumerate(cols)}
    rows = []
    if k >= d - 1:
        shifts = monomials_up_to_weight([(f"x{i}", 1) for i in range(nv)], k - d + 1).of_weight(k - d + 1)
        parts = [partial(spec.poly, i) for i in range(nv)]
        for a in shifts:
            for g in parts:
                rows.append({index[tuple(x + y for x, y in zip(a, e))]: v for e, v in g.items()})
    return rows, len(cols)


def direct_dimension(spec: HypersurfaceSpec, k: int) -> int:
    """dim R_k from one exact elimination on the full degree-k Macaulay matrix."""
    rows, ncols = macaulay_rows(spec, k)
    ech = Echelon(ncols)
    ech.extend(rows)
    return ncols - ech.rank


def modular_dimensions(spec: HypersurfaceSpec, kmax: int | None = None,
                       primes: Sequence[int] = DEFAULT_PRIMES[:1]) -> dict:
    """dim R_k computed from Macaulay ranks modulo each prime."""
    kmax = spec.n * spec.degree + 1 if kmax is None else kmax
    out = {}
    for k in range(kmax + 1):
        rows, ncols = macaulay_rows(spec, k)
        ranks = multimodular_rank(rows, ncols, primes)
        out[k] = {p: ncols - r for p, r in ranks.items()}
    return out


# -- Yukawa output ----------------------------------------------------------------

@dataclass
class YukawaOutput:
    ring: JacobianRing = field(repr=False)
    hodge_numbers: list
    eta: dict  # i -> {sorted index tuple of R_d basis: NF dict over R_{id} basis monomials}
    kappa: dict  # sorted n-tuple -> Q

    def couple(self, *idx) -> Q:
        return self.kappa.get(tuple(sorted(idx)), Q(0))

    def to_dict(self) -> dict:
        r, n, d = self.ring, self.ring.spec.n, self.ring.spec.degree
        names = [f"x{i}" for i in range(r.nvars)]
        basis = [format_monomial(m, names) for m in r.basis(d)]
        socle = [[q_str(c), list(m)] for m, c in r.hessian_nf.items()]
        return {"hypersurface": r.spec.to_dict(), "hodge_numbers": self.hodge_numbers,
                "R_d_basis": basis, "socle_generator": "hessian", "hessian_normal_form": socle,
                "kappa": [[list(k), q_str(v)] for k, v in sorted(self.kappa.items())],
                "eta_ranks": {str(i): len(t) for i, t in sorted(self.eta.items())},
                "n": n}


def yukawa_tensors(ring: JacobianRing) -> YukawaOutput:
    ring.certify()
    n, d = ring.spec.n, ring.spec.degree
    rd = ring.basis(d)
    hodge = [ring.dim(q * d) for q in range(n + 1)]
    eta = {}
    for i in range(2, n + 1):
        table = {}
        for idx in combinations_with_replacement(range(len(rd)), i):
            m = tuple(map(sum, zip(*(rd[j] for j in idx))))
            nf = ring.reduce({m: Q(1)})
            if nf:
                table[idx] = nf
        eta[i] = table
    c = next(iter(ring.hessian_nf.values()))
    soc = ring.socle_monomial
    kappa = {idx: nf[soc] / c for idx, nf in eta[n].items() if nf.get(soc)}
    return YukawaOutput(ring, hodge, eta, kappa)


def export_frame(ring: JacobianRing, out: YukawaOutput | None = None) -> tuple[HodgeFrame, YukawaTensors]:
    """Primitive frame plus leading tensors; W1 coordinate t_{j+1} pairs with the j-th R_d monomial.

    The W_i duals (i >= 2) are matched with the monomial basis of R_{id}; the
    top one reads coefficients against the Hessian normal form.  t0 (the
    H^{0,n} direction) does not occur in any tensor.
    """
    out = out or yukawa_tensors(ring)
    n, d = ring.spec.n, ring.spec.degree
    frame = build_frame(n, out.hodge_numbers)
    tensors = {}
    for i in range(2, n + 1):
        labels = frame.labels[i]
        if i == n:
            tensors[labels[0]] = {tuple(j + 1 for j in idx): v for idx, v in out.kappa.items()}
            continue
        target = ring.basis(i * d)
        if len(target) != len(labels):
            raise HypersurfaceError("graded piece dimensions break Gorenstein symmetry")
        pos = {m: a for a, m in enumerate(target)}
        arrays = {lab: {} for lab in labels}
        for idx, nf in out.eta[i].items():
            for m, v in nf.items():
                arrays[labels[pos[m]]][tuple(j + 1 for j in idx)] = v
        tensors.update(arrays)
    return frame, YukawaTensors(frame, tensors)


def quadric_from_ring(ring: JacobianRing) -> dict:
    """q(t) = kappa(t, t) on the K3 coordinates (t0 excluded), for quartic surfaces."""
    if ring.spec.n != 2:
        raise HypersurfaceError("the period quadric needs a quartic surface")
    frame, y = export_frame(ring)
    return y.polynomial(frame.labels[2][0])
