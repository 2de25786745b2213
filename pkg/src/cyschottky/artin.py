"""Artin local algebras, their order-symbolic dual chains, and module duality.

An algebra is given by structure constants on a basis whose first element is
the unit and whose remaining elements span the maximal ideal.  Most of the
constructions need a basis *adapted* to the powers of the maximal ideal
(each power spanned by a tail of basis vectors of high order);
:meth:`ArtinAlgebra.adapted` produces one when the input basis isn't.

Conventions used throughout:

* ``B0[i]`` (dual of ``S_i = S / m^(i+1)``) has the dual basis of the adapted
  basis vectors of order <= i; ``Bplus[i]`` uses those of order 1..i.
* Matrices act on column vectors.  Tensor products ``U (x) V`` are indexed
  ``u * dim V + v``.
* Modules are over commutative algebras, so left and right actions coincide
  and are stored as one list of matrices, one per algebra basis element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Sequence

from .errors import AlgebraError
from .linalg import Echelon, Matrix, Q, inverse, kernel_sparse, rank, to_q
from .monomials import format_monomial, grlex_key


def _vadd(acc: dict, vec: dict, c) -> None:
    for k, v in vec.items():
        new = acc.get(k, 0) + c * v
        if new:
            acc[k] = new
        else:
            acc.pop(k, None)


class ArtinAlgebra:
    """Finite-dimensional commutative local Q-algebra with residue field Q."""

    def __init__(self, labels: Sequence[str], products, check: bool = True):
        self.labels = tuple(str(x) for x in labels)
        n = len(self.labels)
        if n == 0:
            raise AlgebraError("algebra must have at least the unit")
        table: list[list[dict]] = [[{} for _ in range(n)] for _ in range(n)]
        if isinstance(products, dict):
            items = [(a, b, k, c) for (a, b), vec in products.items() for k, c in vec.items()]
        else:
            items = list(products)
        for a, b, k, c in items:
            c = to_q(c)
            if c:
                table[a][b][k] = table[a][b].get(k, 0) + c
        for a in range(n):
            for b in range(n):
                table[a][b] = {k: v for k, v in table[a][b].items() if v}
        self._t = table
        if check:
            self.validate()

    # -- construction helpers ---------------------------------------------

    @classmethod
    def from_table(cls, labels, entries, check=True) -> "ArtinAlgebra":
        """Sparse ``(i, j, k, c)`` entries; unit products and symmetric partners
        are filled in when omitted."""
        n = len(labels)
        prod: dict = {}
        for i, j, k, c in entries:
            c = to_q(c)
            prod.setdefault((i, j), {})[k] = c
        for (i, j), vec in list(prod.items()):
            prod.setdefault((j, i), dict(vec))
        for a in range(n):
            prod.setdefault((0, a), {a: Q(1)})
            prod.setdefault((a, 0), {a: Q(1)})
        return cls(labels, prod, check=check)

    @classmethod
    def from_monomial_ideal(cls, generators: Sequence[Sequence[int]], names=None) -> "ArtinAlgebra":
        """Q[x_1..x_k] / (monomial ideal); basis = standard monomials in graded-lex order."""
        gens = [tuple(g) for g in generators]
        if not gens:
            raise AlgebraError("monomial ideal needs generators")
        k = len(gens[0])
        names = names or (["x"] if k == 1 else ["x", "y", "z"] if k <= 3 else [f"x{i}" for i in range(k)])
        for i in range(k):
            if not any(g[i] > 0 and sum(g) == g[i] for g in gens):
                raise AlgebraError(f"quotient is infinite-dimensional: no pure power of {names[i]}")

        def standard(m):
            return not any(all(a >= b for a, b in zip(m, g)) for g in gens)

        mons, frontier = {(0,) * k}, [(0,) * k]
        while frontier:
            nxt = []
            for m in frontier:
                for i in range(k):
                    mm = tuple(e + (j == i) for j, e in enumerate(m))
                    if mm not in mons and standard(mm):
                        mons.add(mm)
                        nxt.append(mm)
            frontier = nxt
        basis = sorted(mons, key=lambda m: grlex_key(m, [1] * k))
        index = {m: i for i, m in enumerate(basis)}
        prod = {}
        for a, ma in enumerate(basis):
            for b, mb in enumerate(basis):
                m = tuple(x + y for x, y in zip(ma, mb))
                if m in index:
                    prod[(a, b)] = {index[m]: Q(1)}
        return cls([format_monomial(m, names) for m in basis], prod)

    @classmethod
    def from_relations(cls, nvars: int, relations: Sequence[dict], truncation: int,
                       names=None) -> "ArtinAlgebra":
        """Q[x] / (relations + m^(truncation+1)) computed by linear algebra.

        Relations are polynomials (exponent tuple -> coefficient) without
        constant term.  The basis is the echelon complement that prefers
        low-degree monomials.
        """
        names = names or [f"x{i}" for i in range(nvars)]
        from .monomials import monomials_up_to_weight, pmul, truncate
        amb = monomials_up_to_weight([(n, 1) for n in names], truncation)
        w = [1] * nvars
        # pivot priority: high degree first
        order = list(reversed(amb.monomials))
        col = {m: i for i, m in enumerate(order)}
        ech = Echelon(len(order))
        for f in relations:
            if f.get((0,) * nvars):
                raise AlgebraError("relations must lie in the maximal ideal")
            for mu in amb.monomials:
                g = truncate(pmul({mu: Q(1)}, f), w, truncation)
                ech.add({col[m]: v for m, v in g.items()})
        ech.rref()
        free = [i for i in range(len(order)) if i not in ech._rows]
        basis = sorted((order[i] for i in free), key=lambda m: grlex_key(m, w))
        bidx = {col[m]: j for j, m in enumerate(basis)}

        def nf(poly):
            r = ech.reduce({col[m]: v for m, v in poly.items()})
            return {bidx[i]: v for i, v in r.items()}

        prod = {}
        for a, ma in enumerate(basis):
            for b, mb in enumerate(basis):
                m = tuple(x + y for x, y in zip(ma, mb))
                if sum(m) <= truncation:
                    vec = nf({m: Q(1)})
                    if vec:
                        prod[(a, b)] = vec
        return cls([format_monomial(m, names) for m in basis], prod)

    def rebased(self, P: Matrix, labels=None) -> "ArtinAlgebra":
        """Same algebra on the basis given by the columns of ``P`` (column 0 must be the unit)."""
        n = self.dim
        if P.rows != n or P.cols != n or any(P[i, 0] != (i == 0) for i in range(n)):
            raise AlgebraError("change of basis must fix the unit")
        if any(P[0, j] for j in range(1, n)):
            raise AlgebraError("change of basis must preserve the maximal ideal")
        Pinv = inverse(P)
        vecs = [{i: P[i, j] for i in range(n) if P[i, j]} for j in range(n)]
        prod = {}
        for a in range(n):
            for b in range(n):
                w = self.mul(vecs[a], vecs[b])
                vec = {i: c for i in range(n)
                       if (c := sum((Pinv[i, k] * v for k, v in w.items()), Q(0)))}
                if vec:
                    prod[(a, b)] = vec
        labels = labels or [self.labels[0]] + [f"v{j}" for j in range(1, n)]
        return ArtinAlgebra(labels, prod)

    # -- basic structure ----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.labels)

    def product(self, a: int, b: int) -> dict:
        return self._t[a][b]

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, u in x.items():
            for b, v in y.items():
                _vadd(out, self._t[a][b], u * v)
        return out

    def structure_entries(self):
        for a in range(self.dim):
            for b in range(self.dim):
                for k, c in sorted(self._t[a][b].items()):
                    yield a, b, k, c

    def validate(self) -> None:
        n, t = self.dim, self._t
        for a in range(n):
            if t[0][a] != {a: 1} or t[a][0] != {a: 1}:
                raise AlgebraError("basis[0] is not a unit")
        for a in range(n):
            for b in range(a + 1, n):
                if t[a][b] != t[b][a]:
                    raise AlgebraError(f"not commutative at ({self.labels[a]}, {self.labels[b]})")
        for a in range(1, n):
            for b in range(1, n):
                if t[a][b].get(0):
                    raise AlgebraError("basis[1:] does not span an ideal (unit component in a product)")
                if any(k >= n for k in t[a][b]):
                    raise AlgebraError("structure constant index out of range")
        for a in range(1, n):
            for b in range(a, n):
                ab = t[a][b]
                for c in range(b, n):
                    left = self.mul(ab, {c: 1})
                    right = self.mul({a: 1}, t[b][c])
                    if left != right:
                        raise AlgebraError("not associative at "
                                           f"({self.labels[a]}, {self.labels[b]}, {self.labels[c]})")
        if self.m_powers[-1]:
            raise AlgebraError("maximal ideal is not nilpotent")

    @cached_property
    def m_powers(self) -> list[list[dict]]:
        """Echelon bases of m^1, m^2, ..., ending with the first zero power."""
        n = self.dim
        cur = [{a: Q(1)} for a in range(1, n)]
        powers = [cur]
        while cur and len(powers) <= n + 1:
            ech = Echelon(n)
            for x in cur:
                for b in range(1, n):
                    ech.add(self.mul(x, {b: 1}))
            ech.rref()
            cur = ech.basis()
            powers.append(cur)
        return powers

    @property
    def nil_order(self) -> int:
        """Smallest N with m^(N+1) = 0."""
        return len(self.m_powers) - 1

    @cached_property
    def orders(self) -> tuple[int, ...]:
        """Order of each basis vector: largest k with e_j in m^k."""
        out = [0]
        sub = []
        for k, basis in enumerate(self.m_powers, start=1):
            ech = Echelon(self.dim)
            ech.extend(basis)
            sub.append(ech)
        for j in range(1, self.dim):
            k = 0
            while k < len(sub) and sub[k].contains({j: 1}):
                k += 1
            out.append(k)
        return tuple(out)

    @property
    def is_adapted(self) -> bool:
        ords = self.orders
        return all(len(basis) == sum(1 for o in ords if o >= k)
                   for k, basis in enumerate(self.m_powers, start=1))

    @cached_property
    def _adapted(self):
        if self.is_adapted:
            return self, None
        chosen = []
        ech = Echelon(self.dim)
        for k in range(len(self.m_powers) - 1, 0, -1):
            for v in self.m_powers[k - 1]:
                if ech.add(v):
                    chosen.append((k, v))
        chosen.sort(key=lambda kv: kv[0])
        vecs = [{0: Q(1)}] + [v for _, v in chosen]
        n = self.dim
        P = Matrix.from_rows([[vecs[j].get(i, 0) for j in range(n)] for i in range(n)])
        Pinv = inverse(P)

        def to_new(vec):
            return {i: c for i in range(n)
                    if (c := sum((Pinv[i, k] * v for k, v in vec.items()), Q(0)))}

        prod = {}
        for a in range(n):
            for b in range(n):
                vec = to_new(self.mul(vecs[a], vecs[b]))
                if vec:
                    prod[(a, b)] = vec
        labels = [self.labels[0]] + [f"b{j}" for j in range(1, n)]
        return ArtinAlgebra(labels, prod), P

    def adapted(self) -> tuple["ArtinAlgebra", Matrix | None]:
        """An isomorphic algebra in an adapted basis, plus the change of basis
        (columns are the new basis vectors in old coordinates; None if unchanged)."""
        return self._adapted

    @property
    def generators(self) -> list[int]:
        """Order-1 basis vectors (algebra generators); meaningful in adapted bases."""
        return [j for j, o in enumerate(self.orders) if o == 1]

    def left_matrix(self, a: int, keep: Sequence[int] | None = None) -> Matrix:
        """Multiplication by e_a on the span of ``keep`` (default: everything),
        dropping components outside ``keep``."""
        keep = list(range(self.dim)) if keep is None else list(keep)
        pos = {j: i for i, j in enumerate(keep)}
        rows = [[0] * len(keep) for _ in keep]
        for c, j in enumerate(keep):
            for k, v in self._t[a][j].items():
                if k in pos:
                    rows[pos[k]][c] = v
        return Matrix.from_rows(rows, len(keep))

    def __repr__(self):
        return f"ArtinAlgebra(dim={self.dim}, nil_order={self.nil_order}, labels={list(self.labels)})"


def truncate_algebra(s: ArtinAlgebra, i: int) -> ArtinAlgebra:
    """S_i = S / m^(i+1), in an adapted basis of S."""
    if i < 0:
        raise AlgebraError("truncation order must be non-negative")
    a, _ = s.adapted()
    keep = [j for j, o in enumerate(a.orders) if o <= i]
    pos = {j: p for p, j in enumerate(keep)}
    prod = {}
    for x in keep:
        for y in keep:
            vec = {pos[k]: v for k, v in a.product(x, y).items() if k in pos}
            if vec:
                prod[(pos[x], pos[y])] = vec
    return ArtinAlgebra([a.labels[j] for j in keep], prod)


class FiniteModule:
    """Finite-dimensional module over an Artin algebra, one action matrix per basis element."""

    def __init__(self, algebra: ArtinAlgebra, actions: Sequence[Matrix], check: bool = True):
        self.algebra = algebra
        self.actions = tuple(actions)
        if len(self.actions) != algebra.dim:
            raise AlgebraError("need one action matrix per algebra basis element")
        self.dim = self.actions[0].rows
        if check:
            self.validate()

    def validate(self) -> None:
        s, acts = self.algebra, self.actions
        if acts[0] != Matrix.identity(self.dim):
            raise AlgebraError("unit must act as the identity")
        for a in range(s.dim):
            for b in range(a, s.dim):
                lhs = acts[a] @ acts[b]
                rhs = Matrix.zeros(self.dim, self.dim)
                for k, c in s.product(a, b).items():
                    rhs = rhs + acts[k].scale(c)
                if lhs != rhs:
                    raise AlgebraError("action matrices violate the multiplication table")

    def action_of(self, vec: dict) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for a, c in vec.items():
            out = out + self.actions[a].scale(c)
        return out

    def over_adapted(self) -> list[Matrix]:
        """Action matrices indexed by the adapted basis of the algebra."""
        a, P = self.algebra.adapted()
        if P is None:
            return list(self.actions)
        return [self.action_of({i: P[i, j] for i in range(P.rows) if P[i, j]})
                for j in range(P.cols)]

    def __repr__(self):
        return f"FiniteModule(dim={self.dim}, over dim {self.algebra.dim})"


def _from_adapted_actions(s: ArtinAlgebra, acts_adapted: Sequence[Matrix]) -> FiniteModule:
    _, P = s.adapted()
    if P is None:
        return FiniteModule(s, acts_adapted)
    Pinv = inverse(P)
    dim = acts_adapted[0].rows
    acts = []
    for a in range(s.dim):
        m = Matrix.zeros(dim, dim)
        for j in range(s.dim):
            c = Pinv[j, a]
            if c:
                m = m + acts_adapted[j].scale(c)
        acts.append(m)
    return FiniteModule(s, acts)


def free_module(s: ArtinAlgebra, rank_: int, level: int | None = None) -> FiniteModule:
    """S_level^rank (level defaults to the nil order, i.e. S itself)."""
    a, _ = s.adapted()
    level = a.nil_order if level is None else level
    keep = [j for j, o in enumerate(a.orders) if o <= level]
    d = len(keep)
    acts = []
    for x in range(a.dim):
        block = a.left_matrix(x, keep)
        rows = [[0] * (d * rank_) for _ in range(d * rank_)]
        for r in range(rank_):
            for i in range(d):
                for j in range(d):
                    rows[r * d + i][r * d + j] = block[i, j]
        acts.append(Matrix.from_rows(rows, d * rank_))
    return _from_adapted_actions(s, acts)


def residue_field(s: ArtinAlgebra) -> FiniteModule:
    """Q = S/m."""
    return FiniteModule(s, [Matrix.identity(1)] + [Matrix.zeros(1, 1)] * (s.dim - 1))


# -- order-symbolic dual chain -----------------------------------------------

@dataclass
class OSChain:
    """The spaces B0_i = S_i^*, their inclusions and the symbol maps."""

    source: ArtinAlgebra
    algebra: ArtinAlgebra  # adapted form of source
    order: int
    dual_index: list  # per level: basis indices of order <= i
    plus_index: list  # per level: basis indices of order 1..i
    inclusions: list  # level i: B0_{i-1} -> B0_i (None at level 0)
    symbols: list  # level i: B0_i -> Bplus_i (x) B0_{i-1} (None at level 0)
    actions: list  # level i: right action of each algebra basis element on B0_i

    @property
    def dims(self) -> list[int]:
        return [len(ix) for ix in self.dual_index]

    @property
    def plus_dims(self) -> list[int]:
        return [len(ix) for ix in self.plus_index]

    def factors_through_filtration(self, i: int) -> bool:
        """Symbol image inside F_i: only b_a* (x) b_c* with ord(a) + ord(c) <= i occur."""
        if i == 0:
            return True
        ords = self.algebra.orders
        sym = self.symbols[i]
        w = len(self.dual_index[i - 1])
        for r in range(sym.rows):
            a = self.plus_index[i][r // w]
            c = self.dual_index[i - 1][r % w]
            if ords[a] + ords[c] > i and any(sym.row(r)):
                return False
        return True

    def symbol_image(self, i: int, k: int) -> dict:
        """sigma^i of the dual basis vector b_k^* as {(label_a, label_c): coeff}."""
        sym = self.symbols[i]
        col = self.dual_index[i].index(k)
        w = len(self.dual_index[i - 1])
        out = {}
        for r in range(sym.rows):
            v = sym[r, col]
            if v:
                a = self.plus_index[i][r // w]
                c = self.dual_index[i - 1][r % w]
                out[(self.algebra.labels[a], self.algebra.labels[c])] = v
        return out


def os_dual(s: ArtinAlgebra, m: int) -> OSChain:
    if m < 0:
        raise AlgebraError("order must be non-negative")
    a, _ = s.adapted()
    ords = a.orders
    dual_index = [[j for j in range(a.dim) if ords[j] <= i] for i in range(m + 1)]
    plus_index = [[j for j in range(a.dim) if 1 <= ords[j] <= i] for i in range(m + 1)]
    inclusions, symbols, actions = [None], [None], []
    for i in range(m + 1):
        idx = dual_index[i]
        pos = {j: p for p, j in enumerate(idx)}
        acts = []
        for x in range(a.dim):
            # (l . x)(y) = l(y x): column k holds b_k^* . x = sum_j c^{j x}_k b_j^*
            rows = [[0] * len(idx) for _ in idx]
            for jp, j in enumerate(idx):
                for k, c in a.product(j, x).items():
                    if k in pos:
                        rows[jp][pos[k]] = c
            acts.append(Matrix.from_rows(rows, len(idx)))
        actions.append(acts)
        if i == 0:
            continue
        prev = dual_index[i - 1]
        inclusions.append(Matrix.from_rows(
            [[1 if j == jj else 0 for jj in prev] for j in idx], len(prev)))
        plus = plus_index[i]
        w = len(prev)
        rows = [[0] * len(idx) for _ in range(len(plus) * w)]
        for ap, x in enumerate(plus):
            for cp, c in enumerate(prev):
                for k, v in a.product(x, c).items():
                    if k in pos:
                        rows[ap * w + cp][pos[k]] = v
        symbols.append(Matrix.from_rows(rows, len(idx)))
    return OSChain(s, a, m, dual_index, plus_index, inclusions, symbols, actions)


@dataclass
class MOSChain:
    """Modular order-symbolic chain G^0 -> ... -> G^m over an OS chain."""

    os: OSChain
    actions: list  # level i: matrices indexed by adapted algebra basis
    structure: list  # level i: G^{i-1} -> G^i (None at level 0)
    symbols: list  # level i: G^i -> Bplus_i (x) G^{i-1} (None at level 0)

    @property
    def order(self) -> int:
        return len(self.actions) - 1

    @property
    def dims(self) -> list[int]:
        return [acts[0].rows for acts in self.actions]

    def check(self) -> None:
        """Raise AlgebraError if any defining identity fails."""
        alg, ords = self.os.algebra, self.os.algebra.orders
        for i, acts in enumerate(self.actions):
            g = acts[0].rows
            FiniteModule(alg, acts)
            for x in range(alg.dim):
                if ords[x] > i and not acts[x].is_zero():
                    raise AlgebraError(f"level {i} is not an S_{i}-module")
            if i == 0:
                continue
            inc, sym = self.structure[i], self.symbols[i]
            gprev = self.dims[i - 1]
            p = self.os.plus_dims[i]
            for x in alg.generators:
                if inc @ self.actions[i - 1][x] != acts[x] @ inc:
                    raise AlgebraError(f"structure map {i} is not S-linear")
                lift = _block_diag(self.actions[i - 1][x], p)
                if sym @ acts[x] != lift @ sym:
                    raise AlgebraError(f"symbol map {i} is not S-linear")
            if i == 1:
                if not (sym @ inc).is_zero():
                    raise AlgebraError("symbol map 1 does not vanish on G^0")
            else:
                lhs = sym @ inc
                emb = _plus_embedding(self.os, i)
                rhs = _kron_maps(emb, self.structure[i - 1]) @ self.symbols[i - 1]
                if lhs != rhs:
                    raise AlgebraError(f"symbol maps {i - 1}, {i} incompatible with structure maps")
            if sym.rows != p * gprev or sym.cols != g:
                raise AlgebraError(f"symbol map {i} has the wrong shape")


def _block_diag(m: Matrix, copies: int) -> Matrix:
    """I_copies (x) m"""
    from .linalg import kron
    return kron(Matrix.identity(copies), m)


def _kron_maps(a: Matrix, b: Matrix) -> Matrix:
    from .linalg import kron
    return kron(a, b)


def _plus_embedding(os: OSChain, i: int) -> Matrix:
    prev, cur = os.plus_index[i - 1], os.plus_index[i]
    return Matrix.from_rows([[1 if j == jj else 0 for jj in prev] for j in cur], len(prev))


def standard_chain(os: OSChain) -> MOSChain:
    return MOSChain(os, [list(a) for a in os.actions], list(os.inclusions), list(os.symbols))


def cofree_chain(os: OSChain, copies: int) -> MOSChain:
    """Direct sum of ``copies`` standard chains (summand index outermost)."""
    acts, incs, syms = [], [None], [None]
    for i in range(os.order + 1):
        acts.append([_block_diag(x, copies) for x in os.actions[i]])
        if i == 0:
            continue
        incs.append(_block_diag(os.inclusions[i], copies))
        # sigma on copy u lands in Bplus (x) (copy u of B0_{i-1})
        sym = os.symbols[i]
        p, w, b = os.plus_dims[i], os.dims[i - 1], os.dims[i]
        rows = [[0] * (copies * b) for _ in range(p * copies * w)]
        for u in range(copies):
            for ap in range(p):
                for cp in range(w):
                    for col in range(b):
                        v = sym[ap * w + cp, col]
                        if v:
                            rows[ap * copies * w + u * w + cp][u * b + col] = v
        syms.append(Matrix.from_rows(rows, copies * b))
    return MOSChain(os, acts, incs, syms)


# -- transpose modules ----------------------------------------------------------

@dataclass
class TransposeLevel:
    """B^i(E) = B0_i (x)_S E realised as a quotient with an echelon complement."""

    level: int
    edim: int
    basis: list  # (position in B0_i, index in E) for each quotient basis vector
    echelon: Echelon = field(repr=False)
    coords: dict = field(repr=False)  # flat index -> quotient coordinate
    actions: list = field(default_factory=list, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def nf(self, vec: dict) -> dict:
        """Quotient coordinates of a vector of B0_i (x) E given by flat indices."""
        r = self.echelon.reduce(vec)
        return {self.coords[k]: v for k, v in r.items()}

    def nf_pure(self, lpos: int, e: int) -> dict:
        return self.nf({lpos * self.edim + e: Q(1)})


def _transpose_level(os: OSChain, i: int, eacts: Sequence[Matrix]) -> TransposeLevel:
    alg = os.algebra
    b, d = os.dims[i], eacts[0].rows
    ech = Echelon(b * d)
    bacts = os.actions[i]
    ecols = {x: eacts[x].transpose().sparse_rows() for x in alg.generators}
    for x in alg.generators:
        # column l of the B0 action matrix
        bcols = bacts[x].transpose().sparse_rows()
        for lp in range(b):
            for e in range(d):
                vec: dict = {}
                for j, v in bcols[lp].items():
                    vec[j * d + e] = vec.get(j * d + e, 0) + v
                for f, v in ecols[x][e].items():
                    k = lp * d + f
                    vec[k] = vec.get(k, 0) - v
                ech.add(vec)
    ech.rref()
    free = [k for k in range(b * d) if k not in ech._rows]
    lvl = TransposeLevel(i, d, [(k // d, k % d) for k in free], ech,
                         {k: c for c, k in enumerate(free)})
    for x in range(alg.dim):
        bcols = bacts[x].transpose().sparse_rows()
        cols = []
        for lp, e in lvl.basis:
            vec = {j * d + e: v for j, v in bcols[lp].items()}
            cols.append(lvl.nf(vec))
        lvl.actions.append(_from_columns(cols, lvl.dim))
    return lvl


def _from_columns(cols: Sequence[dict], nrows: int) -> Matrix:
    rows = [[0] * len(cols) for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows[i][j] = v
    return Matrix.from_rows(rows, len(cols))


def transpose_levels(os: OSChain, eacts: Sequence[Matrix]) -> list[TransposeLevel]:
    return [_transpose_level(os, i, eacts) for i in range(os.order + 1)]


def _transpose_chain_from(os: OSChain, levels: list[TransposeLevel]) -> MOSChain:
    acts, incs, syms = [], [None], [None]
    for i, lvl in enumerate(levels):
        acts.append(lvl.actions)
        if i == 0:
            continue
        prev = levels[i - 1]
        inc_cols = []
        for lp, e in prev.basis:
            # B0_{i-1} sits inside B0_i as the matching coordinate
            j = os.dual_index[i].index(os.dual_index[i - 1][lp])
            inc_cols.append(lvl.nf_pure(j, e))
        incs.append(_from_columns(inc_cols, lvl.dim))
        sym = os.symbols[i]
        w, p = os.dims[i - 1], os.plus_dims[i]
        sym_cols = []
        for lp, e in lvl.basis:
            out: dict = {}
            for r in range(sym.rows):
                v = sym[r, lp]
                if v:
                    ap, cp = divmod(r, w)
                    for k, u in prev.nf_pure(cp, e).items():
                        idx = ap * prev.dim + k
                        out[idx] = out.get(idx, 0) + v * u
            sym_cols.append({k: v for k, v in out.items() if v})
        syms.append(_from_columns(sym_cols, p * prev.dim))
    return MOSChain(os, acts, incs, syms)


def transpose_chain(e: FiniteModule, m: int) -> MOSChain:
    """The MOS chain B^0(E) -> ... -> B^m(E)."""
    os = os_dual(e.algebra, m)
    return _transpose_chain_from(os, transpose_levels(os, e.over_adapted()))


@dataclass
class TransposeModule:
    level: int
    dim: int
    basis: list  # (label of dual basis vector, index in E)
    module: FiniteModule
    symbol: Matrix | None  # into Bplus_i (x) B^{i-1}(E); None at level 0
    chain: MOSChain = field(repr=False)


def transpose_module(e: FiniteModule, i: int) -> TransposeModule:
    """B^i(E) with its right S-action and module symbol map."""
    if i < 0:
        raise AlgebraError("level must be non-negative")
    chain = transpose_chain(e, i)
    os = chain.os
    lvl = _transpose_level(os, i, e.over_adapted())
    labels = [os.algebra.labels[os.dual_index[i][lp]] + "*" for lp, _ in lvl.basis]
    return TransposeModule(i, lvl.dim, list(zip(labels, [x for _, x in lvl.basis])),
                           _from_adapted_actions(e.algebra, chain.actions[i]),
                           chain.symbols[i], chain)


# -- quasi-scalar homomorphisms ------------------------------------------------

@dataclass
class QuasiScalar:
    """C^m(G): basis of maps B0_m -> G^m (reduced echelon), with module structure."""

    chain: MOSChain
    level_dims: list  # dim C^i for i = 0..m
    maps: list  # basis of C^m as Matrix (dim G^m x dim B0_m)
    echelon: Echelon = field(repr=False)
    actions_adapted: list = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.maps)

    @property
    def module(self) -> FiniteModule:
        return _from_adapted_actions(self.chain.os.source, self.actions_adapted)

    def coordinates(self, phi: Matrix) -> dict:
        return _coords_or_raise(self.echelon, _flat(phi))


def _flat(m: Matrix) -> dict:
    return {k: v for k, v in enumerate(m.entries) if v}


def _pivot_coords(ech: Echelon, vec: dict) -> dict:
    piv = sorted(ech._rows)
    return {i: vec[p] for i, p in enumerate(piv) if vec.get(p)}


def _coords_or_raise(ech: Echelon, vec: dict) -> dict:
    if ech.reduce(vec):
        raise AlgebraError("map is not quasi-scalar")
    return _pivot_coords(ech, vec)


def quasi_scalar(g: MOSChain) -> QuasiScalar:
    """Compute C^0(G), ..., C^m(G) level by level."""
    os, m = g.os, g.order
    alg = os.algebra
    # level 0: maps from the one-dimensional B0_0 are just elements of G^0
    g0 = g.dims[0]
    basis = [Matrix.from_rows([[1 if r == k else 0] for r in range(g0)], 1) for k in range(g0)]
    dims = [g0]
    for i in range(1, m + 1):
        basis = _next_level(g, i, basis)
        dims.append(len(basis))
    b, gm = os.dims[m], g.dims[m]
    ech = Echelon(gm * b)
    for phi in basis:
        ech.add(_flat(phi))
    ech.rref()
    piv = sorted(ech._rows)
    maps = [Matrix(gm, b, [ech._rows[p].get(k, 0) for k in range(gm * b)]) for p in piv]
    acts = []
    for x in range(alg.dim):
        cols = [_coords_or_raise(ech, _flat(phi @ os.actions[m][x])) for phi in maps]
        acts.append(_from_columns(cols, len(maps)))
    return QuasiScalar(g, dims, maps, ech, acts)


def _next_level(g: MOSChain, i: int, prev_basis: list) -> list:
    os = g.os
    alg = os.algebra
    b, b1 = os.dims[i], os.dims[i - 1]
    gi, g1 = g.dims[i], g.dims[i - 1]
    p = os.plus_dims[i]
    npsi = len(prev_basis)
    nx = gi * b

    def X(r, c):
        return r * b + c

    def Y(k):
        return nx + k

    eqs = []
    # right S-linearity: X R_B(x) - R_G(x) X = 0
    for x in alg.generators:
        rb, rg = os.actions[i][x], g.actions[i][x]
        rb_cols = rb.transpose().sparse_rows()
        rg_rows = rg.sparse_rows()
        for r in range(gi):
            for c in range(b):
                eq: dict = {}
                for k, v in rb_cols[c].items():
                    eq[X(r, k)] = eq.get(X(r, k), 0) + v
                for h, v in rg_rows[r].items():
                    eq[X(h, c)] = eq.get(X(h, c), 0) - v
                eq = {k: v for k, v in eq.items() if v}
                if eq:
                    eqs.append(eq)
    # first square: X Inc_B = Inc_G Psi
    incb, incg = os.inclusions[i], g.structure[i]
    incb_cols = incb.transpose().sparse_rows()
    incg_rows = incg.sparse_rows()
    for r in range(gi):
        for c in range(b1):
            eq = {}
            for k, v in incb_cols[c].items():
                eq[X(r, k)] = eq.get(X(r, k), 0) + v
            for kk, psi in enumerate(prev_basis):
                val = sum((v * psi[h, c] for h, v in incg_rows[r].items()), Q(0))
                if val:
                    eq[Y(kk)] = eq.get(Y(kk), 0) - val
            eq = {k: v for k, v in eq.items() if v}
            if eq:
                eqs.append(eq)
    # second square: Sigma_G X = (I (x) Psi) Sigma_B
    sg_rows = g.symbols[i].sparse_rows()
    sb = os.symbols[i]
    for ap in range(p):
        for h in range(g1):
            row = sg_rows[ap * g1 + h]
            for c in range(b):
                eq = {}
                for r, v in row.items():
                    eq[X(r, c)] = eq.get(X(r, c), 0) + v
                for kk, psi in enumerate(prev_basis):
                    val = Q(0)
                    for cp in range(b1):
                        s = sb[ap * b1 + cp, c]
                        if s:
                            val += s * psi[h, cp]
                    if val:
                        eq[Y(kk)] = eq.get(Y(kk), 0) - val
                eq = {k: v for k, v in eq.items() if v}
                if eq:
                    eqs.append(eq)
    sols = kernel_sparse(eqs, nx + npsi)
    ech = Echelon(nx)
    for s in sols:
        xpart = {k: v for k, v in s.items() if k < nx}
        ech.add(xpart)
    ech.rref()
    return [Matrix(gi, b, [ech._rows[pv].get(k, 0) for k in range(nx)]) for pv in sorted(ech._rows)]


# -- duality maps ----------------------------------------------------------------

@dataclass
class DualityReport:
    kind: str  # "unit" or "counit"
    order: int
    source_dim: int
    target_dim: int
    rank: int

    @property
    def is_isomorphism(self) -> bool:
        return self.rank == self.source_dim == self.target_dim

    def to_dict(self) -> dict:
        return {"kind": self.kind, "order": self.order, "source_dim": self.source_dim,
                "target_dim": self.target_dim, "rank": self.rank,
                "is_isomorphism": self.is_isomorphism}


def unit_map(e: FiniteModule, m: int) -> tuple[Matrix, QuasiScalar]:
    """E -> C^m(B^m(E)), e |-> (l |-> l (x) e), in the reduced basis of C^m."""
    os = os_dual(e.algebra, m)
    levels = transpose_levels(os, e.over_adapted())
    chain = _transpose_chain_from(os, levels)
    c = quasi_scalar(chain)
    top = levels[m]
    b = os.dims[m]
    cols = []
    for x in range(e.dim):
        phi = [[0] * b for _ in range(top.dim)]
        for lp in range(b):
            for k, v in top.nf_pure(lp, x).items():
                phi[k][lp] = v
        cols.append(_coords_or_raise(c.echelon, _flat(Matrix.from_rows(phi, b))))
    return _from_columns(cols, c.dim), c


def counit_map(g: MOSChain) -> tuple[Matrix, QuasiScalar]:
    """B^m(C^m(G)) -> G^m, l (x) phi |-> phi(l)."""
    c = quasi_scalar(g)
    os, m = g.os, g.order
    lvl = _transpose_level(os, m, c.actions_adapted)
    cols = []
    for lp, k in lvl.basis:
        phi = c.maps[k]
        cols.append({r: phi[r, lp] for r in range(phi.rows) if phi[r, lp]})
    return _from_columns(cols, g.dims[m]), c


def duality_check(obj, m: int | None = None) -> DualityReport:
    """Unit map for a module (needs ``m``), counit map for an MOS chain."""
    if isinstance(obj, FiniteModule):
        if m is None:
            raise AlgebraError("unit map needs an order m")
        u, c = unit_map(obj, m)
        return DualityReport("unit", m, obj.dim, c.dim, rank(u) if u.cols and u.rows else 0)
    if isinstance(obj, MOSChain):
        cu, c = counit_map(obj)
        return DualityReport("counit", obj.order, cu.cols, cu.rows,
                             rank(cu) if cu.cols and cu.rows else 0)
    raise TypeError("expected a FiniteModule or MOSChain")


# -- JSON ------------------------------------------------------------------------

def algebra_from_dict(data) -> ArtinAlgebra:
    """``{"basis": [...], "structure": [[i, j, k, "p/q"], ...]}`` or
    ``{"monomial_ideal": [[exponents], ...], "names": [...]}``."""
    if "monomial_ideal" in data:
        return ArtinAlgebra.from_monomial_ideal([tuple(g) for g in data["monomial_ideal"]],
                                                data.get("names"))
    try:
        labels, entries = data["basis"], data["structure"]
    except KeyError as exc:
        raise AlgebraError(f"algebra description is missing {exc.args[0]!r}") from None
    n = len(labels)
    parsed = []
    for item in entries:
        if len(item) != 4:
            raise AlgebraError(f"structure entry {item!r} must be [i, j, k, coeff]")
        i, j, k, c = item
        if not all(isinstance(x, int) and 0 <= x < n for x in (i, j, k)):
            raise AlgebraError(f"structure entry {item!r} has a bad index")
        parsed.append((i, j, k, c))
    return ArtinAlgebra.from_table(labels, parsed)


def algebra_to_dict(s: ArtinAlgebra) -> dict:
    from .linalg import q_str
    return {"basis": list(s.labels),
            "structure": [[a, b, k, q_str(c)] for a, b, k, c in s.structure_entries()]}
