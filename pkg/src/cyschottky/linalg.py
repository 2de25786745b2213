"""Exact rational linear algebra.

Everything here works over Q with ``gmpy2.mpq`` scalars.  Internally rows are
kept sparse (``dict[int, mpq]``) because the matrices that show up downstream
(Jacobian slices, period homomorphisms, balancing maps) are mostly zero; the
public :class:`Matrix` type is a plain dense row-major container.
"""

from __future__ import annotations

from heapq import heapify, heappop, heappush
from typing import Iterable, Sequence

from gmpy2 import mpq

Q = mpq
SparseVec = dict


def to_q(x) -> mpq:
    """Coerce int, Fraction, mpq or a ``"p/q"`` string to an exact rational."""
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact scalars")
    return mpq(x)


def q_str(x) -> str:
    return str(mpq(x))


class Matrix:
    """Dense matrix with exact rational entries, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(to_q(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def from_sparse_rows(cls, rows: Sequence[dict], cols: int) -> "Matrix":
        out = [0] * (len(rows) * cols)
        for i, r in enumerate(rows):
            for j, v in r.items():
                out[i * cols + j] = v
        return cls(len(rows), cols, out)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def sparse_rows(self) -> list[dict]:
        out = []
        for i in range(self.rows):
            base = i * self.cols
            out.append({j: self.entries[base + j] for j in range(self.cols)
                        if self.entries[base + j]})
        return out

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      [self.entries[i * self.cols + j]
                       for j in range(self.cols) for i in range(self.rows)])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            orows = other.sparse_rows()
            out = [Q(0)] * (self.rows * other.cols)
            for i in range(self.rows):
                base = i * other.cols
                for k, a in enumerate(self.row(i)):
                    if a:
                        for j, b in orows[k].items():
                            out[base + j] += a * b
            return Matrix(self.rows, other.cols, out)
        vec = [to_q(v) for v in other]
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(sum((a * b for a, b in zip(self.row(i), vec) if a), Q(0))
                     for i in range(self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(self.rows, self.cols,
                      [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(self.rows, self.cols,
                      [a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, c) -> "Matrix":
        c = to_q(c)
        return Matrix(self.rows, self.cols, [c * a for a in self.entries])

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {[[str(x) for x in r] for r in self.to_rows()]})"


def kron(a: Matrix, b: Matrix) -> Matrix:
    rows, cols = a.rows * b.rows, a.cols * b.cols
    out = [Q(0)] * (rows * cols)
    for i in range(a.rows):
        for j in range(a.cols):
            x = a[i, j]
            if not x:
                continue
            for k in range(b.rows):
                for l in range(b.cols):
                    y = b[k, l]
                    if y:
                        out[(i * b.rows + k) * cols + j * b.cols + l] = x * y
    return Matrix(rows, cols, out)


class Echelon:
    """Incrementally maintained row echelon form over Q on sparse rows.

    Each stored row is normalised so that its pivot entry is 1, and the pivot
    is the smallest column index in the row.  Callers control pivot priority
    by choosing the column numbering.
    """

    __slots__ = ("ncols", "_rows")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def reduce(self, vec: dict) -> dict:
        """Residual of ``vec`` after eliminating every pivot column."""
        rows = self._rows
        r = {k: to_q(v) for k, v in vec.items() if v}
        heap = [c for c in r if c in rows]
        heapify(heap)
        while heap:
            c = heappop(heap)
            a = r.get(c)
            if a is None:
                continue
            for k, v in rows[c].items():
                old = r.get(k)
                if old is None:
                    r[k] = -a * v
                    if k in rows:
                        heappush(heap, k)
                else:
                    new = old - a * v
                    if new:
                        r[k] = new
                    else:
                        del r[k]
        return r

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; returns True when it raised the rank."""
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        self._rows[p] = {k: v * inv for k, v in r.items()}
        return True

    def extend(self, vecs: Iterable[dict]) -> int:
        return sum(self.add(v) for v in vecs)

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def rref(self) -> dict[int, dict]:
        """Fully reduced rows keyed by pivot (the stored rows are replaced)."""
        rows = self._rows
        for p in sorted(rows, reverse=True):
            row = rows[p]
            hits = [k for k in row if k != p and k in rows]
            if not hits:
                continue
            for k in sorted(hits):
                a = row.get(k)
                if not a:
                    continue
                for kk, v in rows[k].items():
                    new = row.get(kk, 0) - a * v
                    if new:
                        row[kk] = new
                    else:
                        row.pop(kk, None)
        return rows

    def basis(self) -> list[dict]:
        return [dict(self._rows[p]) for p in sorted(self._rows)]

    def coordinates(self, vec: dict) -> dict[int, mpq] | None:
        """Coordinates of ``vec`` in the reduced basis (after :meth:`rref`)."""
        r = self.reduce(vec)
        if r:
            return None
        return {p: to_q(vec[p]) for p in self._rows if vec.get(p)}


def kernel_sparse(rows: Iterable[dict], ncols: int) -> list[dict]:
    """Reduced-echelon kernel basis of the map with the given sparse rows.

    One vector per free column ``f``: 1 at ``f``, 0 at the other free
    columns, the negated reduced-row entries at the pivots.  Returned in
    increasing order of ``f``.
    """
    ech = Echelon(ncols)
    ech.extend(rows)
    red = ech.rref()
    by_free: dict[int, dict] = {}
    for p, row in red.items():
        for k, v in row.items():
            if k != p:
                by_free.setdefault(k, {})[p] = -v
    out = []
    for f in range(ncols):
        if f in red:
            continue
        vec = {f: Q(1)}
        vec.update(by_free.get(f, {}))
        out.append(vec)
    return out


def solve_sparse(rows: Sequence[dict], ncols: int, rhs: dict) -> dict | None:
    """Canonical solution (free variables zero) or None when inconsistent."""
    ech = Echelon(ncols + 1)
    for r, row in enumerate(rows):
        aug = dict(row)
        b = rhs.get(r)
        if b:
            aug[ncols] = to_q(b)
        ech.add(aug)
    if ncols in ech._rows:
        return None
    red = ech.rref()
    return {p: row[ncols] for p, row in red.items() if row.get(ncols)}


def rank_sparse(rows: Iterable[dict], ncols: int) -> int:
    ech = Echelon(ncols)
    return ech.extend(rows)


def transpose_sparse(cols: Sequence[dict], nrows: int) -> list[dict]:
    rows: list[dict] = [{} for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows[i][j] = v
    return rows


def kernel_basis(m: Matrix) -> list[tuple]:
    """Right null space of ``m`` as dense tuples, reduced-echelon normalised."""
    return [tuple(v.get(j, Q(0)) for j in range(m.cols))
            for v in kernel_sparse(m.sparse_rows(), m.cols)]


def solve_linear(m: Matrix, rhs: Sequence) -> tuple | None:
    """Echelon-canonical solution of ``m x = rhs``; None if inconsistent."""
    if len(rhs) != m.rows:
        raise ValueError("rhs length must equal the number of rows")
    sol = solve_sparse(m.sparse_rows(), m.cols, {i: to_q(b) for i, b in enumerate(rhs) if b})
    if sol is None:
        return None
    return tuple(sol.get(j, Q(0)) for j in range(m.cols))


def rank(m: Matrix) -> int:
    return rank_sparse(m.sparse_rows(), m.cols)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    rows = m.sparse_rows()
    cols = []
    for j in range(n):
        sol = solve_sparse(rows, n, {j: Q(1)})
        if sol is None:
            raise ZeroDivisionError("singular matrix")
        cols.append(sol)
    return Matrix.from_sparse_rows(transpose_sparse(cols, n), n)


# -- modular rank --------------------------------------------------------------

DEFAULT_PRIMES = (2147483647, 2147483629, 2147483587)


def _mod(x, p: int) -> int:
    x = mpq(x)
    den = int(x.denominator) % p
    if den == 0:
        raise ZeroDivisionError(f"denominator divisible by {p}")
    return int(x.numerator) * pow(den, -1, p) % p


def rank_mod_p(rows: Iterable[dict], ncols: int, p: int) -> int:
    """Rank of the reduction mod ``p`` of a rational sparse matrix."""
    piv: dict[int, dict] = {}
    for row in rows:
        r = {k: _mod(v, p) for k, v in row.items()}
        r = {k: v for k, v in r.items() if v}
        while r:
            c = min(r)
            if c not in piv:
                inv = pow(r[c], -1, p)
                piv[c] = {k: v * inv % p for k, v in r.items()}
                break
            a = r[c]
            for k, v in piv[c].items():
                new = (r.get(k, 0) - a * v) % p
                if new:
                    r[k] = new
                else:
                    r.pop(k, None)
    return len(piv)


def multimodular_rank(rows: Sequence[dict], ncols: int,
                      primes: Sequence[int] = DEFAULT_PRIMES) -> dict[int, int]:
    """Ranks modulo each prime.  Each is a lower bound for the rational rank."""
    out = {}
    for p in primes:
        try:
            out[p] = rank_mod_p(rows, ncols, p)
        except ZeroDivisionError:
            continue
    return out
