"""Period jets, the ring homomorphism they induce on S_m, and leading Yukawa tensors."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial
from pathlib import Path
from typing import Mapping

from .errors import (FrameError, JetError, NormalizationViolation, OrderOverflow,
                     TransversalityViolation)
from .hodge import HodgeFrame, SymBasis, frame_from_dict, load_frame, sym_basis
from .linalg import Matrix, Q, q_str, to_q
from .monomials import (format_monomial, monomials_up_to_weight, padd, pmul, truncate,
                        unit_exponent)


def _multinomial(exp) -> int:
    out = factorial(sum(exp))
    for e in exp:
        out //= factorial(e)
    return out


def _sorted_index_to_exp(idx, nvars) -> tuple:
    exp = [0] * nvars
    for j in idx:
        exp[j] += 1
    return tuple(exp)


def _exp_to_sorted_index(exp) -> tuple:
    return tuple(j for j, e in enumerate(exp) for _ in range(e))


def _deg(exp) -> int:
    return sum(exp)


@dataclass(frozen=True, eq=False)
class PeriodJet:
    """Truncated germ of the period map: one polynomial in the coordinates per higher dual."""

    frame: HodgeFrame
    order: int
    components: Mapping = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def n_coordinates(self) -> int:
        return self.frame.w_dim(1)

    def component(self, label: str) -> dict:
        return self.components.get(label, {})

    @cached_property
    def _higher(self) -> list[tuple[str, int]]:
        return self.frame.higher_labels

    @cached_property
    def _power_cache(self) -> dict:
        return {}

    def higher_image(self, hexp: tuple) -> dict:
        """p* of a monomial in the higher duals only, truncated at the jet order."""
        cache = self._power_cache
        if hexp in cache:
            return cache[hexp]
        nt = self.n_coordinates
        w = [1] * nt
        if not any(hexp):
            out = {(0,) * nt: Q(1)}
        else:
            k = max(i for i, e in enumerate(hexp) if e)
            prev = tuple(e - (i == k) for i, e in enumerate(hexp))
            out = pmul(self.higher_image(prev), self.component(self._higher[k][0]), w, self.order)
        cache[hexp] = out
        return out

    def image(self, exp: tuple, m: int) -> dict:
        """p*_m of the S-monomial ``exp`` (W1 exponents first) as a polynomial in t."""
        nt = self.n_coordinates
        beta, hexp = exp[:nt], tuple(exp[nt:])
        cap = m - _deg(beta)
        if cap < 0:
            return {}
        base = self.higher_image(hexp)
        out = {}
        for e, v in base.items():
            if _deg(e) <= cap:
                out[tuple(a + b for a, b in zip(e, beta))] = v
        return out

    def poly_image(self, poly: Mapping, m: int) -> dict:
        out: dict = {}
        for exp, c in poly.items():
            for e, v in self.image(exp, m).items():
                new = out.get(e, 0) + c * v
                if new:
                    out[e] = new
                else:
                    out.pop(e, None)
        return out

    def to_dict(self) -> dict:
        return {"frame": self.frame.to_dict(), "order": self.order,
                "components": {lab: [{"coeff": q_str(c), "exp": list(e)}
                                     for e, c in sorted(self.component(lab).items())]
                               for lab, _ in self._higher}}


def validate_jet(j: PeriodJet) -> PeriodJet:
    """Raise unless every weight-i component vanishes to order >= i and stays within the order."""
    nt = j.n_coordinates
    known = dict(j.frame.higher_labels)
    for label, poly in j.components.items():
        if label not in known:
            raise JetError(f"unknown component {label!r}")
        i = known[label]
        for exp, c in sorted(poly.items()):
            if len(exp) != nt:
                raise JetError(f"component {label!r}: exponent {list(exp)} needs {nt} entries")
            if not c:
                continue
            d = _deg(exp)
            if d < i:
                raise TransversalityViolation(label, format_monomial(exp, j.frame.coordinates), i)
            if d > j.order:
                raise OrderOverflow(f"component {label!r} has a term of degree {d} "
                                    f"beyond the jet order {j.order}")
    return j


def make_jet(frame: HodgeFrame, order: int, components: Mapping, w1_components=None) -> PeriodJet:
    """Build and validate a jet; W1 components, if supplied, must be the coordinates."""
    if order < 0:
        raise JetError("jet order must be non-negative")
    nt = frame.w_dim(1)
    for j, label in enumerate(frame.coordinates):
        if w1_components and label in w1_components:
            poly = {tuple(e): to_q(c) for e, c in w1_components[label].items() if to_q(c)}
            if poly != {unit_exponent(nt, j): 1}:
                raise NormalizationViolation(label)
    comps = {}
    for label, poly in components.items():
        clean = {tuple(e): to_q(c) for e, c in poly.items() if to_q(c)}
        comps[label] = clean
    return validate_jet(PeriodJet(frame, int(order), comps))


# -- the homomorphism p*_m ------------------------------------------------------------

@dataclass
class PeriodHom:
    """p*_m: S_m -> polynomials in t of degree <= m, column by column."""

    jet: PeriodJet
    order: int
    basis: SymBasis = field(repr=False)

    @cached_property
    def targets(self):
        """Row basis: t-monomials of degree <= m in graded-lex order."""
        return monomials_up_to_weight([(x, 1) for x in self.jet.frame.coordinates], self.order)

    def column(self, exp) -> dict:
        return self.jet.image(tuple(exp), self.order)

    def sparse_columns(self) -> list[dict]:
        rows = self.targets
        return [{rows.index(e): v for e, v in self.column(mu).items()} for mu in self.basis.monomials]

    def matrix(self) -> Matrix:
        cols = self.sparse_columns()
        out = [[0] * len(cols) for _ in range(len(self.targets))]
        for c, col in enumerate(cols):
            for r, v in col.items():
                out[r][c] = v
        return Matrix.from_rows(out, len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.targets), len(self.basis)

    def apply(self, poly: Mapping) -> dict:
        return self.jet.poly_image(poly, self.order)

    def b1_embed(self, tpoly: Mapping) -> dict:
        """Read a t-polynomial as an element of the B1 subring of S."""
        pad = (0,) * (len(self.basis.labels) - self.jet.n_coordinates)
        return {tuple(e) + pad: v for e, v in tpoly.items()}

    def is_multiplicative_at(self, x, y) -> bool:
        ws = self.basis.weights
        xy = tuple(a + b for a, b in zip(x, y))
        if sum(a * w for a, w in zip(xy, ws)) > self.order:
            raise JetError("product exceeds the order")
        lhs = self.column(xy)
        rhs = truncate(pmul(self.column(x), self.column(y)), [1] * self.jet.n_coordinates,
                       self.order)
        return lhs == rhs

    def respects_filtration_at(self, x) -> bool:
        w = sum(a * b for a, b in zip(x, self.basis.weights))
        return all(_deg(e) >= w for e in self.column(x))

    def b1_block_is_unitriangular(self) -> bool:
        rows = self.targets
        for c, mu in enumerate(self.basis.b1):
            col = {rows.index(e): v for e, v in self.column(mu).items()}
            if col.get(c) != 1 or any(r > c for r in col):
                return False
        return True


def period_hom(j: PeriodJet, m: int) -> PeriodHom:
    if m > j.order:
        raise OrderOverflow(f"order {m} exceeds the jet order {j.order}")
    if m < 0:
        raise JetError("order must be non-negative")
    return PeriodHom(j, m, sym_basis(j.frame, m))


# -- Yukawa tensors ----------------------------------------------------------------

@dataclass
class YukawaTensors:
    """Symmetric i-linear coefficient arrays, keyed by higher label then sorted index tuple."""

    frame: HodgeFrame
    tensors: dict

    def __post_init__(self):
        nt = self.frame.w_dim(1)
        weights = dict(self.frame.higher_labels)
        clean = {}
        for label, arr in self.tensors.items():
            if label not in weights:
                raise JetError(f"unknown tensor label {label!r}")
            i = weights[label]
            entries = _tensor_entries(arr, i, nt, label)
            clean[label] = {k: v for k, v in entries.items() if v}
        self.tensors = clean

    def entry(self, label: str, indices) -> Q:
        return self.tensors.get(label, {}).get(tuple(sorted(indices)), Q(0))

    def weight(self, label: str) -> int:
        return dict(self.frame.higher_labels)[label]

    def polynomial(self, label: str) -> dict:
        """T(t, ..., t) summed over ordered index tuples."""
        nt = self.frame.w_dim(1)
        out = {}
        for idx, v in self.tensors.get(label, {}).items():
            exp = _sorted_index_to_exp(idx, nt)
            out[exp] = v * _multinomial(exp)
        return out

    def __eq__(self, other):
        return (isinstance(other, YukawaTensors) and self.frame.to_dict() == other.frame.to_dict()
                and self.tensors == other.tensors)


def _tensor_entries(arr, i, nt, label) -> dict:
    """Accept {index tuple: value} (any order, checked for symmetry) or nested lists."""
    out: dict = {}
    if isinstance(arr, Mapping):
        items = [(tuple(k), to_q(v)) for k, v in arr.items()]
    else:
        items = []

        def walk(a, prefix):
            if len(prefix) == i:
                items.append((tuple(prefix), to_q(a)))
                return
            if not isinstance(a, (list, tuple)) or len(a) != nt:
                raise JetError(f"tensor {label!r} must be a {'x'.join([str(nt)] * i)} array")
            for k, x in enumerate(a):
                walk(x, prefix + [k])

        walk(arr, [])
    for k, v in items:
        if len(k) != i or any(not 0 <= x < nt for x in k):
            raise JetError(f"tensor {label!r}: bad index {list(k)} (need {i} indices < {nt})")
        key = tuple(sorted(k))
        if key in out and out[key] != v:
            raise JetError(f"tensor {label!r} is not symmetric at {list(k)}")
        out[key] = v
    return out


def leading_tensors(j: PeriodJet) -> YukawaTensors:
    tensors = {}
    for label, i in j.frame.higher_labels:
        arr = {}
        for exp, c in j.component(label).items():
            if _deg(exp) == i:
                arr[_exp_to_sorted_index(exp)] = c / _multinomial(exp)
        tensors[label] = arr
    return YukawaTensors(j.frame, tensors)


def jet_from_yukawa(frame: HodgeFrame, y: YukawaTensors | Mapping, tail: Mapping | None = None,
                    order: int | None = None) -> PeriodJet:
    """Jet with the given leading tensors plus an optional tail (terms above the leading degree)."""
    if not isinstance(y, YukawaTensors):
        y = YukawaTensors(frame, dict(y))
    elif y.frame.to_dict() != frame.to_dict():
        raise JetError("tensors belong to a different frame")
    order = frame.n if order is None else order
    nt = frame.w_dim(1)
    comps = {}
    for label, i in frame.higher_labels:
        poly = {e: v for e, v in y.polynomial(label).items() if _deg(e) <= order}
        for e, c in (tail or {}).get(label, {}).items():
            e = tuple(e)
            if len(e) != nt:
                raise JetError(f"tail of {label!r}: exponent {list(e)} needs {nt} entries")
            if _deg(e) <= i:
                raise JetError(f"tail of {label!r} must have degree above {i}")
            if _deg(e) <= order:
                poly = padd(poly, {e: to_q(c)})
        comps[label] = poly
    return make_jet(frame, order, comps)


def k3_quadric_jet(frame: HodgeFrame, q, order: int = 6) -> PeriodJet:
    """Jet of a K3-type frame whose single W2 component is the quadratic form q."""
    if frame.n != 2:
        raise FrameError("quadric jets need n = 2")
    nt = frame.w_dim(1)
    if isinstance(q, Mapping):
        poly = {tuple(e): to_q(c) for e, c in q.items() if to_q(c)}
        for e in poly:
            if len(e) != nt or _deg(e) != 2:
                raise JetError(f"q must be a quadratic form in {nt} coordinates")
    else:
        rows = [list(r) for r in q]
        if len(rows) != nt or any(len(r) != nt for r in rows):
            raise JetError(f"q must be a {nt}x{nt} symmetric matrix")
        poly = {}
        for a in range(nt):
            for b in range(nt):
                if to_q(rows[a][b]) != to_q(rows[b][a]):
                    raise JetError("q must be symmetric")
                c = to_q(rows[a][b])
                if c:
                    e = tuple((k == a) + (k == b) for k in range(nt))
                    poly[e] = poly.get(e, 0) + c
        poly = {e: v for e, v in poly.items() if v}
    label = frame.labels[2][0]
    return make_jet(frame, order, {label: poly})


# -- jet.json ---------------------------------------------------------------------

def jet_from_dict(data: Mapping, base_dir: Path | None = None) -> PeriodJet:
    try:
        fr = data["frame"]
        order = data["order"]
        raw = data["components"]
    except KeyError as exc:
        raise JetError(f"jet description is missing {exc.args[0]!r}") from None
    if isinstance(fr, str):
        path = Path(fr)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        frame = load_frame(path) if path.suffix == ".toml" else frame_from_dict(json.loads(path.read_text()))
    else:
        frame = frame_from_dict(fr)
    if not isinstance(order, int):
        raise JetError("order must be an integer")
    coords = set(frame.coordinates)
    comps, w1 = {}, {}
    for label, terms in raw.items():
        poly = {}
        for term in terms:
            e, c = tuple(term["exp"]), to_q(term["coeff"])
            poly[e] = poly.get(e, 0) + c
        (w1 if label in coords else comps)[label] = poly
    return make_jet(frame, order, comps, w1)


def load_jet(path) -> PeriodJet:
    path = Path(path)
    return jet_from_dict(json.loads(path.read_text()), path.parent)
