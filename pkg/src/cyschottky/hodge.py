"""Hodge frames, their weight splitting, and truncated symmetric algebras on the dual basis."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from pathlib import Path
from typing import Mapping, Sequence

from .errors import FrameError
from .monomials import WeightedMonomialBasis, monomials_up_to_weight, weight_of


def default_labels(n: int, hodge: Sequence[int]) -> dict[int, list[str]]:
    """Dual-basis labels per weight: t0.. for W1, phi for W_n, psi.. in between."""
    w1 = hodge[n] + hodge[n - 1]
    out = {1: [f"t{j}" for j in range(w1)]}
    for i in range(2, n + 1):
        h = hodge[n - i]
        if i == n:
            out[i] = ["phi"] if h == 1 else [f"phi{j}" for j in range(h)]
        elif n == 3:
            out[i] = ["psi"] if h == 1 else [f"psi{j}" for j in range(h)]
        else:
            out[i] = [f"psi{i}"] if h == 1 else [f"psi{i}_{j}" for j in range(h)]
    return out


@dataclass(frozen=True)
class FiltrationTag:
    """Tags of one basis vector of H: its (p, q) type, Hodge level, modified level, weight."""

    label: str
    p: int
    q: int
    hodge_level: int
    plus_level: int
    weight: int


@dataclass(frozen=True)
class HodgeFrame:
    n: int
    hodge: tuple
    labels: Mapping = field(default=None, hash=False)
    polarization: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        n, h = self.n, tuple(int(x) for x in self.hodge)
        object.__setattr__(self, "hodge", h)
        if n < 2:
            raise FrameError("need n >= 2")
        if len(h) != n + 1:
            raise FrameError(f"expected {n + 1} Hodge numbers, got {len(h)}")
        if any(x < 0 for x in h):
            raise FrameError("Hodge numbers must be non-negative")
        for p in range(n + 1):
            if h[p] != h[n - p]:
                raise FrameError(f"symmetry violation: h^({n - p},{p}) = {h[p]} but "
                                 f"h^({p},{n - p}) = {h[n - p]}")
        if h[0] != 1:
            raise FrameError(f"h^({n},0) must be 1, got {h[0]}")
        labels = default_labels(n, h)
        if self.labels:
            for key, names in dict(self.labels).items():
                i = int(key)
                if i not in labels:
                    raise FrameError(f"no weight-{i} piece to label")
                if len(names) != len(labels[i]):
                    raise FrameError(f"weight {i} needs {len(labels[i])} labels, got {len(names)}")
                labels[i] = [str(x) for x in names]
        flat = [x for i in sorted(labels) for x in labels[i]]
        if len(set(flat)) != len(flat):
            raise FrameError("labels must be distinct")
        object.__setattr__(self, "labels", {i: tuple(v) for i, v in labels.items()})

    # h^{n-k,k} is hodge[k]
    def h(self, p: int, q: int) -> int:
        if p + q != self.n or not 0 <= p <= self.n:
            return 0
        return self.hodge[self.n - p]

    @property
    def dim_h(self) -> int:
        return sum(self.hodge)

    def w_dim(self, i: int) -> int:
        if i == 1:
            return self.h(0, self.n) + self.h(1, self.n - 1)
        return self.h(i, self.n - i) if 2 <= i <= self.n else 0

    @property
    def w_dims(self) -> list[int]:
        return [self.w_dim(i) for i in range(1, self.n + 1)]

    @property
    def coordinates(self) -> tuple[str, ...]:
        return self.labels[1]

    @property
    def higher_labels(self) -> list[tuple[str, int]]:
        return [(x, i) for i in range(2, self.n + 1) for x in self.labels[i]]

    @property
    def variables(self) -> list[tuple[str, int]]:
        """(label, weight) of every dual-basis functional, W1 first."""
        return [(x, i) for i in range(1, self.n + 1) for x in self.labels[i]]

    @cached_property
    def tags(self) -> list[FiltrationTag]:
        """Tags for the basis of H dual to :attr:`variables`."""
        n = self.n
        out = []
        t = self.labels[1]
        h0n = self.h(0, n)
        for j, x in enumerate(t):
            p = 0 if j < h0n else 1
            out.append(FiltrationTag(x, p, n - p, p, 1, 1))
        for i in range(2, n + 1):
            for x in self.labels[i]:
                out.append(FiltrationTag(x, i, n - i, i, i, i))
        return out

    def to_dict(self) -> dict:
        return {"n": self.n, "hodge": list(self.hodge),
                "labels": {str(i): list(v) for i, v in self.labels.items()}}


def build_frame(n: int, hodge_numbers: Sequence[int], labels=None,
                polarization=None) -> HodgeFrame:
    return HodgeFrame(int(n), tuple(hodge_numbers), labels, polarization)


def frame_from_dict(data: Mapping) -> HodgeFrame:
    try:
        n = data["n"]
        hodge = data["hodge"]
    except KeyError as exc:
        raise FrameError(f"frame is missing key {exc.args[0]!r}") from None
    if not isinstance(n, int) or not isinstance(hodge, list):
        raise FrameError("frame needs integer n and a list of Hodge numbers")
    return build_frame(n, hodge, data.get("labels"), data.get("polarization"))


def load_frame(path) -> HodgeFrame:
    from ._toml import read_toml
    return frame_from_dict(read_toml(Path(path)))


def dump_frame_toml(frame: HodgeFrame) -> str:
    lines = [f"n = {frame.n}", f"hodge = [{', '.join(map(str, frame.hodge))}]", "", "[labels]"]
    for i, names in sorted(frame.labels.items()):
        lines.append(f'"{i}" = [{", ".join(json.dumps(x) for x in names)}]')
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SymBasis:
    """Monomial basis of the truncated symmetric algebra S_m on the dual basis."""

    frame: HodgeFrame
    order: int
    monomials: WeightedMonomialBasis = field(repr=False)

    @cached_property
    def n_coordinates(self) -> int:
        return self.frame.w_dim(1)

    def is_b1(self, exp) -> bool:
        return not any(exp[self.n_coordinates:])

    @cached_property
    def b1(self) -> list:
        return [m for m in self.monomials if self.is_b1(m)]

    @cached_property
    def non_b1(self) -> list:
        return [m for m in self.monomials if not self.is_b1(m)]

    @cached_property
    def slices(self) -> dict[int, list]:
        ws = self.monomials.weights
        out = {w: [] for w in range(self.order + 1)}
        for m in self.monomials:
            out[weight_of(m, ws)].append(m)
        return out

    @property
    def labels(self) -> tuple[str, ...]:
        return self.monomials.labels

    @property
    def weights(self) -> tuple[int, ...]:
        return self.monomials.weights

    def __len__(self):
        return len(self.monomials)


def sym_basis(frame: HodgeFrame, m: int) -> SymBasis:
    if m < 0:
        raise FrameError("order must be non-negative")
    return SymBasis(frame, m, monomials_up_to_weight(frame.variables, m))


def graded_slice(basis: SymBasis, m: int) -> list:
    if not 0 <= m <= basis.order:
        raise FrameError(f"slice {m} outside 0..{basis.order}")
    return list(basis.slices[m])


def b1_dimension(w1: int, m: int) -> int:
    """Monomials of degree <= m in w1 variables."""
    return comb(w1 + m, m)
