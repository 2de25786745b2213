from __future__ import annotations

import pytest

from cyschottky.errors import FrameError
from cyschottky.hodge import (b1_dimension, build_frame, dump_frame_toml, frame_from_dict,
                              graded_slice, load_frame, sym_basis)


@pytest.mark.parametrize("n, hodge, dim_h, w_dims", [
    (2, [1, 2, 1], 4, [3, 1]),
    (3, [1, 101, 101, 1], 204, [102, 101, 1]),
    (3, [1, 1, 1, 1], 4, [2, 1, 1]),
])
def test_frame_dimensions(n, hodge, dim_h, w_dims):
    f = build_frame(n, hodge)
    assert f.dim_h == dim_h
    assert f.w_dims == w_dims


@pytest.mark.parametrize("n, hodge", [(3, [1, 5, 4, 1]), (2, [2, 1, 2]), (1, [1, 1]), (2, [1, 2])])
def test_bad_frames(n, hodge):
    with pytest.raises(FrameError):
        build_frame(n, hodge)


def test_labels_and_tags():
    f = build_frame(3, [1, 2, 2, 1])
    assert f.coordinates == ("t0", "t1", "t2")
    assert tuple(f.labels[2]) == ("psi0", "psi1")
    tags = {t.label: t for t in f.tags}
    assert tags["t0"].weight == 1 and tags["phi"].weight == 3
    assert (tags["t0"].p, tags["t0"].q) == (0, 3)


@pytest.mark.parametrize("n, hodge, m, total, b1", [
    (2, [1, 2, 1], 2, 11, 10),
    (2, [1, 2, 1], 3, 24, 20),
    (3, [1, 1, 1, 1], 3, 14, 10),
])
def test_sym_basis_sizes(n, hodge, m, total, b1):
    b = sym_basis(build_frame(n, hodge), m)
    assert len(b) == total
    assert len(b.b1) == b1 == b1_dimension(b.n_coordinates, m)
    assert len(b.b1) + len(b.non_b1) == total


def test_graded_slices():
    b = sym_basis(build_frame(2, [1, 2, 1]), 2)
    assert [len(graded_slice(b, w)) for w in range(3)] == [1, 3, 7]
    assert all(b.is_b1(e) for e in graded_slice(b, 1))
    with pytest.raises(FrameError):
        graded_slice(b, 3)


def test_toml_roundtrip(tmp_path):
    f = build_frame(3, [1, 2, 2, 1])
    p = tmp_path / "frame.toml"
    p.write_text(dump_frame_toml(f))
    assert load_frame(p) == f
    assert frame_from_dict(f.to_dict()) == f
