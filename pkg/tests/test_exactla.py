from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from hopfglue.exactla import (
    DimensionError,
    Subspace,
    from_jsonable,
    image,
    intersect,
    inverse,
    kernel,
    mat,
    rank,
    rref,
    solve,
    subspace_sum,
    to_jsonable,
    vec,
)


def test_rref_of_rational_matrix():
    m = mat([[2, 4, 6], [1, 3, 5]])
    assert rref(m).tolist() == [[1, 0, -1], [0, 1, 2]]


def test_rank_and_kernel_agree():
    m = mat([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(m) == 2
    k = kernel(m)
    assert k.dim == 1
    assert not np.any(m @ k.vectors()[0])


def test_solve_picks_zero_free_variables():
    m = mat([[1, 1, 0]])
    assert solve(m, vec([3])).tolist() == [3, 0, 0]
    assert solve(mat([[1, 0], [1, 0]]), vec([1, 2])) is None


def test_inverse_is_exact():
    m = mat([[2, 1], [7, 4]])
    assert (m @ inverse(m)).tolist() == [[1, 0], [0, 1]]
    with pytest.raises(Exception):
        inverse(mat([[1, 2], [2, 4]]))


def test_subspace_lattice_operations():
    a = Subspace(3, [vec([1, 0, 0]), vec([0, 1, 0])])
    b = Subspace(3, [vec([0, 1, 0]), vec([0, 0, 1])])
    assert intersect(a, b) == Subspace(3, [vec([0, 1, 0])])
    assert subspace_sum(a, b) == Subspace.full(3)
    assert (a & b) <= a
    assert vec([1, 1, 0]) in a
    assert a.coordinates(vec([2, 3, 0])).tolist() == [2, 3]
    with pytest.raises(Exception):
        a.coordinates(vec([0, 0, 1]))


def test_subspace_equality_ignores_spanning_set():
    a = Subspace(2, [vec([1, 1]), vec([2, 2])])
    b = Subspace(2, [vec([Fraction(1, 2), Fraction(1, 2)])])
    assert a == b and hash(a) == hash(b) and a.dim == 1


def test_mismatched_ambient_raises():
    with pytest.raises(DimensionError):
        intersect(Subspace.full(2), Subspace.full(3))


def test_image_and_preimage():
    m = mat([[1, 0], [0, 0]])
    assert image(m) == Subspace(2, [vec([1, 0])])
    assert Subspace.zero(2).preimage(m) == Subspace(2, [vec([0, 1])])


def test_json_round_trip():
    m = mat([[Fraction(1, 3), -2], [0, 5]])
    back = from_jsonable(to_jsonable(m))
    assert back.tolist() == m.tolist()
    assert to_jsonable(m)[0][0] == "1/3"
