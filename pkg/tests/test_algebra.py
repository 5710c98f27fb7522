from __future__ import annotations

import numpy as np
import pytest

from hopfglue.algebra import (
    AlgebraError,
    AlgMorphism,
    Ideal,
    Product,
    Quotient,
    StructureAlgebra,
    function_algebra,
    restriction,
)
from hopfglue.exactla import Subspace, unit_vector, vec, zeros


def test_function_algebra_is_pointwise():
    a = function_algebra(3)
    x, y = vec([1, 2, 3]), vec([4, 5, 6])
    assert a.mul(x, y).tolist() == [4, 10, 18]
    assert a.unit.tolist() == [1, 1, 1]


def test_non_associative_table_rejected():
    # unit e0, e1 e1 = e2, e2 e1 = e1, e1 e2 = 0: (e1 e1) e1 != e1 (e1 e1)
    m = zeros((3, 3, 3))
    for k in range(3):
        m[0, k, k] = m[k, 0, k] = 1
    m[1, 1, 2] = 1
    m[2, 1, 1] = 1
    with pytest.raises(AlgebraError):
        StructureAlgebra(m, unit_vector(3, 0))


def test_restriction_is_a_morphism():
    f = restriction(4, [1, 3])
    assert f(vec([5, 6, 7, 8])).tolist() == [6, 8]
    with pytest.raises(AlgebraError):
        AlgMorphism(function_algebra(2), function_algebra(1), np.array([[2, 0]], dtype=object))


def test_quotient_by_kernel_of_restriction():
    a = function_algebra(3)
    ideal = Ideal(a, Subspace(3, [unit_vector(3, 0)]))
    q = Quotient(a, ideal)
    assert q.algebra.dim == 2
    x = vec([9, 2, 3])
    assert ideal.space.contains(q.section_matrix @ (q.projection_matrix @ x) - x)


def test_non_ideal_rejected():
    a = function_algebra(2)
    with pytest.raises(AlgebraError):
        Ideal(a, Subspace(2, [vec([1, 1])]))


def test_product_blocks():
    p = Product([function_algebra(1), function_algebra(2)])
    x = p.join([vec([3]), vec([4, 5])])
    assert p.block(x, 1).tolist() == [4, 5]
    assert p.algebra.unit.tolist() == [1, 1, 1]
