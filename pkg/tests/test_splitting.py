from __future__ import annotations

import numpy as np
import pytest

from hopfglue.connection import piece_splittings
from hopfglue.exactla import Subspace, mat, vec, zeros
from hopfglue.hopf import is_colinear
from hopfglue.lattice import DistributivityError
from hopfglue.models import e1
from hopfglue.pullback import canonical_gluing, multipullback
from hopfglue.splitting import (
    PreconditionError,
    Splitting,
    SplittingError,
    check_kernel_condition,
    global_splitting,
    product_colinear,
    subspace_respecting_splitting,
    unitalize,
)


@pytest.fixture(scope="module")
def e1_data():
    m = e1()
    f = canonical_gluing(m.covering)
    alphas, betas = piece_splittings(f, m.connections())
    return m, f, alphas, betas, multipullback(f)


def test_respecting_splitting_of_a_projection():
    pi = mat([[1, 0, 0], [0, 1, 0]])
    fam = [Subspace(3, [vec([1, 0, 1])]), Subspace(3, [vec([0, 1, 0]), vec([0, 0, 1])])]
    s = subspace_respecting_splitting(pi, fam)
    for f in fam:
        for v in f.image(pi).vectors():
            assert f.contains(s(v))
    assert s(vec([1, 0])).tolist() == [1, 0, 1]


def test_respecting_splitting_rejects_three_lines():
    pi = mat([[1, 0], [0, 1]])
    lines = [Subspace(2, [vec([1, 0])]), Subspace(2, [vec([0, 1])]), Subspace(2, [vec([1, 1])])]
    with pytest.raises(DistributivityError):
        subspace_respecting_splitting(pi, lines)


def test_splitting_must_invert_pi():
    with pytest.raises(SplittingError):
        Splitting(mat([[1, 0]]), mat([[0], [1]]), Subspace.full(1))


def test_unitalize_fixes_the_unit():
    pi = mat([[1, 0], [0, 1]])
    s = Splitting(pi, mat([[1, 0], [0, 1]]), Subspace.full(2))
    out = unitalize(s, vec([1, 1]), vec([1, 1]))
    assert out(vec([1, 1])).tolist() == [1, 1]


def test_piece_splittings_are_colinear_and_respect_kernels(e1_data):
    m, f, alphas, betas, _ = e1_data
    assert check_kernel_condition(f, alphas) == []
    for (i, j), s in betas.items():
        P_i, P_ij = f.components[i], f.targets[frozenset((i, j))]
        assert s(P_ij.unit).tolist() == P_i.unit.tolist()
        assert is_colinear(s.section, P_ij, P_i)


@pytest.mark.parametrize("i", [0, 1, 2])
@pytest.mark.parametrize("rev", [False, True])
def test_global_splitting_both_orders(e1_data, i, rev):
    m, f, alphas, betas, mp = e1_data
    others = [j for j in f.index if j != i]
    kappa = [i] + (others[::-1] if rev else others)
    s = global_splitting(f, alphas, betas, i, kappa=kappa, mp=mp)
    P_i = f.components[i]
    n_i = P_i.dim
    # pi o alpha = id on A_i
    assert (s.pi @ s.section).tolist() == np.identity(n_i, dtype=int).tolist()
    # unital: 1 goes to the unit tuple
    assert s(P_i.unit).tolist() == mp.product.algebra.unit.tolist()
    assert product_colinear(f, s.section, i)
    for c in range(n_i):
        assert mp.contains(s.section[:, c])


def test_violating_alpha_rejected(e1_data):
    m, f, alphas, betas, mp = e1_data
    i, j, k = 0, 1, 2
    good = alphas[(i, j)]
    ker_ij, ker_ik = f.ker(i, j), f.ker(i, k)
    w = next(v for v in ker_ij.vectors() if not ker_ik.contains(v))
    target = ker_ik.image(f.pi(i, j)).vectors()[0]
    lam = np.array([x for x in target], dtype=object)
    lam = lam / (lam @ target)
    bad = Splitting(good.pi, good.section + np.outer(w, lam), good.domain)
    broken = dict(alphas)
    broken[(i, j)] = bad
    assert check_kernel_condition(f, broken)
    with pytest.raises(PreconditionError):
        global_splitting(f, broken, betas, i, mp=mp)


def test_kappa_must_start_at_piece(e1_data):
    m, f, alphas, betas, mp = e1_data
    with pytest.raises(SplittingError):
        global_splitting(f, alphas, betas, 0, kappa=[1, 0, 2], mp=mp)
