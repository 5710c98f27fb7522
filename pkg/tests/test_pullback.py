from __future__ import annotations

import numpy as np
import pytest

import oracles
from hopfglue.exactla import inverse, rank, vec
from hopfglue.models import e1, e1_duplicated_kernel, triple_overlap, two_point_gluing
from hopfglue.pullback import (
    GluingError,
    GluingFamily,
    canonical_gluing,
    check_cocycle,
    check_covering,
    check_piecewise_preconditions,
    covering_to_pullback_map,
    multipullback,
    sub_family,
)


def test_e1_covering_passes():
    rep = check_covering(e1().covering)
    assert rep.passed and rep.trivial_intersection and rep.distributive
    assert rep.closure_complete


def test_duplicated_kernel_fails_condition_one():
    rep = check_covering(e1_duplicated_kernel())
    assert not rep.passed
    conds = [f["condition"] for f in rep.failures]
    assert 1 in conds
    fail = next(f for f in rep.failures if f["condition"] == 1)
    assert fail["kernel_index"] == ["0", "1", "2"]


def test_canonical_gluing_cocycle():
    rep = check_cocycle(canonical_gluing(e1().covering))
    assert rep.passed and rep.checked_triples == 6


def test_triple_overlap_cocycle():
    assert check_cocycle(triple_overlap()).passed
    bad = check_cocycle(triple_overlap(twisted=True))
    assert not bad.passed
    f2 = [f for f in bad.failures if f["condition"] == 2]
    assert f2 and len(f2[0]["triple"]) == 3


def test_multipullback_recovers_total():
    m = e1()
    f = canonical_gluing(m.covering)
    mp = multipullback(f)
    # pointwise count: a function on the six points is the same as a compatible triple
    assert mp.total_space.dim == len(oracles.POINTS)
    iso = covering_to_pullback_map(m.covering, mp)
    assert rank(iso) == 6
    assert (iso @ inverse(iso)).tolist() == np.identity(6, dtype=int).tolist()


def test_two_point_gluing_dimension():
    mp = multipullback(two_point_gluing())
    # two functions on two points agreeing at one point: 3 free values
    assert mp.total_space.dim == 3


def test_sub_family_two_pieces():
    f = canonical_gluing(e1().covering)
    g = sub_family(f, [0, 1])
    assert multipullback(g).total_space.dim == 6


def test_piecewise_preconditions_on_e1():
    m = e1()
    rep = check_piecewise_preconditions(m.covering, m.connections())
    assert rep.passed, rep.failures


def test_gluing_family_validation():
    f = canonical_gluing(e1().covering)
    maps = dict(f.maps)
    del maps[(0, 1)]
    with pytest.raises(GluingError):
        GluingFamily(f.index, f.components, f.targets, maps)
