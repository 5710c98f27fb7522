"""
Subspace lattices: closure, distributivity, and partitioned bases.

Indices of a family are the positions of its members. A subset Gamma of the
index set is represented as a sorted tuple.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .exactla import DimensionError, Subspace, intersect, intersect_all, subspace_sum

log = logging.getLogger(__name__)

DEFAULT_CAP = 4096


class DistributivityError(ValueError):
    """Raised when a construction needs a distributive family and did not get one."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ClosureIncomplete(RuntimeError):
    pass


@dataclass(frozen=True)
class SubspaceFamily:
    ambient_dim: int
    members: tuple

    def __init__(self, ambient_dim: int, members: Iterable[Subspace]):
        members = tuple(members)
        for m in members:
            if m.ambient_dim != ambient_dim:
                raise DimensionError("family member in the wrong ambient space")
        object.__setattr__(self, "ambient_dim", int(ambient_dim))
        object.__setattr__(self, "members", members)

    @property
    def index_set(self) -> tuple:
        return tuple(range(len(self.members)))

    def A(self, gamma: Sequence[int]) -> Subspace:
        """Intersection over gamma; the empty intersection is the ambient space."""
        return intersect_all([self.members[i] for i in gamma], self.ambient_dim)

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class LatticeClosure:
    elements: list
    generated_from: SubspaceFamily
    complete: bool

    def __len__(self) -> int:
        return len(self.elements)


def _sort_key(s: Subspace):
    return (s.dim, s.basis)


def lattice_closure(fam: SubspaceFamily, cap: int = DEFAULT_CAP) -> LatticeClosure:
    """Close the family under + and intersection.

    Stops with complete=False once more than ``cap`` elements would be needed.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    n = fam.ambient_dim
    if not fam.members:
        seed = [Subspace.zero(n), Subspace.full(n)]
    else:
        seed = list(fam.members)
    elements: list = []
    seen: set = set()
    for s in seed:
        if s not in seen:
            seen.add(s)
            elements.append(s)
    frontier = list(elements)
    while frontier:
        fresh = []
        for new in frontier:
            for old in list(elements):
                for cand in (subspace_sum(new, old), intersect(new, old)):
                    if cand not in seen:
                        if len(seen) >= cap:
                            return LatticeClosure(sorted(elements, key=_sort_key), fam, False)
                        seen.add(cand)
                        elements.append(cand)
                        fresh.append(cand)
        frontier = fresh
    return LatticeClosure(sorted(elements, key=_sort_key), fam, True)


def distributivity_counterexample(c: LatticeClosure) -> Optional[tuple]:
    """First triple (a, b, c) with a & (b + c) != (a & b) + (a & c), or None."""
    if not c.complete:
        raise ClosureIncomplete("lattice closure is incomplete; distributivity undetermined")
    els = c.elements
    k = len(els)
    meet: dict = {}
    join: dict = {}

    def m(i, j):
        key = (i, j) if i <= j else (j, i)
        if key not in meet:
            meet[key] = intersect(els[i], els[j])
        return meet[key]

    def jn(i, j):
        key = (i, j) if i <= j else (j, i)
        if key not in join:
            join[key] = subspace_sum(els[i], els[j])
        return join[key]

    index = {s: i for i, s in enumerate(els)}
    for a in range(k):
        for b in range(k):
            for cc in range(b + 1, k):
                lhs = m(a, index[jn(b, cc)])
                rhs = jn(index[m(a, b)], index[m(a, cc)])
                if lhs != rhs:
                    return (els[a], els[b], els[cc])
    return None


def is_distributive(c: LatticeClosure) -> bool:
    return distributivity_counterexample(c) is None


def admissible_order(index_set: Iterable[int]) -> list[tuple]:
    """All subsets, largest first, ties broken lexicographically."""
    idx = sorted(set(index_set))
    subsets = [tuple(s) for r in range(len(idx) + 1) for s in combinations(idx, r)]
    return sorted(subsets, key=lambda g: (-len(g), g))


@dataclass
class PartitionedBasis:
    blocks: dict
    order: list
    family: SubspaceFamily = field(repr=False)

    def vectors(self) -> list:
        return [v for g in self.order for v in self.blocks[g]]

    def span_from(self, gamma: Sequence[int]) -> Subspace:
        """Span of the blocks indexed by supersets of gamma."""
        g = set(gamma)
        vs = [v for key, blk in self.blocks.items() if g <= set(key) for v in blk]
        return Subspace(self.family.ambient_dim, vs)

    def partition_failures(self) -> list:
        return [g for g in self.order if self.span_from(g) != self.family.A(g)]


def _greedy_blocks(fam: SubspaceFamily) -> PartitionedBasis:
    order = admissible_order(fam.index_set)
    n = fam.ambient_dim
    acc = Subspace.zero(n)
    blocks: dict = {}
    for g in order:
        blk = []
        for v in fam.A(g).vectors():
            if not acc.contains(v):
                blk.append(v)
                acc = Subspace(n, list(acc.matrix) + [v])
        blocks[g] = blk
    return PartitionedBasis(blocks, order, fam)


def partitioned_basis(fam: SubspaceFamily) -> PartitionedBasis:
    """Basis split into blocks B_Gamma with A_Gamma = span of blocks over supersets.

    The family must generate a distributive lattice. That is verified through
    the partition property itself: the greedy construction satisfies it for
    every Gamma exactly when the family is distributive.
    """
    pb = _greedy_blocks(fam)
    bad = pb.partition_failures()
    if bad:
        raise DistributivityError(
            f"family is not distributive: partition property fails at Gamma={bad[0]}", witness=bad[0])
    return pb


def family_is_distributive(fam: SubspaceFamily) -> bool:
    """Cheap exact test: does the greedy partitioned basis exist?"""
    return not _greedy_blocks(fam).partition_failures()


@dataclass
class ImageIntersection:
    hypothesis: bool
    conclusion: bool
    image_of_intersection: Subspace
    intersection_of_images: Subspace


def image_intersection_report(pi, fam: SubspaceFamily) -> ImageIntersection:
    pi = np.asarray(pi, dtype=object)
    if pi.shape[1] != fam.ambient_dim:
        raise DimensionError("map does not act on the family's ambient space")
    n = fam.ambient_dim
    from .exactla import kernel, sum_all

    ker = kernel(pi)
    total = sum_all(fam.members, n)
    hyp = intersect(ker, total) == sum_all([intersect(ker, a) for a in fam.members], n)
    left = fam.A(fam.index_set).image(pi)
    right = intersect_all([a.image(pi) for a in fam.members], pi.shape[0])
    return ImageIntersection(hyp, left == right, left, right)


def check_image_intersection(pi, fam: SubspaceFamily) -> bool:
    """Does pi(intersection of A_i) equal the intersection of the pi(A_i)?"""
    rep = image_intersection_report(pi, fam)
    log.info("image-of-intersection hypothesis holds: %s", rep.hypothesis)
    return rep.conclusion
