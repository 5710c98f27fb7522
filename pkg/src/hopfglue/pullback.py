"""
Multi-pullbacks, the cocycle condition, coverings and canonical gluing.

Gluing maps are keyed by ordered pairs: ``maps[(i, j)]`` is pi^i_j from A_i
onto A_ij, and ``targets[frozenset({i, j})]`` is the shared A_ij.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    AlgMorphism,
    Ideal,
    Product,
    Quotient,
    StructureAlgebra,
    Subalgebra,
    alg_of,
    is_surjective,
)
from .exactla import (
    Subspace,
    identity,
    intersect_all,
    inverse,
    is_zero,
    kernel,
    solve,
    subspace_sum,
    sum_all,
    to_jsonable,
    zeros,
)
from .hopf import ComoduleAlgebra, HopfError, coinvariants, is_colinear
from .lattice import (
    DEFAULT_CAP,
    SubspaceFamily,
    distributivity_counterexample,
    lattice_closure,
)


class GluingError(ValueError):
    pass


def _key(i, j) -> frozenset:
    return frozenset((i, j))


@dataclass
class GluingFamily:
    index: tuple
    components: dict
    targets: dict
    maps: dict

    def __post_init__(self):
        self.index = tuple(self.index)
        for i in self.index:
            for j in self.index:
                if i == j:
                    continue
                if (i, j) not in self.maps:
                    raise GluingError(f"missing gluing map ({i}, {j})")
                if _key(i, j) not in self.targets:
                    raise GluingError(f"missing target for {{{i}, {j}}}")
                f = self.maps[(i, j)]
                if alg_of(f.domain).dim != alg_of(self.components[i]).dim:
                    raise GluingError(f"map ({i}, {j}) has the wrong domain")
                if alg_of(f.codomain).dim != alg_of(self.targets[_key(i, j)]).dim:
                    raise GluingError(f"map ({i}, {j}) has the wrong codomain")

    def pi(self, i, j) -> np.ndarray:
        return self.maps[(i, j)].matrix

    def ker(self, i, j) -> Subspace:
        return kernel(self.pi(i, j))

    def all_surjective(self) -> list:
        return [(i, j) for (i, j), f in sorted(self.maps.items()) if not is_surjective(f)]

    def is_comodule(self) -> bool:
        return all(isinstance(c, ComoduleAlgebra) for c in self.components.values())


@dataclass
class MultiPullback:
    family: GluingFamily
    product: Product
    total_space: Subspace
    total: object
    embedding: np.ndarray
    projections: dict

    def component(self, x, i) -> np.ndarray:
        k = self.family.index.index(i)
        return self.product.block(x, k)

    def contains(self, tup) -> bool:
        return self.total_space.contains(np.asarray(tup, dtype=object))


def difference_matrix(f: GluingFamily, prod: Product) -> np.ndarray:
    rows = []
    for a, i in enumerate(f.index):
        for b, j in enumerate(f.index):
            if a < b:
                pij = f.pi(i, j) @ prod.projections[a].matrix
                pji = f.pi(j, i) @ prod.projections[b].matrix
                rows.append(pij - pji)
    if not rows:
        return zeros((0, prod.algebra.dim))
    return np.vstack(rows)


def multipullback(f: GluingFamily) -> MultiPullback:
    """The subalgebra of the product where all gluing images agree."""
    bad = f.all_surjective()
    if bad:
        raise GluingError(f"gluing map {bad[0]} is not surjective")
    comps = [f.components[i] for i in f.index]
    prod = Product(comps)
    space = kernel(difference_matrix(f, prod))
    sub = Subalgebra(prod.algebra, space)
    total_alg = sub.algebra
    total = total_alg
    if f.is_comodule():
        for (i, j), m in f.maps.items():
            if not is_colinear(m.matrix, f.components[i], f.targets[_key(i, j)]):
                raise GluingError(f"gluing map ({i}, {j}) is not colinear")
        hop = comps[0].hopf
        big = zeros((prod.algebra.dim, prod.algebra.dim, hop.dim))
        for c, off in zip(comps, prod.offsets):
            big[off: off + c.dim, off: off + c.dim, :] = c.coaction
        co = zeros((space.dim, space.dim, hop.dim))
        for a, v in enumerate(space.vectors()):
            dv = np.einsum("a,abh->bh", v, big)
            for h in range(hop.dim):
                try:
                    co[a, :, h] = space.coordinates(dv[:, h])
                except ValueError as exc:
                    raise GluingError("pullback is not a subcomodule of the product") from exc
        total = ComoduleAlgebra(total_alg, hop, co)
    projections = {}
    for k, i in enumerate(f.index):
        projections[i] = AlgMorphism(total, f.components[i], prod.projections[k].matrix @ sub.inclusion)
    return MultiPullback(f, prod, space, total, sub.inclusion, projections)


def _linear_quotient(n: int, sub: Subspace) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates on Q^n / sub and a section, via canonical representatives."""
    from .exactla import complement_vectors

    reps = complement_vectors(sub, Subspace.full(n))
    q = len(reps)
    basis = np.empty((n, n), dtype=object)
    for c, v in enumerate(reps):
        basis[:, c] = v
    for c, v in enumerate(sub.vectors()):
        basis[:, q + c] = v
    coords = inverse(basis)[:q] if n else zeros((0, 0))
    section = basis[:, :q].copy() if n else zeros((0, 0))
    return coords, section


@dataclass
class CocycleReport:
    passed: bool
    failures: list = field(default_factory=list)
    checked_triples: int = 0

    def to_json(self) -> dict:
        return {"pass": self.passed, "checked_triples": self.checked_triples, "failures": self.failures}


def _phi(f: GluingFamily, i, j, k):
    """phi^{ij}_k : A^j_{ik} -> A^i_{jk} as a matrix on canonical quotient coordinates.

    Also returns the quotient data of A^j_{ik} for witness reconstruction.
    """
    ni, nj = alg_of(f.components[i]).dim, alg_of(f.components[j]).dim
    nij = alg_of(f.targets[_key(i, j)]).dim
    qi, si = _linear_quotient(ni, subspace_sum(f.ker(i, j), f.ker(i, k)))
    qj, sj = _linear_quotient(nj, subspace_sum(f.ker(j, i), f.ker(j, k)))
    w = f.ker(i, k).image(f.pi(i, j))
    qw, _ = _linear_quotient(nij, w)
    pi_ij_k = qw @ f.pi(i, j) @ si
    pi_ji_k = qw @ f.pi(j, i) @ sj
    return inverse(pi_ij_k) @ pi_ji_k, sj


def check_cocycle(f: GluingFamily) -> CocycleReport:
    """Both cocycle conditions on every ordered triple of distinct indices."""
    failures = []
    cond1_bad = set()
    triples = list(permutations(f.index, 3))
    for i, j, k in triples:
        left = f.ker(i, k).image(f.pi(i, j))
        right = f.ker(j, k).image(f.pi(j, i))
        if left != right:
            diff = next((v for v in left.vectors() if not right.contains(v)), None)
            if diff is None:
                diff = next(v for v in right.vectors() if not left.contains(v))
            failures.append({"condition": 1, "triple": [i, j, k], "witness": to_jsonable(diff)})
            cond1_bad.add((i, j, k))
    for i, j, k in triples:
        if {(i, j, k), (j, i, k), (i, k, j), (k, i, j), (j, k, i), (k, j, i)} & cond1_bad:
            continue
        phi_ik_j, s_k = _phi(f, i, k, j)
        phi_ij_k, _ = _phi(f, i, j, k)
        phi_jk_i, _ = _phi(f, j, k, i)
        comp = phi_ij_k @ phi_jk_i
        if np.any(comp != phi_ik_j):
            col = next(c for c in range(comp.shape[1]) if np.any(comp[:, c] != phi_ik_j[:, c]))
            failures.append({"condition": 2, "triple": [i, j, k], "witness": to_jsonable(s_k[:, col])})
    return CocycleReport(not failures, failures, len(triples))


@dataclass
class CoveringFamily:
    source: object
    maps: dict

    @property
    def index(self) -> tuple:
        return tuple(sorted(self.maps))

    def kernels(self) -> dict:
        return {i: kernel(self.maps[i].matrix) for i in self.index}


@dataclass
class CoveringReport:
    passed: bool
    trivial_intersection: bool
    distributive: Optional[bool]
    closure_size: int
    closure_complete: bool
    failures: list = field(default_factory=list)

    @property
    def undetermined(self) -> bool:
        return not self.closure_complete

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "trivial_intersection": self.trivial_intersection,
            "distributive": self.distributive,
            "closure_size": self.closure_size,
            "closure_complete": self.closure_complete,
            "failures": self.failures,
        }


def check_covering(c: CoveringFamily, cap: int = DEFAULT_CAP) -> CoveringReport:
    n = alg_of(c.source).dim
    failures = []
    for i in c.index:
        if not is_surjective(c.maps[i]):
            failures.append({"condition": "surjective", "index": i})
    kers = c.kernels()
    meet = intersect_all([kers[i] for i in c.index], n)
    trivial = meet.dim == 0
    if not trivial:
        w = meet.vectors()[0]
        failures.append({"condition": 1, "witness": to_jsonable(w),
                         "kernel_index": [str(i) for i in c.index if kers[i].contains(w)],
                         "kernel_dims": {str(i): kers[i].dim for i in c.index}})
    closure = lattice_closure(SubspaceFamily(n, [kers[i] for i in c.index]), cap)
    distributive = None
    if closure.complete:
        bad = distributivity_counterexample(closure)
        distributive = bad is None
        if bad is not None:
            failures.append({"condition": 2, "witness": [to_jsonable(s.matrix) for s in bad]})
    passed = not failures and closure.complete
    return CoveringReport(passed, trivial, distributive, len(closure), closure.complete, failures)


def quotient_comodule(p: ComoduleAlgebra, q: Quotient) -> ComoduleAlgebra:
    """Quotient of a comodule algebra by an ideal that is also a subcomodule."""
    d = q.algebra.dim
    co = zeros((d, d, p.hopf.dim))
    for r in range(d):
        dv = p.apply(q.section_matrix[:, r])
        co[r] = q.projection_matrix @ dv
    return ComoduleAlgebra(q.algebra, p.hopf, co)


def canonical_section(m) -> np.ndarray:
    """Right inverse built column by column with the canonical solve."""
    m = np.asarray(m, dtype=object)
    out = zeros((m.shape[1], m.shape[0]))
    for r in range(m.shape[0]):
        e = zeros(m.shape[0])
        e[r] = 1
        x = solve(m, e)
        if x is None:
            raise GluingError("map is not surjective")
        out[:, r] = x
    return out


def canonical_gluing(c: CoveringFamily) -> GluingFamily:
    """Gluing maps P_i -> P/(ker pi_i + ker pi_j) induced by a covering."""
    src = c.source
    a = alg_of(src)
    kers = c.kernels()
    targets, maps = {}, {}
    for i in c.index:
        for j in c.index:
            if i >= j:
                continue
            q = Quotient(a, Ideal(a, subspace_sum(kers[i], kers[j])))
            tgt = quotient_comodule(src, q) if isinstance(src, ComoduleAlgebra) else q.algebra
            targets[_key(i, j)] = tgt
            for x, y in ((i, j), (j, i)):
                pim = c.maps[x].matrix
                if not is_zero(q.projection_matrix @ kers[x].matrix.T if kers[x].dim else zeros((0, 0))):
                    raise GluingError(f"gluing map ({x}, {y}) is ill-defined")
                m = q.projection_matrix @ canonical_section(pim)
                maps[(x, y)] = AlgMorphism(c.maps[x].codomain, tgt, m)
    comps = {i: c.maps[i].codomain for i in c.index}
    return GluingFamily(c.index, comps, targets, maps)


@dataclass
class PiecewiseReport:
    passed: bool
    colinear: dict
    coinvariant_covering: Optional[CoveringReport]
    principal: dict
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "colinear": {str(k): v for k, v in self.colinear.items()},
            "coinvariant_covering": self.coinvariant_covering.to_json() if self.coinvariant_covering else None,
            "principal": {str(k): v for k, v in self.principal.items()},
            "failures": self.failures,
        }


def coinvariant_restrictions(c: CoveringFamily) -> CoveringFamily:
    """The covering restricted to coinvariants, each piece onto its own coinvariants."""
    base = coinvariants(c.source)
    dom = Subalgebra(alg_of(c.source), base).algebra
    maps = {}
    for i in c.index:
        f = c.maps[i]
        piece_co = coinvariants(f.codomain)
        cod = Subalgebra(alg_of(f.codomain), piece_co).algebra
        m = zeros((piece_co.dim, base.dim))
        for col, v in enumerate(base.vectors()):
            m[:, col] = piece_co.coordinates(f.matrix @ v)
        maps[i] = AlgMorphism(dom, cod, m)
    return CoveringFamily(dom, maps)


def check_piecewise_preconditions(c: CoveringFamily, connections: Optional[dict] = None,
                                  cap: int = DEFAULT_CAP) -> PiecewiseReport:
    from .connection import verify_connection

    failures = []
    colinear = {}
    for i in c.index:
        try:
            colinear[i] = is_colinear(c.maps[i])
        except HopfError:
            colinear[i] = False
        if not colinear[i]:
            failures.append({"condition": "colinear", "index": i})
    cov = None
    if all(colinear.values()):
        cov = check_covering(coinvariant_restrictions(c), cap)
        if not cov.passed:
            failures.append({"condition": "coinvariant covering", "report": cov.to_json()})
    principal = {}
    for i in c.index:
        if not connections or i not in connections:
            principal[i] = "unverified"
            continue
        rep = verify_connection(connections[i])
        principal[i] = "verified" if rep.passed else "failed"
        if not rep.passed:
            failures.append({"condition": "principal", "index": i, "report": rep.to_json()})
    passed = not failures and all(v == "verified" for v in principal.values())
    return PiecewiseReport(passed, colinear, cov, principal, failures)


def covering_to_pullback_map(c: CoveringFamily, mp: MultiPullback) -> np.ndarray:
    """p -> (pi_i(p))_i expressed in the pullback's own coordinates."""
    stacked = np.vstack([c.maps[i].matrix for i in mp.family.index])
    cols = [mp.total_space.coordinates(stacked[:, k]) for k in range(stacked.shape[1])]
    return np.array(cols, dtype=object).T.reshape(mp.total_space.dim, stacked.shape[1])


def sub_family(f: GluingFamily, keep: Sequence) -> GluingFamily:
    keep = tuple(keep)
    return GluingFamily(
        keep,
        {i: f.components[i] for i in keep},
        {k: v for k, v in f.targets.items() if k <= set(keep)},
        {(i, j): m for (i, j), m in f.maps.items() if i in keep and j in keep},
    )
