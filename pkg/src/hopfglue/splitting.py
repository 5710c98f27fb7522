"""
Splittings of surjections: subspace-respecting, unital, colinear, and the
recursive splitting of a component projection of a multi-pullback.

A Splitting stores a full section matrix (A x B) that is only meaningful on
its ``domain`` subspace of B.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import alg_of
from .exactla import (
    Subspace,
    as_fraction_array,
    complement_vectors,
    is_zero,
    kernel,
    map_from_values,
    solve,
    to_jsonable,
    zeros,
)
from .hopf import ComoduleAlgebra, coinvariants, is_colinear
from .lattice import DistributivityError, SubspaceFamily, partitioned_basis


class SplittingError(ValueError):
    pass


class PreconditionError(SplittingError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class Splitting:
    pi: np.ndarray
    section: np.ndarray
    domain: Subspace
    unital: bool = False
    colinear: Optional[bool] = None
    respected: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pi = as_fraction_array(self.pi)
        self.section = as_fraction_array(self.section)
        if self.section.shape != (self.pi.shape[1], self.pi.shape[0]):
            raise SplittingError("section shape does not match pi")
        for v in self.domain.vectors():
            if np.any(self.pi @ (self.section @ v) != v):
                raise SplittingError("pi o section is not the identity on the domain")

    def __call__(self, b) -> np.ndarray:
        return self.section @ np.asarray(b, dtype=object)

    def restricted_to(self, sub: Subspace) -> "Splitting":
        if not sub.issubspace(self.domain):
            raise SplittingError("restriction domain is not inside the splitting's domain")
        return Splitting(self.pi, self.section, sub, self.unital, self.colinear, self.respected, dict(self.meta))

    def to_json(self) -> dict:
        return {
            "section": to_jsonable(self.section),
            "domain": to_jsonable(self.domain.matrix),
            "unital": self.unital,
            "colinear": self.colinear,
            "meta": self.meta,
        }


def _section_from_values(domain: Subspace, vectors, images, dim_a: int) -> np.ndarray:
    if not vectors:
        return zeros((dim_a, domain.ambient_dim))
    return map_from_values(vectors, images, domain.ambient_dim, dim_a)


def subspace_respecting_splitting(pi, family: Sequence[Subspace] = (), within: Optional[Subspace] = None,
                                  onto: Optional[Subspace] = None) -> Splitting:
    """A splitting with section(pi(A_i)) inside A_i for every family member.

    ``within`` restricts the source to a subspace A of Q^n (default: all of it)
    and ``onto`` is the target subspace B = pi(A) to be split (default: pi(A)).
    The family members must lie in A, and together with ker(pi) restricted to
    A they must generate a distributive lattice.
    """
    pi = as_fraction_array(pi)
    m, n = pi.shape
    A = within if within is not None else Subspace.full(n)
    B = onto if onto is not None else A.image(pi)
    fam = [Subspace(n, f.vectors()) for f in family]
    for f in fam:
        if not f.issubspace(A):
            raise SplittingError("family member is not inside the source space")
    # distributivity of {A_i} together with ker pi, inside A
    ker_in_A = kernel(pi) & A
    try:
        partitioned_basis(SubspaceFamily(n, fam + [ker_in_A, A]))
    except DistributivityError as exc:
        raise DistributivityError("family with ker(pi) is not distributive", witness=exc.witness) from exc
    images = [f.image(pi) for f in fam]
    pb = partitioned_basis(SubspaceFamily(m, images + [B]))
    last = len(images)
    vectors, values = [], []
    for gamma in pb.order:
        if last not in gamma:
            # these blocks complete B to the ambient space; nothing to split
            continue
        members = [i for i in gamma if i != last]
        a_gamma = A
        for i in members:
            a_gamma = a_gamma & fam[i]
        basis = a_gamma.matrix.T if a_gamma.dim else zeros((n, 0))
        for b in pb.blocks[gamma]:
            y = solve(pi @ basis, b) if a_gamma.dim else None
            if y is None:
                raise SplittingError("empty preimage inside the required intersection")
            vectors.append(b)
            values.append(basis @ y)
    section = _section_from_values(B, vectors, values, n)
    s = Splitting(pi, section, B, respected=tuple(fam), meta={"construction": "partitioned-basis"})
    for f, img in zip(fam, images):
        for v in img.vectors():
            if not f.contains(section @ v):
                raise SplittingError("constructed section does not respect the family")
    return s


def unitalize(s: Splitting, unit_a, unit_b, b_comodule: Optional[ComoduleAlgebra] = None,
              a_comodule: Optional[ComoduleAlgebra] = None) -> Splitting:
    """Correct a splitting so that it sends 1_B to 1_A.

    New section: a(b) + (1_A - a(1_B)) lambda(b), with lambda(1_B) = 1. When a
    comodule structure on B is given, lambda factors through the integral
    projection onto coinvariants, which keeps a colinear splitting colinear.
    """
    unit_a = as_fraction_array(unit_a).reshape(-1)
    unit_b = as_fraction_array(unit_b).reshape(-1)
    if np.any(s.pi @ unit_a != unit_b):
        raise SplittingError("pi does not map 1_A to 1_B")
    if not s.domain.contains(unit_b):
        raise SplittingError("1_B is not in the splitting's domain")
    if np.all(s.section @ unit_b == unit_a):
        return Splitting(s.pi, s.section, s.domain, True, s.colinear, s.respected, dict(s.meta, unitalized=False))
    lam = None
    if b_comodule is not None:
        integral = b_comodule.hopf.integral()
        if integral is not None:
            # E(b) = b(0) int(b(1)) projects onto coinvariants and is colinear
            E = np.einsum("abh,h->ba", b_comodule.coaction, integral)
            lam = _functional_on(coinvariants(b_comodule), unit_b) @ E
    proj = lam
    if lam is None:
        lam = _functional_on(s.domain, unit_b)
    corr = unit_a - s.section @ unit_b
    section = s.section + np.outer(corr, lam)
    colinear = s.colinear if proj is not None else (None if s.colinear is None else False)
    out = Splitting(s.pi, section, s.domain, True, colinear, (), dict(s.meta, unitalized=True))
    if np.any(out.section @ unit_b != unit_a):
        raise SplittingError("unitalization failed")
    if proj is not None and a_comodule is not None and s.colinear:
        out.colinear = is_colinear(out.section, b_comodule, a_comodule, on=s.domain)
    return out


def _functional_on(space: Subspace, v) -> np.ndarray:
    """A functional on Q^m equal to 1 on v and 0 on the canonical complement of v in ``space``."""
    m = space.ambient_dim
    rest = complement_vectors(Subspace(m, [v]), space)
    vectors = [v] + rest
    values = [np.array([1], dtype=object)] + [np.array([0], dtype=object)] * len(rest)
    return map_from_values(vectors, values, m, 1)[0]


def connection_tensor(ell) -> np.ndarray:
    return as_fraction_array(getattr(ell, "tensor", ell))


def colinearize(alpha_coinv: Splitting, ell, pi, a_como: ComoduleAlgebra, b_como: ComoduleAlgebra,
                family: Sequence[Subspace] = ()) -> Splitting:
    """b -> alpha_coinv(b(0) pi(l<1>(b(1)))) l<2>(b(1)).

    ``alpha_coinv`` must split pi on the coinvariants of B with values in the
    coinvariants of A. ``family`` lists ideals of A that should be respected.
    """
    pi = as_fraction_array(getattr(pi, "matrix", pi))
    L = connection_tensor(ell)
    A, B = a_como.alg, b_como.alg
    b_co = coinvariants(b_como)
    if not b_co.issubspace(alpha_coinv.domain):
        raise SplittingError("coinvariant splitting is not defined on all of B^coH")
    w = b_co.matrix
    piv = list(b_co.pivots)
    images = [alpha_coinv.section @ w[r] for r in range(b_co.dim)]
    section = zeros((A.dim, B.dim))
    for c in range(B.dim):
        # X in B (x) A, X[b', y] = sum coact[c,d,h] L[h,x,y] (e_d pi(e_x))_b'
        X = np.einsum("dh,hxy,px,dpb->by", b_como.coaction[c], L, pi, B.mult, optimize=True)
        Z = X[piv, :] if piv else zeros((0, A.dim))
        if np.any(w.T @ Z != X) if b_co.dim else not is_zero(X):
            raise SplittingError("intermediate tensor is not coinvariant in its first leg")
        out = zeros(A.dim)
        for r in range(b_co.dim):
            out = out + A.mul(images[r], Z[r])
        section[:, c] = out
    s = Splitting(pi, section, Subspace.full(B.dim), meta=dict(alpha_coinv.meta, colinearized=True))
    s.colinear = is_colinear(section, b_como, a_como)
    s.unital = bool(np.all(section @ B.unit == A.unit))
    if not s.colinear:
        raise SplittingError("colinearized section is not colinear")
    for f in family:
        for v in f.image(pi).vectors():
            if not f.contains(section @ v):
                raise SplittingError("colinearized section does not respect the family")
    s.respected = tuple(family)
    return s


def coinvariant_splitting(pi, a_como: ComoduleAlgebra, b_como: ComoduleAlgebra,
                          family: Sequence[Subspace] = ()) -> Splitting:
    """Lemma-style splitting of pi on coinvariants, respecting A_i & A^coH."""
    pi = as_fraction_array(getattr(pi, "matrix", pi))
    a_co, b_co = coinvariants(a_como), coinvariants(b_como)
    fam = [f & a_co for f in family]
    s = subspace_respecting_splitting(pi, fam, within=a_co, onto=b_co)
    s.meta["level"] = "coinvariant"
    return s


# -- multi-pullback splitting ------------------------------------------------

def check_kernel_condition(f, alphas: dict) -> list:
    """Violations of alpha^i_j(pi^i_j(ker pi^i_k)) inside ker pi^i_k."""
    bad = []
    for i in f.index:
        for j in f.index:
            if j == i:
                continue
            for k in f.index:
                if k in (i, j):
                    continue
                ker_ik = f.ker(i, k)
                for v in ker_ik.image(f.pi(i, j)).vectors():
                    img = alphas[(i, j)](v)
                    if not ker_ik.contains(img):
                        bad.append({"triple": [i, j, k], "witness": to_jsonable(v)})
                        break
    return bad


def global_splitting(f, alphas: dict, betas: dict, i, kappa: Optional[Sequence] = None,
                     check: bool = True, debug: bool = False, mp=None) -> Splitting:
    """Unital splitting of the projection of the multi-pullback onto A_i.

    The section lands in the product of the components (concatenated
    coordinates, in the order of ``f.index``); membership in the pullback is
    verified for every basis vector.
    """
    from .pullback import check_cocycle, multipullback

    index = list(f.index)
    kappa = list(kappa) if kappa is not None else [i] + [j for j in index if j != i]
    if sorted(kappa, key=index.index) != index or kappa[0] != i:
        raise SplittingError("kappa must be a bijection onto the index set starting at i")
    if check:
        rep = check_cocycle(f)
        if not rep.passed:
            raise PreconditionError("gluing family fails the cocycle condition", witness=rep.failures[0])
        for a in index:
            kers = [f.ker(a, b) for b in index if b != a]
            n = alg_of(f.components[a]).dim
            try:
                partitioned_basis(SubspaceFamily(n, kers))
            except DistributivityError as exc:
                raise PreconditionError(f"kernels at component {a} are not distributive") from exc
        bad = check_kernel_condition(f, alphas)
        if bad:
            raise PreconditionError("alpha violates the kernel condition", witness=bad[0])
        for key, b in betas.items():
            dom_unit = alg_of(f.targets[frozenset(key)]).unit
            if np.any(b(dom_unit) != alg_of(f.components[key[0]]).unit):
                raise PreconditionError(f"beta{key} is not unital")
    mp = mp if mp is not None else multipullback(f)
    n_i = alg_of(f.components[i]).dim
    checkpoints = []

    def lift(a):
        comps = {i: a}
        for mm in range(len(kappa) - 1):
            t = kappa[mm + 1]
            x = betas[(t, i)](f.pi(i, t) @ a)
            for k in range(mm):
                s = kappa[k + 1]
                if debug:
                    _check_partial(f, comps, kappa, x, t, k, checkpoints)
                x = x - alphas[(t, s)](f.pi(t, s) @ x - f.pi(s, t) @ comps[s])
            comps[t] = x
        return np.concatenate([comps[j] for j in index])

    section = zeros((mp.product.algebra.dim, n_i))
    for c in range(n_i):
        e = zeros(n_i)
        e[c] = 1
        tup = lift(e)
        if not mp.contains(tup):
            raise SplittingError(f"lifted tuple of basis vector {c} is not in the pullback")
        section[:, c] = tup
    proj = mp.product.projections[index.index(i)].matrix
    s = Splitting(proj, section, Subspace.full(n_i), meta={"kappa": [str(k) for k in kappa], "piece": str(i)})
    s.unital = bool(np.all(section @ alg_of(f.components[i]).unit == mp.product.algebra.unit))
    if debug:
        s.meta["checkpoints"] = len(checkpoints)
    return s


def _check_partial(f, comps, kappa, x, t, k, sink):
    for j in range(k + 1):
        src = kappa[j]
        if np.any(f.pi(src, t) @ comps[src] != f.pi(t, src) @ x):
            raise SplittingError(f"recursion checkpoint failed at ({src}, {t}, k={k})")
    sink.append((t, k))


def product_colinear(f, section: np.ndarray, i) -> bool:
    """Colinearity of a section into the product of comodule components."""
    from .algebra import Product

    comps = [f.components[j] for j in f.index]
    prod = Product(comps)
    hop = comps[0].hopf
    big = zeros((prod.algebra.dim, prod.algebra.dim, hop.dim))
    for c, off in zip(comps, prod.offsets):
        big[off: off + c.dim, off: off + c.dim, :] = c.coaction
    bigc = ComoduleAlgebra(prod.algebra, hop, big, check=False)
    return is_colinear(section, f.components[i], bigc)
