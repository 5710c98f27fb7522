"""
Finite-dimensional Hopf algebras and right comodule algebras.

Tensor layouts:

* ``comult[a, b, c]``: coefficient of e_b (x) e_c in Delta(e_a)
* ``antipode``: matrix (codomain x domain), S(e_c) = sum_g antipode[g, c] e_g
* ``coaction[a, b, h]``: coefficient of e_b (x) h_h in Delta_P(e_a)
"""

from __future__ import annotations

from itertools import product as iproduct
from typing import Optional, Sequence

import numpy as np

from .algebra import AlgebraError, StructureAlgebra, alg_of, change_basis
from .exactla import (
    ONE,
    ZERO,
    DimensionError,
    Subspace,
    as_fraction_array,
    identity,
    inverse,
    is_zero,
    kernel,
    solve,
    unit_vector,
    vec,
    zeros,
)


class HopfError(ValueError):
    pass


class HopfAlgebra:
    """Hopf algebra structure on a StructureAlgebra, all axioms checked."""

    def __init__(self, alg: StructureAlgebra, comult, counit, antipode, check: bool = True, name: str = ""):
        self.alg = alg
        self.comult = as_fraction_array(comult)
        self.counit = as_fraction_array(counit).reshape(-1)
        self.antipode = as_fraction_array(antipode)
        self.name = name
        n = alg.dim
        if self.comult.shape != (n, n, n) or self.counit.shape != (n,) or self.antipode.shape != (n, n):
            raise DimensionError("Hopf structure maps have inconsistent shapes")
        if check:
            self._check()

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def unit(self) -> np.ndarray:
        return self.alg.unit

    def _check(self):
        n, m, d, eps, s = self.dim, self.alg.mult, self.comult, self.counit, self.antipode
        left = np.einsum("adz,dxy->axyz", d, d)
        right = np.einsum("axd,dyz->axyz", d, d)
        if np.any(left != right):
            raise HopfError("comultiplication is not coassociative")
        if np.any(np.einsum("abc,b->ac", d, eps) != identity(n)) or np.any(np.einsum("abc,c->ab", d, eps) != identity(n)):
            raise HopfError("counit laws fail")
        lhs = np.einsum("ijk,kxy->ijxy", m, d)
        rhs = np.einsum("iab,jcd,acx,bdy->ijxy", d, d, m, m, optimize=True)
        if np.any(lhs != rhs):
            raise HopfError("comultiplication is not an algebra map")
        if np.any(np.einsum("a,abc->bc", self.unit, d) != np.outer(self.unit, self.unit)):
            raise HopfError("comultiplication does not preserve the unit")
        if np.any(np.einsum("ijk,k->ij", m, eps) != np.outer(eps, eps)) or eps @ self.unit != 1:
            raise HopfError("counit is not an algebra map")
        target = np.outer(eps, self.unit)
        sl = np.einsum("abc,gb,gck->ak", d, s, m, optimize=True)
        sr = np.einsum("abc,gc,bgk->ak", d, s, m, optimize=True)
        if np.any(sl != target) or np.any(sr != target):
            raise HopfError("antipode axioms fail")

    def delta(self, h) -> np.ndarray:
        """Delta(h) as a (dim x dim) coefficient matrix."""
        return np.einsum("a,abc->bc", np.asarray(h, dtype=object), self.comult)

    def eps(self, h) -> object:
        return self.counit @ np.asarray(h, dtype=object)

    def S(self, h) -> np.ndarray:
        return self.antipode @ np.asarray(h, dtype=object)

    def is_grouplike(self, g) -> bool:
        g = np.asarray(g, dtype=object)
        return self.eps(g) == 1 and np.all(self.delta(g) == np.outer(g, g))

    def rebased(self, columns) -> "HopfAlgebra":
        """The same Hopf algebra written in a new basis (columns = new vectors)."""
        b = as_fraction_array(columns)
        binv = inverse(b)
        alg = change_basis(self.alg, b)
        comult = np.einsum("ai,abc,xb,yc->ixy", b, self.comult, binv, binv, optimize=True)
        return HopfAlgebra(alg, comult, self.counit @ b, binv @ self.antipode @ b, name=self.name)

    def integral(self) -> Optional[np.ndarray]:
        """Normalized two-sided integral as a functional, or None.

        Solves h(1) int(h(2)) = int(h) 1 = int(h(1)) h(2) with int(1) = 1.
        """
        n = self.dim
        rows, rhs = [], []
        for a in range(n):
            for k in range(n):
                # sum_{b,c} comult[a,b,c] e_b int(e_c) - int(e_a) 1, coordinate k
                r1 = self.comult[a, k, :].copy()
                r1[a] -= self.unit[k]
                r2 = self.comult[a, :, k].copy()
                r2[a] -= self.unit[k]
                rows += [r1, r2]
                rhs += [ZERO, ZERO]
        rows.append(self.unit.copy())
        rhs.append(ONE)
        return solve(np.vstack(rows), vec(rhs))

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<HopfAlgebra{label} dim={self.dim}>"


def is_cocommutative(h: HopfAlgebra) -> bool:
    return bool(np.all(h.comult == np.transpose(h.comult, (0, 2, 1))))


def _check_group_table(table) -> tuple[list[list[int]], int, list[int]]:
    t = [list(map(int, row)) for row in table]
    n = len(t)
    if n == 0 or any(len(r) != n for r in t):
        raise HopfError("group table must be a non-empty square table")
    if any(x < 0 or x >= n for r in t for x in r):
        raise HopfError("group table entries out of range")
    for a, b, c in iproduct(range(n), repeat=3):
        if t[t[a][b]][c] != t[a][t[b][c]]:
            raise HopfError(f"group table is not associative at ({a}, {b}, {c})")
    ids = [e for e in range(n) if all(t[e][x] == x and t[x][e] == x for x in range(n))]
    if not ids:
        raise HopfError("group table has no identity")
    e = ids[0]
    inv = []
    for a in range(n):
        cands = [b for b in range(n) if t[a][b] == e and t[b][a] == e]
        if not cands:
            raise HopfError(f"element {a} has no inverse")
        inv.append(cands[0])
    return t, e, inv


def function_hopf(table) -> HopfAlgebra:
    """Functions on a finite group, basis of point indicators delta_g."""
    t, e, inv = _check_group_table(table)
    n = len(t)
    mult = zeros((n, n, n))
    for g in range(n):
        mult[g, g, g] = ONE
    alg = StructureAlgebra(mult, vec([1] * n), check=False)
    comult = zeros((n, n, n))
    for x, y in iproduct(range(n), repeat=2):
        comult[t[x][y], x, y] = ONE
    counit = zeros(n)
    counit[e] = ONE
    s = zeros((n, n))
    for g in range(n):
        s[inv[g], g] = ONE
    return HopfAlgebra(alg, comult, counit, s, name="C(G)")


def group_hopf(table) -> HopfAlgebra:
    """Group algebra QG with grouplike basis."""
    t, e, inv = _check_group_table(table)
    n = len(t)
    mult = zeros((n, n, n))
    for x, y in iproduct(range(n), repeat=2):
        mult[x, y, t[x][y]] = ONE
    unit = zeros(n)
    unit[e] = ONE
    alg = StructureAlgebra(mult, unit, check=False)
    comult = zeros((n, n, n))
    for g in range(n):
        comult[g, g, g] = ONE
    s = zeros((n, n))
    for g in range(n):
        s[inv[g], g] = ONE
    return HopfAlgebra(alg, comult, vec([1] * n), s, name="QG")


def cyclic_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def symmetric_table(k: int = 3) -> list[list[int]]:
    from itertools import permutations

    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    # (p q)(x) = p(q(x))
    return [[index[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms]


def z2_hopf() -> HopfAlgebra:
    """C(Z2) in the basis {1, u} with u(+-1) = +-1."""
    pointwise = function_hopf(cyclic_table(2))
    hop = pointwise.rebased(np.array([[ONE, ONE], [ONE, -ONE]], dtype=object))
    hop.name = "C(Z2)"
    return hop


class ComoduleAlgebra:
    """Right H-comodule algebra (P, Delta_P), axioms checked at construction."""

    def __init__(self, alg: StructureAlgebra, hopf: HopfAlgebra, coaction, check: bool = True, name: str = ""):
        self.alg = alg
        self.hopf = hopf
        self.coaction = as_fraction_array(coaction)
        self.name = name
        if self.coaction.shape != (alg.dim, alg.dim, hopf.dim):
            raise DimensionError(
                f"coaction shape {self.coaction.shape}, expected {(alg.dim, alg.dim, hopf.dim)}")
        if check:
            self._check()

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def unit(self) -> np.ndarray:
        return self.alg.unit

    def _check(self):
        rho, hop, m = self.coaction, self.hopf, self.alg.mult
        left = np.einsum("abh,bcg->acgh", rho, rho)
        right = np.einsum("ach,hgk->acgk", rho, hop.comult)
        if np.any(left != right):
            raise HopfError("coaction is not coassociative")
        if np.any(np.einsum("abh,h->ab", rho, hop.counit) != identity(self.dim)):
            raise HopfError("coaction is not counital")
        lhs = np.einsum("ijk,kxh->ijxh", m, rho)
        rhs = np.einsum("iag,jbf,abx,gfh->ijxh", rho, rho, m, hop.alg.mult, optimize=True)
        if np.any(lhs != rhs):
            raise HopfError("coaction is not multiplicative")
        if np.any(self.apply(self.unit) != np.outer(self.unit, hop.unit)):
            raise HopfError("coaction does not send 1 to 1 (x) 1")

    def apply(self, x) -> np.ndarray:
        """Delta_P(x) as a (dim P x dim H) coefficient matrix."""
        return np.einsum("a,abh->bh", np.asarray(x, dtype=object), self.coaction)

    def rebase_hopf(self, hop: HopfAlgebra, columns) -> "ComoduleAlgebra":
        """Re-express the H leg after H was rebased by ``columns``."""
        binv = inverse(as_fraction_array(columns))
        return ComoduleAlgebra(self.alg, hop, np.einsum("abh,kh->abk", self.coaction, binv), name=self.name)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<ComoduleAlgebra{label} dim={self.dim} over {self.hopf!r}>"


def regular_comodule(hop: HopfAlgebra) -> ComoduleAlgebra:
    return ComoduleAlgebra(hop.alg, hop, hop.comult)


def trivial_comodule(alg: StructureAlgebra, hop: HopfAlgebra) -> ComoduleAlgebra:
    coaction = np.einsum("ab,h->abh", identity(alg.dim), hop.unit)
    return ComoduleAlgebra(alg, hop, coaction)


def coinvariant_condition_matrix(p: ComoduleAlgebra) -> np.ndarray:
    """Matrix of x -> Delta_P(x) - x (x) 1, flattened to (dim P * dim H) rows."""
    d, hd = p.dim, p.hopf.dim
    m = p.coaction - np.einsum("ab,h->abh", identity(d), p.hopf.unit)
    return np.transpose(m, (1, 2, 0)).reshape(d * hd, d)


def coinvariants(p: ComoduleAlgebra) -> Subspace:
    out = kernel(coinvariant_condition_matrix(p))
    if not p.alg.is_subalgebra(out):
        raise HopfError("coinvariants failed to form a unital subalgebra")
    return out


def is_coinvariant(p: ComoduleAlgebra, x) -> bool:
    return bool(np.all(p.apply(x) == np.outer(np.asarray(x, dtype=object), p.hopf.unit)))


def is_colinear(f, domain: Optional[ComoduleAlgebra] = None, codomain: Optional[ComoduleAlgebra] = None,
                on: Optional[Subspace] = None) -> bool:
    """Delta_cod o f = (f (x) id) o Delta_dom, optionally only on a subspace.

    ``f`` may be an AlgMorphism between comodule algebras or a bare matrix
    together with explicit domain and codomain comodules.
    """
    if hasattr(f, "matrix"):
        domain = domain if domain is not None else f.domain
        codomain = codomain if codomain is not None else f.codomain
        f = f.matrix
    if not isinstance(domain, ComoduleAlgebra) or not isinstance(codomain, ComoduleAlgebra):
        raise HopfError("colinearity needs comodule structures on both sides")
    f = np.asarray(f, dtype=object)
    vectors = on.vectors() if on is not None else [unit_vector(domain.dim, k) for k in range(domain.dim)]
    for v in vectors:
        lhs = codomain.apply(f @ v)
        rhs = f @ domain.apply(v)
        if np.any(lhs != rhs):
            return False
    return True


def comodule_closure(p: ComoduleAlgebra, seed: Subspace) -> Subspace:
    """Smallest subcomodule containing ``seed``."""
    cur = seed
    while True:
        legs = []
        for v in cur.vectors():
            dv = p.apply(v)
            legs += [dv[:, h] for h in range(p.hopf.dim)]
        nxt = Subspace(p.dim, list(cur.matrix) + legs)
        if nxt == cur:
            return cur
        cur = nxt


def sweedler(p, x) -> list[tuple[np.ndarray, np.ndarray]]:
    """Delta_P(x) as pairs (p_h, h basis vector), zero pairs dropped.

    ``p`` may be a ComoduleAlgebra or a HopfAlgebra (regular coaction).
    """
    if isinstance(p, HopfAlgebra):
        p = regular_comodule(p)
    dx = p.apply(x)
    out = []
    for h in range(p.hopf.dim):
        if not is_zero(dx[:, h]):
            e = zeros(p.hopf.dim)
            e[h] = ONE
            out.append((dx[:, h].copy(), e))
    return out


def hopf_to_json(h: HopfAlgebra) -> dict:
    from .algebra import algebra_to_json
    from .exactla import to_jsonable

    data = algebra_to_json(h.alg)
    data["comult"] = to_jsonable(h.comult)
    data["counit"] = to_jsonable(h.counit)
    data["antipode"] = to_jsonable(h.antipode)
    return data


def hopf_from_json(data: dict) -> HopfAlgebra:
    from .algebra import algebra_from_json
    from .exactla import from_jsonable

    alg = algebra_from_json(data)
    n = alg.dim
    return HopfAlgebra(alg, from_jsonable(data["comult"]).reshape(n, n, n),
                       from_jsonable(data["counit"]), from_jsonable(data["antipode"]).reshape(n, n))


def comodule_from_json(alg: StructureAlgebra, hop: HopfAlgebra, coaction) -> ComoduleAlgebra:
    from .exactla import from_jsonable

    return ComoduleAlgebra(alg, hop, from_jsonable(coaction).reshape(alg.dim, alg.dim, hop.dim))


def grouplike_elements(h: HopfAlgebra) -> list[np.ndarray]:
    """Grouplikes that are basis vectors or simple +-1 combinations (small search)."""
    out = []
    for coeffs in iproduct([-1, 0, 1], repeat=h.dim):
        g = vec(coeffs)
        if h.is_grouplike(g):
            out.append(g)
    return out


__all__ = [
    "HopfAlgebra", "ComoduleAlgebra", "HopfError", "is_cocommutative", "function_hopf", "group_hopf",
    "z2_hopf", "cyclic_table", "symmetric_table", "coinvariants", "is_colinear", "comodule_closure",
    "sweedler", "regular_comodule", "trivial_comodule", "is_coinvariant", "AlgebraError", "alg_of",
]
