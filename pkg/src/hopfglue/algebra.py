"""
Finite-dimensional unital associative algebras given by structure constants.

``mult[i, j, k]`` is the coefficient of e_k in e_i e_j. Linear maps are stored
as (codomain dim x domain dim) matrices acting on coordinate column vectors.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .exactla import (
    ONE,
    DimensionError,
    Subspace,
    as_fraction_array,
    complement_vectors,
    identity,
    image,
    inverse,
    kernel,
    rank,
    unit_vector,
    zeros,
)


class AlgebraError(ValueError):
    pass


def alg_of(x) -> "StructureAlgebra":
    """The underlying StructureAlgebra of an algebra or comodule algebra."""
    return x if isinstance(x, StructureAlgebra) else x.alg


class StructureAlgebra:
    """Unital associative algebra on Q^dim."""

    def __init__(self, mult, unit, check: bool = True, name: str = ""):
        self.mult = as_fraction_array(mult)
        self.unit = as_fraction_array(unit).reshape(-1)
        self.name = name
        n = self.unit.shape[0]
        if self.mult.shape != (n, n, n):
            raise DimensionError(f"structure constants have shape {self.mult.shape}, expected {(n, n, n)}")
        if check:
            self._check()

    @property
    def dim(self) -> int:
        return self.unit.shape[0]

    def _check(self):
        n = self.dim
        if n == 0:
            return
        left = np.einsum("ijm,mkl->ijkl", self.mult, self.mult, optimize=True)
        right = np.einsum("jkm,iml->ijkl", self.mult, self.mult, optimize=True)
        bad = np.argwhere(left != right)
        if len(bad):
            i, j, k, _ = bad[0]
            raise AlgebraError(f"not associative on basis triple ({i}, {j}, {k})")
        lu = np.einsum("i,ijk->jk", self.unit, self.mult)
        ru = np.einsum("j,ijk->ik", self.unit, self.mult)
        if not (np.all(lu == identity(n)) and np.all(ru == identity(n))):
            raise AlgebraError("unit vector is not a two-sided unit")

    def mul(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(x, dtype=object), np.asarray(y, dtype=object), self.mult)

    def power(self, x, k: int) -> np.ndarray:
        out = self.unit.copy()
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of y -> x y."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=object), self.mult)

    def right_matrix(self, x) -> np.ndarray:
        """Matrix of y -> y x."""
        return np.einsum("j,ijk->ki", np.asarray(x, dtype=object), self.mult)

    def basis_vector(self, i: int) -> np.ndarray:
        return unit_vector(self.dim, i)

    def is_subalgebra(self, sub: Subspace) -> bool:
        if not sub.contains(self.unit):
            return False
        vs = sub.vectors()
        return all(sub.contains(self.mul(a, b)) for a in vs for b in vs)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<StructureAlgebra{label} dim={self.dim}>"


class AlgMorphism:
    """Unital algebra homomorphism, verified on all basis pairs."""

    def __init__(self, domain, codomain, matrix, check: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.matrix = as_fraction_array(matrix)
        d, c = alg_of(domain), alg_of(codomain)
        if self.matrix.shape != (c.dim, d.dim):
            raise DimensionError(f"morphism matrix has shape {self.matrix.shape}, expected {(c.dim, d.dim)}")
        if check:
            self._check()

    def _check(self):
        d, c = alg_of(self.domain), alg_of(self.codomain)
        f = self.matrix
        if any(x != y for x, y in zip(f @ d.unit, c.unit)):
            raise AlgebraError("morphism does not preserve the unit")
        if d.dim == 0:
            return
        lhs = np.einsum("ijk,lk->ijl", d.mult, f)
        rhs = np.einsum("ai,bj,abl->ijl", f, f, c.mult, optimize=True)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            i, j, _ = bad[0]
            raise AlgebraError(f"morphism is not multiplicative on basis pair ({i}, {j})")

    def __call__(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=object)

    def compose(self, inner: "AlgMorphism") -> "AlgMorphism":
        """self after inner."""
        return AlgMorphism(inner.domain, self.codomain, self.matrix @ inner.matrix)

    def __repr__(self) -> str:
        return f"<AlgMorphism {alg_of(self.domain).dim} -> {alg_of(self.codomain).dim}>"


class Ideal:
    """Two-sided ideal, closure under basis multiplication checked eagerly."""

    def __init__(self, alg: StructureAlgebra, space: Subspace):
        alg = alg_of(alg)
        if space.ambient_dim != alg.dim:
            raise DimensionError("ideal subspace lives in the wrong ambient space")
        for v in space.vectors():
            for k in range(alg.dim):
                e = alg.basis_vector(k)
                if not space.contains(alg.mul(e, v)) or not space.contains(alg.mul(v, e)):
                    raise AlgebraError(f"subspace is not a two-sided ideal (fails against e_{k})")
        self.alg = alg
        self.space = space

    @property
    def dim(self) -> int:
        return self.space.dim

    def __repr__(self) -> str:
        return f"Ideal(dim={self.dim} in {self.alg.dim})"


def identity_morphism(a) -> AlgMorphism:
    return AlgMorphism(a, a, identity(alg_of(a).dim), check=False)


def is_surjective(f: AlgMorphism) -> bool:
    return rank(f.matrix) == alg_of(f.codomain).dim


def morphism_kernel(f: AlgMorphism) -> Ideal:
    return Ideal(alg_of(f.domain), kernel(f.matrix))


class Quotient:
    """Quotient algebra A/I with projection and a canonical linear section.

    Representatives are the standard basis vectors of A not already spanned
    by I, taken in index order.
    """

    def __init__(self, a: StructureAlgebra, ideal: Ideal):
        a = alg_of(a)
        n = a.dim
        reps = complement_vectors(ideal.space, Subspace.full(n))
        q = len(reps)
        basis = np.empty((n, n), dtype=object)
        for c, v in enumerate(reps):
            basis[:, c] = v
        for c, v in enumerate(ideal.space.vectors()):
            basis[:, q + c] = v
        coords = inverse(basis) if n else zeros((0, 0))
        self.projection_matrix = coords[:q]
        self.section_matrix = np.empty((n, q), dtype=object)
        for c, v in enumerate(reps):
            self.section_matrix[:, c] = v
        mult = zeros((q, q, q))
        for r in range(q):
            for s in range(q):
                mult[r, s] = self.projection_matrix @ a.mul(reps[r], reps[s])
        unit = self.projection_matrix @ a.unit
        self.algebra = StructureAlgebra(mult, unit, check=False)
        self.projection = AlgMorphism(a, self.algebra, self.projection_matrix, check=False)
        self.ideal = ideal


def quotient(a: StructureAlgebra, ideal: Ideal) -> tuple[StructureAlgebra, AlgMorphism]:
    """A/I together with the canonical surjection."""
    q = Quotient(a, ideal)
    return q.algebra, q.projection


class Product:
    """Direct product with component projections and linear injections."""

    def __init__(self, algebras: Sequence):
        algebras = [alg_of(x) for x in algebras]
        if not algebras:
            raise AlgebraError("direct product of an empty list")
        dims = [x.dim for x in algebras]
        total = sum(dims)
        offsets = np.cumsum([0] + dims)
        mult = zeros((total, total, total))
        unit = zeros(total)
        for a, off in zip(algebras, offsets):
            sl = slice(off, off + a.dim)
            mult[sl, sl, sl] = a.mult
            unit[sl] = a.unit
        self.algebra = StructureAlgebra(mult, unit, check=False)
        self.factors = algebras
        self.offsets = [int(o) for o in offsets]
        self.projections = []
        self.injections = []
        for a, off in zip(algebras, offsets):
            p = zeros((a.dim, total))
            p[:, off: off + a.dim] = identity(a.dim)
            self.projections.append(AlgMorphism(self.algebra, a, p, check=False))
            self.injections.append(p.T.copy())

    def block(self, x, i: int) -> np.ndarray:
        return self.projections[i].matrix @ np.asarray(x, dtype=object)

    def join(self, parts) -> np.ndarray:
        return np.concatenate([np.asarray(p, dtype=object).reshape(-1) for p in parts])


def direct_product(algebras: Sequence) -> tuple[StructureAlgebra, list[AlgMorphism]]:
    p = Product(algebras)
    return p.algebra, p.projections


class Subalgebra:
    """A unital subalgebra re-expressed on its own canonical basis."""

    def __init__(self, a: StructureAlgebra, sub: Subspace):
        a = alg_of(a)
        if not a.is_subalgebra(sub):
            raise AlgebraError("subspace is not a unital subalgebra")
        vs = sub.vectors()
        d = len(vs)
        mult = zeros((d, d, d))
        for i in range(d):
            for j in range(d):
                mult[i, j] = sub.coordinates(a.mul(vs[i], vs[j]))
        self.algebra = StructureAlgebra(mult, sub.coordinates(a.unit), check=False)
        self.space = sub
        self.parent = a
        # columns are the basis vectors, so inclusion @ coords lands in the parent
        self.inclusion = sub.matrix.T.copy() if d else zeros((a.dim, 0))

    def coordinates(self, v) -> np.ndarray:
        return self.space.coordinates(v)


def subalgebra_restrict(f: AlgMorphism, sub: Subspace) -> AlgMorphism:
    """Restriction of f to a unital subalgebra, onto its image subalgebra."""
    dom = Subalgebra(alg_of(f.domain), sub)
    img_space = sub.image(f.matrix)
    cod = Subalgebra(alg_of(f.codomain), img_space)
    m = zeros((cod.algebra.dim, dom.algebra.dim))
    for c, v in enumerate(sub.vectors()):
        m[:, c] = img_space.coordinates(f.matrix @ v)
    out = AlgMorphism(dom.algebra, cod.algebra, m)
    out.domain_embedding = dom
    out.codomain_embedding = cod
    return out


def change_basis(a: StructureAlgebra, columns) -> StructureAlgebra:
    """Same algebra written in the basis given by the columns of ``columns``."""
    b = as_fraction_array(columns)
    binv = inverse(b)
    mult = np.einsum("ai,bj,abc,kc->ijk", b, b, a.mult, binv, optimize=True)
    return StructureAlgebra(mult, binv @ a.unit, check=False)


def function_algebra(npoints: int) -> StructureAlgebra:
    """Q-valued functions on a finite set, point-indicator basis."""
    mult = zeros((npoints, npoints, npoints))
    for i in range(npoints):
        mult[i, i, i] = ONE
    unit = np.array([ONE] * npoints, dtype=object)
    return StructureAlgebra(mult, unit, check=False)


def restriction(npoints: int, keep: Sequence[int], domain=None, codomain=None) -> AlgMorphism:
    """Restriction of functions to the listed points (in the listed order)."""
    m = zeros((len(keep), npoints))
    for r, p in enumerate(keep):
        m[r, p] = ONE
    domain = domain if domain is not None else function_algebra(npoints)
    codomain = codomain if codomain is not None else function_algebra(len(keep))
    return AlgMorphism(domain, codomain, m)


def algebra_from_json(data: dict) -> StructureAlgebra:
    from .exactla import from_jsonable

    mult = from_jsonable(data["mult"])
    unit = from_jsonable(data["unit"])
    n = int(data.get("dim", unit.shape[0]))
    if unit.shape[0] != n:
        raise DimensionError("unit length disagrees with dim")
    return StructureAlgebra(mult.reshape(n, n, n) if n else zeros((0, 0, 0)), unit)


def algebra_to_json(a: StructureAlgebra) -> dict:
    from .exactla import to_jsonable

    return {"dim": a.dim, "mult": to_jsonable(a.mult), "unit": to_jsonable(a.unit)}


def image_subspace(f: AlgMorphism) -> Subspace:
    return image(f.matrix)
