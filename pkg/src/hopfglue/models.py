"""
Reference instances built from free Z2-sets.

E1: H = C(Z2) on the basis {1, u}; P = functions on Z2 x {0, 1, 2} with
(k, o).g = (k + g, o); the pieces P_i are functions on the two orbits other
than o = i, and each carries the connection l_i(u) = tau_i (x) tau_i with
tau_i(k, o) = (-1)^k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgMorphism, function_algebra, restriction
from .exactla import ONE, identity, unit_vector, vec, zeros
from .hopf import ComoduleAlgebra, HopfAlgebra, z2_hopf
from .pullback import CoveringFamily, GluingFamily, _key, canonical_gluing


def point_index(k: int, orbit: int) -> int:
    return 2 * orbit + k


def free_z2_comodule(norbits: int, hop: HopfAlgebra | None = None) -> ComoduleAlgebra:
    """Functions on Z2 x {0..norbits-1}; rho(f)(x, g) = f(x.g) with H on {1, u}.

    On point indicators: rho(delta_(k,o)) = 1/2 (delta_(k,o) + delta_(k+1,o)) (x) 1
    + 1/2 (delta_(k,o) - delta_(k+1,o)) (x) u.
    """
    hop = hop or z2_hopf()
    n = 2 * norbits
    co = zeros((n, n, 2))
    half = ONE / 2
    for o in range(norbits):
        for k in range(2):
            a, b = point_index(k, o), point_index(1 - k, o)
            co[a, a, 0] += half
            co[a, b, 0] += half
            co[a, a, 1] += half
            co[a, b, 1] -= half
    return ComoduleAlgebra(function_algebra(n), hop, co, name=f"C(Z2 x {norbits})")


def tau(norbits: int) -> np.ndarray:
    """(-1)^k on every orbit."""
    return vec([1 if k == 0 else -1 for o in range(norbits) for k in range(2)])


def orbit_restriction(src: ComoduleAlgebra, piece: ComoduleAlgebra, orbits) -> AlgMorphism:
    keep = [point_index(k, o) for o in orbits for k in range(2)]
    m = zeros((len(keep), src.dim))
    for r, p in enumerate(keep):
        m[r, p] = ONE
    return AlgMorphism(src, piece, m)


def piece_connection_tensor(piece: ComoduleAlgebra) -> np.ndarray:
    """l(1) = 1 (x) 1, l(u) = tau (x) tau, as an array (h, a, b)."""
    t = tau(piece.dim // 2)
    out = zeros((2, piece.dim, piece.dim))
    out[0] = np.outer(piece.unit, piece.unit)
    out[1] = np.outer(t, t)
    return out


@dataclass
class E1:
    hopf: HopfAlgebra
    P: ComoduleAlgebra
    pieces: dict
    covering: CoveringFamily
    orbits: dict

    def connection(self, i):
        from .connection import StrongConnection

        return StrongConnection(self.hopf, self.pieces[i], piece_connection_tensor(self.pieces[i]))

    def connections(self) -> dict:
        return {i: self.connection(i) for i in self.pieces}

    def gluing(self) -> GluingFamily:
        return canonical_gluing(self.covering)


def e1(norbits: int = 3) -> E1:
    hop = z2_hopf()
    P = free_z2_comodule(norbits, hop)
    pieces, maps, orbits = {}, {}, {}
    for i in range(norbits):
        orbs = [o for o in range(norbits) if o != i]
        piece = free_z2_comodule(len(orbs), hop)
        pieces[i] = piece
        orbits[i] = orbs
        maps[i] = orbit_restriction(P, piece, orbs)
    return E1(hop, P, pieces, CoveringFamily(P, maps), orbits)


def e1_duplicated_kernel() -> CoveringFamily:
    """Every map is pi_0, so the kernels all coincide and intersect nontrivially."""
    m = e1()
    return CoveringFamily(m.P, {i: m.covering.maps[0] for i in range(3)})


def e1_two_piece() -> E1:
    """E1 covered by pi_0 and pi_1 only; still a covering of P."""
    m = e1()
    keep = (0, 1)
    return E1(m.hopf, m.P, {i: m.pieces[i] for i in keep},
              CoveringFamily(m.P, {i: m.covering.maps[i] for i in keep}), {i: m.orbits[i] for i in keep})


def triple_overlap(twisted: bool = False) -> GluingFamily:
    """Three pieces sharing one common orbit, so triple overlaps are nonzero.

    Pieces are functions on orbits {i, 3} of Z2 x {0, 1, 2, 3}, glued along the
    restriction to orbit 3. With ``twisted`` the map pi^0_1 is followed by the
    sign flip u -> -u on the overlap (the swap of its two points).
    """
    hop = z2_hopf()
    P = free_z2_comodule(4, hop)
    maps = {i: orbit_restriction(P, free_z2_comodule(2, hop), [i, 3]) for i in range(3)}
    fam = canonical_gluing(CoveringFamily(P, maps))
    if not twisted:
        return fam
    tgt = fam.targets[_key(0, 1)]
    swap = zeros((2, 2))
    swap[0, 1] = swap[1, 0] = ONE
    f = fam.maps[(0, 1)]
    new = dict(fam.maps)
    new[(0, 1)] = AlgMorphism(f.domain, tgt, swap @ f.matrix)
    return GluingFamily(fam.index, fam.components, fam.targets, new)


def two_point_gluing() -> GluingFamily:
    """Two copies of functions on two points glued by evaluation at one point."""
    a = function_algebra(2)
    ev = restriction(2, [1], domain=a)
    tgt = ev.codomain
    ev2 = AlgMorphism(a, tgt, ev.matrix)
    return GluingFamily((0, 1), {0: a, 1: a}, {_key(0, 1): tgt}, {(0, 1): ev, (1, 0): ev2})


__all__ = ["e1", "E1", "e1_duplicated_kernel", "e1_two_piece", "triple_overlap", "free_z2_comodule", "tau",
           "piece_connection_tensor", "two_point_gluing", "point_index"]
