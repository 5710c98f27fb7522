"""Exact gluing of principal comodule algebras over co-commutative Hopf algebras."""

from __future__ import annotations

from .exactla import Subspace, rref, solve
from .algebra import AlgMorphism, StructureAlgebra
from .hopf import ComoduleAlgebra, HopfAlgebra, z2_hopf
from .lattice import is_distributive, lattice_closure, partitioned_basis
from .pullback import canonical_gluing, check_cocycle, check_covering, multipullback
from .splitting import global_splitting, subspace_respecting_splitting
from .connection import (
    StrongConnection,
    chern_galois_projector,
    glue_two,
    solve_transfer,
    synthesize_from_covering,
    synthesize_piecewise,
    verify_connection,
)

__version__ = "0.1.0"
