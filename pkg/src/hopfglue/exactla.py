"""
Exact rational linear algebra.

Matrices and vectors are numpy object arrays holding ``fractions.Fraction``
entries, so every operation is exact. A :class:`Subspace` keeps its basis in
reduced row-echelon form, which makes subspace equality a plain comparison of
basis tuples.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    pass


def Q(x) -> Fraction:
    """Coerce an int, str ("3/4"), or Fraction to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(x)


def vec(entries: Iterable) -> np.ndarray:
    out = np.array([Q(x) for x in entries], dtype=object)
    return out.reshape(-1)


def mat(rows, ncols: Optional[int] = None) -> np.ndarray:
    """Build a 2-d object array of Fractions from nested sequences."""
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        out = np.empty(rows.shape, dtype=object)
        for idx, x in np.ndenumerate(rows):
            out[idx] = Q(x)
        return out
    rows = [list(r) for r in rows]
    if not rows:
        return zeros((0, ncols or 0))
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionError("ragged matrix rows")
    out = np.empty((len(rows), width), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[i, j] = Q(x)
    return out


def zeros(shape) -> np.ndarray:
    return np.full(shape, ZERO, dtype=object)


def identity(n: int) -> np.ndarray:
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = ONE
    return out


def unit_vector(n: int, i: int) -> np.ndarray:
    out = zeros(n)
    out[i] = ONE
    return out


def is_zero(a) -> bool:
    return all(x == 0 for x in np.asarray(a, dtype=object).flat)


def as_fraction_array(a) -> np.ndarray:
    a = np.asarray(a, dtype=object)
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = Q(x)
    return out


def rref_pivots(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of ``m`` together with its pivot columns.

    Pivots are chosen as the first nonzero column, scanning rows downward from
    the current pivot row, so the result is deterministic.
    """
    a = np.array(m, dtype=object, copy=True)
    if a.ndim != 2:
        raise DimensionError("rref expects a 2-d matrix")
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i, c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = a[r, c]
        if piv != 1:
            a[r] = a[r] / piv
        for i in range(nrows):
            if i != r and a[i, c] != 0:
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m) -> np.ndarray:
    return rref_pivots(m)[0]


def rank(m) -> int:
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return 0
    return len(rref_pivots(m)[1])


def solve(m, v) -> Optional[np.ndarray]:
    """Particular solution of ``m @ x = v`` with every free variable set to zero.

    Returns ``None`` when the system is inconsistent.
    """
    m = np.asarray(m, dtype=object)
    v = np.asarray(v, dtype=object).reshape(-1)
    nrows, ncols = m.shape
    if v.shape[0] != nrows:
        raise DimensionError(f"rhs has length {v.shape[0]}, matrix has {nrows} rows")
    aug = np.empty((nrows, ncols + 1), dtype=object)
    aug[:, :ncols] = m
    aug[:, ncols] = v
    red, pivots = rref_pivots(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = zeros(ncols)
    for row, c in enumerate(pivots):
        x[c] = red[row, ncols]
    return x


def inverse(m) -> np.ndarray:
    m = np.asarray(m, dtype=object)
    n, k = m.shape
    if n != k:
        raise DimensionError("inverse of a non-square matrix")
    aug = np.empty((n, 2 * n), dtype=object)
    aug[:, :n] = m
    aug[:, n:] = identity(n)
    red, pivots = rref_pivots(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return red[:, n:]


class Subspace:
    """A linear subspace of Q^n stored by its canonical (RREF) basis."""

    __slots__ = ("ambient_dim", "basis", "pivots", "_matrix")

    def __init__(self, ambient_dim: int, vectors: Iterable = ()):
        self.ambient_dim = int(ambient_dim)
        rows = [np.asarray(v, dtype=object).reshape(-1) for v in vectors]
        for r in rows:
            if r.shape[0] != self.ambient_dim:
                raise DimensionError(
                    f"vector of length {r.shape[0]} in ambient dimension {self.ambient_dim}")
        if rows:
            red, pivots = rref_pivots(as_fraction_array(np.vstack(rows)))
            red = red[: len(pivots)]
        else:
            red, pivots = zeros((0, self.ambient_dim)), []
        self.pivots = tuple(pivots)
        self.basis = tuple(tuple(r) for r in red)
        self._matrix = red

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, identity(n))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> np.ndarray:
        """Basis vectors as the rows of a (dim x ambient_dim) matrix."""
        return self._matrix.copy()

    def vectors(self) -> list[np.ndarray]:
        return [self._matrix[i].copy() for i in range(self.dim)]

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` in the canonical basis; raises if v is outside."""
        v = np.asarray(v, dtype=object).reshape(-1)
        coords = np.array([v[p] for p in self.pivots], dtype=object)
        back = coords @ self._matrix if self.dim else zeros(self.ambient_dim)
        if any(x != y for x, y in zip(back, v)):
            raise ValueError("vector does not lie in the subspace")
        return coords

    def coordinate_matrix(self) -> np.ndarray:
        """Matrix E with E @ v = coordinates(v) for every v in the subspace."""
        e = zeros((self.dim, self.ambient_dim))
        for i, p in enumerate(self.pivots):
            e[i, p] = ONE
        return e

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=object).reshape(-1)
        if self.dim == 0:
            return is_zero(v)
        coords = np.array([v[p] for p in self.pivots], dtype=object)
        return all(x == y for x, y in zip(coords @ self._matrix, v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        _check_same_ambient(self, other)
        return all(other.contains(v) for v in self._matrix)

    __le__ = issubspace

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __repr__(self) -> str:
        rows = ["(" + ", ".join(str(x) for x in r) + ")" for r in self.basis]
        return f"Subspace({self.ambient_dim}, [{', '.join(rows)}])"

    def image(self, m) -> "Subspace":
        """Image of this subspace under the matrix ``m``."""
        m = np.asarray(m, dtype=object)
        if m.shape[1] != self.ambient_dim:
            raise DimensionError("matrix does not act on this subspace")
        if self.dim == 0:
            return Subspace(m.shape[0])
        return Subspace(m.shape[0], (m @ self._matrix.T).T)

    def preimage(self, m) -> "Subspace":
        """{x : m @ x in self}."""
        m = np.asarray(m, dtype=object)
        if m.shape[0] != self.ambient_dim:
            raise DimensionError("matrix does not map into this subspace's ambient space")
        # x with m x in span(B)  <=>  (I - proj) m x = 0 where proj picks B-coordinates
        comp = annihilator(self)
        if comp.shape[0] == 0:
            return Subspace.full(m.shape[1])
        return kernel(comp @ m)


def _check_same_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def kernel(m) -> Subspace:
    """Right null space of ``m`` as a canonical Subspace."""
    m = np.asarray(m, dtype=object)
    nrows, ncols = m.shape
    if nrows == 0:
        return Subspace.full(ncols)
    red, pivots = rref_pivots(m)
    free = [c for c in range(ncols) if c not in set(pivots)]
    vectors = []
    for f in free:
        v = zeros(ncols)
        v[f] = ONE
        for row, c in enumerate(pivots):
            v[c] = -red[row, f]
        vectors.append(v)
    return Subspace(ncols, vectors)


def image(m) -> Subspace:
    """Column space of ``m``."""
    m = np.asarray(m, dtype=object)
    return Subspace(m.shape[0], m.T)


def annihilator(sub: Subspace) -> np.ndarray:
    """Rows spanning the functionals that vanish on ``sub``."""
    if sub.dim == 0:
        return identity(sub.ambient_dim)
    return kernel(sub.matrix).matrix


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    return Subspace(a.ambient_dim, list(a.matrix) + list(b.matrix))


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the kernel of [A^T | -B^T]."""
    _check_same_ambient(a, b)
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(n)
    stacked = np.hstack([a.matrix.T, -b.matrix.T])
    ker = kernel(stacked)
    vectors = [k[: a.dim] @ a.matrix for k in ker.matrix]
    return Subspace(n, vectors)


def sum_all(spaces: Sequence[Subspace], ambient_dim: int) -> Subspace:
    rows = [v for s in spaces for v in s.matrix]
    return Subspace(ambient_dim, rows)


def intersect_all(spaces: Sequence[Subspace], ambient_dim: int) -> Subspace:
    out = Subspace.full(ambient_dim)
    for s in spaces:
        out = intersect(out, s)
    return out


def complement_in(sub: Subspace, within: Subspace) -> Subspace:
    """A direct complement of ``sub`` inside ``within``.

    Sweeps the canonical basis of ``within`` and keeps each vector that is
    independent of ``sub`` and of the vectors kept so far.
    """
    _check_same_ambient(sub, within)
    if not sub.issubspace(within):
        raise ValueError("complement_in: sub is not contained in within")
    kept = []
    acc = sub
    for v in within.matrix:
        if not acc.contains(v):
            kept.append(v)
            acc = Subspace(sub.ambient_dim, list(acc.matrix) + [v])
        if acc.dim == within.dim:
            break
    return Subspace(sub.ambient_dim, kept)


def complement_vectors(sub: Subspace, within: Subspace) -> list[np.ndarray]:
    """Same sweep as :func:`complement_in` but returns the raw kept vectors.

    Used where a specific (non-RREF) set of representatives is wanted, e.g.
    quotient bases built from canonical basis vectors of the ambient space.
    """
    _check_same_ambient(sub, within)
    kept = []
    acc = sub
    for v in within.matrix:
        if not acc.contains(v):
            kept.append(v)
            acc = Subspace(sub.ambient_dim, list(acc.matrix) + [v])
        if acc.dim == within.dim:
            break
    return kept


def map_from_values(domain_vectors, values, dim_in: int, dim_out: int) -> np.ndarray:
    """A matrix M with M @ v_i = w_i; the v_i must be linearly independent.

    Outside span(v_i) the matrix is the one obtained from the canonical
    coordinates of that span, so the result is deterministic.
    """
    vs = [np.asarray(v, dtype=object).reshape(-1) for v in domain_vectors]
    ws = [np.asarray(w, dtype=object).reshape(-1) for w in values]
    if not vs:
        return zeros((dim_out, dim_in))
    V = np.vstack(vs)
    if rank(V) != len(vs):
        raise ValueError("map_from_values: domain vectors are dependent")
    span = Subspace(dim_in, vs)
    # express the canonical basis in terms of the v_i, then push the values through
    coeffs = np.vstack([solve(V.T, b) for b in span.matrix])
    W = np.vstack(ws)
    images_of_basis = coeffs @ W  # (dim x dim_out)
    return images_of_basis.T @ span.coordinate_matrix()


def fmt(x: Fraction) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_jsonable(a):
    """Nested lists of strings for Fraction arrays (exact round trip)."""
    a = np.asarray(a, dtype=object)
    if a.ndim == 0:
        return fmt(a.item())
    return [to_jsonable(x) for x in a]


def from_jsonable(data) -> np.ndarray:
    arr = np.array(data, dtype=object)
    return as_fraction_array(arr)
