"""
Brute-force pointwise model of the free Z2-set Z2 x {0, 1, 2}.

Functions are dicts from points (k, o) to Fractions. Nothing here imports the
package; tests compare library output against these hand-rolled evaluations.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

ORBITS = (0, 1, 2)
POINTS = [(k, o) for o in ORBITS for k in (0, 1)]
GROUP = (0, 1)


def act(x, g):
    """(k, o).g = (k + g mod 2, o)."""
    return ((x[0] + g) % 2, x[1])


def u_of(g) -> int:
    """u(+1) = 1, u(-1) = -1 with g = 0 the identity."""
    return 1 if g == 0 else -1


def point_index(x) -> int:
    return 2 * x[1] + x[0]


def function_from_vector(v, points=POINTS) -> dict:
    return {x: Fraction(v[point_index_local(x, points)]) for x in points}


def point_index_local(x, points) -> int:
    return points.index(x)


def tau(points=POINTS) -> dict:
    return {x: Fraction((-1) ** x[0]) for x in points}


def is_coinvariant(f: dict) -> bool:
    return all(f[x] == f[act(x, 1)] for x in f)


def coinvariant_dimension(points=POINTS) -> int:
    return len({x[1] for x in points})


def transforms_by_u(f: dict) -> bool:
    """rho(f) = f (x) u, i.e. f(x.g) = u(g) f(x)."""
    return all(f[act(x, g)] == u_of(g) * f[x] for x in f for g in GROUP)


def connection_from_tensor(tensor, points=POINTS) -> dict:
    """l(h)(x, y) for h in {'1', 'u'} from an array tensor[h, a, b] on point indicators."""
    return {
        h: {(x, y): Fraction(tensor[hi][points.index(x)][points.index(y)]) for x, y in product(points, points)}
        for hi, h in enumerate(("1", "u"))
    }


def check_connection(ell: dict, points=POINTS) -> dict:
    """Pointwise strong-connection axioms for a free Z2-action.

    unitality: l(1)(x, y) = 1
    collapse: l(h)(x, x) = h(e)  (1 and u both evaluate to 1 at e)
    right colinearity: l(u)(x, y.g) = u(g) l(u)(x, y); l(1) invariant
    left colinearity: l(u)(x.g, y) = u(g) l(u)(x, y); l(1) invariant
    """
    out = {"unitality": True, "collapse": True, "right": True, "left": True}
    for x, y in product(points, points):
        if ell["1"][(x, y)] != 1:
            out["unitality"] = False
    for x in points:
        if ell["1"][(x, x)] != 1 or ell["u"][(x, x)] != 1:
            out["collapse"] = False
    for x, y in product(points, points):
        for g in GROUP:
            for h, sign in (("1", 1), ("u", u_of(g))):
                if ell[h][(x, act(y, g))] != sign * ell[h][(x, y)]:
                    out["right"] = False
                if ell[h][(act(x, g), y)] != sign * ell[h][(x, y)]:
                    out["left"] = False
    return out


def projector_entries(ell_u: dict, terms_l, terms_r):
    """p_ij(x) = r_i(x) l_j(x) from explicit leg functions."""
    n = len(terms_l)
    return [[{x: terms_r[i][x] * terms_l[j][x] for x in POINTS} for j in range(n)] for i in range(n)]


def is_idempotent(p) -> bool:
    n = len(p)
    for i, j in product(range(n), range(n)):
        for x in POINTS:
            if sum(p[i][k][x] * p[k][j][x] for k in range(n)) != p[i][j][x]:
                return False
    return True


def coordinate_family_is_distributive(sets) -> bool:
    """Coordinate subspaces correspond to index sets; + and & are union and intersection."""
    sets = [frozenset(s) for s in sets]
    closure = set(sets)
    while True:
        new = {a | b for a in closure for b in closure} | {a & b for a in closure for b in closure}
        if new <= closure:
            break
        closure |= new
    return all(a & (b | c) == (a & b) | (a & c) for a in closure for b in closure for c in closure)
