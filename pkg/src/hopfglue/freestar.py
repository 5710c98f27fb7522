"""
Symbolic model of the pullback quantum sphere over C(Z2).

Elements of the Toeplitz algebra are noncommutative polynomials in s, s*,
phi1, phi2 modulo s*s = 1. Every letter is odd for the Z2-grading (s -> -s,
phi_i odd). A component T (x) C(Z2) is a pair (a, b) meaning a (x) 1 + b (x) u,
and an element of the triple pullback is a Tup of three such pairs.

Symbols of phi1, phi2 land in commutative algebras built from C(Z2) (u^2 = 1)
and Q[t], where t stands for the identity function on the interval.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .connection import DependentLegsError, Tup, glue_two_grouplike, synthesize_grouplike
from .exactla import rank, solve

ALPHABET = ("s", "s*", "phi1", "phi2")


class SymbolError(ValueError):
    pass


class CutoffError(ValueError):
    pass


# -- noncommutative polynomials ------------------------------------------

def nf_word(word: Sequence[str]) -> tuple:
    """Cancel every s* s pair; a single left-to-right stack pass reaches the fixpoint."""
    out: list = []
    for letter in word:
        if letter not in ALPHABET:
            raise SymbolError(f"unknown letter {letter!r}")
        if letter == "s" and out and out[-1] == "s*":
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def nf_word_random(word: Sequence[str], rng: random.Random) -> tuple:
    """Same normal form, rewriting a randomly chosen s* s occurrence each step."""
    w = list(word)
    while True:
        spots = [k for k in range(len(w) - 1) if w[k] == "s*" and w[k + 1] == "s"]
        if not spots:
            return tuple(w)
        k = rng.choice(spots)
        del w[k:k + 2]


def _word_key(w: tuple):
    return (len(w), w)


class NCPoly:
    """Finite Q-combination of normal-form words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc: dict = {}
        for w, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            w = nf_word(w)
            acc[w] = acc.get(w, Fraction(0)) + c
        self.terms = {w: c for w, c in acc.items() if c != 0}

    @classmethod
    def const(cls, c) -> "NCPoly":
        return cls({(): c})

    @classmethod
    def gen(cls, letter: str) -> "NCPoly":
        return cls({(letter,): 1})

    @classmethod
    def word(cls, *letters: str) -> "NCPoly":
        return cls({tuple(letters): 1})

    def _coerce(self, other) -> "NCPoly":
        return other if isinstance(other, NCPoly) else NCPoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, Fraction(0)) + c
        return NCPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = nf_word(w1 + w2)
                t[w] = t.get(w, Fraction(0)) + c1 * c2
        return NCPoly(t)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __pow__(self, k: int):
        out = NCPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            other = NCPoly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {len(w) % 2 for w in self.terms}

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda wc: _word_key(wc[0]))

    def to_json(self) -> dict:
        return {"terms": [{"word": " ".join(w), "coeff": str(c)} for w, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, d: dict) -> "NCPoly":
        return cls({tuple(t["word"].split()): Fraction(t["coeff"]) for t in d["terms"]})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            body = " ".join(w) if w else "1"
            parts.append(body if c == 1 and w else f"{c}*{body}" if w else str(c))
        return " + ".join(parts)


def nf(p: NCPoly) -> NCPoly:
    """Normal form; NCPoly keeps its terms reduced, so this re-reduces a copy."""
    return NCPoly(p.terms)


ONE_P = NCPoly.const(1)
ZERO_P = NCPoly()
S, SSTAR = NCPoly.gen("s"), NCPoly.gen("s*")
PHI1, PHI2 = NCPoly.gen("phi1"), NCPoly.gen("phi2")


# -- T (x) C(Z2) ------------------------------------------------------------

class GradedTensor:
    """a (x) 1 + b (x) u with u^2 = 1."""

    __slots__ = ("a", "b")

    def __init__(self, a=None, b=None):
        self.a = a if isinstance(a, NCPoly) else NCPoly.const(a or 0)
        self.b = b if isinstance(b, NCPoly) else NCPoly.const(b or 0)

    def _coerce(self, other):
        if isinstance(other, GradedTensor):
            return other
        return GradedTensor(other if isinstance(other, NCPoly) else NCPoly.const(other), ZERO_P)

    def __add__(self, other):
        o = self._coerce(other)
        return GradedTensor(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return GradedTensor(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return GradedTensor(-self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        return GradedTensor(self.a * o.a + self.b * o.b, self.a * o.b + self.b * o.a)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __eq__(self, other):
        o = self._coerce(other)
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def degrees(self) -> set:
        """Z2-degrees present under the diagonal coaction."""
        return self.a.degrees() | {(d + 1) % 2 for d in self.b.degrees()}

    def is_homogeneous(self, d: int) -> bool:
        return self.degrees() <= {d}

    def to_json(self) -> dict:
        return {"1": self.a.to_json(), "u": self.b.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "GradedTensor":
        return cls(NCPoly.from_json(d["1"]), NCPoly.from_json(d["u"]))

    def __repr__(self):
        parts = []
        if not self.a.is_zero():
            parts.append(f"({self.a})(x)1")
        if not self.b.is_zero():
            parts.append(f"({self.b})(x)u")
        return " + ".join(parts) or "0"


def gt1(p) -> GradedTensor:
    return GradedTensor(p, ZERO_P)


def gtu(p) -> GradedTensor:
    return GradedTensor(ZERO_P, p)


ONE_G = gt1(ONE_P)
U_G = gtu(ONE_P)
ZERO_G = GradedTensor()


def unit_tuple(n: int = 3) -> Tup:
    return Tup([ONE_G] * n)


def tup_degrees(x: Tup) -> set:
    return set().union(*(p.degrees() for p in x.parts))


# -- small parser for literals such as "(1-phi2^2) phi1 @u" --------------------

_TOKEN = re.compile(r"\s*(phi1|phi2|s\*|s|\d+(?:/\d+)?|[()+\-*^])")


def parse_poly(text: str) -> NCPoly:
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SymbolError(f"cannot parse {text[pos:]!r}")
        toks.append(m.group(1))
        pos = m.end()
    k = 0

    def peek():
        return toks[k] if k < len(toks) else None

    def take():
        nonlocal k
        k += 1
        return toks[k - 1]

    def expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        acc = term() * sign
        while peek() in ("+", "-"):
            op = take()
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = factor()
        while peek() is not None and peek() not in ("+", "-", ")"):
            if peek() == "*":
                take()
            acc = acc * factor()
        return acc

    def factor():
        base = atom()
        if peek() == "^":
            take()
            base = base ** int(take())
        return base

    def atom():
        t = take()
        if t == "(":
            e = expr()
            if take() != ")":
                raise SymbolError("unbalanced parentheses")
            return e
        if t in ALPHABET:
            return NCPoly.gen(t)
        if t is not None and t[0].isdigit():
            return NCPoly.const(Fraction(t))
        raise SymbolError(f"unexpected token {t!r}")

    out = expr()
    if k != len(toks):
        raise SymbolError(f"trailing input in {text!r}")
    return out


def parse_gt(text: str) -> GradedTensor:
    """'expr @1', 'expr @u', sums of those joined by ';', or '0'."""
    out = GradedTensor()
    for part in text.split(";"):
        part = part.strip()
        if part == "0":
            continue
        body, _, slot = part.rpartition("@")
        p = parse_poly(body)
        out = out + (gt1(p) if slot.strip() == "1" else gtu(p))
    return out


def parse_tup(items: Sequence[str]) -> Tup:
    return Tup(parse_gt(x) for x in items)


# -- commutative symbol targets ----------------------------------------------

class TargetElem:
    """Element of a tensor product of copies of C(Z2) and Q[t].

    ``layout`` names each slot "Z2" or "I"; terms map exponent tuples to
    coefficients, with Z2 exponents taken mod 2.
    """

    __slots__ = ("layout", "terms")

    def __init__(self, layout: tuple, terms=None):
        self.layout = tuple(layout)
        acc: dict = {}
        for e, c in (terms or {}).items():
            e = tuple(x % 2 if kind == "Z2" else x for x, kind in zip(e, self.layout))
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        self.terms = {e: c for e, c in acc.items() if c != 0}

    @classmethod
    def one(cls, layout) -> "TargetElem":
        return cls(layout, {(0,) * len(layout): 1})

    def _check(self, other):
        if self.layout != other.layout:
            raise SymbolError(f"layout mismatch {self.layout} vs {other.layout}")

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return TargetElem(self.layout, t)

    def __neg__(self):
        return TargetElem(self.layout, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TargetElem":
        return TargetElem(self.layout, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return TargetElem(self.layout, t)

    def tensor(self, other: "TargetElem") -> "TargetElem":
        t = {e1 + e2: c1 * c2 for e1, c1 in self.terms.items() for e2, c2 in other.terms.items()}
        return TargetElem(self.layout + other.layout, t)

    def permute(self, perm: Sequence[int]) -> "TargetElem":
        """Output slot k holds input slot perm[k]."""
        return TargetElem(tuple(self.layout[p] for p in perm),
                          {tuple(e[p] for p in perm): c for e, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, TargetElem) and self.layout == other.layout and self.terms == other.terms

    def __hash__(self):
        return hash((self.layout, frozenset(self.terms.items())))

    def __repr__(self):
        return f"TargetElem({self.layout}, {self.terms})"


def z2_u(layout, slot) -> TargetElem:
    e = [0] * len(layout)
    e[slot] = 1
    return TargetElem(layout, {tuple(e): 1})


@dataclass(frozen=True)
class SymbolImageTable:
    """Images of phi1, phi2 under sigma_1 (into C(Z2) (x) Q[t]) and sigma_2 (into Q[t] (x) C(Z2))."""

    sigma1: dict
    sigma2: dict

    @classmethod
    def default(cls) -> "SymbolImageTable":
        l1, l2 = ("Z2", "I"), ("I", "Z2")
        return cls(
            sigma1={"phi1": z2_u(l1, 0), "phi2": TargetElem(l1, {(0, 1): 1})},
            sigma2={"phi1": TargetElem(l2, {(1, 0): 1}), "phi2": z2_u(l2, 1)},
        )

    def table(self, k: int) -> dict:
        return self.sigma1 if k == 1 else self.sigma2

    def layout(self, k: int) -> tuple:
        return ("Z2", "I") if k == 1 else ("I", "Z2")

    def sigma(self, k: int, p: NCPoly) -> TargetElem:
        tab, lay = self.table(k), self.layout(k)
        out = TargetElem(lay)
        for w, c in p.terms.items():
            img = TargetElem.one(lay)
            for letter in w:
                if letter not in tab:
                    raise SymbolError(f"the symbol of {letter!r} is outside the polynomial model")
                img = img * tab[letter]
            out = out + img.scale(c)
        return out

    def sigma_id(self, k: int, x: GradedTensor) -> TargetElem:
        """(sigma_k (x) id)(a (x) 1 + b (x) u)."""
        one = TargetElem.one(("Z2",))
        u = z2_u(("Z2",), 0)
        return self.sigma(k, x.a).tensor(one) + self.sigma(k, x.b).tensor(u)


# Phi maps as slot permutations on three-fold targets
PHI_PERMS = {
    (0, 1): (2, 1, 0),  # h (x) p (x) k -> k (x) p (x) h
    (0, 2): (1, 2, 0),  # h (x) p (x) k -> p (x) k (x) h
    (1, 2): (0, 2, 1),  # p (x) h (x) k -> p (x) k (x) h
}


def Phi(pair, x: TargetElem) -> TargetElem:
    return x.permute(PHI_PERMS[pair])


# -- the triple pullback ---------------------------------------------------

@dataclass
class PullbackModel:
    table: SymbolImageTable
    edges: dict  # (i, j) -> (map on component i, map on component j)

    def side(self, i: int, j: int) -> Callable:
        key = (min(i, j), max(i, j))
        f, g = self.edges[key]
        return f if i == key[0] else g

    def constraint_residuals(self, x: Tup) -> dict:
        out = {}
        for (i, j), (f, g) in self.edges.items():
            out[(i, j)] = f(x[i]) - g(x[j])
        return out

    def contains(self, x: Tup) -> bool:
        return all(not r.terms for r in self.constraint_residuals(x).values())

    def unit(self) -> Tup:
        return unit_tuple(3)


def build_example(table: Optional[SymbolImageTable] = None) -> PullbackModel:
    """Three copies of T (x) C(Z2) glued through sigma_1, sigma_2 and the Phi maps."""
    tab = table or SymbolImageTable.default()

    def s1(x):
        return tab.sigma_id(1, x)

    def s2(x):
        return tab.sigma_id(2, x)

    edges = {
        (0, 1): (s1, lambda x: Phi((0, 1), s1(x))),
        (0, 2): (s2, lambda x: Phi((0, 2), s1(x))),
        (1, 2): (s2, lambda x: Phi((1, 2), s2(x))),
    }
    return PullbackModel(tab, edges)


# -- symbolic transfer maps ------------------------------------------------

DEGREE_ONE_ANSATZ = (U_G, gt1(PHI1), gt1(PHI2))


def _coords(elems: Sequence[TargetElem]) -> tuple[list, list]:
    keys = sorted({(e.layout, m) for x in elems for e in [x] for m in e.terms})
    return keys, [[x.terms.get(m, Fraction(0)) if x.layout == lay else Fraction(0) for lay, m in keys] for x in elems]


def solve_linear_symbolic(n_unknowns: int, constraints: Sequence, ansatz=DEGREE_ONE_ANSATZ) -> list:
    """Solve for y_0..y_{n-1} in span(ansatz) with sum_k map_k(y_k) = rhs per constraint.

    Each constraint is (list of (k, map), rhs). Returns the canonical solution
    (free coefficients zero); raises SymbolError when inconsistent.
    """
    na = len(ansatz)
    rows, rhs = [], []
    for terms, target in constraints:
        images: dict = {}
        for k, f in terms:
            for a, base in enumerate(ansatz):
                img = f(base)
                images[(k, a)] = images[(k, a)] + img if (k, a) in images else img
        elems = list(images.values()) + [target]
        keys, cols = _coords(elems)
        col_of = dict(zip(images.keys(), cols[:-1]))
        for r in range(len(keys)):
            rows.append([col_of[(k, a)][r] if (k, a) in col_of else Fraction(0)
                         for k in range(n_unknowns) for a in range(na)])
            rhs.append(cols[-1][r])
    sol = solve(np.array(rows, dtype=object).reshape(len(rows), n_unknowns * na), np.array(rhs, dtype=object))
    if sol is None:
        raise SymbolError("no solution in the degree-one ansatz")
    out = []
    for k in range(n_unknowns):
        y = GradedTensor()
        for a, base in enumerate(ansatz):
            c = sol[k * na + a]
            if c != 0:
                y = y + base * gt1(NCPoly.const(c))
        out.append(y)
    return out


def transfer(model: PullbackModel, src: int, dst: int, x: GradedTensor) -> GradedTensor:
    """f^src_dst(x): y in component dst with matching image on the (src, dst) overlap."""
    return solve_linear_symbolic(1, [([(0, model.side(dst, src))], model.side(src, dst)(x))])[0]


def transfer_into_pair(model: PullbackModel, src: int, pair: tuple, x: GradedTensor) -> Tup:
    """f^src_{pair}(x): an element (y0, y1) of the pair's pullback agreeing with x on both overlaps."""
    i, j = pair
    cons = [
        ([(0, model.side(i, src))], model.side(src, i)(x)),
        ([(1, model.side(j, src))], model.side(src, j)(x)),
        ([(0, model.side(i, j)), (1, lambda y: -model.side(j, i)(y))], TargetElem(("Z2", "I", "Z2"))),
    ]
    return Tup(solve_linear_symbolic(2, cons))


def transfer_from_pair(model: PullbackModel, pair: tuple, dst: int, x: Tup) -> GradedTensor:
    i, j = pair
    cons = [
        ([(0, model.side(dst, i))], model.side(i, dst)(x[0])),
        ([(0, model.side(dst, j))], model.side(j, dst)(x[1])),
    ]
    return solve_linear_symbolic(1, cons)[0]


# -- symbolic connections ----------------------------------------------------

@dataclass
class SymbolicConnection:
    """l(u) = sum of left (x) right over tuples; l(1) = 1 (x) 1."""

    terms: list
    size: int = 3

    def to_json(self) -> dict:
        return {"terms": [{"left": [p.to_json() for p in l.parts], "right": [p.to_json() for p in r.parts]}
                          for l, r in self.terms]}

    @classmethod
    def from_json(cls, d: dict) -> "SymbolicConnection":
        terms = [(Tup(GradedTensor.from_json(p) for p in t["left"]),
                  Tup(GradedTensor.from_json(p) for p in t["right"])) for t in d["terms"]]
        size = len(terms[0][0]) if terms else 3
        return cls(terms, size)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    def collapse(self) -> Tup:
        acc = Tup([ZERO_G] * self.size)
        for l, r in self.terms:
            acc = acc + l * r
        return acc


def _leg_key(x) -> str:
    if isinstance(x, Tup):
        return json.dumps([_leg_key(p) for p in x.parts])
    return json.dumps(x.to_json(), sort_keys=True)


def _memo(f: Callable) -> Callable:
    cache: dict = {}

    def g(x):
        k = _leg_key(x)
        if k not in cache:
            cache[k] = f(x)
        return cache[k]

    g.cache = cache
    return g


@dataclass
class MethodOneResult:
    ell: SymbolicConnection
    intermediate: SymbolicConnection
    transfers: dict


def method_one(model: Optional[PullbackModel] = None) -> MethodOneResult:
    """Glue pieces 0 and 1, then glue piece 2 onto that fibre product."""
    model = model or build_example()
    piece = [(U_G, U_G)]
    f01 = _memo(lambda x: transfer(model, 0, 1, x))
    f10 = _memo(lambda x: transfer(model, 1, 0, x))
    step1 = glue_two_grouplike(piece, piece, f01, f10, ONE_G)
    f2_01 = _memo(lambda x: transfer_into_pair(model, 2, (0, 1), x))
    f01_2 = _memo(lambda x: transfer_from_pair(model, (0, 1), 2, x))
    step2 = glue_two_grouplike(piece, step1, f2_01, f01_2, Tup([ONE_G, ONE_G]))

    def flat(x: Tup) -> Tup:
        # (x2, (x0, x1)) -> (x0, x1, x2)
        return Tup([x[1][0], x[1][1], x[0]])

    ell = SymbolicConnection([(flat(l), flat(r)) for l, r in step2])
    inter = SymbolicConnection(step1, size=2)
    transfers = {
        "a": f01(U_G), "b": f10(U_G),
        "a0a1": f2_01(U_G),
        "b2": f01_2(step1[0][1]), "c2": f01_2(step1[1][1]),
    }
    return MethodOneResult(ell, inter, transfers)


def method_two_gammas() -> list:
    return [
        Tup([U_G, gt1(PHI1), gt1(PHI1)]),
        Tup([gt1(PHI1), U_G, gt1(PHI2)]),
        Tup([gt1(PHI2), gt1(PHI2), U_G]),
    ]


@dataclass
class MethodTwoResult:
    ell: SymbolicConnection
    thetas: list
    Ts: list
    gammas: list


def method_two() -> MethodTwoResult:
    """Piecewise formula with alpha_i(1 (x) u) = gamma_i and l_i(u) = (1 (x) u) (x) (1 (x) u)."""
    gammas = method_two_gammas()
    one = unit_tuple(3)
    terms, thetas, Ts = synthesize_grouplike([[(g, g)] for g in gammas], one)
    flat = [t for block in terms for t in block]
    return MethodTwoResult(SymbolicConnection(flat), thetas, Ts, gammas)


# displayed connections ------------------------------------------------------

INTERMEDIATE_DISPLAY = [
    (("1 @u", "phi1 @1"), ("1 @u", "phi1 @1")),
    (("0", "(1-phi1^2) @u"), ("phi1 @1", "1 @u")),
]

METHOD_ONE_DISPLAY = [
    (("phi2 @1", "phi2 @1", "1 @u"), ("phi2 @1", "phi2 @1", "1 @u")),
    (("(1-phi2^2) @u", "(1-phi2^2) phi1 @1", "0"), ("1 @u", "phi1 @1", "phi1 @1")),
    (("0", "(1-phi2^2)(1-phi1^2) @u", "0"), ("phi1 @1", "1 @u", "phi2 @1")),
]

METHOD_TWO_DISPLAY = [
    (("1 @u", "phi1 @1", "phi1 @1"), ("(1-phi1^2)(1-phi2^2) @u", "0", "0")),
    (("phi1 @1", "1 @u", "phi2 @1"), ("phi1 (1-phi2^2) @1", "(1-phi2^2) @u", "0")),
    (("phi2 @1", "phi2 @1", "1 @u"), ("phi2 @1", "phi2 @1", "1 @u")),
]


def literal_connection(rows) -> SymbolicConnection:
    terms = [(parse_tup(l), parse_tup(r)) for l, r in rows]
    return SymbolicConnection(terms, len(terms[0][0]))


def displayed_intermediate() -> SymbolicConnection:
    return literal_connection(INTERMEDIATE_DISPLAY)


def displayed_method_one() -> SymbolicConnection:
    return literal_connection(METHOD_ONE_DISPLAY)


def displayed_method_two() -> SymbolicConnection:
    return literal_connection(METHOD_TWO_DISPLAY)


def same_terms(a: SymbolicConnection, b: SymbolicConnection) -> bool:
    """Term-for-term equality of serialized normal forms."""
    return a.dumps() == b.dumps()


def same_tensor(a: SymbolicConnection, b: SymbolicConnection) -> bool:
    """Equality as elements of the tensor square, independent of presentation."""
    def expand(c):
        acc: dict = {}
        for l, r in c.terms:
            for ci, lp in enumerate(l.parts):
                for sl, lpoly in (("1", lp.a), ("u", lp.b)):
                    for wl, cl in lpoly.terms.items():
                        for cj, rp in enumerate(r.parts):
                            for sr, rpoly in (("1", rp.a), ("u", rp.b)):
                                for wr, cr in rpoly.terms.items():
                                    k = (ci, sl, wl, cj, sr, wr)
                                    acc[k] = acc.get(k, Fraction(0)) + cl * cr
        return {k: v for k, v in acc.items() if v != 0}

    return expand(a) == expand(b)


# -- verification ----------------------------------------------------------

@dataclass
class SymbolicReport:
    unitality: bool
    collapse: bool
    right_colinear: bool
    left_colinear: bool
    in_pullback: bool
    residual: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.unitality and self.collapse and self.right_colinear and self.left_colinear and self.in_pullback

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "unitality": self.unitality,
            "collapse": self.collapse,
            "right_colinearity": self.right_colinear,
            "left_colinearity": self.left_colinear,
            "legs_in_pullback": self.in_pullback,
            "collapse_residual": [p.to_json() for p in self.residual],
            "failures": self.failures,
        }


def verify_symbolic(ell: SymbolicConnection, model: Optional[PullbackModel] = None) -> SymbolicReport:
    """Strong-connection axioms for l(1) = 1 (x) 1 and the stored l(u).

    Since u is group-like with eps(u) = 1 and S(u) = u, both colinearities at u
    reduce to every leg being homogeneous of degree one, and collapse to
    sum l_i r_i = 1 in every component.
    """
    one = unit_tuple(ell.size)
    fails = []
    unit_ok = (one * one) == one and tup_degrees(one) <= {0}
    res = one - ell.collapse()
    coll_ok = all(p.is_zero() for p in res.parts)
    if not coll_ok:
        fails.append({"axiom": "collapse", "components": [k for k, p in enumerate(res.parts) if not p.is_zero()]})
    right_ok = all(tup_degrees(r) <= {1} for _, r in ell.terms)
    left_ok = all(tup_degrees(l) <= {1} for l, _ in ell.terms)
    if not right_ok:
        fails.append({"axiom": "right colinearity"})
    if not left_ok:
        fails.append({"axiom": "left colinearity"})
    pb_ok = True
    if model is not None and ell.size == 3:
        for k, (l, r) in enumerate(ell.terms):
            for side, leg in (("left", l), ("right", r)):
                if not model.contains(leg):
                    pb_ok = False
                    fails.append({"axiom": "pullback", "term": k, "leg": side})
    return SymbolicReport(unit_ok, coll_ok, right_ok, left_ok, pb_ok, list(res.parts), fails)


def _leg_rows(legs: Sequence[Tup]) -> np.ndarray:
    keys = sorted({(c, slot, w) for x in legs for c, p in enumerate(x.parts)
                   for slot, poly in ((0, p.a), (1, p.b)) for w in poly.terms},
                  key=lambda k: (k[0], k[1], _word_key(k[2])))
    rows = []
    for x in legs:
        rows.append([(x[c].a if slot == 0 else x[c].b).terms.get(w, Fraction(0)) for c, slot, w in keys])
    return np.array(rows, dtype=object).reshape(len(legs), len(keys))


def legs_independent(ell: SymbolicConnection) -> tuple[bool, bool]:
    """(left legs independent, right legs independent) over the free monomial basis."""
    n = len(ell.terms)
    if n == 0:
        return True, True
    left = _leg_rows([l for l, _ in ell.terms])
    right = _leg_rows([r for _, r in ell.terms])
    return rank(left) == n, rank(right) == n


@dataclass
class SymbolicProjector:
    size: int
    entries: list
    idempotent: bool
    coinvariant: bool

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "idempotent": self.idempotent,
            "coinvariant": self.coinvariant,
            "entries": [[[p.to_json() for p in e.parts] for e in row] for row in self.entries],
        }


def projector(ell: Optional[SymbolicConnection] = None) -> SymbolicProjector:
    """p_ij = r_i l_j; checked for p^2 = p and degree zero entries."""
    ell = ell or method_one().ell
    li, ri = legs_independent(ell)
    if not (li and ri):
        raise DependentLegsError("legs are linearly dependent; projector construction declined")
    n = len(ell.terms)
    L = [t[0] for t in ell.terms]
    R = [t[1] for t in ell.terms]
    p = [[R[i] * L[j] for j in range(n)] for i in range(n)]
    zero = Tup([ZERO_G] * ell.size)
    sq_ok = True
    for i in range(n):
        for j in range(n):
            acc = zero
            for k in range(n):
                acc = acc + p[i][k] * p[k][j]
            if not acc == p[i][j]:
                sq_ok = False
    co_ok = all(tup_degrees(e) <= {0} for row in p for e in row)
    return SymbolicProjector(n, p, sq_ok, co_ok)


# -- shift representation ----------------------------------------------------

@dataclass
class ShiftRepresentation:
    cutoff: int
    s: np.ndarray
    s_star: np.ndarray

    def __call__(self, p: NCPoly) -> np.ndarray:
        n = self.cutoff
        out = np.zeros((n, n), dtype=object)
        for w, c in p.terms.items():
            m = np.identity(n, dtype=object)
            for letter in w:
                if letter == "s":
                    m = m @ self.s
                elif letter == "s*":
                    m = m @ self.s_star
                else:
                    raise SymbolError("phi1, phi2 have no matrix in the shift model")
            out = out + c * m
        return out


def shift_representation(cutoff: int) -> ShiftRepresentation:
    """Right shift on |0>..|cutoff-1>, with the top vector sent to zero."""
    if cutoff < 4:
        raise CutoffError("cutoff must be at least 4")
    s = np.zeros((cutoff, cutoff), dtype=object)
    for m in range(cutoff - 1):
        s[m + 1, m] = 1
    return ShiftRepresentation(cutoff, s, s.T.copy())


def E(n: int) -> NCPoly:
    """s (s^n s*^n - s^(n+2) s*^(n+2))."""
    return S * (S ** n * SSTAR ** n - S ** (n + 2) * SSTAR ** (n + 2))


@dataclass
class ShiftReport:
    cutoff: int
    isometry: bool
    truncation_honest: bool
    En_identity: bool
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.isometry and self.truncation_honest and self.En_identity

    def to_json(self) -> dict:
        return {"cutoff": self.cutoff, "isometry_below_cutoff": self.isometry,
                "ss_star_not_identity": self.truncation_honest, "En_identity": self.En_identity,
                "pass": self.passed, "failures": self.failures}


def verify_En(cutoff: int) -> ShiftReport:
    """R(E_n^2)|m> = delta_mn |n+2> for m < cutoff and n + 2 < cutoff."""
    R = shift_representation(cutoff)
    fails = []
    ss = R(SSTAR * S)
    iso = all(np.array_equal(ss[:, m], np.eye(cutoff, dtype=object)[:, m]) for m in range(cutoff - 1))
    raw = R.s_star @ R.s
    iso = iso and all(np.array_equal(raw[:, m], np.eye(cutoff, dtype=object)[:, m]) for m in range(cutoff - 1))
    honest = not np.array_equal(R(S * SSTAR), np.identity(cutoff, dtype=object))
    ok = True
    for n in range(cutoff - 2):
        M = R(E(n) * E(n))
        for m in range(cutoff):
            want = np.zeros(cutoff, dtype=object)
            if m == n:
                want[n + 2] = 1
            if not np.array_equal(M[:, m], want):
                ok = False
                fails.append({"n": n, "m": m})
    return ShiftReport(cutoff, iso, honest, ok, fails)


# -- the auxiliary circle functions ------------------------------------------

def phi_hat(which: int, q) -> Fraction:
    """phi-hat_which(e^{i pi q}) for rational q in [1/4, 9/4]."""
    q = Fraction(q)
    if not Fraction(1, 4) <= q <= Fraction(9, 4):
        raise ValueError("theta/pi must lie in [1/4, 9/4]")
    if which == 1:
        if q <= Fraction(3, 4):
            return 2 - 4 * q
        if q <= Fraction(5, 4):
            return Fraction(-1)
        if q <= Fraction(7, 4):
            return 4 * q - 6
        return Fraction(1)
    if which == 2:
        if q <= Fraction(3, 4):
            return Fraction(1)
        if q <= Fraction(5, 4):
            return 4 - 4 * q
        if q <= Fraction(7, 4):
            return Fraction(-1)
        return 4 * q - 8
    raise ValueError("which must be 1 or 2")


def reduce_angle(q) -> Fraction:
    """Representative of q modulo 2 inside [1/4, 9/4)."""
    q = Fraction(q)
    while q < Fraction(1, 4):
        q += 2
    while q >= Fraction(9, 4):
        q -= 2
    return q


def phi_hat_antipode(which: int, q) -> Fraction:
    """phi-hat at -z where z = e^{i pi q}."""
    return phi_hat(which, reduce_angle(Fraction(q) + 1))


def delta(k: int, t, which: int) -> Fraction:
    """theta/pi of delta_1(k, t) or delta_2(t, k), reduced to [1/4, 9/4)."""
    t = Fraction(t)
    if which == 1:
        return reduce_angle(Fraction(k) * t / 4 + Fraction(k, 2) + Fraction(3, 2))
    return reduce_angle(-Fraction(k) * t / 4 - Fraction(k, 2) + 1)


def check_symbol_table(samples: Iterable = (Fraction(-1), Fraction(-1, 3), Fraction(0), Fraction(1, 2), Fraction(1))) -> bool:
    """The polynomial symbol table agrees pointwise with phi-hat composed with delta_1, delta_2."""
    tab = SymbolImageTable.default()
    for t in samples:
        for k in (1, -1):
            uval = Fraction(k)
            for which, name in ((1, "phi1"), (2, "phi2")):
                for d in (1, 2):
                    img = tab.table(d)[name]
                    val = Fraction(0)
                    for e, c in img.terms.items():
                        term = c
                        for x, kind in zip(e, img.layout):
                            term *= (uval ** x) if kind == "Z2" else (t ** x)
                        val += term
                    if phi_hat(which, delta(k, t, d)) != val:
                        return False
    return True


__all__ = [
    "NCPoly", "GradedTensor", "SymbolImageTable", "TargetElem", "PullbackModel", "SymbolicConnection",
    "nf", "nf_word", "nf_word_random", "build_example", "method_one", "method_two", "verify_symbolic",
    "legs_independent", "projector", "shift_representation", "verify_En", "phi_hat", "displayed_intermediate",
    "displayed_method_one", "displayed_method_two", "parse_poly", "parse_gt", "parse_tup", "Phi", "E",
    "CutoffError", "SymbolError", "same_terms", "same_tensor", "check_symbol_table",
]
