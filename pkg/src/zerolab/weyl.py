"""Finite linear group actions on polynomials: Reynolds averaging,
invariant dimensions and the Molien series."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .exactpoly import MultiPoly, RationalSeries, expand_series
from .liegroup import StructuralError

IntMatrix = Tuple[Tuple[int, ...], ...]


def _matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class FiniteActionGroup:
    """A finite group of r x r integer matrices, acting on polynomials by
    ``(g.p)(x) = p(g x)``."""

    elements: Tuple[IntMatrix, ...]
    perms: Optional[Tuple[Tuple[int, ...], ...]] = None

    def __post_init__(self):
        els = tuple(tuple(tuple(int(x) for x in row) for row in m) for m in self.elements)
        object.__setattr__(self, "elements", els)
        if not els:
            raise StructuralError("a group needs at least the identity")
        r = len(els[0])
        if any(len(m) != r or any(len(row) != r for row in m) for m in els):
            raise StructuralError("all elements must be r x r")
        if len(set(els)) != len(els):
            raise StructuralError("elements must be distinct")
        ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
        members = set(els)
        if ident not in members:
            raise StructuralError("identity missing")
        for a in els:
            if not any(_matmul(a, b) == ident for b in els):
                raise StructuralError("inverse missing")
            for b in els:
                if _matmul(a, b) not in members:
                    raise StructuralError("not closed under products")
        if self.perms is not None and len(self.perms) != len(els):
            raise StructuralError("one vertex permutation per element is required")

    @property
    def r(self) -> int:
        return len(self.elements[0])

    @property
    def order(self) -> int:
        return len(self.elements)

    def variables(self) -> Tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.r))

    def act(self, g: IntMatrix, p: MultiPoly) -> MultiPoly:
        vs = p.variables
        images = {}
        for i, v in enumerate(vs):
            acc = MultiPoly.zero(vs)
            for j, w in enumerate(vs):
                if g[i][j]:
                    acc = acc + MultiPoly.var(vs, w) * g[i][j]
            images[v] = acc
        return p.substitute(images)

    def to_json(self):
        return {"elements": [[list(row) for row in m] for m in self.elements]}


def symmetric_group(n: int) -> FiniteActionGroup:
    """S_n permuting the coordinates of C^n."""
    els = []
    for p in itertools.permutations(range(n)):
        els.append(tuple(tuple(int(p[i] == j) for j in range(n)) for i in range(n)))
    return FiniteActionGroup(tuple(els))


def signed_permutation_group(n: int) -> FiniteActionGroup:
    """The hyperoctahedral group (type B/C Weyl group)."""
    els = []
    for p in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            els.append(tuple(tuple(signs[i] * int(p[i] == j) for j in range(n)) for i in range(n)))
    return FiniteActionGroup(tuple(els))


def cyclic_group(m: IntMatrix, limit: int = 1000) -> FiniteActionGroup:
    """The cyclic group generated by one matrix of finite order."""
    m = tuple(tuple(int(x) for x in row) for row in m)
    r = len(m)
    ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    els = [ident]
    cur = m
    while cur != ident:
        els.append(cur)
        cur = _matmul(cur, m)
        if len(els) > limit:
            raise StructuralError("matrix does not have finite order")
    return FiniteActionGroup(tuple(els))


def reynolds(p: MultiPoly, g: FiniteActionGroup) -> MultiPoly:
    """Average of ``p`` over the group."""
    if len(p.variables) != g.r:
        raise StructuralError(f"polynomial has {len(p.variables)} variables, group acts on {g.r}")
    acc = MultiPoly.zero(p.variables)
    for m in g.elements:
        acc = acc + g.act(m, p)
    return acc * Fraction(1, g.order)


def _monomials(r: int, d: int):
    out = []
    for c in itertools.combinations_with_replacement(range(r), d):
        e = [0] * r
        for i in c:
            e[i] += 1
        out.append(tuple(e))
    return out


def invariant_dim(g: FiniteActionGroup, d: int) -> int:
    """Dimension of the degree-``d`` invariants: rank of the Reynolds operator
    on the monomial basis."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    vs = g.variables()
    mons = _monomials(g.r, d)
    index = {m: k for k, m in enumerate(mons)}
    rows = []
    for m in mons:
        img = reynolds(MultiPoly.monomial(vs, m), g)
        rows.append({index[e]: c for e, c in img.terms.items()})
    return linalg.rank(rows)


def _char_poly_det(m: IntMatrix) -> List[Fraction]:
    """Coefficients of ``det(1 - t m)`` in increasing powers of ``t``."""
    r = len(m)
    vs = ("t",)
    t = MultiPoly.var(vs, "t")
    rows = [
        [MultiPoly.constant(vs, int(i == j)) - t * m[i][j] for j in range(r)]
        for i in range(r)
    ]
    det = _det(rows, vs)
    deg = det.total_degree() if det.terms else 0
    return [det.coefficient((k,)) for k in range(deg + 1)]


def _det(rows, vs):
    n = len(rows)
    if n == 0:
        return MultiPoly.constant(vs, 1)
    acc = MultiPoly.zero(vs)
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = rows[0][j] * _det(minor, vs)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def molien_coefficients(g: FiniteActionGroup, n: int) -> List[Fraction]:
    """``(1/|G|) sum_g 1/det(1 - t g)`` expanded to ``t^n``."""
    total = [Fraction(0)] * (n + 1)
    for m in g.elements:
        den = _char_poly_det(m)
        series = expand_series(RationalSeries.from_coefficients([1], den), n)
        for k in range(n + 1):
            total[k] += Fraction(series[k])
    out = [c / g.order for c in total]
    return [int(c) if c.denominator == 1 else c for c in out]


def elementary_symmetric(vs: Sequence[str], k: int) -> MultiPoly:
    vs = tuple(vs)
    acc = MultiPoly.zero(vs)
    for c in itertools.combinations(vs, k):
        term = MultiPoly.constant(vs, 1)
        for v in c:
            term = term * MultiPoly.var(vs, v)
        acc = acc + term
    return acc
