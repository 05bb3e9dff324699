"""Buchberger Gröbner bases with the Gebauer-Möller criteria, normal forms,
elimination, saturation and Hilbert functions of graded quotients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactpoly import (
    INHOMOGENEOUS,
    MultiPoly,
    VariableMismatch,
    WeightedGrading,
    format_poly,
    parse_poly,
    weighted_degree,
)

Exponent = Tuple[int, ...]

__all__ = [
    "MonomialOrder",
    "GroebnerBasis",
    "GradedQuotient",
    "InhomogeneousIdeal",
    "InfiniteGradedPiece",
    "buchberger",
    "normal_form",
    "ideal_membership",
    "saturate",
    "eliminate",
    "hilbert_function",
    "standard_cones",
    "monomials_in_degree",
    "s_polynomial",
    "is_groebner",
]


class InhomogeneousIdeal(ValueError):
    """A generator is not homogeneous for the requested grading."""


class InfiniteGradedPiece(ValueError):
    """A graded piece of a quotient ring is not finite dimensional."""


# ----------------------------------------------------------------------------
# monomial orders


def _revlex_part(e):
    return tuple(-x for x in reversed(e))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order.  ``key(e)`` is larger for larger monomials.

    ``kind`` is one of ``lex``, ``grlex``, ``grevlex``, ``wgrevlex``
    (needs ``weights``) or ``elim`` (needs ``eliminate``: the names of the
    variables that are ordered above everything else).
    """

    kind: str = "grevlex"
    variables: Tuple[str, ...] = ()
    weights: Tuple[int, ...] = ()
    eliminate: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "eliminate", tuple(self.eliminate))
        if self.kind not in ("lex", "grlex", "grevlex", "wgrevlex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "wgrevlex":
            if len(self.weights) != len(self.variables):
                raise ValueError("wgrevlex needs one weight per variable")
            if any(w < 0 for w in self.weights):
                raise ValueError("weights of a monomial order must be nonnegative")
        if self.kind == "elim":
            missing = set(self.eliminate) - set(self.variables)
            if missing:
                raise ValueError(f"cannot eliminate unknown variables {sorted(missing)}")

    @classmethod
    def weighted(cls, grading: WeightedGrading) -> "MonomialOrder":
        return cls("wgrevlex", grading.variables, grading.weights)

    @classmethod
    def elimination(cls, variables, eliminate) -> "MonomialOrder":
        return cls("elim", tuple(variables), (), tuple(eliminate))

    def key_function(self, variables: Sequence[str]):
        variables = tuple(variables)
        if self.variables and self.variables != variables:
            raise VariableMismatch(f"order defined on {self.variables}, ring has {variables}")
        kind = self.kind
        if kind == "lex":
            return lambda e: e
        if kind == "grlex":
            return lambda e: (sum(e), e)
        if kind == "grevlex":
            return lambda e: (sum(e), _revlex_part(e))
        if kind == "wgrevlex":
            w = self.weights
            return lambda e: (sum(a * b for a, b in zip(w, e)), sum(e), _revlex_part(e))
        elim_idx = [i for i, v in enumerate(variables) if v in self.eliminate]
        keep_idx = [i for i, v in enumerate(variables) if v not in self.eliminate]

        def key(e):
            a = tuple(e[i] for i in elim_idx)
            b = tuple(e[i] for i in keep_idx)
            return (sum(a), _revlex_part(a), sum(b), _revlex_part(b))

        return key

    def descriptor(self) -> dict:
        out = {"kind": self.kind}
        if self.variables:
            out["variables"] = list(self.variables)
        if self.weights:
            out["weights"] = list(self.weights)
        if self.eliminate:
            out["eliminate"] = list(self.eliminate)
        return out


# ----------------------------------------------------------------------------
# raw helpers on term dicts


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _disjoint(a: Exponent, b: Exponent) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Poly:
    """Working representation used inside the algorithms."""

    __slots__ = ("terms", "lm")

    def __init__(self, terms: Dict[Exponent, Fraction], key):
        self.terms = terms
        self.lm = max(terms, key=key) if terms else None


def _monic(terms: Dict[Exponent, Fraction], lm) -> Dict[Exponent, Fraction]:
    c = terms[lm]
    if c == 1:
        return terms
    inv = 1 / c
    return {e: v * inv for e, v in terms.items()}


def _reduce(terms: Dict[Exponent, Fraction], basis: Sequence[_Poly], key, full=True):
    """Normal form of ``terms`` modulo ``basis`` (leading coefficients 1)."""
    p = dict(terms)
    rem: Dict[Exponent, Fraction] = {}
    while p:
        lm = max(p, key=key)
        c = p[lm]
        for g in basis:
            if _divides(g.lm, lm):
                shift = tuple(x - y for x, y in zip(lm, g.lm))
                for e, gc in g.terms.items():
                    t = tuple(x + y for x, y in zip(e, shift))
                    v = p.get(t, 0) - c * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            if not full:
                rem.update(p)
                return rem
            rem[lm] = c
            del p[lm]
    return rem


def _spoly(f: _Poly, g: _Poly):
    lcm = _lcm(f.lm, g.lm)
    sf = tuple(x - y for x, y in zip(lcm, f.lm))
    sg = tuple(x - y for x, y in zip(lcm, g.lm))
    out: Dict[Exponent, Fraction] = {}
    for e, c in f.terms.items():
        t = tuple(x + y for x, y in zip(e, sf))
        out[t] = out.get(t, 0) + c / f.terms[f.lm]
    for e, c in g.terms.items():
        t = tuple(x + y for x, y in zip(e, sg))
        v = out.get(t, 0) - c / g.terms[g.lm]
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return {e: c for e, c in out.items() if c}


# ----------------------------------------------------------------------------
# Gröbner bases


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Gröbner basis: monic generators sorted by leading monomial."""

    variables: Tuple[str, ...]
    order: MonomialOrder
    generators: Tuple[MultiPoly, ...]
    _lms: Tuple[Exponent, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        key = self.order.key_function(self.variables)
        lms = tuple(max(g.terms, key=key) for g in self.generators)
        object.__setattr__(self, "_lms", lms)

    @property
    def key(self):
        return self.order.key_function(self.variables)

    @property
    def leading_monomials(self) -> Tuple[Exponent, ...]:
        return self._lms

    def is_unit(self) -> bool:
        return any(not any(lm) for lm in self._lms)

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def _work(self):
        key = self.key
        return [_Poly(dict(g.terms), key) for g in self.generators]

    def reduce(self, p: MultiPoly) -> MultiPoly:
        return normal_form(p, self)

    def contains(self, p: MultiPoly) -> bool:
        return normal_form(p, self).is_zero()

    def same_ideal(self, other: "GroebnerBasis") -> bool:
        return all(other.contains(g) for g in self.generators) and all(
            self.contains(g) for g in other.generators
        )

    def to_strings(self) -> List[str]:
        return sorted(format_poly(g) for g in self.generators)

    def serialize(self) -> dict:
        return {
            "variables": list(self.variables),
            "order": self.order.descriptor(),
            "generators": self.to_strings(),
        }

    @classmethod
    def deserialize(cls, data: dict) -> "GroebnerBasis":
        variables = tuple(data["variables"])
        od = data["order"]
        order = MonomialOrder(
            od["kind"], tuple(od.get("variables", ())), tuple(od.get("weights", ())), tuple(od.get("eliminate", ()))
        )
        gens = [parse_poly(s, variables) for s in data["generators"]]
        return buchberger(gens, order, variables)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


def _default_order(variables):
    return MonomialOrder("grevlex", tuple(variables))


def _update(G: List[int], B: List[Tuple[int, int]], h: int, polys: List[_Poly]):
    """Gebauer-Möller pair update for a new basis element ``h``."""
    lh = polys[h].lm
    C = [g for g in G]
    D: List[int] = []
    while C:
        g1 = C.pop(0)
        l1 = _lcm(lh, polys[g1].lm)
        keep = _disjoint(lh, polys[g1].lm)
        if not keep:
            keep = not any(_divides(_lcm(lh, polys[g2].lm), l1) for g2 in C) and not any(
                _divides(_lcm(lh, polys[g2].lm), l1) for g2 in D
            )
        if keep:
            D.append(g1)
    E = [(g, h) for g in D if not _disjoint(lh, polys[g].lm)]
    B_new = []
    for g1, g2 in B:
        l12 = _lcm(polys[g1].lm, polys[g2].lm)
        if (
            _divides(lh, l12)
            and _lcm(polys[g1].lm, lh) != l12
            and _lcm(polys[g2].lm, lh) != l12
        ):
            continue
        B_new.append((g1, g2))
    B_new.extend(E)
    G_new = [g for g in G if not _divides(lh, polys[g].lm)]
    G_new.append(h)
    return G_new, B_new


def buchberger(
    gens: Iterable[MultiPoly],
    order: Optional[MonomialOrder] = None,
    variables: Optional[Sequence[str]] = None,
) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    if variables is None:
        if not gens:
            raise ValueError("variables are required for an empty generator list")
        variables = gens[0].variables
    variables = tuple(variables)
    for g in gens:
        if g.variables != variables:
            raise VariableMismatch(f"generator over {g.variables}, expected {variables}")
    order = order or _default_order(variables)
    key = order.key_function(variables)

    polys: List[_Poly] = []
    G: List[int] = []
    B: List[Tuple[int, int]] = []

    def degree(e):
        return key(e)[0] if order.kind in ("grlex", "grevlex", "wgrevlex") else sum(e)

    def add(terms):
        p = _Poly(terms, key)
        p.terms = _monic(p.terms, p.lm)
        polys.append(p)
        return len(polys) - 1

    for g in gens:
        if g.is_zero():
            continue
        h = add(dict(g.terms))
        G, B = _update(G, B, h, polys)

    while B:
        best = min(
            range(len(B)),
            key=lambda k: (degree(_lcm(polys[B[k][0]].lm, polys[B[k][1]].lm)), B[k][1], B[k][0]),
        )
        i, j = B.pop(best)
        s = _spoly(polys[i], polys[j])
        r = _reduce(s, [polys[g] for g in G], key)
        if r:
            h = add(r)
            G, B = _update(G, B, h, polys)

    # minimal then fully interreduced
    basis = [polys[g] for g in G]
    basis = [
        p for k, p in enumerate(basis)
        if not any(_divides(q.lm, p.lm) and (q.lm != p.lm or m < k) for m, q in enumerate(basis) if m != k)
    ]
    reduced = []
    for k, p in enumerate(basis):
        others = [q for m, q in enumerate(basis) if m != k]
        tail = dict(p.terms)
        c = tail.pop(p.lm)
        r = _reduce(tail, others, key)
        r[p.lm] = c
        reduced.append(_Poly(_monic(r, p.lm), key))
    reduced.sort(key=lambda p: key(p.lm))
    return GroebnerBasis(variables, order, tuple(MultiPoly._raw(variables, p.terms) for p in reduced))


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    key = order.key_function(f.variables)
    return MultiPoly._raw(f.variables, _spoly(_Poly(dict(f.terms), key), _Poly(dict(g.terms), key)))


def is_groebner(polys: Sequence[MultiPoly], order: MonomialOrder) -> bool:
    """Buchberger's criterion checked pair by pair, with no shortcuts."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return True
    key = order.key_function(polys[0].variables)
    work = [_Poly(dict(p.terms), key) for p in polys]
    for i in range(len(work)):
        for j in range(i + 1, len(work)):
            if _reduce(_spoly(work[i], work[j]), [_Poly(_monic(w.terms, w.lm), key) for w in work], key):
                return False
    return True


def normal_form(p: MultiPoly, basis: GroebnerBasis) -> MultiPoly:
    if p.variables != basis.variables:
        raise VariableMismatch(f"{p.variables} vs basis over {basis.variables}")
    if not basis.generators:
        return p
    return MultiPoly._raw(p.variables, _reduce(p.terms, basis._work(), basis.key))


def ideal_membership(p: MultiPoly, gens: Sequence[MultiPoly], order: Optional[MonomialOrder] = None) -> bool:
    if p.is_zero():
        return True
    gb = buchberger(gens, order, p.variables)
    return normal_form(p, gb).is_zero()


def _fresh_name(variables, stem="_aux"):
    taken = set(variables)
    for k in count():
        name = f"{stem}{k}"
        if name not in taken:
            return name


def eliminate(
    gens: Sequence[MultiPoly],
    keep: Sequence[str],
    variables: Optional[Sequence[str]] = None,
) -> GroebnerBasis:
    """Basis of ``I ∩ k[keep]`` using a block elimination order.

    The result lives in the ring whose variables are ``keep`` (in the
    original variable order) and is reduced for grevlex there.
    """
    gens = list(gens)
    variables = tuple(variables if variables is not None else gens[0].variables)
    keep = [v for v in variables if v in set(keep)]
    unknown = set(keep) - set(variables)
    if unknown:
        raise VariableMismatch(f"unknown variables {sorted(unknown)}")
    drop = tuple(v for v in variables if v not in keep)
    order = MonomialOrder.elimination(variables, drop)
    gb = buchberger(gens, order, variables)
    drop_idx = [variables.index(v) for v in drop]
    sub_order = MonomialOrder("grevlex", tuple(keep))
    sub_key = sub_order.key_function(keep)
    out = [
        _restrict(g, keep).content_monic(sub_key)
        for g in gb.generators
        if all(not e[i] for e in g.terms for i in drop_idx)
    ]
    out.sort(key=lambda g: sub_key(max(g.terms, key=sub_key)))
    return GroebnerBasis(tuple(keep), sub_order, tuple(out))


def _restrict(p: MultiPoly, keep: Sequence[str]) -> MultiPoly:
    idx = [p.variables.index(v) for v in keep]
    return MultiPoly._raw(tuple(keep), {tuple(e[i] for i in idx): c for e, c in p.terms.items()})


def saturate(
    gens: Sequence[MultiPoly],
    f: MultiPoly,
    order: Optional[MonomialOrder] = None,
) -> GroebnerBasis:
    """Basis of ``(I : f^∞)`` via one auxiliary variable ``t`` with ``t*f - 1``."""
    if f.is_zero():
        raise ZeroDivisionError("cannot saturate with respect to zero")
    variables = f.variables
    aux = _fresh_name(variables)
    big = variables + (aux,)
    lifted = [g.rename(big) for g in gens]
    lifted.append(MultiPoly.var(big, aux) * f.rename(big) - 1)
    sat = eliminate(lifted, variables, big)
    order = order or _default_order(variables)
    if sat.order == order:
        return sat
    return buchberger(sat.generators, order, variables)


# ----------------------------------------------------------------------------
# graded pieces


@dataclass(frozen=True)
class GradedQuotient:
    """``k[vars]/I`` for a homogeneous ideal ``I`` given by a Gröbner basis."""

    basis: GroebnerBasis
    grading: WeightedGrading

    def __post_init__(self):
        if self.grading.variables != self.basis.variables:
            raise VariableMismatch("grading and basis use different variables")
        for g in self.basis.generators:
            if weighted_degree(g, self.grading) is INHOMOGENEOUS:
                raise InhomogeneousIdeal(f"generator {g} is not homogeneous")

    @classmethod
    def from_generators(cls, gens, grading: WeightedGrading, order: Optional[MonomialOrder] = None):
        for g in gens:
            if weighted_degree(g, grading) is INHOMOGENEOUS:
                raise InhomogeneousIdeal(f"generator {g} is not homogeneous")
        if order is None:
            order = (
                MonomialOrder.weighted(grading)
                if all(w >= 0 for w in grading.weights)
                else _default_order(grading.variables)
            )
        return cls(buchberger(gens, order, grading.variables), grading)

    def standard_monomials(self, d: int) -> List[Exponent]:
        return monomials_in_degree(self.basis.leading_monomials, [(w,) for w in self.grading.weights], (d,))


def hilbert_function(q: GradedQuotient, d: int) -> int:
    """Dimension of the degree-``d`` piece: the count of standard monomials."""
    if d < 0 and q.grading.is_positive():
        return 0
    return len(q.standard_monomials(d))


def standard_cones(lms: Sequence[Exponent], n: int):
    """Disjoint decomposition of the standard monomials into cones.

    Returns a list of ``(base, free)`` pairs: the monomials not divisible by
    any of ``lms`` are exactly the disjoint union of ``base + N^free``.
    """
    lms = _minimalize([tuple(m) for m in lms])
    out = []

    def rec(gens, base, free_fixed, remaining):
        # gens: minimal generators restricted to coordinates in ``remaining``
        if any(all(g[i] == 0 for i in remaining) for g in gens):
            return
        if not gens:
            out.append((tuple(base), tuple(sorted(free_fixed + list(remaining)))))
            return
        # split on the coordinate used by most generators
        j = max(remaining, key=lambda i: (sum(1 for g in gens if g[i]), -i))
        top = max(g[j] for g in gens)
        rest = [i for i in remaining if i != j]
        for k in range(top):
            sub = _minimalize([_zero_at(g, j) for g in gens if g[j] <= k])
            b = list(base)
            b[j] = k
            rec(sub, b, free_fixed, rest)
        sub = _minimalize([_zero_at(g, j) for g in gens])
        b = list(base)
        b[j] = top
        rec(sub, b, free_fixed + [j], rest)

    rec(lms, [0] * n, [], list(range(n)))
    return out


def _zero_at(g, j):
    g = list(g)
    g[j] = 0
    return tuple(g)


def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return out


def _solve_cone(weights, base_deg, free, target):
    """Nonnegative integer solutions ``n`` with ``sum n_j w_j = target - base_deg``.

    ``weights`` are integer vectors.  Raises :class:`InfiniteGradedPiece` if
    the solution set is infinite (or cannot be certified finite).
    """
    rhs = tuple(t - b for t, b in zip(target, base_deg))
    ws = [tuple(weights[j]) for j in free]
    if not free:
        return [()] if all(x == 0 for x in rhs) else []
    phi = _positive_functional(ws, rhs)
    if phi is None:
        if _real_feasible(ws, rhs):
            raise InfiniteGradedPiece("graded piece contains an unbounded family of monomials")
        return []
    pw = [sum(a * b for a, b in zip(phi, w)) for w in ws]
    budget = sum(a * b for a, b in zip(phi, rhs))
    if budget < 0:
        return []
    sols = []
    last = len(ws) - 1

    def rec(k, rem_vec, rem_budget, acc):
        if k == last:
            # the last multiplicity is forced by the remaining degree
            w = ws[k]
            m = None
            for r, x in zip(rem_vec, w):
                if x:
                    if r % x:
                        return
                    m = r // x
                    break
            if m is None:
                m = 0 if not any(rem_vec) else -1
            if m < 0 or any(r != m * x for r, x in zip(rem_vec, w)):
                return
            sols.append(tuple(acc + [m]))
            return
        maxn = int(rem_budget // pw[k])
        for m in range(maxn + 1):
            rec(
                k + 1,
                tuple(r - m * x for r, x in zip(rem_vec, ws[k])),
                rem_budget - m * pw[k],
                acc + [m],
            )

    rec(0, rhs, budget, [])
    return sols


_FUNCTIONALS: Dict = {}


def _positive_functional(ws, rhs=None):
    """A rational ``phi`` with ``phi . w > 0`` for all ``w`` (None if the
    cone is not pointed).  With ``rhs`` given, ``phi . rhs`` is made small so
    enumeration budgets stay tight."""
    dim = len(ws[0])
    if dim == 1:
        if all(w[0] > 0 for w in ws):
            return [Fraction(1)]
        if all(w[0] < 0 for w in ws):
            return [Fraction(-1)]
        return None
    key = (tuple(ws), tuple(rhs) if rhs is not None else None)
    if key in _FUNCTIONALS:
        return _FUNCTIONALS[key]
    from scipy.optimize import linprog

    # minimize phi.rhs subject to phi.w >= 1; by duality the optimum is the
    # largest real total multiplicity, which bounds the enumeration
    res = linprog(
        c=list(rhs) if rhs is not None else [0] * dim,
        A_ub=[[-x for x in w] for w in ws],
        b_ub=[-1] * len(ws),
        bounds=[(-10**6, 10**6)] * dim,
        method="highs",
    )
    phi = None
    if res.status == 0:
        cand = [Fraction(x).limit_denominator(10**4) for x in res.x]
        if all(sum(a * b for a, b in zip(cand, w)) > 0 for w in ws):
            phi = cand
        else:
            # rounding broke strict positivity; fall back to any pointing functional
            res = linprog(c=[0] * dim, A_ub=[[-x for x in w] for w in ws], b_ub=[-1] * len(ws),
                          bounds=[(-1000, 1000)] * dim, method="highs")
            if res.status == 0:
                cand = [Fraction(x).limit_denominator(1000) for x in res.x]
                if all(sum(a * b for a, b in zip(cand, w)) > 0 for w in ws):
                    phi = cand
    _FUNCTIONALS[key] = phi
    return phi


def _real_feasible(ws, rhs) -> bool:
    dim = len(rhs)
    if dim == 1:
        pos = any(w[0] > 0 for w in ws)
        neg = any(w[0] < 0 for w in ws)
        r = rhs[0]
        if pos and neg:
            return True
        if r == 0:
            return True
        return (r > 0 and pos) or (r < 0 and neg)
    from scipy.optimize import linprog

    res = linprog(
        c=[0] * len(ws),
        A_eq=[[w[i] for w in ws] for i in range(dim)],
        b_eq=list(rhs),
        bounds=[(0, None)] * len(ws),
        method="highs",
    )
    return res.status == 0


def monomials_in_degree(lms: Sequence[Exponent], weights: Sequence[Sequence[int]], target: Sequence[int]):
    """Standard monomials (not divisible by any of ``lms``) of degree ``target``.

    ``weights[i]`` is the (vector) degree of variable ``i``.  Raises
    :class:`InfiniteGradedPiece` when the piece is infinite dimensional.
    """
    n = len(weights)
    weights = [tuple(w) for w in weights]
    target = tuple(target)
    out = []
    for base, free in standard_cones(lms, n):
        bdeg = tuple(sum(base[i] * weights[i][k] for i in range(n)) for k in range(len(target)))
        for sol in _solve_cone(weights, bdeg, free, target):
            e = list(base)
            for j, m in zip(free, sol):
                e[j] += m
            out.append(tuple(e))
    return sorted(out)
