"""Moment graph computations: GKM cohomology dimensions, K-theory
congruences, localized Chern classes and the Chern character."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .exactpoly import LaurentPoly, MultiPoly, RationalSeries, format_poly, laurent_divisible
from .liegroup import StructuralError

Weight = Tuple[int, ...]


def torus_variables(r: int) -> Tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(r))


@dataclass(frozen=True)
class MomentGraph:
    r: int
    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[int, int, Weight], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        edges = tuple((int(a), int(b), tuple(int(x) for x in al)) for a, b, al in self.edges)
        object.__setattr__(self, "edges", edges)
        for a, b, al in edges:
            if not (0 <= a < len(self.vertices) and 0 <= b < len(self.vertices)):
                raise StructuralError(f"edge ({a}, {b}) refers to a missing vertex")
            if len(al) != self.r:
                raise StructuralError(f"edge character {al} has the wrong rank")
            if not any(al):
                raise StructuralError("edge characters must be nonzero")

    @property
    def variables(self) -> Tuple[str, ...]:
        return torus_variables(self.r)

    def linear_form(self, alpha: Weight) -> MultiPoly:
        vs = self.variables
        acc = MultiPoly.zero(vs)
        for v, a in zip(vs, alpha):
            if a:
                acc = acc + MultiPoly.var(vs, v) * a
        return acc

    def components(self) -> int:
        parent = list(range(len(self.vertices)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a, b, _ in self.edges:
            parent[find(a)] = find(b)
        return len({find(i) for i in range(len(self.vertices))})

    def to_json(self):
        return {
            "r": self.r,
            "vertices": list(self.vertices),
            "edges": [[a, b, list(al)] for a, b, al in self.edges],
        }

    @classmethod
    def from_json(cls, data):
        return cls(int(data["r"]), tuple(data["vertices"]), tuple(tuple(e) for e in data["edges"]))


# ----------------------------------------------------------------------------
# standard graphs


def _sl_character(i: int, n: int) -> Weight:
    """``ε_i`` of the maximal torus of SL_n in the basis ``ε_1..ε_{n-1}``."""
    if i < n - 1:
        return tuple(int(k == i) for k in range(n - 1))
    return tuple(-1 for _ in range(n - 1))


def _sub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def projective_graph(n: int) -> MomentGraph:
    """``P^n`` with the torus of GL_{n+1}: rank ``n+1``, edges ``ε_j - ε_i``."""
    r = n + 1
    eps = [tuple(int(k == i) for k in range(r)) for i in range(r)]
    edges = [(i, j, _sub(eps[j], eps[i])) for i in range(r) for j in range(i + 1, r)]
    return MomentGraph(r, tuple(f"[{i}]" for i in range(r)), tuple(edges))


def p1_graph() -> MomentGraph:
    return MomentGraph(1, ("0", "inf"), ((0, 1, (1,)),))


def product_graph(a: MomentGraph, b: MomentGraph) -> MomentGraph:
    r = a.r + b.r
    verts = [f"{u}x{v}" for u in a.vertices for v in b.vertices]
    nb = len(b.vertices)
    edges = []
    for i, j, al in a.edges:
        for k in range(nb):
            edges.append((i * nb + k, j * nb + k, al + (0,) * b.r))
    for i, j, al in b.edges:
        for k in range(len(a.vertices)):
            edges.append((k * nb + i, k * nb + j, (0,) * a.r + al))
    return MomentGraph(r, tuple(verts), tuple(edges))


def flag_graph(n: int) -> MomentGraph:
    """Full flags of C^n with the SL_n torus: vertices are permutations."""
    perms = list(itertools.permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    edges = []
    for p in perms:
        for i in range(n):
            for j in range(i + 1, n):
                q = list(p)
                q[i], q[j] = q[j], q[i]
                q = tuple(q)
                if index[p] < index[q]:
                    al = _sub(_sl_character(p[i], n), _sl_character(p[j], n))
                    edges.append((index[p], index[q], al))
    labels = tuple("".join(str(x + 1) for x in p) for p in perms)
    return MomentGraph(n - 1, labels, tuple(edges))


def grassmannian_graph(k: int, n: int) -> MomentGraph:
    """``Gr(k, n)`` with the SL_n torus: vertices are k-subsets."""
    subsets = list(itertools.combinations(range(n), k))
    index = {s: i for i, s in enumerate(subsets)}
    edges = []
    for s in subsets:
        for a in s:
            for b in range(n):
                if b in s:
                    continue
                t = tuple(sorted(set(s) - {a} | {b}))
                if index[s] < index[t]:
                    edges.append((index[s], index[t], _sub(_sl_character(b, n), _sl_character(a, n))))
    labels = tuple("{" + ",".join(str(x + 1) for x in s) + "}" for s in subsets)
    return MomentGraph(n - 1, labels, tuple(edges))


# ----------------------------------------------------------------------------
# cohomology


@dataclass(frozen=True)
class CohomologyClass:
    values: Tuple[MultiPoly, ...]

    def to_json(self):
        return [format_poly(v) for v in self.values]


def _monomials(r: int, deg: int) -> List[Tuple[int, ...]]:
    out = []
    for c in itertools.combinations_with_replacement(range(r), deg):
        e = [0] * r
        for i in c:
            e[i] += 1
        out.append(tuple(e))
    return out


def _hyperplane_restriction(g: MomentGraph, alpha: Weight):
    """Substitution killing the linear form of ``alpha``: pick a pivot
    coordinate ``k`` and send ``x_k`` to ``-(sum_{j != k} a_j x_j)/a_k``."""
    vs = g.variables
    k = next(i for i, a in enumerate(alpha) if a)
    img = MultiPoly.zero(vs)
    for j, a in enumerate(alpha):
        if j != k and a:
            img = img - MultiPoly.var(vs, vs[j]) * Fraction(a, alpha[k])
    return {vs[k]: img}


def is_gkm_class(c: CohomologyClass, g: MomentGraph) -> bool:
    if len(c.values) != len(g.vertices):
        raise StructuralError("one value per vertex is required")
    for a, b, al in g.edges:
        diff = c.values[a] - c.values[b]
        if not diff.substitute(_hyperplane_restriction(g, al)).is_zero():
            return False
    return True


def gkm_cohomology_dim(g: MomentGraph, d: int) -> int:
    """Dimension of degree-``d`` GKM classes (``d`` is cohomological, so
    polynomials have degree ``d/2``).  Odd ``d`` gives 0."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if d % 2:
        return 0
    deg = d // 2
    vs = g.variables
    mons = _monomials(g.r, deg)
    nv = len(g.vertices)
    nm = len(mons)
    rows = []
    for a, b, al in g.edges:
        sub = _hyperplane_restriction(g, al)
        images = [MultiPoly.monomial(vs, m).substitute(sub) for m in mons]
        out: Dict[Tuple[int, ...], Dict[int, Fraction]] = {}
        for col, img in enumerate(images):
            for e, coef in img.terms.items():
                row = out.setdefault(e, {})
                row[a * nm + col] = row.get(a * nm + col, 0) + coef
                row[b * nm + col] = row.get(b * nm + col, 0) - coef
        rows.extend(out.values())
    return nv * nm - linalg.rank(rows)


def formality_series(betti: Sequence[int], r: int) -> RationalSeries:
    """``P(t)/(1-t^2)^r``."""
    if any(b < 0 for b in betti):
        raise ValueError("Betti numbers must be nonnegative")
    den = [1]
    for _ in range(r):
        nxt = [0] * (len(den) + 2)
        for i, c in enumerate(den):
            nxt[i] += c
            nxt[i + 2] -= c
        den = nxt
    return RationalSeries.from_coefficients(list(betti) or [0], den)


# ----------------------------------------------------------------------------
# K-theory


@dataclass(frozen=True)
class KTheoryClass:
    values: Tuple[LaurentPoly, ...]

    def __mul__(self, other: "KTheoryClass") -> "KTheoryClass":
        return KTheoryClass(tuple(a * b for a, b in zip(self.values, other.values)))

    def __add__(self, other: "KTheoryClass") -> "KTheoryClass":
        return KTheoryClass(tuple(a + b for a, b in zip(self.values, other.values)))

    def to_json(self):
        return [format_poly(v) for v in self.values]


@dataclass(frozen=True)
class EquivariantBundleData:
    r: int
    weights: Tuple[Tuple[Weight, ...], ...]

    def __post_init__(self):
        ws = tuple(tuple(tuple(int(x) for x in lam) for lam in fibre) for fibre in self.weights)
        object.__setattr__(self, "weights", ws)
        ranks = {len(f) for f in ws}
        if len(ranks) > 1:
            raise StructuralError("fibres must all have the same rank")
        for fibre in ws:
            for lam in fibre:
                if len(lam) != self.r:
                    raise StructuralError(f"weight {lam} has the wrong rank")

    @property
    def rank(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    def __add__(self, other: "EquivariantBundleData") -> "EquivariantBundleData":
        return EquivariantBundleData(self.r, tuple(a + b for a, b in zip(self.weights, other.weights)))


def _character(vs, lam: Weight) -> LaurentPoly:
    return LaurentPoly.monomial(vs, lam)


def gkm_ktheory_check(c: KTheoryClass, g: MomentGraph):
    """``(ok, violated)``: edges whose difference is not divisible by ``x^α - 1``."""
    if len(c.values) != len(g.vertices):
        raise StructuralError("one value per vertex is required")
    vs = g.variables
    violated = []
    for k, (a, b, al) in enumerate(g.edges):
        diff = c.values[a] - c.values[b]
        if diff.variables != vs:
            raise StructuralError("class values use the wrong variables")
        if not laurent_divisible(diff, _character(vs, al) - 1):
            violated.append((a, b, al))
    return not violated, violated


def localize_bundle_K(b: EquivariantBundleData) -> KTheoryClass:
    vs = torus_variables(b.r)
    out = []
    for fibre in b.weights:
        acc = LaurentPoly.zero(vs)
        for lam in fibre:
            acc = acc + _character(vs, lam)
        out.append(acc)
    return KTheoryClass(tuple(out))


def _linear(vs, lam: Weight) -> MultiPoly:
    acc = MultiPoly.zero(vs)
    for v, a in zip(vs, lam):
        if a:
            acc = acc + MultiPoly.var(vs, v) * a
    return acc


def _elementary(forms: Sequence[MultiPoly], k: int, vs) -> MultiPoly:
    # e_k via the generating product prod (1 + f_i z), one degree at a time
    e = [MultiPoly.constant(vs, 1)] + [MultiPoly.zero(vs)] * len(forms)
    for f in forms:
        for j in range(len(forms), 0, -1):
            e[j] = e[j] + e[j - 1] * f
    return e[k]


def localize_chern(b: EquivariantBundleData, k: int) -> CohomologyClass:
    if not 0 <= k <= b.rank:
        raise ValueError(f"k must lie in 0..{b.rank}")
    vs = torus_variables(b.r)
    return CohomologyClass(tuple(_elementary([_linear(vs, lam) for lam in fibre], k, vs) for fibre in b.weights))


def _truncated_exp(form: MultiPoly, N: int, coef=1) -> MultiPoly:
    acc = MultiPoly.zero(form.variables)
    power = MultiPoly.constant(form.variables, 1)
    for m in range(N + 1):
        acc = acc + power * Fraction(coef, factorial(m))
        power = power * form
    return acc


def chern_character_from_K(c: KTheoryClass, N: int) -> List[MultiPoly]:
    """Replace each monomial ``x^λ`` by the truncated series of ``exp(<λ, .>)``."""
    out = []
    for val in c.values:
        vs = val.variables
        acc = MultiPoly.zero(vs)
        for lam, coef in val.terms.items():
            acc = acc + _truncated_exp(_linear(vs, lam), N, 1) * coef
        out.append(acc)
    return out


def chern_character_from_classes(b: EquivariantBundleData, N: int) -> List[MultiPoly]:
    """``rank + sum_m p_m/m!`` with power sums recovered from the localized
    Chern classes by Newton's identities."""
    vs = torus_variables(b.r)
    n = b.rank
    es = [localize_chern(b, k).values for k in range(n + 1)]
    out = []
    for v in range(len(b.weights)):
        e = [es[k][v] for k in range(n + 1)]
        p = [MultiPoly.constant(vs, n)]
        for m in range(1, N + 1):
            acc = MultiPoly.zero(vs)
            for i in range(1, m):
                if i <= n:
                    term = e[i] * p[m - i]
                    acc = acc + (term if i % 2 else -term)
            if m <= n:
                term = e[m] * m
                acc = acc + (term if m % 2 else -term)
            p.append(acc)
        total = p[0]
        for m in range(1, N + 1):
            total = total + p[m] * Fraction(1, factorial(m))
        out.append(total)
    return out


def chern_character_check(b: EquivariantBundleData, N: int) -> bool:
    if N < 1:
        raise ValueError("truncation order must be at least 1")
    left = chern_character_from_K(localize_bundle_K(b), N)
    right = chern_character_from_classes(b, N)
    return left == right


# ----------------------------------------------------------------------------
# Weyl transport


def weyl_transport_check(c: CohomologyClass, g: MomentGraph, perm: Sequence[int], mat: Sequence[Sequence[int]]) -> bool:
    """Transport ``c`` along ``(perm, mat)`` and test the GKM conditions.

    Vertex ``i`` of the new class carries ``c[perm[i]]`` precomposed with
    ``x -> mat x``.
    """
    nv = len(g.vertices)
    if sorted(perm) != list(range(nv)):
        raise StructuralError("perm is not a permutation of the vertices")
    if len(mat) != g.r or any(len(row) != g.r for row in mat):
        raise StructuralError("mat must be r x r")
    labels: Dict[frozenset, List[Weight]] = {}
    for a, b, al in g.edges:
        labels.setdefault(frozenset((a, b)), []).append(al)
    for a, b, al in g.edges:
        key = frozenset((perm[a], perm[b]))
        if key not in labels:
            raise StructuralError(f"edge ({a}, {b}) is not mapped to an edge")
        ok = False
        for beta in labels[key]:
            pulled = tuple(sum(mat[i][j] * beta[i] for i in range(g.r)) for j in range(g.r))
            if _parallel(pulled, al):
                ok = True
        if not ok:
            raise StructuralError(f"edge ({a}, {b}) label is not carried to a parallel label")
    vs = g.variables
    images = {}
    for i, v in enumerate(vs):
        acc = MultiPoly.zero(vs)
        for j, w in enumerate(vs):
            if mat[i][j]:
                acc = acc + MultiPoly.var(vs, w) * mat[i][j]
        images[v] = acc
    moved = CohomologyClass(tuple(c.values[perm[i]].substitute(images) for i in range(nv)))
    return is_gkm_class(moved, g)


def _parallel(a: Weight, b: Weight) -> bool:
    if not any(a) or not any(b):
        return False
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(len(a)))


# ----------------------------------------------------------------------------
# Betti numbers of the standard examples by enumeration


def flag_betti(n: int) -> List[int]:
    """Poincaré polynomial coefficients of the full flag variety of C^n (inversion counts)."""
    top = n * (n - 1) // 2
    out = [0] * (2 * top + 1)
    for p in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        out[2 * inv] += 1
    return out


def grassmannian_betti(k: int, n: int) -> List[int]:
    """Partitions in a k x (n-k) box counted by size."""
    top = k * (n - k)
    out = [0] * (2 * top + 1)
    for parts in itertools.product(range(n - k + 1), repeat=k):
        if all(parts[i] >= parts[i + 1] for i in range(k - 1)):
            out[2 * sum(parts)] += 1
    return out


def free_dim(r: int, d: int) -> int:
    """Dimension of degree-``d`` polynomials in ``r`` variables (cohomological ``d``)."""
    if d % 2 or d < 0:
        return 0
    if r == 0:
        return int(d == 0)
    return comb(d // 2 + r - 1, r - 1)
