"""Zero schemes of section vector fields in charts of (products of)
projective spaces, with graded Čech cohomology by degree truncation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .exactpoly import MultiPoly, RationalSeries, WeightedGrading, format_poly, parse_poly
from .groebner import (
    GroebnerBasis,
    MonomialOrder,
    buchberger,
    monomials_in_degree,
    normal_form,
)
from .liegroup import MatrixElt, SectionFamily, StructuralError

DEFAULT_BOUND = 20

Chart = Tuple[int, ...]


class TruncationExceeded(ValueError):
    """A requested degree lies beyond the configured truncation bound."""


# ----------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class ProjectiveFactor:
    """One projective factor with optional homogeneous relations."""

    size: int
    hom_names: Tuple[str, ...]
    relations: Tuple[MultiPoly, ...] = ()
    chart_names: Tuple[Tuple[str, ...], ...] = ()

    def __post_init__(self):
        if self.size < 1 or len(self.hom_names) != self.size:
            raise StructuralError("one homogeneous name per coordinate is required")
        names = self.chart_names
        if not names:
            names = tuple(
                tuple(f"{self.hom_names[j]}_{self.hom_names[i]}" for j in range(self.size) if j != i)
                for i in range(self.size)
            )
        if len(names) != self.size or any(len(n) != self.size - 1 for n in names):
            raise StructuralError("chart names must list size-1 names for every chart")
        object.__setattr__(self, "chart_names", tuple(tuple(n) for n in names))
        for r in self.relations:
            if r.variables != self.hom_names:
                raise StructuralError("relations must be polynomials in the homogeneous coordinates")
            if len({sum(e) for e in r.terms}) > 1:
                raise StructuralError(f"relation {format_poly(r)} is not homogeneous")

    @classmethod
    def projective(cls, n: int, stem: str = "x", chart_names=None, relations=()):
        hom = tuple(f"{stem}{i}" for i in range(n + 1))
        rels = tuple(parse_poly(r, hom) if isinstance(r, str) else r for r in relations)
        return cls(n + 1, hom, rels, tuple(tuple(c) for c in chart_names) if chart_names else ())

    def coordinate_name(self, chart: int, j: int) -> str:
        """Name of ``x_j / x_chart``."""
        return self.chart_names[chart][j if j < chart else j - 1]


class ChartedSpace:
    """A product of projective spaces covered by the standard affine charts.

    Chart coordinates are ratios of homogeneous coordinates, so every
    transition is a Laurent monomial map.
    """

    def __init__(self, factors: Sequence[ProjectiveFactor]):
        self.factors = tuple(factors)
        if not self.factors:
            raise StructuralError("at least one factor is required")
        self.charts: List[Chart] = list(itertools.product(*[range(f.size) for f in self.factors]))
        self._offsets = []
        off = 0
        for f in self.factors:
            self._offsets.append(off)
            off += f.size
        self.hom_length = off
        seen = set()
        for c in self.charts:
            for name in self.chart_variables(c):
                seen.add(name)
        for f in self.factors:
            for n in f.hom_names:
                if n in seen:
                    raise StructuralError(f"name {n!r} used both as homogeneous and chart coordinate")

    @classmethod
    def projective(cls, n: int, **kw) -> "ChartedSpace":
        return cls([ProjectiveFactor.projective(n, **kw)])

    @property
    def kind(self) -> str:
        if len(self.factors) == 1:
            return "projective"
        return "product"

    def coords(self, chart: Chart) -> List[Tuple[int, int, str]]:
        """``(factor, j, name)`` for every coordinate ``x_j / x_{chart_f}``."""
        out = []
        for f, (fac, i) in enumerate(zip(self.factors, chart)):
            for j in range(fac.size):
                if j != i:
                    out.append((f, j, fac.coordinate_name(i, j)))
        return out

    def chart_variables(self, chart: Chart) -> Tuple[str, ...]:
        return tuple(name for _, _, name in self.coords(chart))

    def hom_index(self, f: int, j: int) -> int:
        return self._offsets[f] + j

    def coord_hom_vector(self, chart: Chart, f: int, j: int) -> List[int]:
        v = [0] * self.hom_length
        v[self.hom_index(f, j)] += 1
        v[self.hom_index(f, chart[f])] -= 1
        return v

    def hom_to_chart(self, chart: Chart, hom: Sequence[int]) -> List[int]:
        """Chart exponents of a Laurent monomial in homogeneous ratios."""
        return [hom[self.hom_index(f, j)] for f, j, _ in self.coords(chart)]

    def overlap_exponent(self, h: Chart, k: Chart) -> List[int]:
        """Exponent of ``g_hk``: the product of ``x_{k_f}/x_{h_f}`` over factors
        where the charts differ.  ``U_h ∩ U_k = {g_hk != 0}`` inside ``U_h``."""
        out = [0] * len(self.coords(h))
        for pos, (f, j, _) in enumerate(self.coords(h)):
            if k[f] == j:
                out[pos] = 1
        return out

    def relations_in_chart(self, chart: Chart, variables: Sequence[str]) -> List[MultiPoly]:
        out = []
        for f, fac in enumerate(self.factors):
            images = {}
            for j, hn in enumerate(fac.hom_names):
                images[hn] = 1 if j == chart[f] else MultiPoly.var(tuple(variables), fac.coordinate_name(chart[f], j))
            for r in fac.relations:
                out.append(r.substitute(images, variables))
        return out

    def transition(self, h: Chart, k: Chart) -> Dict[str, Dict[str, int]]:
        """Chart-``k`` coordinates as Laurent monomials in chart-``h`` coordinates."""
        names_h = self.chart_variables(h)
        out = {}
        for f, j, name in self.coords(k):
            exps = self.hom_to_chart(h, self.coord_hom_vector(k, f, j))
            out[name] = {n: e for n, e in zip(names_h, exps) if e}
        return out

    def check_transitions(self) -> bool:
        """Transition maps compose to the identity on every ordered pair."""
        for h in self.charts:
            for k in self.charts:
                for f, j, name in self.coords(h):
                    hom = self.coord_hom_vector(h, f, j)
                    back = self.hom_to_chart(h, _chart_to_hom(self, k, self.hom_to_chart(k, hom)))
                    want = [int(n == name) for n in self.chart_variables(h)]
                    if back != want:
                        return False
        return True

    def describe(self) -> dict:
        return {
            "factors": [
                {
                    "size": f.size,
                    "hom_names": list(f.hom_names),
                    "relations": [format_poly(r) for r in f.relations],
                    "chart_names": [list(c) for c in f.chart_names],
                }
                for f in self.factors
            ]
        }


def _chart_to_hom(space: ChartedSpace, chart: Chart, exps: Sequence[int]) -> List[int]:
    hom = [0] * space.hom_length
    for (f, j, _), e in zip(space.coords(chart), exps):
        if e:
            hom[space.hom_index(f, j)] += e
            hom[space.hom_index(f, chart[f])] -= e
    return hom


# ----------------------------------------------------------------------------
# representations and actions


def wedge2_matrix(m: MatrixElt) -> MatrixElt:
    """``Λ²m`` on the basis ``e_i ∧ e_j`` (i < j) in lexicographic order."""
    n = m.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    index = {p: k for k, p in enumerate(pairs)}
    zero = MultiPoly.zero(m.params)
    cols = []
    for i, j in pairs:
        col = [zero] * len(pairs)
        # m e_i ∧ e_j + e_i ∧ m e_j
        for a in range(n):
            for (p, q, coef) in ((a, j, m[a, i]), (i, a, m[a, j])):
                if coef.is_zero() or p == q:
                    continue
                sign = 1
                if p > q:
                    p, q, sign = q, p, -1
                k = index[(p, q)]
                col[k] = col[k] + coef * sign
        cols.append(col)
    rows = [[cols[c][r] for c in range(len(pairs))] for r in range(len(pairs))]
    return MatrixElt(rows, m.params)


def wedge2_exponents(d: Sequence[int]) -> Tuple[int, ...]:
    n = len(d)
    return tuple(d[i] + d[j] for i in range(n) for j in range(i + 1, n))


REPRESENTATIONS = {
    "standard": (lambda m: m, lambda d: tuple(d)),
    "wedge2": (wedge2_matrix, wedge2_exponents),
}


def _block(a: int, b: int):
    def mat(m: MatrixElt) -> MatrixElt:
        return MatrixElt([[m[i, j] for j in range(a, b)] for i in range(a, b)], m.params)

    return mat, lambda d: tuple(d[a:b])


def sym_matrix(m: MatrixElt, k: int) -> MatrixElt:
    """Derivation action of a 2x2 ``m`` on binary forms of degree ``k``,
    basis ``x^{k-i} y^i``."""
    if m.n != 2:
        raise StructuralError("symmetric powers are defined for 2x2 matrices")
    zero = MultiPoly.zero(m.params)
    cols = []
    for i in range(k + 1):
        a, b = k - i, i
        col = [zero] * (k + 1)
        # x -> m00 x + m10 y, y -> m01 x + m11 y
        if a:
            col[i] = col[i] + m[0, 0] * a
            if i + 1 <= k:
                col[i + 1] = col[i + 1] + m[1, 0] * a
        if b:
            col[i - 1] = col[i - 1] + m[0, 1] * b
            col[i] = col[i] + m[1, 1] * b
        cols.append(col)
    return MatrixElt([[cols[c][r] for c in range(k + 1)] for r in range(k + 1)], m.params)


def representation(name: str):
    """Look up a representation by name; ``block:a:b`` is the diagonal block
    on coordinates ``a..b-1`` and ``sym:k`` the k-th symmetric power of gl_2."""
    if name in REPRESENTATIONS:
        return REPRESENTATIONS[name]
    if name.startswith("block:"):
        try:
            a, b = (int(x) for x in name.split(":")[1:])
        except ValueError:
            raise StructuralError(f"malformed block representation {name!r}") from None
        if not 0 <= a < b:
            raise StructuralError(f"malformed block representation {name!r}")
        return _block(a, b)
    if name.startswith("sym:"):
        try:
            k = int(name[4:])
        except ValueError:
            raise StructuralError(f"malformed symmetric power {name!r}") from None
        return (lambda m: sym_matrix(m, k)), (lambda d: tuple((k - i) * d[0] + i * d[1] for i in range(k + 1)))
    raise StructuralError(f"unknown representation {name!r}")


@dataclass(frozen=True)
class ChartedAction:
    """How the group acts on each projective factor: a named representation."""

    space: ChartedSpace
    reps: Tuple[str, ...]

    def __post_init__(self):
        if len(self.reps) != len(self.space.factors):
            raise StructuralError("one representation per factor is required")
        for r in self.reps:
            representation(r)

    def factor_matrix(self, m: MatrixElt, f: int) -> MatrixElt:
        out = representation(self.reps[f])[0](m)
        if out.n != self.space.factors[f].size:
            raise StructuralError(
                f"factor {f} has {self.space.factors[f].size} coordinates, representation has size {out.n}"
            )
        return out

    def factor_exponents(self, d: Sequence[int], f: int) -> Tuple[int, ...]:
        return tuple(representation(self.reps[f])[1](d))

    def coordinate_weights(self, chart: Chart, d: Sequence[int]) -> List[int]:
        """Weight ``D_i - D_j`` of ``x_j/x_i`` for exponents ``d`` pushed through the reps."""
        out = []
        exps = [self.factor_exponents(d, f) for f in range(len(self.space.factors))]
        for f, j, _ in self.space.coords(chart):
            out.append(exps[f][chart[f]] - exps[f][j])
        return out

    def vector_field(self, m: MatrixElt, chart: Chart, variables: Sequence[str]) -> List[MultiPoly]:
        variables = tuple(variables)
        out = []
        for f in range(len(self.space.factors)):
            mf = self.factor_matrix(m, f)
            out.extend(_chart_field(mf, self.space, chart, f, variables))
        return out


def _chart_point(space, chart, f, variables):
    fac = space.factors[f]
    x = []
    for j in range(fac.size):
        if j == chart[f]:
            x.append(MultiPoly.constant(variables, 1))
        else:
            x.append(MultiPoly.var(variables, fac.coordinate_name(chart[f], j)))
    return x


def _chart_field(mf: MatrixElt, space, chart, f, variables):
    x = _chart_point(space, chart, f, variables)
    mx = mf.apply(x)
    i = chart[f]
    return [mx[j] - x[j] * mx[i] for j in range(len(x)) if j != i]


def _as_space(space) -> ChartedSpace:
    return space if isinstance(space, ChartedSpace) else ChartedSpace(space)


def _check_chart(space: ChartedSpace, chart) -> Chart:
    if isinstance(chart, int):
        chart = (chart,)
    chart = tuple(chart)
    if chart not in space.charts:
        raise IndexError(f"chart {chart} out of range")
    return chart


def vector_field_chart(m: MatrixElt, space: ChartedSpace, chart, reps: Optional[Sequence[str]] = None) -> List[MultiPoly]:
    """Components of the field of ``m`` in the chart, over ``params + chart coords``."""
    chart = _check_chart(space, chart)
    action = ChartedAction(space, tuple(reps) if reps else ("standard",) * len(space.factors))
    variables = tuple(m.params) + space.chart_variables(chart)
    return action.vector_field(m, chart, variables)


def fixed_locus_ideal(m: MatrixElt, space: ChartedSpace, chart, kind: str = "group") -> List[MultiPoly]:
    """Generators of the fixed locus of a group element (``kind='group'``) or
    of the zero locus of a Lie algebra element (``kind='algebra'``)."""
    chart = _check_chart(space, chart)
    variables = tuple(m.params) + space.chart_variables(chart)
    gens = []
    for f in range(len(space.factors)):
        # the projective fixed-point equations have the same shape as the field
        gens.extend(_chart_field(m, space, chart, f, variables))
    if kind not in ("group", "algebra"):
        raise ValueError(f"unknown kind {kind!r}")
    return [_normalize_sign(g) for g in gens if not g.is_zero()]


def _normalize_sign(p: MultiPoly) -> MultiPoly:
    if p.is_zero():
        return p
    lead = p.sorted_terms()[0][1]
    return -p if lead < 0 else p


# ----------------------------------------------------------------------------
# the zero scheme model


@dataclass
class _Ring:
    sigma: Tuple[Chart, ...]
    home: Chart
    variables: Tuple[str, ...]
    weights: List[Tuple[int, ...]]
    basis: GroebnerBasis
    g_exp: List[int]
    n_params: int
    has_u: bool


class ZeroSchemeModel:
    """Per-chart ideals of the zero scheme inside ``S x X``."""

    def __init__(
        self,
        section: SectionFamily,
        action: ChartedAction,
        *,
        bound: int = DEFAULT_BOUND,
        refine: bool = False,
        character_window: Optional[Sequence[Tuple[int, int]]] = None,
        cover: Optional[Sequence[Chart]] = None,
    ):
        self.section = section
        self.action = action
        self.space = action.space
        self.bound = bound
        self.params = tuple(section.parameters)
        self.param_weights = tuple(section.grading.weights)
        self.H = section.subgroup
        self.refine = refine
        self._cache: Dict = {}
        if refine:
            if not section.base.is_zero():
                raise StructuralError("torus refinement needs e = 0 (the torus must fix the section)")
            chars = []
            for d in section.directions:
                c = d.constant_entries()
                vals = [c[i][i] for i in range(d.n)]
                if any(v.denominator != 1 for v in vals):
                    raise StructuralError("torus directions must have integral diagonal")
                chars.append([int(v) for v in vals])
            self.torus_characters = chars
            if character_window is None:
                raise StructuralError("a character window is required when refining by the torus")
            if len(character_window) != len(chars):
                raise StructuralError("one window range per torus direction is required")
            self.character_window = [tuple(w) for w in character_window]
        else:
            self.torus_characters = []
            self.character_window = []

        family = section.matrix()
        self.generators: Dict[Chart, List[MultiPoly]] = {}
        self.bases: Dict[Chart, GroebnerBasis] = {}
        for chart in self.space.charts:
            variables = self.chart_variables(chart)
            field_ = self.action.vector_field(family, chart, variables)
            gens = [_normalize_sign(g) for g in field_ if not g.is_zero()]
            gens += [_normalize_sign(r) for r in self.space.relations_in_chart(chart, variables) if not r.is_zero()]
            wv = self.weight_vectors(chart)
            for g in gens:
                if _vector_degree(g, wv) is None:
                    raise StructuralError(
                        f"generator {format_poly(g)} in chart {chart} is not homogeneous; inconsistent H data"
                    )
            self.generators[chart] = gens
            self.bases[chart] = buchberger(gens, self._order(chart), variables)
        self.cover = self._select_cover(cover)

    # -- gradings

    def chart_variables(self, chart: Chart) -> Tuple[str, ...]:
        return self.params + self.space.chart_variables(chart)

    def grading(self, chart) -> WeightedGrading:
        chart = _check_chart(self.space, chart)
        coord = self.action.coordinate_weights(chart, self.H.exponents)
        return WeightedGrading(self.chart_variables(chart), self.param_weights + tuple(coord))

    def weight_vectors(self, chart: Chart) -> List[Tuple[int, ...]]:
        g = self.grading(chart)
        if not self.refine:
            return [(w,) for w in g.weights]
        r = len(self.torus_characters)
        out = [(w,) + (0,) * r for w in self.param_weights]
        coord_w = g.weights[len(self.params):]
        chars = [
            [self.action.factor_exponents(c, f) for f in range(len(self.space.factors))]
            for c in self.torus_characters
        ]
        for (f, j, _), w in zip(self.space.coords(chart), coord_w):
            i = chart[f]
            out.append((w,) + tuple(ch[f][i] - ch[f][j] for ch in chars))
        return out

    def _order(self, chart: Chart) -> MonomialOrder:
        g = self.grading(chart)
        if all(w >= 0 for w in g.weights):
            return MonomialOrder.weighted(g)
        return MonomialOrder("grevlex", g.variables)

    def chart_ideal(self, chart) -> GroebnerBasis:
        return self.bases[_check_chart(self.space, chart)]

    def chart_generators(self, chart) -> List[str]:
        return [format_poly(g) for g in self.generators[_check_chart(self.space, chart)]]

    # -- cover

    def _select_cover(self, requested) -> List[Chart]:
        live = [c for c in self.space.charts if not self.bases[c].is_unit()]
        if requested is not None:
            cover = [_check_chart(self.space, c) for c in requested]
            for c in cover:
                if c not in live:
                    raise StructuralError(f"chart {c} misses the zero scheme")
            for c in live:
                if c not in cover and not self._covered(c, cover):
                    raise StructuralError(f"chart {c} is not covered by {cover}")
            return sorted(cover)
        cover = list(live)
        for c in list(live):
            rest = [k for k in cover if k != c]
            if rest and self._covered(c, rest):
                cover = rest
        return sorted(cover)

    def _covered(self, j: Chart, cover: Sequence[Chart]) -> bool:
        """Whether ``Z ∩ U_j`` lies in the union of the ``U_i`` for ``i`` in ``cover``."""
        variables = self.chart_variables(j)
        extra = []
        npar = len(self.params)
        for i in cover:
            exp = [0] * npar + self.space.overlap_exponent(j, i)
            extra.append(MultiPoly.monomial(variables, exp))
        gb = buchberger(list(self.generators[j]) + extra, MonomialOrder("grevlex", variables), variables)
        return gb.is_unit()

    # -- overlap rings

    def ring(self, sigma: Sequence[Chart], home: Optional[Chart] = None) -> _Ring:
        sigma = tuple(sorted(sigma))
        home = sigma[0] if home is None else home
        key = ("ring", sigma, home)
        if key in self._cache:
            return self._cache[key]
        coords = self.space.chart_variables(home)
        g_exp = [0] * len(coords)
        for k in sigma:
            if k != home:
                g_exp = [a + b for a, b in zip(g_exp, self.space.overlap_exponent(home, k))]
        has_u = any(g_exp)
        base_vars = self.chart_variables(home)
        wv = self.weight_vectors(home)
        if has_u:
            u = "_u"
            while u in base_vars:
                u = "_" + u
            variables = base_vars + (u,)
            npar = len(self.params)
            gdeg = [0] * len(wv[0])
            for pos, e in enumerate(g_exp):
                for t in range(len(gdeg)):
                    gdeg[t] += e * wv[npar + pos][t]
            weights = list(wv) + [tuple(-x for x in gdeg)]
            gens = [g.rename(variables) for g in self.generators[home]]
            gmon = MultiPoly.monomial(variables, [0] * npar + g_exp + [1])
            gens.append(gmon - 1)
        else:
            variables = base_vars
            weights = list(wv)
            gens = list(self.generators[home])
        basis = buchberger(gens, MonomialOrder("grevlex", variables), variables)
        r = _Ring(sigma, home, variables, weights, basis, g_exp, len(self.params), has_u)
        self._cache[key] = r
        return r

    def piece(self, sigma, target) -> List[Tuple[int, ...]]:
        key = ("piece", tuple(sorted(sigma)), tuple(target))
        if key not in self._cache:
            r = self.ring(sigma)
            self._cache[key] = monomials_in_degree(r.basis.leading_monomials, r.weights, target)
        return self._cache[key]

    def _to_hom(self, r: _Ring, exp: Sequence[int]):
        npar = r.n_params
        coords_e = list(exp[npar:npar + len(r.g_exp)])
        if r.has_u:
            m = exp[-1]
            coords_e = [a - m * g for a, g in zip(coords_e, r.g_exp)]
        return tuple(exp[:npar]), _chart_to_hom(self.space, r.home, coords_e)

    def transport(self, src: _Ring, exp: Sequence[int], dst: _Ring) -> MultiPoly:
        """Image of a monomial of ``src`` in ``dst`` (``src.sigma ⊂ dst.sigma``), reduced."""
        pexp, hom = self._to_hom(src, exp)
        e = self.space.hom_to_chart(dst.home, hom)
        m = 0
        for a, g in zip(e, dst.g_exp):
            if a < 0:
                if g <= 0:
                    raise StructuralError("restriction needs an inverse that is not available")
                m = max(m, -(-(-a) // g))
        e = [a + m * g for a, g in zip(e, dst.g_exp)]
        full = list(pexp) + e + ([m] if dst.has_u else [])
        if m and not dst.has_u:
            raise StructuralError("restriction needs an inverse that is not available")
        mono = MultiPoly.monomial(dst.variables, full)
        return normal_form(mono, dst.basis)

    # -- Čech complex

    def _simplices(self, p: int) -> List[Tuple[Chart, ...]]:
        return list(itertools.combinations(self.cover, p + 1))

    def cochain_dim(self, p: int, target) -> int:
        return sum(len(self.piece(s, target)) for s in self._simplices(p))

    def differential_rank(self, p: int, target) -> int:
        """Rank of ``d^p : C^p -> C^{p+1}`` in the given multidegree."""
        if p < 0 or p + 1 >= len(self.cover):
            return 0
        key = ("rank", p, tuple(target))
        if key in self._cache:
            return self._cache[key]
        targets = self._simplices(p + 1)
        offsets = {}
        pos = 0
        index = {}
        for tau in targets:
            mons = self.piece(tau, target)
            index[tau] = {m: pos + k for k, m in enumerate(mons)}
            offsets[tau] = pos
            pos += len(mons)
        columns = []
        for sigma in self._simplices(p):
            src = self.ring(sigma)
            mons = self.piece(sigma, target)
            if not mons:
                continue
            for mon in mons:
                col: Dict[int, Fraction] = {}
                for tau in targets:
                    if not set(sigma) <= set(tau):
                        continue
                    missing = [c for c in tau if c not in sigma][0]
                    k = tau.index(missing)
                    sign = -1 if k % 2 else 1
                    img = self.transport(src, mon, self.ring(tau))
                    idx = index[tau]
                    for e, c in img.terms.items():
                        if e not in idx:
                            raise StructuralError("restriction left the graded piece")
                        col[idx[e]] = col.get(idx[e], 0) + sign * c
                columns.append({k: v for k, v in col.items() if v})
        rk = linalg.rank(columns)
        self._cache[key] = rk
        return rk

    def cohomology_in(self, i: int, target) -> int:
        return self.cochain_dim(i, target) - self.differential_rank(i, target) - self.differential_rank(i - 1, target)

    def targets(self, d: int):
        if not self.refine:
            return [(d,)]
        ranges = [range(lo, hi + 1) for lo, hi in self.character_window]
        return [(d,) + chi for chi in itertools.product(*ranges)]

    def _check_degree(self, d: int):
        if d < 0:
            raise ValueError("degree must be nonnegative")
        if d > self.bound:
            raise TruncationExceeded(f"degree {d} exceeds the truncation bound {self.bound}")


def _vector_degree(p: MultiPoly, weights: Sequence[Tuple[int, ...]]):
    degs = set()
    for e in p.terms:
        degs.add(tuple(sum(k * w[t] for k, w in zip(e, weights)) for t in range(len(weights[0]))))
    if len(degs) > 1:
        return None
    return degs.pop() if degs else ()


def build_zero_scheme(section: SectionFamily, action: ChartedAction, **kw) -> ZeroSchemeModel:
    """Zero scheme of the total vector field of ``section`` on ``S x X``."""
    for f in range(len(action.space.factors)):
        action.factor_matrix(section.base, f)
    return ZeroSchemeModel(section, action, **kw)


def cech_cohomology_dim(z: ZeroSchemeModel, i: int, d: int) -> int:
    """Dimension of the degree-``d`` part of ``H^i(Z, O_Z)`` on the chart cover.

    With torus refinement, the sum over the characters in the window.
    Raises :class:`TruncationExceeded` beyond the bound and
    :class:`InfiniteGradedPiece` if a cochain piece is infinite dimensional.
    """
    if i < 0:
        raise ValueError("cohomological index must be nonnegative")
    z._check_degree(d)
    if not z.cover:
        return 0
    return sum(z.cohomology_in(i, t) for t in z.targets(d))


def global_sections_dim(z: ZeroSchemeModel, d: int) -> int:
    return cech_cohomology_dim(z, 0, d)


# ----------------------------------------------------------------------------
# reduced components glued at points


@dataclass(frozen=True)
class Component:
    """An affine line with parameter weight ``weight`` (or a point when 0).

    ``point`` optionally gives the homogeneous coordinates of the image as
    polynomials in ``s``, used to validate incidences.
    """

    name: str
    weight: int
    point: Optional[Tuple[MultiPoly, ...]] = None
    params: Optional[Tuple[MultiPoly, ...]] = None

    def at(self, s):
        if self.point is None:
            return None
        return [p.evaluate({"s": s}) for p in self.point]


@dataclass(frozen=True)
class ComponentCurveSet:
    components: Tuple[Component, ...]
    incidences: Tuple[Tuple[int, Fraction, int, Fraction], ...] = ()

    def __post_init__(self):
        for i, si, j, sj in self.incidences:
            a, b = self.components[i], self.components[j]
            if a.weight == 0 and si != 0 or b.weight == 0 and sj != 0:
                raise StructuralError("points only have the parameter value 0")
            pa, pb = a.at(si), b.at(sj)
            if pa is not None and pb is not None and not _proportional(pa, pb):
                raise StructuralError(f"incidence point differs on {a.name} and {b.name}")
            if a.params is not None and b.params is not None:
                va = [p.evaluate({"s": si}) for p in a.params]
                vb = [p.evaluate({"s": sj}) for p in b.params]
                if va != vb:
                    raise StructuralError(f"incidence point differs on {a.name} and {b.name}")

    def check_in_model(self, z: ZeroSchemeModel) -> bool:
        """Every parametrized line lies in the zero scheme (in some chart)."""
        for comp in self.components:
            if comp.point is None or comp.params is None:
                continue
            ok = False
            for chart in z.space.charts:
                f = 0
                hn = comp.point[chart[f]]
                if hn.is_zero() or not hn.is_constant():
                    continue
                images = {p: v for p, v in zip(z.params, comp.params)}
                for (_, j, name) in z.space.coords(chart):
                    images[name] = comp.point[j] * (1 / hn.constant_term())
                sv = comp.point[0].variables
                if all(g.substitute(images, sv).is_zero() for g in z.generators[chart]):
                    ok = True
                    break
            if not ok:
                return False
        return True


def _proportional(a, b) -> bool:
    if len(a) != len(b):
        return False
    for i in range(len(a)):
        for j in range(len(a)):
            if a[i] * b[j] != a[j] * b[i]:
                return False
    return any(a) and any(b)


def reduced_ring_dims(c: ComponentCurveSet, d: int) -> int:
    """Degree-``d`` dimension of tuples of functions on the components that
    agree at every incidence point."""
    unknowns = {}
    for k, comp in enumerate(c.components):
        if comp.weight == 0:
            if d == 0:
                unknowns[k] = 0
        elif d % comp.weight == 0 and d >= 0:
            unknowns[k] = d // comp.weight
    cols = {k: n for n, k in enumerate(sorted(unknowns))}
    rows = []
    for i, si, j, sj in c.incidences:
        row: Dict[int, Fraction] = {}
        if i in unknowns:
            row[cols[i]] = row.get(cols[i], 0) + Fraction(si) ** unknowns[i]
        if j in unknowns:
            row[cols[j]] = row.get(cols[j], 0) - Fraction(sj) ** unknowns[j]
        rows.append(row)
    return len(unknowns) - linalg.rank(rows)


# ----------------------------------------------------------------------------
# Poincaré series


def match_closed_form(coeffs: Sequence[int], max_r: int = 4, margin: int = 4) -> Optional[RationalSeries]:
    """Find ``N(t)/(1-t^2)^r`` reproducing ``coeffs`` with a short numerator.

    The numerator must vanish on the last ``margin`` known coefficients,
    otherwise the match is not trusted.
    """
    n = len(coeffs)
    for r in range(max_r + 1):
        num = list(coeffs)
        for _ in range(r):
            num = [num[i] - (num[i - 2] if i >= 2 else 0) for i in range(n)]
        last = max((i for i, x in enumerate(num) if x), default=-1)
        if last < n - margin:
            den = [1]
            for _ in range(r):
                den = [a - b for a, b in itertools.zip_longest(den + [0, 0], [0, 0] + den, fillvalue=0)]
            return RationalSeries.from_coefficients(num[: last + 1] or [0], den)
    return None


def poincare_series_report(z: ZeroSchemeModel, bound: int) -> dict:
    if bound > z.bound:
        raise TruncationExceeded(f"bound {bound} exceeds the truncation bound {z.bound}")
    coeffs = [global_sections_dim(z, d) for d in range(bound + 1)]
    form = match_closed_form(coeffs)
    return {
        "coefficients": coeffs,
        "closed_form": str(form) if form is not None else None,
        "series": form,
    }
