"""Matrix Lie algebra data: principal sl2 pairs, Kostant sections and the
grading action on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .exactpoly import LaurentPoly, MultiPoly, WeightedGrading, format_poly, parse_poly


class StructuralError(ValueError):
    """Input data that does not have the shape an operation requires."""


class MatrixElt:
    """A square matrix whose entries are polynomials in shared parameters."""

    __slots__ = ("n", "params", "rows")

    def __init__(self, rows, params: Sequence[str] = ()):
        params = tuple(params)
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise StructuralError("matrix must be square")
        conv = []
        for r in rows:
            out = []
            for x in r:
                if isinstance(x, MultiPoly):
                    if x.variables != params:
                        x = x.rename(params)
                    out.append(x)
                elif isinstance(x, str):
                    out.append(parse_poly(x, params))
                else:
                    out.append(MultiPoly.constant(params, x))
            conv.append(tuple(out))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "rows", tuple(conv))

    def __setattr__(self, name, value):
        raise AttributeError("matrices are immutable")

    @classmethod
    def zeros(cls, n, params=()):
        return cls([[0] * n for _ in range(n)], params)

    @classmethod
    def identity(cls, n, params=()):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], params)

    @classmethod
    def unit(cls, n, i, j, params=()):
        return cls([[int((a, b) == (i, j)) for b in range(n)] for a in range(n)], params)

    @classmethod
    def diag(cls, entries, params=()):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], params)

    def with_params(self, params: Sequence[str]) -> "MatrixElt":
        return MatrixElt([[x.rename(tuple(params)) for x in r] for r in self.rows], params)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other):
        if not isinstance(other, MatrixElt):
            raise TypeError("expected a MatrixElt")
        if other.n != self.n:
            raise StructuralError(f"size mismatch: {self.n} vs {other.n}")
        if other.params != self.params:
            raise StructuralError("matrices use different parameter lists")

    def __add__(self, other):
        self._check(other)
        return MatrixElt([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.params)

    def __sub__(self, other):
        self._check(other)
        return MatrixElt([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.params)

    def __neg__(self):
        return MatrixElt([[-a for a in r] for r in self.rows], self.params)

    def scale(self, c) -> "MatrixElt":
        return MatrixElt([[a * c for a in r] for r in self.rows], self.params)

    def __matmul__(self, other):
        self._check(other)
        n = self.n
        zero = MultiPoly.zero(self.params)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    a = self.rows[i][k]
                    b = other.rows[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return MatrixElt(out, self.params)

    def __eq__(self, other):
        return isinstance(other, MatrixElt) and self.params == other.params and self.rows == other.rows

    def __hash__(self):
        return hash((self.params, self.rows))

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def is_constant(self) -> bool:
        return all(x.is_constant() for r in self.rows for x in r)

    def constant_entries(self) -> List[List[Fraction]]:
        return [[x.constant_term() for x in r] for r in self.rows]

    def trace(self) -> MultiPoly:
        acc = MultiPoly.zero(self.params)
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def apply(self, vector: Sequence[MultiPoly]) -> List[MultiPoly]:
        """Matrix times a column vector of polynomials (in any common ring)."""
        vars_ = vector[0].variables
        out = []
        for r in self.rows:
            acc = MultiPoly.zero(vars_)
            for a, x in zip(r, vector):
                if a and x:
                    acc = acc + a.rename(vars_) * x
            out.append(acc)
        return out

    def to_json(self):
        return [[format_poly(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, rows, params=()):
        return cls([[parse_poly(str(x), params) for x in r] for r in rows], params)

    def __repr__(self):
        return f"MatrixElt({self.to_json()}, params={list(self.params)})"


def bracket(a: MatrixElt, b: MatrixElt) -> MatrixElt:
    """Commutator ``ab - ba``."""
    if a.n != b.n:
        raise StructuralError(f"size mismatch: {a.n} vs {b.n}")
    return (a @ b) - (b @ a)


@dataclass(frozen=True)
class Sl2Pair:
    e: MatrixElt
    h: MatrixElt
    f: Optional[MatrixElt] = None

    def __post_init__(self):
        if bracket(self.h, self.e) != self.e.scale(2):
            raise StructuralError("[h, e] != 2e")
        if self.f is not None:
            if bracket(self.e, self.f) != self.h:
                raise StructuralError("[e, f] != h")
            if bracket(self.h, self.f) != self.f.scale(-2):
                raise StructuralError("[h, f] != -2f")

    @property
    def n(self):
        return self.e.n

    def one_param_subgroup(self) -> "OneParamSubgroup":
        h = self.h.constant_entries()
        n = self.n
        if any(h[i][j] for i in range(n) for j in range(n) if i != j):
            raise StructuralError("h is not diagonal")
        ds = [h[i][i] for i in range(n)]
        if any(x.denominator != 1 for x in ds):
            raise StructuralError("h has non-integral eigenvalues")
        return OneParamSubgroup(tuple(int(x) for x in ds))


@dataclass(frozen=True)
class OneParamSubgroup:
    """``H^t = diag(t^{d_1}, ..., t^{d_n})``."""

    exponents: Tuple[int, ...]

    @property
    def n(self):
        return len(self.exponents)

    def as_matrix(self) -> MatrixElt:
        return MatrixElt.diag(list(self.exponents))


def principal_pair_gl(n: int) -> Sl2Pair:
    """The principal sl2 triple in gl_n: superdiagonal e, h = diag(n-1, ..., 1-n)."""
    if n < 1:
        raise StructuralError("n must be at least 1")
    e = MatrixElt([[int(j == i + 1) for j in range(n)] for i in range(n)])
    h = MatrixElt.diag([n - 1 - 2 * i for i in range(n)])
    # f has subdiagonal entries i(n-i), i = 1..n-1
    f = MatrixElt([[(j + 1) * (n - j - 1) if i == j + 1 else 0 for j in range(n)] for i in range(n)])
    return Sl2Pair(e, h, f)


def centralizer(m: MatrixElt, *, within: Optional[Sequence[MatrixElt]] = None) -> List[MatrixElt]:
    """Basis of ``{X : [m, X] = 0}``, in gl_n or in the span of ``within``."""
    if not m.is_constant():
        raise StructuralError("centralizer needs a constant matrix")
    n = m.n
    space = list(within) if within is not None else [
        MatrixElt.unit(n, i, j) for i in range(n) for j in range(n)
    ]
    cols = [bracket(m, x).constant_entries() for x in space]
    rows = []
    for i in range(n):
        for j in range(n):
            rows.append([c[i][j] for c in cols])
    basis = []
    for vec in linalg.nullspace(rows, len(space)):
        acc = MatrixElt.zeros(n)
        for c, x in zip(vec, space):
            if c:
                acc = acc + x.scale(c)
        basis.append(acc)
    return basis


def ad_weight(m: MatrixElt, H: OneParamSubgroup) -> Optional[int]:
    """The ``k`` with ``Ad_{H^t} m = t^k m``; None if ``m`` is not an eigenvector."""
    ks = {H.exponents[i] - H.exponents[j] for i in range(m.n) for j in range(m.n) if not m[i, j].is_zero()}
    if len(ks) > 1:
        return None
    return ks.pop() if ks else 0


@dataclass(frozen=True)
class SectionFamily:
    """The affine family ``base + sum_i p_i * directions[i]``."""

    base: MatrixElt
    directions: Tuple[MatrixElt, ...]
    parameters: Tuple[str, ...]
    grading: WeightedGrading
    subgroup: OneParamSubgroup

    @property
    def rank(self) -> int:
        return len(self.directions)

    def matrix(self) -> MatrixElt:
        """The generic element as a matrix with polynomial entries."""
        params = self.parameters
        acc = self.base.with_params(params)
        for p, d in zip(params, self.directions):
            pv = MultiPoly.var(params, p)
            acc = acc + MatrixElt([[pv * x.constant_term() for x in r] for r in d.rows], params)
        return acc

    def to_json(self):
        return {
            "base": self.base.to_json(),
            "directions": [d.to_json() for d in self.directions],
            "parameters": list(self.parameters),
            "weights": list(self.grading.weights),
            "H": list(self.subgroup.exponents),
            "family": self.matrix().to_json(),
        }


def _default_params(r, stem="s"):
    return tuple(f"{stem}{i}" for i in range(r))


def kostant_section(
    kind: str,
    *,
    n: Optional[int] = None,
    e: Optional[MatrixElt] = None,
    torus_basis: Optional[Sequence[MatrixElt]] = None,
    H: Optional[OneParamSubgroup] = None,
    parameters: Optional[Sequence[str]] = None,
) -> SectionFamily:
    """Build ``e + t`` (``kind='solvable'`` or ``'torus'``) or ``e + C(f)``
    (``kind='reductive_gl'`` / ``'reductive_sl'``)."""
    if kind in ("solvable", "torus"):
        if torus_basis is None or H is None:
            raise StructuralError("solvable sections need a torus basis and H")
        size = torus_basis[0].n if torus_basis else H.n
        if kind == "torus":
            e = MatrixElt.zeros(size)
        if e is None:
            raise StructuralError("solvable sections need e")
        for t in torus_basis:
            c = t.constant_entries()
            if any(c[i][j] for i in range(size) for j in range(size) if i != j):
                raise StructuralError("torus basis elements must be diagonal")
            if not bracket(t, t).is_zero():
                raise StructuralError("torus basis must commute")
        directions = tuple(torus_basis)
        rank = _matrix_rank(directions)
        if rank != len(directions):
            raise StructuralError("torus basis is linearly dependent")
    elif kind in ("reductive_gl", "reductive_sl"):
        if n is None or n < 1:
            raise StructuralError("reductive sections need n >= 1")
        pair = principal_pair_gl(n)
        e = pair.e
        H = pair.one_param_subgroup()
        directions = []
        # solve [f, X] = 0 on each ad(h)-eigenspace so every direction is homogeneous
        for k in range(n):
            if kind == "reductive_sl" and k == 0:
                space = [MatrixElt.diag([int(i == j) - int(i == j + 1) for i in range(n)]) for j in range(n - 1)]
            else:
                space = [MatrixElt.unit(n, i + k, i) for i in range(n - k)]
            directions.extend(centralizer(pair.f, within=space))
        expected = n - 1 if kind == "reductive_sl" else n
        if len(directions) != expected:
            raise StructuralError(f"centralizer of f has dimension {len(directions)}, expected {expected}")
        directions = tuple(directions)
    else:
        raise StructuralError(f"unknown section kind {kind!r}")

    params = tuple(parameters) if parameters is not None else _default_params(len(directions))
    if len(params) != len(directions):
        raise StructuralError("one parameter name per direction is required")
    provisional = SectionFamily(
        e, directions, params, WeightedGrading(params, (0,) * len(params)), H
    )
    weights = cstar_act(provisional, H)
    return SectionFamily(e, directions, params, WeightedGrading(params, tuple(weights)), H)


def _matrix_rank(mats: Sequence[MatrixElt]) -> int:
    rows = [[x for r in m.constant_entries() for x in r] for m in mats]
    return linalg.rank(rows)


def cstar_act(s: SectionFamily, H: OneParamSubgroup) -> List[int]:
    """Weights of the section parameters under ``t.v = t^{-2} Ad_{H^t}(v)``.

    The transformed family is computed symbolically in ``t`` and compared
    entry by entry with the family after rescaling each parameter; a
    mismatch means the action leaves the family.
    """
    n = s.base.n
    if H.n != n:
        raise StructuralError(f"H has size {H.n}, matrices have size {n}")
    params = s.parameters
    lvars = ("t",) + params
    while lvars[0] in params:
        lvars = ("_" + lvars[0],) + params
    tname = lvars[0]

    weights = []
    for d in s.directions:
        k = ad_weight(d, H)
        if k is None:
            raise StructuralError("a direction is not an eigenvector of Ad(H)")
        weights.append(2 - k)

    fam = s.matrix()
    t = LaurentPoly.var(lvars, tname)
    d = H.exponents
    for i in range(n):
        for j in range(n):
            entry = _lift(fam[i, j], lvars)
            acted = entry * (t ** (d[i] - d[j] - 2))
            images = {p: t ** (-w) * LaurentPoly.var(lvars, p) for p, w in zip(params, weights)}
            rescaled = _laurent_substitute(entry, images, lvars)
            if acted != rescaled:
                raise StructuralError(
                    f"the grading action does not preserve the family at entry ({i}, {j})"
                )
    return weights


def _lift(p: MultiPoly, lvars) -> LaurentPoly:
    idx = [lvars.index(v) for v in p.variables]
    out = {}
    for e, c in p.terms.items():
        f = [0] * len(lvars)
        for i, k in zip(idx, e):
            f[i] = k
        out[tuple(f)] = c
    return LaurentPoly(lvars, out)


def _laurent_substitute(p: LaurentPoly, images, lvars) -> LaurentPoly:
    acc = LaurentPoly.zero(lvars)
    for e, c in p.terms.items():
        term = LaurentPoly.constant(lvars, c)
        for v, k in zip(lvars, e):
            if k:
                base = images.get(v, LaurentPoly.var(lvars, v))
                term = term * (base ** k)
        acc = acc + term
    return acc


def determinant(m: MatrixElt, variables: Sequence[str]) -> MultiPoly:
    """Determinant by Laplace expansion along the first row (desk-scale sizes)."""
    rows = [[x.rename(tuple(variables)) for x in r] for r in m.rows]
    cache = {}

    def det(cols: Tuple[int, ...], r: int):
        if r == len(rows):
            return MultiPoly.constant(variables, 1)
        key = (cols, r)
        if key in cache:
            return cache[key]
        acc = MultiPoly.zero(variables)
        for pos, c in enumerate(cols):
            a = rows[r][c]
            if a.is_zero():
                continue
            minor = det(cols[:pos] + cols[pos + 1:], r + 1)
            term = a * minor
            acc = acc - term if pos % 2 else acc + term
        cache[key] = acc
        return acc

    return det(tuple(range(m.n)), 0)


def char_poly_on_section(s: SectionFamily, lam: str = "lam") -> List[MultiPoly]:
    """Coefficients ``c_1..c_n`` of ``det(lam - M) = lam^n + c_1 lam^{n-1} + ... + c_n``."""
    params = s.parameters
    while lam in params:
        lam = "_" + lam
    big = (lam,) + params
    M = s.matrix()
    n = M.n
    lv = MultiPoly.var(big, lam)
    shifted = MatrixElt(
        [[(lv if i == j else 0) - M[i, j].rename(big) for j in range(n)] for i in range(n)], big
    )
    cp = determinant(shifted, big)
    coeffs = []
    for k in range(1, n + 1):
        terms = {e[1:]: c for e, c in cp.terms.items() if e[0] == n - k}
        coeffs.append(MultiPoly(params, terms))
    return coeffs


def jacobian_determinant(polys: Sequence[MultiPoly], variables: Sequence[str]) -> MultiPoly:
    variables = tuple(variables)
    rows = [[p.rename(variables).derivative(v) for v in variables] for p in polys]
    return determinant(MatrixElt(rows, variables), variables)


def is_regular(m: MatrixElt, rank: Optional[int] = None) -> bool:
    """Whether the centralizer of ``m`` in gl_n has dimension ``rank`` (default n)."""
    return len(centralizer(m)) == (m.n if rank is None else rank)
