import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from zerolab.exactpoly import (
    INHOMOGENEOUS,
    LaurentPoly,
    MultiPoly,
    RationalSeries,
    VariableMismatch,
    WeightedGrading,
    expand_series,
    format_poly,
    laurent_divisible,
    parse_laurent,
    parse_poly,
    poly_arith,
    weighted_degree,
)

VS = ("x", "y", "z")

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(exps, coeffs, max_size=5).map(lambda d: MultiPoly(VS, d))


def P(text, vs=VS):
    return parse_poly(text, vs)


def test_examples_arith():
    assert poly_arith(P("x+y"), P("x-y"), "add") == P("2*x")
    vs = ("v", "a")
    prod = P("a", vs) * P("a+v", vs) * P("a+2*v", vs)
    assert prod == P("a^3 + 3*a^2*v + 2*a*v^2", vs)
    assert poly_arith(P("x"), MultiPoly.zero(VS), "mul").is_zero()


def test_variable_mismatch():
    with pytest.raises(VariableMismatch):
        P("x") + P("x", ("x",))


def test_no_zero_terms_stored():
    p = P("x") - P("x")
    assert p.terms == {}
    assert MultiPoly(VS, {(1, 0, 0): 0}).terms == {}


def test_weighted_degree_examples():
    g = WeightedGrading(("v", "a"), (2, 2))
    assert weighted_degree(P("a*(a+v)*(a+2*v)", g.variables), g) == 6
    assert weighted_degree(MultiPoly.constant(g.variables, 1), g) == 0
    assert weighted_degree(P("v + a^2", g.variables), g) is INHOMOGENEOUS


def test_expand_series_examples():
    s = RationalSeries.from_coefficients([1, 0, 2, 0, 1], [1, 0, 0, 0, -1])
    assert expand_series(s, 8) == [1, 0, 2, 0, 2, 0, 2, 0, 2]
    s = RationalSeries.from_coefficients([1, 0, 1, 0, 1, 0, 1], [1, 0, 0, 0, -1])
    assert expand_series(s, 8) == [1, 0, 1, 0, 2, 0, 2, 0, 2]
    assert expand_series(RationalSeries.from_coefficients([1], [1, -1]), 3) == [1, 1, 1, 1]


def test_expand_series_zero_constant():
    with pytest.raises(ZeroDivisionError):
        RationalSeries.from_coefficients([1], [0, 1])


def test_laurent_divisible_examples():
    vs = ("x",)
    assert laurent_divisible(parse_laurent("x - x^-1", vs), parse_laurent("x^2 - 1", vs))
    assert laurent_divisible(LaurentPoly.zero(vs), parse_laurent("x + 3", vs))
    assert not laurent_divisible(parse_laurent("x - 2", vs), parse_laurent("x - 1", vs))
    with pytest.raises(ZeroDivisionError):
        laurent_divisible(parse_laurent("x", vs), LaurentPoly.zero(vs))


def test_format_roundtrip():
    p = P("a*(a + v)*(a + 2*v)", ("a", "v"))
    assert format_poly(p) == "a^3 + 3*a^2*v + 2*a*v^2"
    assert format_poly(P("1/2*x - 3", VS)) == "1/2*x - 3"
    assert format_poly(parse_laurent("x^-1 + y", ("x", "y"))) in ("y + x^-1", "x^-1 + y")


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a


@given(polys)
def test_format_parse_roundtrip(p):
    assert parse_poly(format_poly(p), VS) == p


@given(st.lists(coeffs, min_size=1, max_size=5), st.lists(coeffs, min_size=1, max_size=4), st.integers(0, 12))
def test_series_recurrence(num, den, n):
    if den[0] == 0:
        den[0] = Fraction(1)
    s = RationalSeries.from_coefficients(num, den)
    c = expand_series(s, n)
    for k in range(n + 1):
        lhs = sum(Fraction(den[j]) * c[k - j] for j in range(len(den)) if j <= k)
        assert lhs == (num[k] if k < len(num) else 0)


weights = st.tuples(*[st.integers(1, 4)] * 3)


@given(weights, st.data())
def test_weighted_degree_additive(w, data):
    g = WeightedGrading(VS, w)

    def homog():
        d = data.draw(st.integers(0, 12))
        mons = [e for e in itertools.product(range(4), repeat=3) if g.weight_of(e) == d]
        if not mons:
            return MultiPoly.constant(VS, 1), 0
        chosen = data.draw(st.lists(st.sampled_from(mons), min_size=1, max_size=3, unique=True))
        return MultiPoly(VS, {e: data.draw(coeffs.filter(bool)) for e in chosen}), d

    p, dp = homog()
    q, dq = homog()
    assert weighted_degree(p * q, g) == dp + dq


def _brute_divisible(f: LaurentPoly, g: LaurentPoly) -> bool:
    # search quotients supported in a bounded box: solve g*h = f by linear algebra
    from zerolab import linalg

    box = list(itertools.product(range(-8, 9), repeat=len(f.variables)))
    target = {}
    for e in box:
        for ge in g.terms:
            target.setdefault(tuple(a + b for a, b in zip(e, ge)), None)
    for e in f.terms:
        if e not in target:
            return False
    keys = sorted(target)
    idx = {k: i for i, k in enumerate(keys)}
    # columns: box monomials; rows: product monomials
    cols = {}
    for j, e in enumerate(box):
        for ge, c in g.terms.items():
            cols.setdefault(idx[tuple(a + b for a, b in zip(e, ge))], {})[j] = c
    rows = [cols.get(i, {}) for i in range(len(keys))]
    aug = [dict(r) for r in rows]
    for i, k in enumerate(keys):
        v = f.terms.get(k, 0)
        if v:
            aug[i][len(box)] = v
    return linalg.rank(rows) == linalg.rank(aug)


laurent_terms = st.dictionaries(st.tuples(st.integers(-3, 3)), st.integers(-3, 3).filter(bool), min_size=0, max_size=4)


@given(laurent_terms, laurent_terms.filter(bool))
def test_laurent_divisible_matches_oracle(ft, gt):
    f = LaurentPoly(("x",), ft)
    g = LaurentPoly(("x",), gt)
    assert laurent_divisible(f, g) == _brute_divisible(f, g)


laurent_terms2 = st.dictionaries(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.integers(-2, 2).filter(bool), max_size=3)


@given(laurent_terms2, laurent_terms2.filter(bool))
def test_laurent_divisible_matches_oracle_2var(ft, gt):
    f = LaurentPoly(("x", "y"), ft)
    g = LaurentPoly(("x", "y"), gt)
    assert laurent_divisible(f, g) == _brute_divisible(f, g)
