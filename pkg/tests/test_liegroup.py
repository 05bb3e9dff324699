import pytest
from hypothesis import given, strategies as st

from zerolab.exactpoly import MultiPoly, parse_poly
from zerolab.liegroup import (
    MatrixElt,
    OneParamSubgroup,
    Sl2Pair,
    StructuralError,
    bracket,
    centralizer,
    char_poly_on_section,
    cstar_act,
    jacobian_determinant,
    kostant_section,
    principal_pair_gl,
)
from zerolab.weyl import elementary_symmetric


def exthick_section():
    e = MatrixElt([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    return kostant_section(
        "solvable", e=e, torus_basis=[MatrixElt.diag([1, 0, -1])], H=OneParamSubgroup((2, 0, -2)), parameters=["v"]
    )


def test_bracket_examples():
    pair = principal_pair_gl(2)
    assert bracket(pair.e, pair.f) == pair.h
    assert bracket(pair.h, pair.e) == pair.e.scale(2)
    x = MatrixElt([[1, 2], [3, 4]])
    assert bracket(x, x).is_zero()
    with pytest.raises(StructuralError):
        bracket(x, MatrixElt.identity(3))


def test_principal_pair_examples():
    p2 = principal_pair_gl(2)
    assert p2.e == MatrixElt([[0, 1], [0, 0]])
    assert p2.h == MatrixElt.diag([1, -1])
    assert principal_pair_gl(3).h == MatrixElt.diag([2, 0, -2])
    p1 = principal_pair_gl(1)
    assert p1.e.is_zero() and p1.h.is_zero()


def test_bad_pair_rejected():
    with pytest.raises(StructuralError):
        Sl2Pair(MatrixElt([[0, 1], [0, 0]]), MatrixElt.diag([1, 1]))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_principal_pair_relations_and_regularity(n):
    pair = principal_pair_gl(n)
    assert bracket(pair.h, pair.e) == pair.e.scale(2)
    assert bracket(pair.e, pair.f) == pair.h
    assert bracket(pair.h, pair.f) == pair.f.scale(-2)
    assert len(centralizer(pair.e)) == n
    assert pair.one_param_subgroup().as_matrix() == pair.h


def test_exthick_section():
    s = exthick_section()
    assert s.matrix().to_json() == [["v", "1", "0"], ["0", "0", "0"], ["0", "0", "-v"]]
    assert cstar_act(s, s.subgroup) == [2]
    assert [str(c) for c in char_poly_on_section(s)] == ["0", "-v^2", "0"]


def test_sl2_section():
    s = kostant_section("reductive_sl", n=2, parameters=["s"])
    assert s.matrix().to_json() == [["0", "1"], ["s", "0"]]
    assert list(s.grading.weights) == [4]
    assert [str(c) for c in char_poly_on_section(s)] == ["0", "-s"]


def test_torus_section_weights_are_two():
    s = kostant_section("torus", torus_basis=[MatrixElt.diag([1, 0]), MatrixElt.diag([0, 1])], H=OneParamSubgroup((0, 0)))
    assert s.base.is_zero()
    assert list(s.grading.weights) == [2, 2]


def test_wrong_H_rejected():
    e = MatrixElt([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    with pytest.raises(StructuralError):
        kostant_section("solvable", e=e, torus_basis=[MatrixElt.diag([1, 0, -1])], H=OneParamSubgroup((1, 0, 0)))


def test_dependent_torus_basis_rejected():
    with pytest.raises(StructuralError):
        kostant_section("torus", torus_basis=[MatrixElt.diag([1, 0]), MatrixElt.diag([2, 0])], H=OneParamSubgroup((0, 0)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_reductive_gl_section(n):
    s = kostant_section("reductive_gl", n=n)
    assert s.rank == n
    weights = cstar_act(s, s.subgroup)
    assert weights == list(s.grading.weights)
    assert sorted(weights) == [2 * k for k in range(1, n + 1)]
    cs = char_poly_on_section(s)
    jac = jacobian_determinant(cs, s.parameters)
    assert jac.is_constant() and not jac.is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_char_poly_is_triangular(n):
    # c_k = (nonzero constant) * s_{k-1} + (polynomial in s_0..s_{k-2}), so the map is invertible
    s = kostant_section("reductive_gl", n=n)
    cs = char_poly_on_section(s)
    ps = s.parameters
    for k, c in enumerate(cs):
        assert all(not any(e[k + 1:]) for e in c.terms)
        lin = c.derivative(ps[k])
        assert lin.is_constant() and not lin.is_zero()


@pytest.mark.parametrize("n", [2, 3])
def test_char_poly_on_diagonal_is_elementary_symmetric(n):
    vs = tuple(f"x{i + 1}" for i in range(n))
    torus = [MatrixElt.diag([int(i == j) for i in range(n)]) for j in range(n)]
    s = kostant_section("torus", torus_basis=torus, H=OneParamSubgroup((0,) * n), parameters=vs)
    cs = char_poly_on_section(s)
    for k, c in enumerate(cs, start=1):
        assert c == elementary_symmetric(vs, k) * (-1) ** k


small = st.integers(-3, 3)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_bracket_antisymmetric(a, b):
    A, B = MatrixElt(a), MatrixElt(b)
    assert bracket(A, B) == bracket(B, A).scale(-1)
    assert bracket(A, B).trace().is_zero()


def test_cstar_act_preserves_family_symbolically():
    # the action check raises if the family is not preserved; run it on every builder
    for s in [exthick_section(), kostant_section("reductive_sl", n=2), kostant_section("reductive_gl", n=3)]:
        ws = cstar_act(s, s.subgroup)
        assert all(w > 0 and w % 2 == 0 for w in ws)


def test_matrix_json_roundtrip():
    s = kostant_section("reductive_gl", n=3)
    m = s.matrix()
    assert MatrixElt.from_json(m.to_json(), s.parameters) == m
    assert isinstance(m[1, 0], MultiPoly)
    assert m[0, 1] == parse_poly("1", s.parameters)
