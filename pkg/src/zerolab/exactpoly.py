"""Exact multivariate and Laurent polynomials over the rationals.

Polynomials are sparse maps from exponent tuples to :class:`fractions.Fraction`
coefficients.  They are immutable; every operation returns a new object.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

Rational = Fraction
Exponent = Tuple[int, ...]

__all__ = [
    "Rational",
    "MultiPoly",
    "LaurentPoly",
    "WeightedGrading",
    "RationalSeries",
    "INHOMOGENEOUS",
    "VariableMismatch",
    "poly_arith",
    "weighted_degree",
    "expand_series",
    "laurent_divisible",
    "parse_poly",
    "parse_laurent",
]


class VariableMismatch(ValueError):
    """Raised when two polynomials live in rings with different variables."""


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not supported")
    return Fraction(c)


def _add_into(acc: Dict[Exponent, Fraction], terms: Mapping[Exponent, Fraction], scale=1):
    for e, c in terms.items():
        v = acc.get(e, 0) + scale * c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


def _mul_terms(a: Mapping[Exponent, Fraction], b: Mapping[Exponent, Fraction]):
    out: Dict[Exponent, Fraction] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def _glex_key(e: Exponent):
    return (sum(e), e)


class _PolyBase:
    __slots__ = ("variables", "terms", "_hash")

    _allow_negative = False

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        variables = tuple(variables)
        n = len(variables)
        clean: Dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise VariableMismatch(f"exponent {e} does not match {n} variables")
            if not self._allow_negative and any(x < 0 for x in e):
                raise ValueError(f"negative exponent {e} in an ordinary polynomial")
            c = _frac(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("polynomials are immutable")

    @classmethod
    def _raw(cls, variables, terms):
        # trusted constructor: terms already normalized
        obj = object.__new__(cls)
        object.__setattr__(obj, "variables", variables)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    # construction helpers
    @classmethod
    def zero(cls, variables):
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables, c):
        variables = tuple(variables)
        c = _frac(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, variables, name):
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls._raw(variables, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, variables, exponent, coeff=1):
        variables = tuple(variables)
        return cls(variables, {tuple(exponent): coeff})

    @classmethod
    def gens(cls, variables):
        return [cls.var(variables, v) for v in variables]

    # basic protocol
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.constant(self.variables, other)
        if not isinstance(other, _PolyBase):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.variables, frozenset(self.terms.items()))))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, type(self)):
            if other.variables != self.variables:
                raise VariableMismatch(f"{self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.constant(self.variables, other)
        if isinstance(other, _PolyBase):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        _add_into(acc, other.terms)
        return self._raw(self.variables, acc)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        _add_into(acc, other.terms, -1)
        return self._raw(self.variables, acc)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if not c:
                return self.zero(self.variables)
            return self._raw(self.variables, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._raw(self.variables, _mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / _frac(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = self.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # inspection
    def sorted_terms(self):
        """Terms in descending graded-lex order on exponent vectors."""
        return sorted(self.terms.items(), key=lambda t: _glex_key(t[0]), reverse=True)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def coefficient(self, exponent) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * len(self.variables))

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def used_variables(self):
        return tuple(v for i, v in enumerate(self.variables) if any(e[i] for e in self.terms))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"{type(self).__name__}({format_poly(self)!r}, vars={','.join(self.variables)})"


class MultiPoly(_PolyBase):
    """A polynomial with rational coefficients in an ordered list of variables."""

    __slots__ = ()

    def derivative(self, name: str) -> "MultiPoly":
        i = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly._raw(self.variables, out)

    def evaluate(self, values: Mapping[str, object]):
        """Substitute rational values for *all* variables."""
        vals = [_frac(values[v]) for v in self.variables]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def substitute(self, images: Mapping[str, "MultiPoly"], target_vars: Sequence[str] | None = None):
        """Ring homomorphism sending each variable to a polynomial.

        Variables missing from ``images`` map to the variable of the same
        name in the target ring.
        """
        target_vars = tuple(target_vars) if target_vars is not None else self.variables
        imgs = []
        for v in self.variables:
            if v in images:
                p = images[v]
                if not isinstance(p, MultiPoly):
                    p = MultiPoly.constant(target_vars, p)
                if p.variables != target_vars:
                    p = p.rename(target_vars)
                imgs.append(p)
            else:
                imgs.append(MultiPoly.var(target_vars, v))
        cache = [dict() for _ in imgs]

        def power(i, k):
            if k not in cache[i]:
                cache[i][k] = imgs[i] ** k
            return cache[i][k]

        acc: Dict[Exponent, Fraction] = {}
        one = MultiPoly.constant(target_vars, 1)
        for e, c in self.terms.items():
            term = one
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            _add_into(acc, term.terms, c)
        return MultiPoly._raw(target_vars, acc)

    def rename(self, target_vars: Sequence[str]) -> "MultiPoly":
        """Re-embed into a ring with a different variable list (superset or reorder)."""
        target_vars = tuple(target_vars)
        if target_vars == self.variables:
            return self
        index = {v: i for i, v in enumerate(target_vars)}
        used = self.used_variables()
        missing = [v for v in used if v not in index]
        if missing:
            raise VariableMismatch(f"variables {missing} not present in {target_vars}")
        pos = [index.get(v) for v in self.variables]
        out = {}
        n = len(target_vars)
        for e, c in self.terms.items():
            f = [0] * n
            for i, k in enumerate(e):
                if k:
                    f[pos[i]] = k
            out[tuple(f)] = c
        return MultiPoly._raw(target_vars, out)

    def to_laurent(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.variables, dict(self.terms))

    def content_monic(self, key=None) -> "MultiPoly":
        """Scale so that the leading coefficient (under ``key``) is 1."""
        if not self.terms:
            return self
        key = key or _glex_key
        lead = max(self.terms, key=key)
        return self * (1 / self.terms[lead])


class LaurentPoly(_PolyBase):
    """A Laurent polynomial: exponents may be negative."""

    __slots__ = ()
    _allow_negative = True

    def __pow__(self, k: int):
        if k >= 0:
            return super().__pow__(k)
        if len(self.terms) != 1:
            raise ValueError("only monomials may be inverted")
        (e, c), = self.terms.items()
        base = LaurentPoly._raw(self.variables, {tuple(-x for x in e): 1 / c})
        return base ** (-k)

    def min_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * len(self.variables)
        return tuple(min(col) for col in zip(*self.terms))

    def shift(self, exponent: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial ``x**exponent``."""
        return LaurentPoly._raw(
            self.variables,
            {tuple(a + b for a, b in zip(e, exponent)): c for e, c in self.terms.items()},
        )

    def cleared(self) -> Tuple[MultiPoly, Exponent]:
        """Return ``(p, m)`` with ``self == x**m * p``, ``p`` an ordinary
        polynomial not divisible by any variable."""
        m = self.min_exponents()
        p = self.shift(tuple(-x for x in m))
        return MultiPoly._raw(self.variables, dict(p.terms)), m

    def evaluate(self, values: Mapping[str, object]):
        vals = [_frac(values[v]) for v in self.variables]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term *= x ** k
            total += term
        return total


# ----------------------------------------------------------------------------
# gradings and series


@dataclass(frozen=True)
class WeightedGrading:
    """Weight per variable; weights are cohomological (doubled) degrees."""

    variables: Tuple[str, ...]
    weights: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.variables) != len(self.weights):
            raise ValueError("one weight per variable is required")

    @classmethod
    def from_mapping(cls, variables, mapping: Mapping[str, int]):
        return cls(tuple(variables), tuple(mapping[v] for v in variables))

    def weight_of(self, exponent: Sequence[int]) -> int:
        return sum(w * k for w, k in zip(self.weights, exponent))

    def is_positive(self) -> bool:
        return all(w > 0 for w in self.weights)

    def as_dict(self):
        return dict(zip(self.variables, self.weights))


class _Inhomogeneous:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INHOMOGENEOUS"


INHOMOGENEOUS = _Inhomogeneous()


def weighted_degree(p: _PolyBase, g: WeightedGrading):
    """Common weighted degree of all terms of ``p``, or ``INHOMOGENEOUS``.

    The zero polynomial is homogeneous of every degree; 0 is returned.
    """
    if p.variables != g.variables:
        raise VariableMismatch(f"{p.variables} vs grading on {g.variables}")
    degrees = {g.weight_of(e) for e in p.terms}
    if not degrees:
        return 0
    if len(degrees) > 1:
        return INHOMOGENEOUS
    return degrees.pop()


@dataclass(frozen=True)
class RationalSeries:
    """A rational function ``numerator/denominator`` in a single variable."""

    numerator: MultiPoly
    denominator: MultiPoly

    def __post_init__(self):
        for p in (self.numerator, self.denominator):
            if len(p.variables) != 1:
                raise ValueError("series polynomials must be univariate")
        if self.numerator.variables != self.denominator.variables:
            raise VariableMismatch("numerator and denominator variables differ")
        if not self.denominator.constant_term():
            raise ZeroDivisionError("denominator must have a nonzero constant term")

    @classmethod
    def from_coefficients(cls, num: Sequence, den: Sequence, var: str = "t"):
        return cls(
            MultiPoly((var,), {(i,): c for i, c in enumerate(num)}),
            MultiPoly((var,), {(i,): c for i, c in enumerate(den)}),
        )

    def expand(self, n: int):
        return expand_series(self, n)

    def __str__(self):
        return f"({self.numerator})/({self.denominator})"


def _coeff_list(p: MultiPoly):
    deg = p.total_degree()
    out = [Fraction(0)] * (deg + 1)
    for (k,), c in p.terms.items():
        out[k] = c
    return out


def expand_series(s: RationalSeries, n: int):
    """Coefficients ``c_0..c_n`` of the power series of ``s``.

    Solves ``den * sum(c_i t^i) = num`` term by term.  Integral coefficients
    are returned as ``int``.
    """
    den = _coeff_list(s.denominator)
    if not den or den[0] == 0:
        raise ZeroDivisionError("denominator has zero constant term")
    num = _coeff_list(s.numerator) if s.numerator.terms else []
    out = []
    for i in range(n + 1):
        acc = num[i] if i < len(num) else Fraction(0)
        for j in range(1, min(i, len(den) - 1) + 1):
            acc -= den[j] * out[i - j]
        out.append(acc / den[0])
    return [int(c) if c.denominator == 1 else c for c in out]


# ----------------------------------------------------------------------------
# exact division


def divide_exact(f: MultiPoly, g: MultiPoly):
    """Return ``f/g`` if ``g`` divides ``f`` exactly, else ``None``."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.variables != g.variables:
        raise VariableMismatch(f"{f.variables} vs {g.variables}")
    lead_g = max(g.terms, key=_glex_key)
    cg = g.terms[lead_g]
    rem = dict(f.terms)
    quot: Dict[Exponent, Fraction] = {}
    while rem:
        lead = max(rem, key=_glex_key)
        diff = tuple(a - b for a, b in zip(lead, lead_g))
        if any(x < 0 for x in diff):
            return None
        c = rem[lead] / cg
        quot[diff] = c
        for e, cc in g.terms.items():
            t = tuple(a + b for a, b in zip(e, diff))
            v = rem.get(t, 0) - c * cc
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return MultiPoly._raw(f.variables, quot)


def laurent_divisible(f: LaurentPoly, g: LaurentPoly) -> bool:
    """Decide whether ``g`` divides ``f`` in the Laurent polynomial ring.

    Monomials are units, so both sides are first stripped of their monomial
    factors; the remaining ordinary polynomials are coprime to every variable
    and divisibility reduces to exact polynomial division.
    """
    if g.is_zero():
        raise ZeroDivisionError("divisibility by zero is undefined")
    if f.variables != g.variables:
        raise VariableMismatch(f"{f.variables} vs {g.variables}")
    if f.is_zero():
        return True
    pf, _ = f.cleared()
    pg, _ = g.cleared()
    return divide_exact(pf, pg) is not None


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    if a.variables != b.variables:
        raise VariableMismatch(f"{a.variables} vs {b.variables}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


# ----------------------------------------------------------------------------
# text form


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: _PolyBase) -> str:
    """Canonical text: graded-lex descending, ``p/q`` coefficients, ``x^k``."""
    if not p.terms:
        return "0"
    pieces = []
    for e, c in p.sorted_terms():
        factors = []
        for v, k in zip(p.variables, e):
            if k == 1:
                factors.append(v)
            elif k:
                factors.append(f"{v}^{k}")
        mono = "*".join(factors)
        a = abs(c)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


class PolyParseError(ValueError):
    pass


def _parse(text: str, variables: Sequence[str], cls):
    variables = tuple(variables)
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise PolyParseError(f"cannot parse {text!r}: {exc.msg}") from None

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in variables:
                raise PolyParseError(f"unknown variable {node.id!r} in {text!r}")
            return cls.var(variables, node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = walk(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                exp = walk(node.right)
                if not (isinstance(exp, Fraction) and exp.denominator == 1):
                    raise PolyParseError(f"non-integer exponent in {text!r}")
                if isinstance(left, Fraction):
                    return left ** int(exp)
                return left ** int(exp)
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not isinstance(right, Fraction):
                    raise PolyParseError(f"division by a non-constant in {text!r}")
                return left / right
        raise PolyParseError(f"unsupported syntax in {text!r}")

    val = walk(tree)
    if isinstance(val, Fraction):
        return cls.constant(variables, val)
    return val


def parse_poly(text: str, variables: Sequence[str]) -> MultiPoly:
    """Parse the canonical text form (and any expression using + - * / ^)."""
    return _parse(str(text), variables, MultiPoly)


def parse_laurent(text: str, variables: Sequence[str]) -> LaurentPoly:
    return _parse(str(text), variables, LaurentPoly)
