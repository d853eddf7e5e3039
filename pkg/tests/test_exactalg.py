from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from cptlab.exactalg import (
    CRational,
    DiffOp,
    I,
    Poly,
    adjoint,
    compose,
    conjugate,
    format_poly,
    parity_conjugate,
    parse_poly,
    parse_rational,
    poly_arith,
    poly_parity_split,
)

from oracles import X, apply_op, gaussian_tests, ibp_adjoint_holds, poly_to_sympy

fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
scalars = st.builds(CRational, fractions, fractions)
polys = st.lists(scalars, max_size=5).map(Poly)
real_polys = st.lists(fractions, max_size=5).map(Poly)
ops = st.dictionaries(st.integers(0, 3), polys, max_size=3).map(DiffOp)

x = Poly.x()
d = DiffOp.derivative()


def mult(p):
    return DiffOp.multiplication(p)


# scalars and polynomials ---------------------------------------------------

def test_crational_arithmetic():
    z = CRational(Fraction(1, 2), Fraction(-3))
    assert z * z.conjugate() == CRational(Fraction(37, 4))
    assert (z / z) == 1
    assert I * I == -1
    assert complex(z) == 0.5 - 3j


def test_crational_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        CRational(Fraction(1)) / 0


def test_poly_trimming_and_degree():
    assert Poly([1, 2, 0, 0]).coeffs == Poly([1, 2]).coeffs
    assert Poly([]).is_zero()
    assert Poly([0, 0]).degree == float("-inf")
    assert Poly([0, 0, 3]).degree == 2


def test_poly_examples():
    p = Poly([1, 0, 2])  # 1 + 2x^2
    assert p.derivative() == Poly([0, 4])
    assert (x + 1) ** 2 == Poly([1, 2, 1])
    assert poly_arith(p, x, "sub") == Poly([1, -1, 2])
    even, odd = poly_parity_split(Poly([1, 2, 3, 4]))
    assert even == Poly([1, 0, 3]) and odd == Poly([0, 2, 0, 4])
    assert Poly([1, 2, 3]).reflect() == Poly([1, -2, 3])


def test_poly_horner_matches_sympy():
    p = Poly([CRational(Fraction(1, 3), Fraction(2)), -1, Fraction(5, 2)])
    expr = poly_to_sympy(p)
    for t in (-1.5, 0.0, 0.3, 2.0):
        assert abs(p(t) - complex(expr.subs(X, t))) < 1e-14


@given(polys, polys, polys)
@settings(max_examples=60, deadline=None)
def test_poly_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@given(polys)
def test_parity_split_reconstructs(p):
    even, odd = p.parity_split()
    assert even + odd == p
    assert even.reflect() == even
    assert odd.reflect() == -odd


@given(polys)
def test_real_imag_parts(p):
    assert p.real_part() + p.imag_part() * I == p
    assert p.conjugate().conjugate() == p
    assert p.real_part().is_real() and p.imag_part().is_real()


# differential operators ----------------------------------------------------

def test_spec_adjoint_example():
    # (i x d)^dagger = -d (-i x) = i x d + i
    op = mult(x * I) @ d
    assert adjoint(op) == mult(x * I) @ d + mult(I)


def test_compose_leibniz_example():
    # d o x^2 = x^2 d + 2x
    assert compose(d, mult(x * x)) == mult(x * x) @ d + mult(x * 2)
    # d^2 o x = x d^2 + 2 d
    assert compose(DiffOp.derivative(2), mult(x)) == mult(x) @ DiffOp.derivative(2) + d * 2


def test_parity_conjugate_example():
    op = mult(x) @ d + mult(x * x * x) + DiffOp.derivative(2)
    # x -> -x and d -> -d: (-x)(-d) + (-x^3) + d^2
    assert parity_conjugate(op) == mult(x) @ d - mult(x * x * x) + DiffOp.derivative(2)


def test_zero_terms_dropped():
    op = DiffOp({0: Poly([]), 2: Poly([1])})
    assert op.order == 2 and 0 not in op.as_dict()
    assert (op - op).is_zero()


def test_compose_matches_sympy_application():
    a = mult(Poly([1, CRational(0, 1)])) @ DiffOp.derivative(2) + mult(x * x)
    b = mult(Poly([0, 0, Fraction(1, 2)])) @ d + mult(I)
    f = sp.exp(-X**2) * (1 + X)
    lhs = apply_op(compose(a, b), f)
    rhs = apply_op(a, apply_op(b, f))
    assert sp.simplify(sp.expand(lhs - rhs)) == 0


def test_adjoint_integration_by_parts_oracle():
    op = mult(Poly([CRational(0, 1), 2])) @ DiffOp.derivative(2) + mult(x * I) @ d + mult(x * x)
    assert ibp_adjoint_holds(op, adjoint(op), gaussian_tests())
    # a wrong adjoint (forgotten sign) fails the same oracle
    assert not ibp_adjoint_holds(op, op, gaussian_tests())


@given(ops)
@settings(max_examples=60, deadline=None)
def test_adjoint_is_involution(a):
    assert adjoint(adjoint(a)) == a


@given(ops, ops)
@settings(max_examples=40, deadline=None)
def test_adjoint_reverses_products(a, b):
    assert adjoint(compose(a, b)) == compose(adjoint(b), adjoint(a))


@given(ops, ops)
@settings(max_examples=40, deadline=None)
def test_parity_and_conjugation_are_homomorphisms(a, b):
    ab = compose(a, b)
    assert parity_conjugate(ab) == compose(parity_conjugate(a), parity_conjugate(b))
    assert conjugate(ab) == compose(conjugate(a), conjugate(b))
    assert parity_conjugate(parity_conjugate(a)) == a


@given(ops, ops, ops)
@settings(max_examples=30, deadline=None)
def test_compose_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@given(ops, ops)
@settings(max_examples=40, deadline=None)
def test_compose_distributes(a, b):
    c = DiffOp({1: Poly([1, 1])})
    assert compose(a + b, c) == compose(a, c) + compose(b, c)


# text format ---------------------------------------------------------------

def test_parse_rational_forms():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-2") == -2
    assert parse_rational("0.25", exact=True) == Fraction(1, 4)
    assert parse_rational("0.1") == Fraction(1, 10)
    with pytest.raises(ValueError):
        parse_rational("0.1", exact=True)
    with pytest.raises(ValueError):
        parse_rational("abc")
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_parse_poly_complex():
    p = parse_poly("1,0,2+i:0,3")
    assert p == Poly([1, CRational(0, 3), 2])
    with pytest.raises(ValueError):
        parse_poly("")


@given(polys)
def test_format_parse_round_trip(p):
    assert parse_poly(format_poly(p), exact=True) == p
