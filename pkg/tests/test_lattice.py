import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cptlab.cptmodel import build_family_unchecked, monomial_family
from cptlab.eigen import eig_general, eig_hermitian
from cptlab.errors import EvenGridSize, NonPositiveWidth
from cptlab.exactalg import Poly
from cptlab.lattice import (
    derivative_matrix,
    discretize_F,
    discretize_H,
    evaluate,
    hermiticity_defect,
    intertwining_defect,
    make_grid,
    multiplication_matrix,
    parity_matrix,
)

from oracles import tridiagonal_laplacian_eigs

odd_sizes = st.integers(1, 30).map(lambda k: 2 * k + 1)
widths = st.floats(0.5, 10.0)


def test_grid_validation():
    with pytest.raises(EvenGridSize):
        make_grid(1.0, 10)
    with pytest.raises(EvenGridSize):
        make_grid(1.0, 1)
    with pytest.raises(NonPositiveWidth):
        make_grid(0.0, 11)
    with pytest.raises(NonPositiveWidth):
        make_grid(-2.0, 11)


def test_grid_nodes():
    g = make_grid(2.0, 5)
    assert g.spacing == 1.0
    assert np.array_equal(g.nodes, [-2.0, -1.0, 0.0, 1.0, 2.0])


@given(widths, odd_sizes)
def test_nodes_mirror_exactly(half_width, n):
    x = make_grid(half_width, n).nodes
    assert np.array_equal(x, -x[::-1])
    assert x[n // 2] == 0.0


@given(widths, odd_sizes)
@settings(max_examples=30)
def test_parity_and_derivative_structure(half_width, n):
    g = make_grid(half_width, n)
    p = parity_matrix(g)
    d1, d2 = derivative_matrix(g, 1), derivative_matrix(g, 2)
    assert np.array_equal(p @ p, np.eye(n))
    assert np.array_equal(p @ d1 @ p, -d1)
    assert np.array_equal(d1.T, -d1)
    assert np.array_equal(p @ d2 @ p, d2)


def test_derivative_order_checked():
    with pytest.raises(ValueError):
        derivative_matrix(make_grid(1.0, 5), 3)


def test_second_difference_closed_form():
    g = make_grid(3.0, 51)
    eigs = eig_hermitian(-derivative_matrix(g, 2), want_vectors=False).eigenvalues
    exact = np.sort(tridiagonal_laplacian_eigs(51, g.spacing))
    assert np.max(np.abs(eigs - exact) / exact) <= 1e-9


def test_evaluate_conjugate_symmetry():
    w = monomial_family(2, 0.7, 1.3).w
    x = make_grid(4.0, 41).nodes
    v = evaluate(w, x)
    assert np.array_equal(v[::-1], v.conj())


def test_multiplication_matrix_inputs():
    g = make_grid(1.0, 5)
    p = Poly([0, 0, 1])
    expected = np.diag(g.nodes**2).astype(complex)
    assert np.array_equal(multiplication_matrix(g, p), expected)
    assert np.array_equal(multiplication_matrix(g, lambda t: t**2), expected)
    assert np.array_equal(multiplication_matrix(g, g.nodes**2), expected)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("points", [21, 101])
def test_F_hermitian_and_product_intertwines(n, points):
    spec = monomial_family(n, 1, 1)
    g = make_grid(3.0, points)
    f = discretize_F(spec, g)
    assert hermiticity_defect(f) == 0.0
    h = discretize_H(spec, g, mode="product")
    assert intertwining_defect(f, h) <= 1e-12


def test_F_with_even_alpha_not_hermitian():
    # alpha = 1 is even: F - F^H = 2i P on the 3-point grid, relative defect 2
    spec = build_family_unchecked(Poly([0]), Poly([1]))
    f = discretize_F(spec, make_grid(1.0, 3))
    assert hermiticity_defect(f) == pytest.approx(2.0)


def test_product_mode_adds_omega():
    g = make_grid(2.0, 11)
    h0 = discretize_H(monomial_family(1, 1, 1), g, mode="product")
    h1 = discretize_H(monomial_family(1, 1, 1, omega=2), g, mode="product")
    assert np.max(np.abs(h1 - h0 - 2 * np.eye(11))) <= 1e-13 * np.max(np.abs(h0))


def test_direct_mode_structure():
    spec = monomial_family(1, 1, 1)
    g = make_grid(2.0, 11)
    h = discretize_H(spec, g)
    assert np.allclose(np.diag(h) - 2 / g.spacing**2, evaluate(spec.V, g.nodes), rtol=0, atol=1e-13)
    assert np.count_nonzero(np.triu(h, 2)) == 0


def test_mode_and_potential_validation():
    g = make_grid(2.0, 11)
    spec = monomial_family(1, 1, 1)
    with pytest.raises(ValueError):
        discretize_H(spec, g, mode="spectral")
    with pytest.raises(ValueError):
        discretize_H(spec, g, mode="product", potential=Poly([0, 0, 1]))
    with pytest.raises(ValueError):
        discretize_H(None, g)


def _lowest(h):
    return eig_general(h).eigenvalues[0]


@pytest.mark.slow
def test_direct_and_product_converge_at_second_order():
    spec = monomial_family(1, 1, 1)
    diffs = []
    for n in (101, 201, 401):
        g = make_grid(6.0, n)
        diffs.append(abs(_lowest(discretize_H(spec, g)) - _lowest(discretize_H(spec, g, "product"))))
    for a, b in zip(diffs, diffs[1:]):
        assert a / b == pytest.approx(4.0, abs=0.5)


def test_harmonic_levels_second_order():
    errs = []
    for n in (201, 401, 801):
        h = discretize_H(None, make_grid(10.0, n), potential=Poly([0, 0, 1]))
        errs.append(abs(eig_hermitian(h, want_vectors=False).eigenvalues[0] - 1.0))
    for a, b in zip(errs, errs[1:]):
        assert a / b == pytest.approx(4.0, abs=0.5)
