import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from holoset.errors import DimensionMismatch
from holoset.poly import (PolyDomain, SparsePolynomial, cusp, evaluate, evaluate_many, gradient,
                          hessian_frobenius)

from conftest import polynomials


def _pt(draw, n):
    vals = draw(st.lists(st.tuples(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9)), min_size=n, max_size=n))
    return np.array([complex(a, b) for a, b in vals])


# -- examples -----------------------------------------------------------------------------

def test_evaluate_examples():
    assert evaluate(SparsePolynomial.monomial((1, 1)), (0.5, 0.5)) == 0.25
    assert evaluate(cusp(), (1, 1)) == 0
    assert evaluate(cusp(), (2, 1)) == 3


def test_gradient_examples():
    g, n = gradient(SparsePolynomial.monomial((1, 1)), (0.5, 0.25))
    assert np.allclose(g, [0.25, 0.5]) and n == pytest.approx(math.sqrt(0.3125))
    # monomial identity |df|^2 = |f|^2 (1/r1^2 + 1/r2^2)
    _, n = gradient(SparsePolynomial.monomial((1, 1)), (0.5, 0.5))
    assert n**2 == pytest.approx(0.0625 * 8) and n == pytest.approx(0.707107, abs=1e-6)
    g, n = gradient(cusp(), (1, 1))
    assert np.allclose(g, [2, -3]) and n == pytest.approx(math.sqrt(13))


def test_hessian_examples():
    assert hessian_frobenius(cusp(), (0, 0)) == pytest.approx(2)
    assert hessian_frobenius(SparsePolynomial.monomial((1, 1)), (0.3, -0.7j)) == pytest.approx(math.sqrt(2))
    assert hessian_frobenius(SparsePolynomial.monomial((3,)), (1,)) == pytest.approx(6)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        evaluate(cusp(), (1, 2, 3))


def test_format_and_arithmetic():
    assert str(cusp()) == "z1^2 - z2^3"
    p = SparsePolynomial.monomial((1, 0)) + SparsePolynomial.monomial((0, 1))
    assert (p * p - p**2).is_constant
    assert (p - p).terms == ()


def test_domains():
    d = PolyDomain.polydisc(2)
    assert d.volume == pytest.approx(math.pi**2)
    b = PolyDomain.ball(2, 1.0)
    assert b.volume == pytest.approx(math.pi**2 / 2)
    assert b.contains(np.array([[0.6, 0.6]])).tolist() == [True]
    assert d.contains(np.array([[0.6, 0.95j]])).tolist() == [True]
    assert b.contains(np.array([[0.8, 0.8]])).tolist() == [False]


# -- properties -----------------------------------------------------------------------------

@given(st.data())
def test_gradient_matches_wirtinger_finite_difference(data):
    poly = data.draw(polynomials())
    z = _pt(data.draw, poly.dimension)
    f0 = evaluate(poly, z)
    assume(abs(f0) > 1e-6)
    g, _ = gradient(poly, z)
    h = 1e-6
    for j in range(poly.dimension):
        e = np.zeros(poly.dimension, complex)
        e[j] = 1
        dx = (evaluate(poly, z + h * e) - evaluate(poly, z - h * e)) / (2 * h)
        dy = (evaluate(poly, z + 1j * h * e) - evaluate(poly, z - 1j * h * e)) / (2 * h)
        wirt = 0.5 * (dx - 1j * dy)
        scale = max(abs(g[j]), max(abs(c) for _, c in poly.terms))
        assert abs(wirt - g[j]) <= 1e-5 * scale


@given(st.data())
def test_modulus_gradient_identity(data):
    poly = data.draw(polynomials(max_dim=3, max_degree=4))
    z = _pt(data.draw, poly.dimension)
    assume(abs(evaluate(poly, z)) > 1e-3)
    _, gn = gradient(poly, z)
    assume(gn > 1e-3)
    h = 1e-6
    comps = []
    for j in range(poly.dimension):
        for d in (1, 1j):
            e = np.zeros(poly.dimension, complex)
            e[j] = d
            comps.append((abs(evaluate(poly, z + h * e)) - abs(evaluate(poly, z - h * e))) / (2 * h))
    assert math.hypot(*comps) == pytest.approx(gn, rel=1e-5)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.data())
def test_monomial_identity(ks, data):
    poly = SparsePolynomial.monomial(ks)
    r = np.array(data.draw(st.lists(st.floats(0.1, 1.0), min_size=len(ks), max_size=len(ks))))
    th = np.array(data.draw(st.lists(st.floats(0, 6.28), min_size=len(ks), max_size=len(ks))))
    z = r * np.exp(1j * th)
    _, gn = gradient(poly, z)
    want = abs(evaluate(poly, z)) ** 2 * sum(k**2 / rr**2 for k, rr in zip(ks, r))
    assert gn**2 == pytest.approx(want, rel=1e-12)


@given(st.data())
def test_pure(data):
    poly = data.draw(polynomials())
    Z = np.stack([_pt(data.draw, poly.dimension) for _ in range(3)])
    a, b = evaluate_many(poly, Z), evaluate_many(poly, Z.copy())
    assert a.tobytes() == b.tobytes()
    z = Z[0]
    assert gradient(poly, z)[0].tobytes() == gradient(poly, z.copy())[0].tobytes()
    assert hessian_frobenius(poly, z) == hessian_frobenius(poly, z.copy())


@given(st.data())
def test_vectorised_matches_pointwise(data):
    poly = data.draw(polynomials())
    Z = np.stack([_pt(data.draw, poly.dimension) for _ in range(4)])
    many = evaluate_many(poly, Z)
    for k in range(4):
        assert many[k] == pytest.approx(evaluate(poly, Z[k]), rel=1e-12, abs=1e-12)
