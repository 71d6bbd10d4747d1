import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from holoset import closed_form as cf
from holoset.errors import DomainError, OutsideBase

PI = math.pi


def test_I_examples():
    assert cf.monomial_I_exact_n2(1, 1, 0.1) == pytest.approx(3.90837, abs=1e-5)
    assert cf.monomial_I_exact_n2(2, 3, 1.0) == 0
    assert cf.monomial_I_exact_n2(2, 3, 1e-9) / 1e-9 == pytest.approx(2 * PI**2 * 5, rel=1e-2)


def test_J_examples():
    assert cf.monomial_J_exact_n2(1, 1, 0.1) == pytest.approx(0.196405, abs=1e-6)
    assert cf.monomial_J_exact_n2(2, 3, 1e-6) / 1e-12 == pytest.approx(5 * PI**2, rel=1e-2)


def test_J_at_one_matches_radial_quadrature():
    # int_bidisc (r1^2 + r2^2) dV = (2 pi)^2 int int (r1^2 + r2^2) r1 r2 dr1 dr2
    val, _ = integrate.dblquad(lambda r2, r1: (r1**2 + r2**2) * r1 * r2, 0, 1, 0, 1)
    assert cf.monomial_J_exact_n2(1, 1, 1.0) == pytest.approx((2 * PI) ** 2 * val, rel=1e-10)
    assert cf.monomial_J_exact_n2(1, 1, 1.0) == pytest.approx(PI**2)


def test_I_leading():
    assert cf.monomial_I_leading((1, 1)) == pytest.approx(4 * PI**2)
    assert cf.monomial_I_leading((1,)) == pytest.approx(2 * PI)     # times pi for the stripped disc
    assert cf.monomial_I_leading((1,)) * PI == pytest.approx(2 * PI**2)
    assert cf.monomial_I_leading((1, 1, 1)) == pytest.approx(186.04, abs=0.01)
    with pytest.raises(DomainError):
        cf.monomial_I_leading((0, 1))


def test_lemma_limit():
    assert cf.lemma_integral_limit((0, 0)) == 1
    assert cf.lemma_integral_limit((0.5, 1.0)) == pytest.approx(1 / 3)
    assert cf.lemma_integral_limit((1, 1, 1)) == pytest.approx(0.125)
    with pytest.raises(DomainError):
        cf.lemma_integral_limit((-1,))


def test_lemma_finite():
    assert cf.lemma_integral_finite((0,), 0.25) == pytest.approx(0.75)
    assert cf.lemma_integral_finite((0, 0), 0.1) == pytest.approx(1 - 0.1 + 0.1 * math.log(0.1), rel=1e-12)
    # 2-D quadrature oracle for {uv >= 0.1}
    val, _ = integrate.dblquad(lambda v, u: 1.0, 0.1, 1, lambda u: 0.1 / u, 1)
    assert cf.lemma_integral_finite((0, 0), 0.1) == pytest.approx(val, rel=1e-8)
    assert abs(cf.lemma_integral_finite((0.5, 1.0), 1e-6) - 1 / 3) < 1e-3


def test_lemma_finite_monotone_to_limit():
    eps = [10.0**-k for k in range(1, 9)]
    vals = [cf.lemma_integral_finite((0.5, 1.0), e) for e in eps]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert all(v < 1 / 3 for v in vals)
    assert 1 / 3 - vals[-1] < 1e-4


def test_lemma_finite_equal_rates_quadrature():
    # repeated alphas exercise the equal-rate branch
    val, _ = integrate.dblquad(lambda v, u: u * v, 0.05, 1, lambda u: 0.05 / u, 1)
    assert cf.lemma_integral_finite((1, 1), 0.05) == pytest.approx(val, rel=1e-8)


def test_fiber_volume():
    assert cf.fiber_volume_z1z2_exact(0) == pytest.approx(2 * PI)
    assert cf.fiber_volume_z1z2_exact(0.5) == pytest.approx(4.71239, abs=1e-5)
    assert cf.fiber_volume_z1z2_exact(1 - 1e-12) == pytest.approx(0, abs=1e-10)
    with pytest.raises(DomainError):
        cf.fiber_volume_z1z2_exact(1.0)


def _volume_quadrature(k, l, eps):
    # (2 pi)^2 int r1 r2 over {r1^k r2^l < eps}
    def inner(r1):
        top = min(1.0, (eps / r1**k) ** (1 / l))
        return r1 * top**2 / 2
    val, _ = integrate.quad(inner, 0, 1, epsabs=0, epsrel=1e-12, limit=200,
                            points=[eps ** (1 / k)])
    return (2 * PI) ** 2 * val


@pytest.mark.parametrize("k,l,eps", [(1, 1, 0.1), (2, 1, 0.1), (2, 3, 0.05), (1, 1, 1.0)])
def test_sublevel_volume_quadrature(k, l, eps):
    assert cf.monomial_sublevel_volume_exact(k, l, eps) == pytest.approx(_volume_quadrature(k, l, eps), rel=1e-9)


def test_sublevel_volume_values():
    # the closed forms are 0.553208 and 1.875225 (see decisions ledger)
    assert cf.monomial_sublevel_volume_exact(1, 1, 0.1) == pytest.approx(PI**2 * 0.01 * (1 - 2 * math.log(0.1)))
    assert cf.monomial_sublevel_volume_exact(1, 1, 0.1) == pytest.approx(0.553208, abs=1e-6)
    assert cf.monomial_sublevel_volume_exact(2, 1, 0.1) == pytest.approx(2 * PI**2 * 0.095, abs=1e-3)
    assert cf.monomial_sublevel_volume_exact(1, 1, 1.0) == pytest.approx(PI**2)


def test_graph_integrand_examples():
    assert cf.graph_volume_integrand((1, 1), 0.5, [0.8]) == pytest.approx(1 + 0.390625 / 0.64)
    with pytest.raises(OutsideBase):
        cf.graph_volume_integrand((1, 1), 0.5, [0.5])
    assert cf.graph_volume_integrand((1, 1), 1e-12, [0.3]) == pytest.approx(1)


@pytest.mark.parametrize("w", [0.2, 0.5, 0.9])
def test_graph_integrand_reproduces_fiber_volume(w):
    # polar quadrature over the annulus w < |z1| < 1
    f = lambda r: cf.graph_volume_integrand((1, 1), w, [r]) * 2 * PI * r  # noqa: E731
    val, _ = integrate.quad(f, w * (1 + 1e-15), 1 - 1e-15, epsrel=1e-10)
    assert val == pytest.approx(cf.fiber_volume_z1z2_exact(w), rel=1e-4)


@pytest.mark.parametrize("k,l", [(1, 1), (2, 3)])
@pytest.mark.parametrize("eps", [0.05, 0.1, 0.2])
def test_coarea_derivative(k, l, eps):
    h = 1e-4
    d = (cf.monomial_J_exact_n2(k, l, eps + h) - cf.monomial_J_exact_n2(k, l, eps - h)) / (2 * h)
    assert d == pytest.approx(cf.monomial_I_exact_n2(k, l, eps), rel=1e-3)


@given(st.integers(1, 6), st.integers(1, 6), st.floats(1e-8, 1.0))
def test_closed_forms_nonnegative(k, l, eps):
    assert cf.monomial_I_exact_n2(k, l, eps) >= 0
    assert cf.monomial_J_exact_n2(k, l, eps) >= -1e-15
    assert 0 <= cf.monomial_sublevel_volume_exact(k, l, eps) <= PI**2 * (1 + 1e-12)


@given(st.integers(1, 6), st.integers(1, 6))
def test_closed_forms_vanish_and_increase(k, l):
    eps = np.logspace(-8, -2, 30)
    I = np.array([cf.monomial_I_exact_n2(k, l, e) for e in eps])
    assert np.all(np.diff(I) > 0)
    assert I[0] < 1e-5 and cf.monomial_J_exact_n2(k, l, 1e-8) < 1e-10


@given(st.lists(st.floats(-0.9, 3), min_size=1, max_size=3), st.floats(1e-6, 0.5))
def test_lemma_finite_below_limit(alphas, eps):
    v = cf.lemma_integral_finite(alphas, eps)
    assert 0 <= v <= cf.lemma_integral_limit(alphas) * (1 + 1e-9)
