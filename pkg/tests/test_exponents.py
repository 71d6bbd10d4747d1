import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from holoset import closed_form as cf
from holoset.errors import AllDirectionsDegenerate, DomainError, InsufficientPoints, NonpositiveValue
from holoset.estimator import SamplerConfig, ShellSpec, Weight, mc_shell_surface_integral
from holoset.exponents import exponent_report, fit_power_law, lojasiewicz_curve_probe
from holoset.poly import SparsePolynomial, cusp


def test_fit_exact_power():
    eps = [2.0**-j for j in range(3, 9)]
    fit = fit_power_law([(e, 3 * e**2) for e in eps])
    assert abs(fit.exponent - 2) < 1e-12 and fit.r_squared == pytest.approx(1)
    assert fit.log_constant == pytest.approx(math.log(3))


def test_fit_closed_form_J():
    eps = [2.0**-j for j in range(3, 9)]
    fit = fit_power_law([(e, cf.monomial_J_exact_n2(1, 1, e)) for e in eps])
    assert 1.98 <= fit.exponent <= 2.02


def test_fit_linear_area():
    eps = [2.0**-j for j in range(3, 8)]
    assert fit_power_law([(e, 2 * math.pi**2 * e) for e in eps]).exponent == pytest.approx(1.0, abs=1e-12)


def test_fit_errors():
    with pytest.raises(InsufficientPoints):
        fit_power_law([(0.1, 1), (0.2, 2)])
    with pytest.raises(DomainError):
        fit_power_law([(0.1, 1), (0.1, 2), (0.3, 3)])
    with pytest.raises(DomainError):
        fit_power_law([(-0.1, 1), (0.2, 2), (0.3, 3)])
    with pytest.raises(NonpositiveValue):
        fit_power_law([(0.1, 0), (0.2, 2), (0.3, 3), (0.4, -1)])
    fit = fit_power_law([(0.1, 0), (0.2, 2), (0.3, 3), (0.4, 4)])
    assert fit.n_rejected == 1


@given(st.floats(-4, 4), st.floats(0.01, 100))
def test_fit_exact_on_synthetic(p, c):
    eps = np.logspace(-4, -1, 7)
    fit = fit_power_law([(e, c * e**p) for e in eps])
    assert abs(fit.exponent - p) < 1e-10


def test_probe_examples():
    m = lojasiewicz_curve_probe(SparsePolynomial.monomial((2, 3)), 4)
    assert m.alpha == pytest.approx(0.8, abs=0.02) and m.best_direction == (1, 1)
    assert lojasiewicz_curve_probe(cusp(), 6).alpha == pytest.approx(2 / 3, abs=0.02)
    assert lojasiewicz_curve_probe(SparsePolynomial.monomial((1, 0)), 3).alpha == pytest.approx(0, abs=1e-9)


@pytest.mark.parametrize("k1,k2", [(k1, k2) for k1 in range(1, 8) for k2 in range(1, 8) if k1 + k2 <= 8])
def test_probe_monomials(k1, k2):
    est = lojasiewicz_curve_probe(SparsePolynomial.monomial((k1, k2)), 3)
    assert est.alpha == pytest.approx(1 - 1 / (k1 + k2), abs=0.02)


@given(st.floats(0.01, 100), st.floats(0, 2 * math.pi))
def test_probe_scale_invariant(mod, arg):
    c = mod * complex(math.cos(arg), math.sin(arg))
    a = lojasiewicz_curve_probe(cusp(), 4).alpha
    b = lojasiewicz_curve_probe(cusp().scaled(c), 4).alpha
    assert abs(a - b) < 1e-3


def test_probe_degenerate():
    # z1 - z2 vanishes on every diagonal direction, but not on (1, 2)
    est = lojasiewicz_curve_probe(SparsePolynomial.from_terms(2, [((1, 0), 1), ((0, 1), -1)]), 2)
    assert (1, 1) in est.skipped and (2, 2) in est.skipped
    with pytest.raises(AllDirectionsDegenerate):
        lojasiewicz_curve_probe(SparsePolynomial.from_terms(2, [((1, 0), 1), ((0, 1), -1)]), 1)


def test_probe_grid_validation():
    with pytest.raises(DomainError):
        lojasiewicz_curve_probe(cusp(), 2, t_grid=[1e-2, 1e-3, 1e-4])
    with pytest.raises(DomainError):
        lojasiewicz_curve_probe(cusp(), 2, t_grid=np.logspace(-1, -3, 10))


def test_probe_clamps():
    # a grid far too coarse for a high-multiplicity factor still stays below 1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        est = lojasiewicz_curve_probe(SparsePolynomial.monomial((40, 40)), 1)
    assert est.alpha < 1


def test_exponent_report():
    assert exponent_report(0.8) == pytest.approx((0.2, 0.4, 0.2))
    assert exponent_report(0.0) == (1.0, 2.0, 1.0)
    assert exponent_report(2 / 3) == pytest.approx((1 / 3, 2 / 3, 1 / 3))
    for bad in (-0.1, 1.0):
        with pytest.raises(DomainError):
            exponent_report(bad)


@given(st.floats(0, 0.999))
def test_report_identities(alpha):
    g, t, c = exponent_report(alpha)
    assert g + alpha == 1 and t == 2 * g and c == g


def test_area_scaling_smooth():
    pts = []
    for j in range(3, 8):
        r = mc_shell_surface_integral(SparsePolynomial.monomial((1, 0)), ShellSpec(2.0**-j), Weight.UNIT,
                                      SamplerConfig(seed=0, n_samples=200_000), proposal="adaptive")
        pts.append((2.0**-j, r.value, r.std_error))
    assert fit_power_law(pts).exponent == pytest.approx(1.0, abs=0.05)
