import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from holoset.errors import BadConfig, DomainError, NotNormalized, OnZeroSet
from holoset.estimator import SamplerConfig
from holoset.poly import SparsePolynomial, cusp
from holoset.singular import Integrand
from holoset.sobolev import (SingularKind, Verdict, classify_convergence, dyadic_integrability_test,
                             eval_singular, judge_terms, partial_reference_integral,
                             radial_reference_integral, rescale)

Z1 = SparsePolynomial.monomial((1, 0))
Z1Z2 = SparsePolynomial.monomial((1, 1))
Z = SparsePolynomial.monomial((1,))


def test_point_examples():
    assert eval_singular("U", Z1Z2, (0.5, 0.5)) == pytest.approx(1.01979, abs=1e-5)
    # 1 / 1.019781 = 0.980603
    assert eval_singular("V", Z1Z2, (0.5, 0.5)) == pytest.approx(1 / math.log(-2 * math.log(0.25)), rel=1e-14)
    assert eval_singular("V", Z1Z2, (0.5, 0.5)) == pytest.approx(0.980603, abs=1e-6)
    assert eval_singular("G", Z, (0.1,)) == pytest.approx(-18.8612, abs=1e-4)


def test_point_errors():
    with pytest.raises(OnZeroSet):
        eval_singular("U", Z1Z2, (0, 0.3))
    with pytest.raises(NotNormalized):
        eval_singular("U", Z1Z2, (0.9, 0.9))


def test_a_pieces_consistent():
    f = cusp().scaled(0.2)
    p = (0.3 + 0.1j, 0.2 - 0.2j)
    for kind in ("A2", "A3", "A4"):
        pieces = np.array([[eval_singular(kind, f, p, (i, j)) for j in range(2)] for i in range(2)])
        assert np.linalg.norm(pieces) == pytest.approx(eval_singular(kind, f, p), rel=1e-12)


@given(st.floats(-0.7, 0.7), st.floats(-0.7, 0.7), st.floats(-0.7, 0.7), st.floats(-0.7, 0.7))
def test_sign_structure(a, b, c, d):
    f = cusp().scaled(0.3)
    p = (complex(a, b), complex(c, d))
    af = abs(f.scaled(1.0).terms[0][1] * p[0] ** 2 - 0.3 * p[1] ** 3)
    assume(1e-12 < af < 0.5)
    assert eval_singular("G", f, p) <= 0
    assert eval_singular("T", f, p) >= 0


@given(st.floats(-0.7, 0.7), st.floats(-0.7, 0.7), st.floats(1e-6, 0.49))
def test_v_continuity(a, b, s):
    f = Z1Z2.scaled(0.4)
    p = (complex(a, b), complex(b, a))
    af = 0.4 * abs(p[0] * p[1])
    assume(1e-12 < af <= s)
    assert abs(eval_singular("V", f, p)) <= 1 / math.log(-math.log(s * s)) * (1 + 1e-12)


def test_rescale():
    g, rec = rescale(Z1Z2, seed=0)
    assert rec.sup_sample <= 1 and rec.scale_c == pytest.approx(1 / (4 * rec.sup_sample))
    assert rec.scale_c >= 0.25


def test_judge_terms():
    v, _, _ = judge_terms([0.5**j for j in range(8)], [0.0] * 8)
    assert v is Verdict.CONVERGENT
    assert judge_terms([1.0] * 8, [0.01] * 8)[0] is Verdict.DIVERGENT
    # oscillating terms on top of a large head: neither rule fires
    noisy = [100, 1, 1.2, 1, 1.2, 1, 1.2, 1]
    assert judge_terms(noisy, [0.0] * 8)[0] is Verdict.INCONCLUSIVE
    # an empty annulus inside the ratio window blocks both verdicts
    assert judge_terms([1, 1, 1, np.nan, 1, 1, 1, 1], [0] * 8)[0] is Verdict.INCONCLUSIVE
    # nondecreasing within 3 sigma
    assert judge_terms([50, 1, 1, 0.99, 1, 0.99, 1, 1], [0.01] * 8)[0] is Verdict.DIVERGENT
    with pytest.raises(BadConfig):
        judge_terms([1.0] * 5, [0.0] * 5)


def test_ledger_config_errors():
    with pytest.raises(BadConfig):
        dyadic_integrability_test(Z1, Integrand.parse("GRAD_U_SQ"), 2, 5)


def test_ledger_invariants():
    led = dyadic_integrability_test(Z1, Integrand.parse("GRAD_U_SQ"), 2, 12, SamplerConfig(n_samples=50_000))
    vals = [t.value for t in led.terms if not t.empty]
    assert all(v >= 0 for v in vals)
    assert all(b >= a for a, b in zip(led.partial_sums, led.partial_sums[1:]))
    assert led.rescale is not None and not led.exploratory
    again = dyadic_integrability_test(Z1, Integrand.parse("GRAD_U_SQ"), 2, 12, SamplerConfig(n_samples=50_000))
    assert led.to_dict() == again.to_dict()


def test_exploratory_label():
    f = SparsePolynomial.from_terms(2, [((1, 1), 1), ((3, 0), 1), ((0, 2), 1)])
    led = dyadic_integrability_test(f, Integrand.parse("INV_F_P(0.5)"), 2, 8, SamplerConfig(n_samples=5000))
    assert led.exploratory


@pytest.mark.parametrize("poly,kind,want", [
    (Z1, "GRAD_U_SQ", Verdict.CONVERGENT),
    (Z1, "GRAD_U_P(2.5)", Verdict.DIVERGENT),
    (Z1Z2, "INV_F_P(0.5)", Verdict.CONVERGENT),
    (cusp(), "A2", Verdict.CONVERGENT),
    (cusp(), "A3", Verdict.CONVERGENT),
    (cusp(), "A4", Verdict.CONVERGENT),
])
def test_ledger_verdicts(poly, kind, want):
    led = dyadic_integrability_test(poly, Integrand.parse(kind), 2, 18, SamplerConfig(n_samples=200_000))
    assert led.verdict is want


def test_classify_examples():
    assert classify_convergence(0.5, 0, 0) is Verdict.CONVERGENT
    assert classify_convergence(1, 1, 1) is Verdict.DIVERGENT
    assert classify_convergence(1, 1, 2) is Verdict.CONVERGENT


def test_reference_examples():
    assert radial_reference_integral(1, 2, 0, 0.3) == pytest.approx(1 / abs(math.log(0.3)), rel=1e-8)
    assert radial_reference_integral(1, 1, 2, 0.1) == pytest.approx(1 / math.log(math.log(10)), rel=1e-8)
    assert radial_reference_integral(2, 1, 0, 0.1) is Verdict.DIVERGENT
    assert radial_reference_integral(0.5, 0, 0, 0.3) == pytest.approx(2 * math.sqrt(0.3), rel=1e-8)
    with pytest.raises(DomainError):
        radial_reference_integral(1, 2, 0, 0.5)


def _depth_increment_ratio(a, b, c, upper=0.1):
    # increments of the partial integral over successive doublings of the depth y = ln|ln t|
    y0 = math.log(-math.log(upper))
    lows = [math.exp(-math.exp(y0 + k)) for k in range(1, 5)]
    parts = [partial_reference_integral(a, b, c, lo, upper) for lo in lows]
    inc = np.diff(parts)
    return parts, inc


@pytest.mark.parametrize("a", [0.5, 1, 1.5, 2])
@pytest.mark.parametrize("b", [0, 1, 2])
@pytest.mark.parametrize("c", [0, 1, 2])
def test_verdict_agreement(a, b, c):
    want = classify_convergence(a, b, c)
    got = radial_reference_integral(a, b, c, 0.1)
    parts, inc = _depth_increment_ratio(a, b, c)
    if want is Verdict.CONVERGENT:
        assert isinstance(got, float) and math.isfinite(got)
        assert parts[-1] <= got * (1 + 1e-9)
        # increments shrink geometrically in the depth
        assert inc[-1] < 0.75 * inc[-2] or inc[-1] < 1e-12 * got
    else:
        assert got is Verdict.DIVERGENT
        # increments do not shrink; for a > 1 they explode
        assert inc[-1] >= 0.75 * inc[-2]
        if a > 1:
            assert inc[-1] > 1e6 * inc[-2]
        assert partial_reference_integral(a, b, c, 1e-12, 0.1) > partial_reference_integral(a, b, c, 1e-3, 0.1)
