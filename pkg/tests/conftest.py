import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from holoset.poly import SparsePolynomial

settings.register_profile("default", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def polynomials(draw, max_dim=4, max_degree=6, max_terms=5, nonconstant=True):
    n = draw(st.integers(1, max_dim))
    k = draw(st.integers(1, max_terms))
    terms = []
    for _ in range(k):
        e = draw(st.lists(st.integers(0, max_degree), min_size=n, max_size=n))
        # keep total degree bounded
        while sum(e) > max_degree:
            e[e.index(max(e))] -= 1
        c = complex(draw(st.floats(-2, 2)), draw(st.floats(-2, 2)))
        terms.append((tuple(e), c))
    if nonconstant:
        j = draw(st.integers(0, n - 1))
        e = [0] * n
        e[j] = draw(st.integers(1, max_degree))
        terms.append((tuple(e), complex(draw(st.floats(0.5, 2)), 0.0)))
    return SparsePolynomial.from_terms(n, terms)


@pytest.fixture
def z1z2():
    return SparsePolynomial.monomial((1, 1))
