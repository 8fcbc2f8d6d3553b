import math

import pytest
from hypothesis import given, strategies as st

from navforge.clock import ClockInit, ClockPolynomial, clock_offset, rereference
from navforge.errors import NegativeInterval


def test_clock_offset_examples():
    p = ClockPolynomial(2e-6, 3e-9, 1e-15, toc=1000.0)
    assert clock_offset(p, 1000.0) == 2e-6
    assert math.isclose(clock_offset(ClockPolynomial(1e-6, 1e-9, 0, 0), 100), 1.1e-6, rel_tol=1e-15)
    assert math.isclose(clock_offset(ClockPolynomial(0, 0, 1e-12, 0), 1000), 1e-6, rel_tol=1e-15)


def test_polynomial_validation():
    with pytest.raises(ValueError):
        ClockPolynomial(math.nan, 0, 0, 0)
    with pytest.raises(ValueError):
        ClockPolynomial(0, 0, 0, 604800)


@pytest.mark.parametrize("mode", ["exact", "paper_literal"])
def test_rereference_identity_at_start(mode):
    p = rereference(ClockInit(1e-9, 1e-15, 5000.0), 5000.0, mode)
    assert (p.a0, p.a1, p.a2, p.toc) == (0.0, 1e-9, 1e-15, 5000.0)


@pytest.mark.parametrize("mode", ["exact", "paper_literal"])
def test_rereference_linear_clock(mode):
    p = rereference(ClockInit(2e-10, 0.0, 0.0), 7200.0, mode)
    assert p.a0 == 2e-10 * 7200
    assert p.a1 == 2e-10


def test_rereference_exact_example():
    p = rereference(ClockInit(1e-9, 1e-15, 0.0), 3600.0, "exact")
    assert math.isclose(p.a0, 3.61296e-6, rel_tol=1e-14)
    assert math.isclose(p.a1, 1.0072e-9, rel_tol=1e-14)
    assert p.a2 == 1e-15


def test_rereference_paper_literal_example():
    # a1' = a1 + a2*dt as printed: 1e-9 + 1e-15*3600
    p = rereference(ClockInit(1e-9, 1e-15, 0.0), 3600.0, "paper_literal")
    assert math.isclose(p.a0, 3.61296e-6, rel_tol=1e-15)
    assert math.isclose(p.a1, 1.0036e-9, rel_tol=1e-15)
    assert p.a2 == 1e-15


def test_rereference_negative_interval():
    with pytest.raises(NegativeInterval):
        rereference(ClockInit(0, 0, 100.0), 50.0)


def test_rereference_unknown_mode():
    with pytest.raises(ValueError):
        rereference(ClockInit(0, 0, 0), 1.0, "fuzzy")


@given(
    st.floats(-1e-8, 1e-8),
    st.floats(-1e-14, 1e-14),
    st.floats(0, 14400),
)
def test_exact_mode_continuity(a1, a2, dt):
    t0 = 86400.0
    init = ClockInit(a1, a2, t0)
    old = ClockPolynomial(0.0, a1, a2, t0)
    new = rereference(init, t0 + dt, "exact")
    for t in range(int(t0), int(t0) + 14401, 600):
        before, after = clock_offset(old, t), clock_offset(new, t)
        assert abs(before - after) <= 1e-12 * abs(before) + 1e-16


@given(st.floats(-1e-8, 1e-8), st.floats(-1e-14, 1e-14), st.floats(0, 14400))
def test_a2_invariant(a1, a2, dt):
    for mode in ("exact", "paper_literal"):
        assert rereference(ClockInit(a1, a2, 0.0), dt, mode).a2 == a2
