"""Error-rate models and capacity: exact values, bounds, and domain checks."""

import math

import pytest
from scipy import integrate
from scipy.stats import norm

from mchan.channel import (
    ChannelDomainError,
    ChannelPoint,
    ExactCoherentOrthogonal,
    SerTableRangeError,
    TableSer,
    UnionBound,
    capacity_bits_per_symbol,
    continuous_capacity,
    esinr,
    q_function,
    ser,
)

EXACT = ExactCoherentOrthogonal()


def scipy_ser(m: int, h: float) -> float:
    """Independent quadrature of the same integral (different engine)."""
    shift = h * math.sqrt(2.0)

    def f(u):
        return norm.pdf(u) * (1.0 - norm.cdf(u + shift) ** (m - 1))

    val, _ = integrate.quad(f, -10.0, 10.0, epsabs=1e-13, limit=200)
    return val


def test_q_function_basics():
    assert q_function(0.0) == 0.5
    assert q_function(1.0) == pytest.approx(0.15865525393145707, abs=1e-15)
    assert q_function(6.0) < 1e-8


def test_binary_exact_equals_q():
    for i in range(0, 61):
        h = i / 10.0
        assert EXACT.ser(2, h) == pytest.approx(q_function(h), abs=1e-9)


@pytest.mark.parametrize("m,h", [(2, 0.5), (4, 1.0), (8, 1.5), (16, 0.2), (32, 2.5), (64, 3.0)])
def test_exact_ser_matches_independent_quadrature(m, h):
    assert EXACT.ser(m, h) == pytest.approx(scipy_ser(m, h), abs=1e-9)


def test_frozen_reference_values():
    # frozen from the scipy oracle above
    assert EXACT.ser(4, 1.0) == pytest.approx(0.3222204670295912, abs=1e-9)
    c4 = capacity_bits_per_symbol(4, EXACT.ser(4, 1.0))
    assert c4 == pytest.approx(0.5825128343681643, abs=1e-9)


def test_tighter_quadrature_is_closer():
    loose = ExactCoherentOrthogonal(quad_tol=1e-6)
    tight = ExactCoherentOrthogonal(quad_tol=1e-12)
    truth = scipy_ser(8, 1.2)
    assert abs(tight.ser(8, 1.2) - truth) <= abs(loose.ser(8, 1.2) - truth) + 1e-14


def test_union_bound_dominates_exact():
    union = UnionBound()
    for m in (2, 4, 8, 16, 32):
        for i in range(0, 26):
            h = i / 5.0
            pu = union.ser(m, h)
            # for m = 2 the bound is tight, so leave quadrature headroom
            assert pu >= EXACT.ser(m, h) - 1e-9
            assert pu <= (m - 1) / m


def test_ser_zero_esinr_is_uniform_guessing():
    for m in (2, 4, 8, 32):
        assert EXACT.ser(m, 0.0) == pytest.approx((m - 1) / m, abs=1e-10)


def test_ser_monotone_decreasing_in_h():
    prev = 1.0
    for i in range(0, 60):
        p = EXACT.ser(8, i * 0.1)
        assert p <= prev + 1e-12
        prev = p


def test_ser_increases_with_ensemble_size():
    values = [EXACT.ser(m, 1.0) for m in (2, 4, 8, 16)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_ser_argument_validation():
    with pytest.raises(ChannelDomainError):
        EXACT.ser(1, 1.0)
    with pytest.raises(ChannelDomainError):
        EXACT.ser(4, -0.5)
    with pytest.raises(ChannelDomainError):
        EXACT.ser(4, math.nan)


def test_capacity_endpoints_exact():
    for m in (2, 4, 8, 16, 32, 64):
        assert capacity_bits_per_symbol(m, 0.0) == math.log2(m)
        assert capacity_bits_per_symbol(m, (m - 1) / m) == 0.0


def test_capacity_monotone_decreasing_in_p():
    m = 8
    p_max = (m - 1) / m
    prev = math.log2(m) + 1.0
    for k in range(1000):
        p = p_max * k / 999.0
        c = capacity_bits_per_symbol(m, p)
        assert c <= prev + 1e-12
        assert 0.0 <= c <= math.log2(m)
        prev = c


def test_capacity_domain_errors():
    with pytest.raises(ChannelDomainError):
        capacity_bits_per_symbol(8, -0.01)
    with pytest.raises(ChannelDomainError):
        capacity_bits_per_symbol(8, 7 / 8 + 0.01)
    with pytest.raises(ChannelDomainError):
        capacity_bits_per_symbol(1, 0.0)


def test_channel_point_esinr():
    pt = ChannelPoint(m=4, g=2.0, b_s=8.0)
    assert pt.h == pytest.approx(4.0, rel=1e-15)
    assert esinr(pt) == pt.h
    phys = ChannelPoint.from_bandwidth(m=4, g=2.0, bandwidth_hz=2.0, symbol_duration_s=2.0)
    assert phys.b_s == 8.0
    assert phys.h == pt.h


def test_channel_point_validation():
    with pytest.raises(ChannelDomainError):
        ChannelPoint(m=1, g=1.0, b_s=2.0)
    with pytest.raises(ChannelDomainError):
        ChannelPoint(m=4, g=0.0, b_s=2.0)
    with pytest.raises(ChannelDomainError):
        ChannelPoint(m=4, g=1.0, b_s=-2.0)
    with pytest.raises(ChannelDomainError):
        ChannelPoint(m=4, g=1.0, b_s=2.0, bandwidth_hz=1.0)  # missing duration
    with pytest.raises(ChannelDomainError):
        ChannelPoint(m=4, g=1.0, b_s=2.0, bandwidth_hz=5.0, symbol_duration_s=5.0)


def test_ser_wrapper_uses_point_esinr():
    pt = ChannelPoint(m=2, g=1.0, b_s=2.0)  # h = 1
    assert ser(pt, EXACT) == EXACT.ser(2, 1.0)


def test_table_model_interpolates_and_refuses_extrapolation():
    table = TableSer([(0.0, 0.5), (1.0, 0.2), (2.0, 0.05)])
    assert table.ser(2, 0.0) == 0.5
    assert table.ser(2, 1.0) == 0.2
    assert table.ser(2, 0.5) == pytest.approx(0.35, rel=1e-12)
    with pytest.raises(SerTableRangeError):
        table.ser(2, 2.5)
    # clamped to the m-ary ceiling
    assert table.ser(2, 0.0) <= 0.5


def test_table_model_knot_validation():
    with pytest.raises(ChannelDomainError):
        TableSer([(0.0, 0.5)])
    with pytest.raises(ChannelDomainError):
        TableSer([(0.0, 0.5), (0.0, 0.4)])  # not strictly increasing in h
    with pytest.raises(ChannelDomainError):
        TableSer([(0.0, 0.2), (1.0, 0.4)])  # p increases
    with pytest.raises(ChannelDomainError):
        TableSer([(0.0, 1.0), (1.0, 0.4)])  # p out of [0, 1)


def test_continuous_capacity():
    assert continuous_capacity(1.0, 0.0) == 0.0
    assert continuous_capacity(1000.0, 1.0) == pytest.approx(1000.0, rel=1e-12)
    assert continuous_capacity(5.0, 3.0) == pytest.approx(10.0, rel=1e-12)
    with pytest.raises(ChannelDomainError):
        continuous_capacity(0.0, 1.0)
    with pytest.raises(ChannelDomainError):
        continuous_capacity(1.0, -0.1)
