"""m-ary digital channel: energy SINR, symbol error rate, capacity.

A working point of the channel is described by the ensemble size ``m``,
the SINR amplitude ``g`` (``g**2 = P_s / (P_i + P_n)``) and the signal
base ``B_s = 2 * deltaF_s * T_s``.  Everything downstream depends on the
pair (g, B_s) only through the energy SINR

    h = g * sqrt(B_s / 2),        h**2 = E_s / N_0m,

which is why h is the natural reduction variable for the whole package.

For coherently detected equal-energy orthogonal signals the exact symbol
error probability is

    p(m, h) = 1 - Integral phi(u) * Phi(u + h*sqrt(2))**(m-1) du,

with phi/Phi the standard normal pdf/cdf.  The integral is evaluated in
the numerically stable complementary form

    p = Integral phi(u) * (1 - exp((m-1) * log Phi(u + h*sqrt(2)))) du

on u in [-10, 10] with adaptive Simpson quadrature; outside that window
the integrand is below 1e-22 for every m and h of interest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ChannelDomainError",
    "ChannelPoint",
    "ExactCoherentOrthogonal",
    "QuadratureError",
    "SerModel",
    "SerTableRangeError",
    "TableSer",
    "UnionBound",
    "capacity_bits_per_symbol",
    "continuous_capacity",
    "esinr",
    "q_function",
    "ser",
]

_LOG2 = math.log(2.0)
_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Integration window for the error-rate integral.  phi(u) < 8e-23 outside
# [-10, 10] and the bracketed factor is bounded by 1, so the truncation
# error is far below the quadrature tolerances used anywhere in the package.
_QUAD_LO = -10.0
_QUAD_HI = 10.0
_MAX_DEPTH = 48


class ChannelDomainError(ValueError):
    """A parameter lies outside the domain of a channel operation."""


class SerTableRangeError(ChannelDomainError):
    """Requested ESINR lies outside a table model's knot range."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x) = P(N(0,1) > x)."""
    return 0.5 * math.erfc(x / _SQRT2)


def _norm_pdf(u: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * u * u)


def _norm_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / _SQRT2)


@dataclass(frozen=True)
class ChannelPoint:
    """A channel working point (m, g, B_s).

    Parameters
    ----------
    m : int
        Ensemble size (number of orthogonal signals), m >= 2.
    g : float
        SINR amplitude, g > 0.
    b_s : float
        Signal base 2 * deltaF_s * T_s, b_s > 0.
    bandwidth_hz, symbol_duration_s : float, optional
        Physical decomposition of the base.  Either both are given and
        must satisfy 2 * bandwidth_hz * symbol_duration_s == b_s (to
        within rounding), or both are omitted.
    """

    m: int
    g: float
    b_s: float
    bandwidth_hz: float | None = None
    symbol_duration_s: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 2:
            raise ChannelDomainError(f"ensemble size m must be an integer >= 2, got {self.m!r}")
        if not (self.g > 0.0 and math.isfinite(self.g)):
            raise ChannelDomainError(f"SINR amplitude g must be finite and > 0, got {self.g!r}")
        if not (self.b_s > 0.0 and math.isfinite(self.b_s)):
            raise ChannelDomainError(f"signal base b_s must be finite and > 0, got {self.b_s!r}")
        if (self.bandwidth_hz is None) != (self.symbol_duration_s is None):
            raise ChannelDomainError(
                "bandwidth_hz and symbol_duration_s must be given together or not at all"
            )
        if self.bandwidth_hz is not None:
            if self.bandwidth_hz <= 0.0 or self.symbol_duration_s <= 0.0:
                raise ChannelDomainError("bandwidth and symbol duration must be > 0")
            product = 2.0 * self.bandwidth_hz * self.symbol_duration_s
            if not math.isclose(product, self.b_s, rel_tol=1e-12):
                raise ChannelDomainError(
                    f"2 * bandwidth * duration = {product!r} disagrees with b_s = {self.b_s!r}"
                )

    @classmethod
    def from_bandwidth(
        cls, m: int, g: float, bandwidth_hz: float, symbol_duration_s: float
    ) -> "ChannelPoint":
        """Build a point from the physical pair (deltaF_s, T_s)."""
        return cls(
            m=m,
            g=g,
            b_s=2.0 * bandwidth_hz * symbol_duration_s,
            bandwidth_hz=bandwidth_hz,
            symbol_duration_s=symbol_duration_s,
        )

    @property
    def h(self) -> float:
        """Energy SINR h = g * sqrt(B_s / 2)."""
        return self.g * math.sqrt(self.b_s / 2.0)


def esinr(point: ChannelPoint) -> float:
    """Energy SINR of a working point; h**2 equals E_s / N_0m."""
    return point.h


class SerModel:
    """Symbol-error-rate model interface: callable on (m, h)."""

    def ser(self, m: int, h: float) -> float:
        raise NotImplementedError

    @staticmethod
    def _check_args(m: int, h: float) -> None:
        if not isinstance(m, int) or m < 2:
            raise ChannelDomainError(f"ensemble size m must be an integer >= 2, got {m!r}")
        if not (h >= 0.0 and math.isfinite(h)):
            raise ChannelDomainError(f"energy SINR h must be finite and >= 0, got {h!r}")


def _adaptive_simpson(f, a: float, b: float, tol: float) -> float:
    """Adaptive Simpson quadrature with Richardson correction."""
    fa, fb = f(a), f(b)
    mid = 0.5 * (a + b)
    fm = f(mid)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_recurse(f, a, b, fa, fm, fb, whole, tol, _MAX_DEPTH)


def _simpson_recurse(f, a, b, fa, fm, fb, whole, tol, depth):
    mid = 0.5 * (a + b)
    lm = 0.5 * (a + mid)
    rm = 0.5 * (mid + b)
    flm, frm = f(lm), f(rm)
    left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureError(
            f"adaptive Simpson failed to reach tol={tol!r} on [{a!r}, {b!r}]"
        )
    half = 0.5 * tol
    return _simpson_recurse(f, a, mid, fa, flm, fm, left, half, depth - 1) + _simpson_recurse(
        f, mid, b, fm, frm, fb, right, half, depth - 1
    )


@dataclass(frozen=True)
class ExactCoherentOrthogonal(SerModel):
    """Exact SER of coherently detected equal-energy orthogonal signals.

    ``quad_tol`` is the absolute tolerance handed to the adaptive Simpson
    integrator.  The default 1e-10 keeps a single evaluation around a
    millisecond; tighten it for high-accuracy sweeps.
    """

    quad_tol: float = 1e-10

    def ser(self, m: int, h: float) -> float:
        self._check_args(m, h)
        shift = h * _SQRT2
        k = m - 1

        def integrand(u: float) -> float:
            cdf = _norm_cdf(u + shift)
            if cdf <= 0.0:
                return _norm_pdf(u)
            # 1 - Phi**k, computed without cancellation for Phi near 1.
            return _norm_pdf(u) * (-math.expm1(k * math.log(cdf)))

        p = _adaptive_simpson(integrand, _QUAD_LO, _QUAD_HI, self.quad_tol)
        p_max = k / m
        if p < 0.0:
            return 0.0
        return min(p, p_max)


@dataclass(frozen=True)
class UnionBound(SerModel):
    """Union bound p <= min((m-1) * Q(h), (m-1)/m)."""

    def ser(self, m: int, h: float) -> float:
        self._check_args(m, h)
        k = m - 1
        return min(k * q_function(h), k / m)


class TableSer(SerModel):
    """Piecewise-linear SER over caller-supplied (h, p) knots.

    Knots must be sorted by strictly increasing h with p non-increasing
    and within [0, 1).  Evaluation outside the knot range raises
    :class:`SerTableRangeError`; the model never extrapolates.
    """

    def __init__(self, knots: list[tuple[float, float]] | tuple[tuple[float, float], ...]):
        knots = tuple((float(h), float(p)) for h, p in knots)
        if len(knots) < 2:
            raise ChannelDomainError("a table model needs at least two knots")
        for i, (h, p) in enumerate(knots):
            if not (math.isfinite(h) and h >= 0.0):
                raise ChannelDomainError(f"knot {i}: h must be finite and >= 0, got {h!r}")
            if not (0.0 <= p < 1.0):
                raise ChannelDomainError(f"knot {i}: p must lie in [0, 1), got {p!r}")
            if i > 0:
                if h <= knots[i - 1][0]:
                    raise ChannelDomainError("knot h values must be strictly increasing")
                if p > knots[i - 1][1]:
                    raise ChannelDomainError("knot p values must be non-increasing in h")
        self.knots = knots

    def ser(self, m: int, h: float) -> float:
        self._check_args(m, h)
        h_lo, h_hi = self.knots[0][0], self.knots[-1][0]
        if h < h_lo or h > h_hi:
            raise SerTableRangeError(
                f"h={h!r} outside table range [{h_lo!r}, {h_hi!r}]; refusing to extrapolate"
            )
        # Binary search for the bracketing segment.
        lo, hi = 0, len(self.knots) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.knots[mid][0] <= h:
                lo = mid
            else:
                hi = mid
        h0, p0 = self.knots[lo]
        h1, p1 = self.knots[hi]
        t = 0.0 if h1 == h0 else (h - h0) / (h1 - h0)
        p = p0 + t * (p1 - p0)
        return min(p, (m - 1) / m)


def ser(point: ChannelPoint, model: SerModel) -> float:
    """Symbol error rate of a working point under the given model."""
    return model.ser(point.m, point.h)


def capacity_bits_per_symbol(m: int, p: float) -> float:
    """Capacity of the symmetric m-ary channel, bits per symbol.

    C_m(p) = log2(m) + (1-p) * log2(1-p) + p * log2(p / (m-1)),
    with the convention x * log2(x) = 0 at x = 0.  Defined for
    0 <= p <= (m-1)/m; C is log2(m) at p=0 and exactly 0 at the
    uniform-guessing point p = (m-1)/m.
    """
    if not isinstance(m, int) or m < 2:
        raise ChannelDomainError(f"ensemble size m must be an integer >= 2, got {m!r}")
    p_max = (m - 1) / m
    if not (0.0 <= p <= p_max):
        raise ChannelDomainError(f"error rate p={p!r} outside [0, {p_max!r}] for m={m}")
    if p == 0.0:
        return math.log2(m)
    if p == p_max:
        return 0.0
    value = (
        math.log2(m)
        + (1.0 - p) * math.log1p(-p) / _LOG2
        + p * math.log2(p / (m - 1))
    )
    # Rounding can push the value a hair below zero near the endpoint.
    return max(0.0, value)


def continuous_capacity(bandwidth_hz: float, snr: float) -> float:
    """Continuous-channel capacity deltaF * log2(1 + snr), bits/s."""
    if not (bandwidth_hz > 0.0 and math.isfinite(bandwidth_hz)):
        raise ChannelDomainError(f"bandwidth must be finite and > 0, got {bandwidth_hz!r}")
    if not (snr >= 0.0 and math.isfinite(snr)):
        raise ChannelDomainError(f"snr must be finite and >= 0, got {snr!r}")
    return bandwidth_hz * math.log1p(snr) / _LOG2
