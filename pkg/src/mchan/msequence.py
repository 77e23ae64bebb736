"""Maximal-length (m-) sequences over GF(2).

A binary sequence generated by an n-stage linear feedback shift register
with a primitive feedback polynomial has period N = 2**n - 1 and three
properties this package leans on:

* balance: the +/-1 chip sum over one period is exactly -1
  (bit b -> chip 1 - 2b, i.e. ones map to -1);
* two-valued periodic autocorrelation: N at lag 0, -1 elsewhere;
* the window property: every nonzero n-bit word appears exactly once as
  a cyclic window, which is what makes windows usable as identifiers.

The generator measures the register period explicitly and refuses
non-primitive feedback taps, so a wrong table entry cannot slip through.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PRIMITIVE_TAPS",
    "MSequence",
    "NonPrimitiveTapsError",
    "decimate",
    "distinct_msequences",
    "generate_msequence",
    "periodic_autocorrelation",
    "reciprocal_taps",
]

# Known-good feedback taps (exponents of the feedback polynomial, the
# constant term is implied) for each register length.  Primitivity is
# still verified at generation time via the measured period.
PRIMITIVE_TAPS: dict[int, tuple[int, ...]] = {
    2: (2, 1),
    3: (3, 2),
    4: (4, 3),
    5: (5, 3),
    6: (6, 5),
    7: (7, 6),
    8: (8, 6, 5, 4),
    9: (9, 5),
    10: (10, 7),
    11: (11, 9),
    12: (12, 6, 4, 1),
    13: (13, 4, 3, 1),
    14: (14, 5, 3, 1),
    15: (15, 14),
    16: (16, 15, 13, 4),
    17: (17, 14),
    18: (18, 11),
    19: (19, 6, 2, 1),
    20: (20, 17),
    21: (21, 19),
    22: (22, 21),
    23: (23, 18),
    24: (24, 23, 22, 17),
}

MIN_DEGREE = 2
MAX_DEGREE = 24


class NonPrimitiveTapsError(ValueError):
    """The feedback taps do not generate a maximal-length sequence."""

    def __init__(self, n: int, taps: tuple[int, ...], measured_period: int):
        self.n = n
        self.taps = taps
        self.measured_period = measured_period
        super().__init__(
            f"taps {taps} of degree {n} give period {measured_period}, "
            f"not 2**{n} - 1 = {2**n - 1}: feedback polynomial not primitive"
        )


@dataclass(frozen=True, eq=False)
class MSequence:
    """One period of a maximal-length sequence.

    ``taps`` is None for sequences derived by decimation rather than
    generated from an explicit feedback polynomial.
    """

    n: int
    taps: tuple[int, ...] | None
    bits: np.ndarray  # uint8, one period, length 2**n - 1
    chips: np.ndarray  # int8, 1 - 2*bits

    @property
    def period(self) -> int:
        return self.bits.size

    def window_value(self, j: int) -> int:
        """Value of the cyclic n-bit window ending at position j.

        The window reads b[j-n+1] ... b[j] with the oldest bit as the
        most significant; over j = 0 .. N-1 every value 1 .. 2**n - 1
        occurs exactly once.
        """
        n = self.n
        value = 0
        for i in range(n):
            value = (value << 1) | int(self.bits[(j - n + 1 + i) % self.period])
        return value

    def window_values(self) -> np.ndarray:
        """All N cyclic window values as an int64 array (a permutation of 1..N)."""
        n, N = self.n, self.period
        bits = self.bits.astype(np.int64)
        idx = np.arange(N)
        vals = np.zeros(N, dtype=np.int64)
        for i in range(n):
            vals += bits[(idx - (n - 1) + i) % N] << (n - 1 - i)
        return vals


def _check_degree(n: int) -> None:
    if not isinstance(n, int) or not (MIN_DEGREE <= n <= MAX_DEGREE):
        raise ValueError(
            f"register length must be an integer in [{MIN_DEGREE}, {MAX_DEGREE}], got {n!r}"
        )


def generate_msequence(n: int, taps: tuple[int, ...] | None = None) -> MSequence:
    """Generate one period of an m-sequence from an n-stage register.

    Parameters
    ----------
    n : int
        Register length, 2 <= n <= 24.
    taps : tuple of int, optional
        Feedback polynomial exponents (must contain n; the constant term
        is implied).  Defaults to the built-in table.

    The register is seeded with the impulse state and stepped until the
    state recurs; a first return before 2**n - 1 steps means the
    polynomial is not primitive and raises :class:`NonPrimitiveTapsError`
    carrying the measured period.

    Generation is a pure-Python register walk: microseconds for small n,
    a few seconds at n = 24 (16.7M steps).
    """
    _check_degree(n)
    if taps is None:
        taps = PRIMITIVE_TAPS[n]
    taps = tuple(sorted(set(int(t) for t in taps), reverse=True))
    if not taps or taps[0] != n:
        raise ValueError(f"taps must include the register length {n}, got {taps}")
    if taps[-1] < 1:
        raise ValueError(f"tap exponents must be >= 1 (constant term is implied), got {taps}")

    # Feedback recurrence b[j] = XOR of b[j - (n - e)] over exponents e < n
    # (including the implied e = 0).  The state packs the last n bits with
    # the newest at bit 0, so lag n - e sits at bit position n - e - 1.
    mask = 1 << (n - 1)  # e = 0
    for e in taps[1:]:
        mask |= 1 << (n - 1 - e)
    full = (1 << n) - 1

    seed = 1 << (n - 1)  # impulse: b[0] = 1, b[1..n-1] = 0
    target = (1 << n) - 1
    out = np.empty(target, dtype=np.uint8)
    state = seed
    period = 0
    for k in range(1 << n):
        if k < target:
            out[k] = (state >> (n - 1)) & 1
        fb = (state & mask).bit_count() & 1
        state = ((state << 1) | fb) & full
        if state == seed:
            period = k + 1
            break
    if period != target:
        raise NonPrimitiveTapsError(n, taps, period)
    bits = out
    chips = (1 - 2 * bits.astype(np.int16)).astype(np.int8)
    return MSequence(n=n, taps=taps, bits=bits, chips=chips)


def periodic_autocorrelation(chips: np.ndarray) -> np.ndarray:
    """Unnormalised periodic autocorrelation R[k] = sum_j c[j] c[(j+k) mod N].

    Computed with an FFT and rounded back to integers; for +/-1 chips the
    rounding is exact for every period this package produces (the FFT
    error stays far below 0.5 up to n = 24).
    """
    c = np.asarray(chips, dtype=np.float64)
    if c.ndim != 1 or c.size < 2:
        raise ValueError("chips must be a 1-D array of length >= 2")
    f = np.fft.rfft(c)
    r = np.fft.irfft(f * np.conj(f), c.size)
    return np.rint(r).astype(np.int64)


def reciprocal_taps(taps: tuple[int, ...]) -> tuple[int, ...]:
    """Exponents of the reciprocal polynomial x**n * f(1/x).

    The reciprocal of a primitive polynomial is primitive and generates
    the time-reversed sequence.
    """
    n = max(taps)
    exps = set(taps) | {0}
    rec = {n - e for e in exps}
    rec.discard(0)
    return tuple(sorted(rec, reverse=True))


def decimate(seq: MSequence, q: int) -> MSequence:
    """Decimation d[k] = b[(q k) mod N]; an m-sequence again when gcd(q, N) = 1."""
    N = seq.period
    if math.gcd(q, N) != 1:
        raise ValueError(f"decimation index {q} shares a factor with the period {N}")
    idx = (q * np.arange(N)) % N
    bits = seq.bits[idx]
    chips = (1 - 2 * bits.astype(np.int16)).astype(np.int8)
    return MSequence(n=seq.n, taps=None, bits=bits, chips=chips)


def _coset(q: int, n: int, N: int) -> frozenset[int]:
    return frozenset((q << i) % N for i in range(n))


def distinct_msequences(n: int, count: int, taps: tuple[int, ...] | None = None) -> list[MSequence]:
    """``count`` cyclically distinct m-sequences of the same degree.

    The first is the table (or caller-tapped) sequence; the rest are
    decimations by representatives of distinct cyclotomic cosets, which
    covers the reciprocal sequence and beyond.  Raises ValueError when
    fewer than ``count`` distinct sequences exist (there are
    euler_phi(2**n - 1) / n in total).
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count!r}")
    base = generate_msequence(n, taps)
    out = [base]
    if count == 1:
        return out
    N = base.period
    used = {_coset(1, n, N)}
    q = 3
    while len(out) < count and q < N:
        if math.gcd(q, N) == 1:
            coset = _coset(q, n, N)
            if coset not in used:
                used.add(coset)
                derived = decimate(base, q)
                if int(derived.chips.astype(np.int64).sum()) != -1:
                    raise AssertionError(
                        f"decimation by {q} lost the balance property (degree {n})"
                    )
                out.append(derived)
        q += 2
    if len(out) < count:
        raise ValueError(
            f"only {len(out)} cyclically distinct m-sequences of degree {n} exist; "
            f"{count} requested"
        )
    return out
