"""Interference from orthogonality errors: ensembles and Monte Carlo estimators.

Signals are rows of +/-1 chips.  Within a cell the rows are Walsh
functions scrambled by the cell's m-sequence (orthogonal at zero offset);
across cells only the scrambling sequences differ, so residual
correlation remains at any offset.  Synchronisation errors are modelled
per trial as a Gaussian timing offset (chips) and a Gaussian carrier
phase offset (radians):

    K = cos(phase) * R(lag + delta) / L,

where R is the cyclic cross-correlation and fractional-chip offsets are
resolved by linear interpolation between adjacent integer lags.  The
estimators report

    P = sum_sources w_s / T * sqrt(mean K**2),

the per-source root-mean-square correlation scaled by the symbol
duration T, with a delta-method standard error.

Reproducibility: each trial draws from its own child of
numpy.random.SeedSequence(seed), so estimates are independent of trial
chunking and identical across runs; sweeps that reuse one seed share the
same error draws (common random numbers), which keeps monotone ladders
monotone at finite trial counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mchan.msequence import MSequence

__all__ = [
    "CellLayout",
    "InterferenceEstimate",
    "InterferingCell",
    "SignalEnsemble",
    "SurfacePoint",
    "SurfaceResult",
    "SyncErrorModel",
    "cross_correlation",
    "degree_interference_sweep",
    "inter_cell_interference",
    "intra_cell_interference",
    "sinr_surface",
]


@dataclass(frozen=True)
class SyncErrorModel:
    """Standard deviations of the synchronisation errors.

    ``timing_std_chips`` is the timing jitter in chip units,
    ``phase_std_rad`` the carrier phase jitter in radians; both Gaussian,
    zero mean, drawn independently per trial and per interfering signal.
    """

    timing_std_chips: float = 0.0
    phase_std_rad: float = 0.0

    def __post_init__(self) -> None:
        for name in ("timing_std_chips", "phase_std_rad"):
            v = getattr(self, name)
            if not (v >= 0.0 and math.isfinite(v)):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")

    @property
    def is_zero(self) -> bool:
        return self.timing_std_chips == 0.0 and self.phase_std_rad == 0.0


def _parity(v: np.ndarray) -> np.ndarray:
    """Bitwise parity of non-negative integers (vectorised)."""
    v = v.astype(np.uint32)
    v ^= v >> np.uint32(16)
    v ^= v >> np.uint32(8)
    v ^= v >> np.uint32(4)
    v ^= v >> np.uint32(2)
    v ^= v >> np.uint32(1)
    return (v & np.uint32(1)).astype(np.int8)


class SignalEnsemble:
    """A cell's set of unit-amplitude +/-1 signals on a common chip grid."""

    def __init__(self, signals: np.ndarray, chip_duration: float = 1.0, cell_id: int = 0,
                 kind: str = "custom"):
        signals = np.asarray(signals)
        if signals.ndim != 2 or signals.shape[0] < 1 or signals.shape[1] < 2:
            raise ValueError("signals must be a 2-D array, one row per signal")
        if not np.isin(signals, (-1, 1)).all():
            raise ValueError("signal chips must be +/-1")
        if not (chip_duration > 0.0 and math.isfinite(chip_duration)):
            raise ValueError(f"chip duration must be finite and > 0, got {chip_duration!r}")
        self.signals = signals.astype(np.int8)
        self.chip_duration = float(chip_duration)
        self.cell_id = int(cell_id)
        self.kind = kind

    @property
    def n_signals(self) -> int:
        return self.signals.shape[0]

    @property
    def n_chips(self) -> int:
        return self.signals.shape[1]

    @property
    def symbol_duration(self) -> float:
        return self.n_chips * self.chip_duration

    @classmethod
    def walsh(cls, scrambler: MSequence, rows: int | list[int] | tuple[int, ...],
              chip_duration: float = 1.0, cell_id: int = 0) -> "SignalEnsemble":
        """Walsh rows scrambled by the cell's m-sequence.

        The Walsh order is 2**n for the scrambler degree n; the
        period-(2**n - 1) scrambler is extended cyclically by one chip to
        cover the last position.  Scrambling by a common +/-1 sequence
        preserves the exact zero-offset orthogonality of the rows.
        """
        L = 1 << scrambler.n
        if isinstance(rows, int):
            if rows < 1 or rows > L:
                raise ValueError(f"row count must be in [1, {L}], got {rows}")
            row_ids = np.arange(rows)
        else:
            row_ids = np.asarray(rows, dtype=np.int64)
            if row_ids.size < 1 or row_ids.min() < 0 or row_ids.max() >= L:
                raise ValueError(f"row indices must lie in [0, {L - 1}]")
            if np.unique(row_ids).size != row_ids.size:
                raise ValueError("row indices must be distinct")
        k = np.arange(L, dtype=np.int64)
        walsh = 1 - 2 * _parity(row_ids[:, None] & k[None, :]).astype(np.int16)
        scramble = np.concatenate([scrambler.chips, scrambler.chips[:1]]).astype(np.int16)
        signals = (walsh * scramble[None, :]).astype(np.int8)
        return cls(signals, chip_duration, cell_id, kind="walsh")

    @classmethod
    def cyclic_shifts(cls, sequence: MSequence, shifts: int | list[int] | tuple[int, ...],
                      chip_duration: float = 1.0, cell_id: int = 0) -> "SignalEnsemble":
        """Cyclic shifts of one m-sequence (near-orthogonal: R = -1 off-peak).

        An integer ``shifts`` selects that many shifts spread evenly over
        the period; an explicit list selects exact shift values.
        """
        N = sequence.period
        if isinstance(shifts, int):
            if shifts < 1 or shifts > N:
                raise ValueError(f"shift count must be in [1, {N}], got {shifts}")
            shift_vals = [(i * N) // shifts for i in range(shifts)]
        else:
            shift_vals = [int(s) % N for s in shifts]
            if len(set(shift_vals)) != len(shift_vals):
                raise ValueError("shifts must be distinct modulo the period")
        signals = np.stack([np.roll(sequence.chips, s) for s in shift_vals])
        return cls(signals, chip_duration, cell_id, kind="cyclic_shifts")

    def zero_offset_gram(self) -> np.ndarray:
        """Exact integer correlation matrix at zero offset (for checks)."""
        s = self.signals.astype(np.int64)
        return s @ s.T


@dataclass(frozen=True)
class InterferingCell:
    """An interfering cell as seen by the reference receiver."""

    ensemble: SignalEnsemble
    weight: float = 1.0  # received amplitude relative to the reference cell
    path_loss_index: float | None = None

    def __post_init__(self) -> None:
        if not (self.weight >= 0.0 and math.isfinite(self.weight)):
            raise ValueError(f"weight must be finite and >= 0, got {self.weight!r}")


@dataclass(frozen=True)
class CellLayout:
    """Reference cell plus interfering cells on a common chip grid."""

    reference: SignalEnsemble
    interferers: tuple[InterferingCell, ...]

    def __post_init__(self) -> None:
        for cell in self.interferers:
            e = cell.ensemble
            if e.n_chips != self.reference.n_chips:
                raise ValueError("all cells must share the chip count of the reference")
            if e.chip_duration != self.reference.chip_duration:
                raise ValueError("all cells must share the chip duration of the reference")

    @property
    def mean_path_loss_index(self) -> float | None:
        """Amplitude-weighted mean of the given path-loss indices."""
        pairs = [(c.path_loss_index, c.weight) for c in self.interferers
                 if c.path_loss_index is not None]
        if not pairs:
            return None
        wsum = sum(w for _, w in pairs)
        if wsum == 0.0:
            return sum(a for a, _ in pairs) / len(pairs)
        return sum(a * w for a, w in pairs) / wsum


@dataclass(frozen=True)
class InterferenceEstimate:
    power: float
    std_error: float
    trials: int


def cross_correlation(ref_chips: np.ndarray, sig_chips: np.ndarray,
                      timing_offset_chips: float = 0.0,
                      phase_offset_rad: float = 0.0) -> float:
    """Normalised correlation of ref against a shifted, rotated interferer.

    K = cos(phase) / L * sum_k ref[k] * sig_shifted[k], where the
    interferer is cyclically delayed by ``timing_offset_chips`` (linear
    interpolation between the two adjacent integer lags).  This is the
    reference implementation the fast estimator paths must agree with.
    """
    ref = np.asarray(ref_chips, dtype=np.float64)
    sig = np.asarray(sig_chips, dtype=np.float64)
    if ref.shape != sig.shape or ref.ndim != 1:
        raise ValueError("ref and sig must be 1-D arrays of equal length")
    L = ref.size
    d = math.floor(timing_offset_chips)
    f = timing_offset_chips - d
    shifted = (1.0 - f) * np.roll(sig, -d) + f * np.roll(sig, -(d + 1))
    return math.cos(phase_offset_rad) * float(np.dot(ref, shifted)) / L


def _draw_errors(seed: int, trials: int, widths: list[int]):
    """Per-trial child-seeded draws: (timing z, phase y, lag u) per block.

    ``widths`` gives the number of interfering signals per block (one
    block per cell); each trial consumes its draws block by block, so a
    given (seed, layout) always sees the same numbers regardless of how
    the estimate is assembled.
    """
    total = sum(widths)
    z = np.empty((trials, total))
    y = np.empty((trials, total))
    u = np.empty((trials, total))
    children = np.random.SeedSequence(seed).spawn(trials)
    for t, child in enumerate(children):
        rng = np.random.default_rng(child)
        pos = 0
        for w in widths:
            z[t, pos:pos + w] = rng.standard_normal(w)
            y[t, pos:pos + w] = rng.standard_normal(w)
            u[t, pos:pos + w] = rng.random(w)
            pos += w
    return z, y, u


def _integer_lag_corr(ref: np.ndarray, sig: np.ndarray, lags: np.ndarray) -> dict[int, float]:
    """Exact integer cyclic correlations R(d) = sum_k ref[k] sig[k+d] for given lags."""
    ref64 = ref.astype(np.int64)
    out = {}
    for d in np.unique(lags):
        out[int(d)] = float(np.dot(ref64, np.roll(sig, -int(d)).astype(np.int64)))
    return out


def _full_lag_corr(ref: np.ndarray, sig: np.ndarray) -> np.ndarray:
    """All-lag cyclic correlation via FFT: out[d] = sum_k ref[k] sig[(k+d) % L]."""
    fr = np.fft.rfft(ref.astype(np.float64))
    fs = np.fft.rfft(sig.astype(np.float64))
    return np.fft.irfft(np.conj(fr) * fs, ref.size)


def _check_trials(trials: int) -> None:
    if not isinstance(trials, int) or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials!r}")


def _pooled_estimate(ksq_blocks: list[np.ndarray], weights: list[float], T: float,
                     trials: int) -> InterferenceEstimate:
    """Combine per-source squared correlations into the summed power."""
    contributions = []
    variances = []
    for ksq, w in zip(ksq_blocks, weights):
        flat = ksq.ravel()
        mean = math.fsum(flat.tolist()) / flat.size
        if mean > 0.0:
            rms = math.sqrt(mean)
            var_mean = float(np.var(flat, ddof=1)) / flat.size if flat.size > 1 else 0.0
            se_rms = math.sqrt(var_mean) / (2.0 * rms)
            contributions.append(w * rms / T)
            variances.append((w * se_rms / T) ** 2)
        else:
            contributions.append(0.0)
            variances.append(0.0)
    return InterferenceEstimate(
        power=math.fsum(contributions),
        std_error=math.sqrt(math.fsum(variances)),
        trials=trials,
    )


def _ksq_for_block(ref: np.ndarray, signals: np.ndarray, z: np.ndarray, y: np.ndarray,
                   u: np.ndarray, errors: SyncErrorModel, random_lag: bool) -> np.ndarray:
    """Squared normalised correlations, one per (trial, signal).

    Timing offsets are split into integer lag plus fractional chip; the
    correlation at fractional offsets is the linear interpolation of the
    exact integer-lag correlation function, evaluated here from
    precomputed integer-lag values (identical to the reference
    implementation, without rebuilding shifted signals per trial).
    """
    L = ref.size
    trials, count = z.shape
    offs = errors.timing_std_chips * z
    if random_lag:
        offs = offs + np.floor(u * L)
    d = np.floor(offs)
    f = offs - d
    d_int = d.astype(np.int64) % L
    d_next = (d_int + 1) % L
    cos_term = np.cos(errors.phase_std_rad * y) if errors.phase_std_rad != 0.0 else 1.0

    ksq = np.empty((trials, count))
    for j in range(count):
        sig = signals[j]
        if random_lag:
            corr = _full_lag_corr(ref, sig)
            c0 = corr[d_int[:, j]]
            c1 = corr[d_next[:, j]]
        else:
            table = _integer_lag_corr(ref, sig, np.concatenate([d_int[:, j], d_next[:, j]]))
            c0 = np.array([table[int(dd)] for dd in d_int[:, j]])
            c1 = np.array([table[int(dd)] for dd in d_next[:, j]])
        k = ((1.0 - f[:, j]) * c0 + f[:, j] * c1) / L
        if errors.phase_std_rad != 0.0:
            k = cos_term[:, j] * k
        ksq[:, j] = k * k
    return ksq


def intra_cell_interference(ensemble: SignalEnsemble, errors: SyncErrorModel,
                            trials: int, seed: int, ref_index: int = 0) -> InterferenceEstimate:
    """Interference power from the other signals of the receiver's own cell.

    The cell is symbol-synchronous: the only lag is the timing jitter
    itself.  With zero error widths the correlations are evaluated in
    exact integer arithmetic, so an orthogonal ensemble yields exactly
    0.0 rather than FFT dust.
    """
    _check_trials(trials)
    if not (0 <= ref_index < ensemble.n_signals):
        raise ValueError(f"ref_index {ref_index} out of range")
    others = [j for j in range(ensemble.n_signals) if j != ref_index]
    T = ensemble.symbol_duration
    if not others:
        return InterferenceEstimate(power=0.0, std_error=0.0, trials=trials)
    ref = ensemble.signals[ref_index]
    signals = ensemble.signals[others]

    if errors.is_zero:
        contributions = []
        for j in range(signals.shape[0]):
            r0 = float(np.dot(ref.astype(np.int64), signals[j].astype(np.int64)))
            contributions.append(abs(r0) / ensemble.n_chips / T)
        return InterferenceEstimate(power=math.fsum(contributions), std_error=0.0,
                                    trials=trials)

    z, y, u = _draw_errors(seed, trials, [len(others)])
    ksq = _ksq_for_block(ref, signals, z, y, u, errors, random_lag=False)
    blocks = [ksq[:, j:j + 1] for j in range(len(others))]
    return _pooled_estimate(blocks, [1.0] * len(others), T, trials)


def inter_cell_interference(layout: CellLayout, errors: SyncErrorModel,
                            trials: int, seed: int, ref_index: int = 0) -> InterferenceEstimate:
    """Interference power from other cells at the reference receiver.

    Cells are mutually unsynchronised: each trial draws a uniform integer
    symbol lag per interfering signal on top of the timing jitter.  Each
    cell contributes weight / T * sqrt(mean K**2) pooled over its signals.
    """
    _check_trials(trials)
    ref_ens = layout.reference
    if not (0 <= ref_index < ref_ens.n_signals):
        raise ValueError(f"ref_index {ref_index} out of range")
    if not layout.interferers:
        return InterferenceEstimate(power=0.0, std_error=0.0, trials=trials)
    ref = ref_ens.signals[ref_index]
    T = ref_ens.symbol_duration

    widths = [cell.ensemble.n_signals for cell in layout.interferers]
    z, y, u = _draw_errors(seed, trials, widths)

    blocks = []
    weights = []
    pos = 0
    for cell, w in zip(layout.interferers, widths):
        zc = z[:, pos:pos + w]
        yc = y[:, pos:pos + w]
        uc = u[:, pos:pos + w]
        pos += w
        ksq = _ksq_for_block(ref, cell.ensemble.signals, zc, yc, uc, errors,
                             random_lag=True)
        blocks.append(ksq)
        weights.append(cell.weight)
    return _pooled_estimate(blocks, weights, T, trials)


@dataclass(frozen=True)
class SurfacePoint:
    timing_std_chips: float
    phase_std_rad: float
    sinr_db: float


@dataclass(frozen=True)
class SurfaceResult:
    points: tuple[SurfacePoint, ...]
    noise_power_db: float
    trials: int
    seed: int

    def sinr_grid(self) -> np.ndarray:
        """Points reshaped as (timing, phase) is not tracked; flat array of SINR dB."""
        return np.array([p.sinr_db for p in self.points])


def sinr_surface(timing_grid, phase_grid, *, ensemble: SignalEnsemble | None = None,
                 layout: CellLayout | None = None, noise_power_db: float = -113.101,
                 trials: int = 1000, seed: int = 0, ref_index: int = 0) -> SurfaceResult:
    """SINR (dB) over a grid of error widths, unit received signal power.

    SINR = 1 / (P_intra + P_inter + P_noise) with the noise power given
    in dB relative to the unit signal.  ``ensemble`` enables the
    intra-cell term, ``layout`` the inter-cell term (its reference
    ensemble is used for the intra term when ``ensemble`` is omitted);
    all grid points share one seed, so the surface varies only through
    the error widths.
    """
    if ensemble is None and layout is None:
        raise ValueError("need an ensemble, a layout, or both")
    intra_ens = ensemble if ensemble is not None else layout.reference
    p_noise = 10.0 ** (noise_power_db / 10.0)
    points = []
    for et in timing_grid:
        for ep in phase_grid:
            errors = SyncErrorModel(timing_std_chips=float(et), phase_std_rad=float(ep))
            p_total = p_noise
            p_total += intra_cell_interference(intra_ens, errors, trials, seed,
                                               ref_index).power
            if layout is not None:
                p_total += inter_cell_interference(layout, errors, trials, seed,
                                                   ref_index).power
            points.append(SurfacePoint(
                timing_std_chips=float(et),
                phase_std_rad=float(ep),
                sinr_db=-10.0 * math.log10(p_total),
            ))
    return SurfaceResult(points=tuple(points), noise_power_db=noise_power_db,
                         trials=trials, seed=seed)


def degree_interference_sweep(degrees, trials: int, seed: int, signals_per_cell: int = 4,
                              errors: SyncErrorModel | None = None,
                              chip_duration: float = 1.0) -> list[tuple[int, float, float]]:
    """Inter-cell interference versus register length (one interfering cell).

    For each degree n the reference cell uses the table m-sequence and
    the interferer an inequivalent decimation; both cells run
    ``signals_per_cell`` cyclic shifts.  Longer sequences dilute the
    random-lag correlations, so the power falls with n.  Returns rows
    (n, power, std_error); all degrees share the seed (common random
    numbers).
    """
    from mchan.msequence import distinct_msequences

    if errors is None:
        errors = SyncErrorModel()
    rows = []
    for n in degrees:
        own, other = distinct_msequences(n, 2)
        ref_ens = SignalEnsemble.cyclic_shifts(own, signals_per_cell, chip_duration,
                                               cell_id=0)
        int_ens = SignalEnsemble.cyclic_shifts(other, signals_per_cell, chip_duration,
                                               cell_id=1)
        layout = CellLayout(reference=ref_ens,
                            interferers=(InterferingCell(ensemble=int_ens, weight=1.0),))
        est = inter_cell_interference(layout, errors, trials, seed)
        rows.append((int(n), est.power, est.std_error))
    return rows
