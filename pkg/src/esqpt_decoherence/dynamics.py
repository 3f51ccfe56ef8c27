"""Decoherence factor of a qubit coupled to the two-level boson environment.

The environment starts in the ground state ``g0`` of H0.  Switching on the
coupling gives

    |r(t)| = |<g0| exp(-i H1 t) |g0>| = |sum_k w_k exp(-i E_k t)|,

with ``E_k`` the eigenvalues of H1 and ``w_k = |<g0|phi_k>|**2``.  H1
conserves parity, so only the H1 block matching the parity of ``g0`` is
diagonalised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .eigen import GroundState, eig_tridiag, ground_state
from .errors import (AliasingError, InsufficientOscillationsError, InvalidParameterError,
                     NoPeakError)
from .model import ModelParams, hamiltonian_block

# |r| must drop below 1 - DEPARTURE_TOL before any maximum counts as the second one
DEPARTURE_TOL = 1e-6
# sampled maxima below this are round-off, not structure
NOISE_FLOOR = 1e-6
# weights below this never enter the aliasing bound
SUPPORT_CUTOFF = 1e-12
# weights below this are dropped when sampling; their total effect on |r| is < dim * 1e-16
TRIM_CUTOFF = 1e-16
DEFAULT_T_MAX = 50.0
DEFAULT_DT_CAP = 0.01
PEAK_TIME_RTOL = 1e-6
# interior maxima used for the frequency must stand out by this fraction of the series range
FREQUENCY_PROMINENCE = 0.1
# later revivals fragment into several sub-peaks; only the early ones are counted
FREQUENCY_WINDOW = 10.0

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class DecoherenceWeights:
    energies: np.ndarray
    weights: np.ndarray
    ground_energy_h0: float

    def support_span(self, cutoff: float = SUPPORT_CUTOFF) -> float:
        """Energy range spanned by weights above ``cutoff``."""
        e = self.energies[self.weights > cutoff]
        if len(e) == 0:
            return 0.0
        return float(e.max() - e.min())

    def mean_energy(self) -> float:
        return float(np.dot(self.weights, self.energies))

    def trimmed(self, cutoff: float = TRIM_CUTOFF) -> "DecoherenceWeights":
        keep = self.weights > cutoff
        return DecoherenceWeights(self.energies[keep], self.weights[keep], self.ground_energy_h0)


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class PeakResult:
    r_max: float
    t_peak: float
    degenerate: bool = False


def spectral_weights(g0: GroundState, params: ModelParams, method: str = "mrrr") -> DecoherenceWeights:
    h1 = hamiltonian_block(params, True, g0.parity)
    dec = eig_tridiag(h1, method)
    overlaps = dec.eigenvectors.T @ g0.vector
    return DecoherenceWeights(dec.eigenvalues, overlaps**2, g0.energy)


def decoherence_weights(params: ModelParams, method: str = "mrrr") -> DecoherenceWeights:
    """Ground state of H0 followed by its spectral weights in H1."""
    return spectral_weights(ground_state(params, method), params, method)


def _amplitude(energies, weights, times, chunk=4096):
    # shifting by the mean energy leaves |r| unchanged and keeps phases small
    shifted = energies - np.dot(weights, energies)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    out = np.empty(times.shape, dtype=float)
    flat_t = times.ravel()
    flat_o = out.ravel()
    for start in range(0, len(flat_t), chunk):
        tt = flat_t[start:start + chunk]
        phase = np.exp(-1j * np.outer(tt, shifted))
        flat_o[start:start + chunk] = np.abs(phase @ weights)
    return out


def r_abs(weights: DecoherenceWeights, t):
    """``|sum_k w_k exp(-i E_k t)|`` at a scalar time or an array of times."""
    vals = _amplitude(weights.energies, weights.weights, t)
    return float(vals[0]) if np.ndim(t) == 0 else vals.reshape(np.shape(t))


def max_stable_dt(weights: DecoherenceWeights) -> float:
    span = weights.support_span()
    return math.inf if span == 0.0 else math.pi / (4.0 * span)


def default_dt(weights: DecoherenceWeights) -> float:
    span = weights.support_span()
    if span == 0.0:
        return DEFAULT_DT_CAP
    return min(DEFAULT_DT_CAP, math.pi / (8.0 * span))


def _time_grid(t_max, dt):
    n = int(math.floor(t_max / dt + 1e-9)) + 1
    return np.arange(n) * dt


def sample_series(weights: DecoherenceWeights, t_max: float = DEFAULT_T_MAX,
                  dt: float | None = None) -> TimeSeries:
    """Uniform samples of ``|r(t)|`` on ``[0, t_max]``.

    ``dt`` defaults to ``min(0.01, pi / (8 * span))``; anything coarser than
    ``pi / (4 * span)`` is rejected, where ``span`` is the energy range of
    the non-negligible weights.
    """
    if not (t_max > 0):
        raise InvalidParameterError(f"t_max must be > 0, got {t_max}")
    if dt is None:
        dt = default_dt(weights)
    if not (dt > 0):
        raise InvalidParameterError(f"dt must be > 0, got {dt}")
    bound = max_stable_dt(weights)
    if dt > bound:
        raise AliasingError(
            f"dt={dt:g} under-resolves the spectrum (span {weights.support_span():g}); "
            f"need dt <= {bound:.6g}")
    times = _time_grid(t_max, dt)
    w = weights.trimmed()
    return TimeSeries(times, _amplitude(w.energies, w.weights, times))


def golden_section_max(f, a: float, b: float, xtol: float):
    """Maximise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _sampled_maxima(values, start):
    v = values
    j = np.arange(max(start, 1), len(v) - 1)
    is_max = (v[j] > v[j - 1]) & (v[j] >= v[j + 1]) & (v[j] > NOISE_FLOOR)
    return j[is_max]


def _envelope_peak(values, start):
    """Index of the first sampled maximum not exceeded by the next one.

    Returns ``(index, confirmed)``; ``confirmed`` is False when the maxima
    keep growing up to the end of the window and the last one is returned.
    """
    idx = _sampled_maxima(values, start)
    if len(idx) == 0:
        return None, False
    m = values[idx]
    drop = np.nonzero(m[:-1] >= m[1:])[0]
    if len(drop):
        return int(idx[drop[0]]), True
    return int(idx[-1]), False


def _refine(weights, times, j):
    w = weights.trimmed()
    f = lambda t: float(_amplitude(w.energies, w.weights, t)[0])
    lo, hi = times[j - 1], times[j + 1]
    t_ref, v_ref = golden_section_max(f, lo, hi, PEAK_TIME_RTOL * times[j])
    return t_ref, v_ref


def find_r_max(series: TimeSeries, weights: DecoherenceWeights) -> PeakResult:
    """Value of ``|r(t)|`` at its second maximum (the first being ``t = 0``).

    The second maximum is the top of the first revival: after ``|r|`` leaves
    ``1``, take the sampled local maxima above the round-off floor in time
    order and return the first one that the following maximum does not
    exceed.  Fast wiggles riding on a growing revival are skipped this way.
    The sampled peak is then sharpened by golden-section search on ``r_abs``.
    """
    v = np.asarray(series.values)
    t = np.asarray(series.times)
    if len(v) < 3:
        raise InvalidParameterError("need at least 3 samples to locate a maximum")
    below = np.nonzero(v < 1.0 - DEPARTURE_TOL)[0]
    if len(below) == 0:
        return PeakResult(1.0, math.nan, True)
    j, _ = _envelope_peak(v, int(below[0]))
    if j is None:
        raise NoPeakError(f"|r(t)| has no interior maximum on [0, {t[-1]:g}]")
    t_ref, v_ref = _refine(weights, t, j)
    if v_ref < v[j]:
        t_ref, v_ref = float(t[j]), float(v[j])
    return PeakResult(float(v_ref), float(t_ref), False)


def second_maximum(weights: DecoherenceWeights, t_max: float = DEFAULT_T_MAX,
                   dt: float | None = None, window: float = 2.0) -> PeakResult:
    """``find_r_max`` without sampling the whole window up front.

    Samples ``[0, t_max]`` in slabs of length ``window`` and stops once the
    revival peak is confirmed by a lower maximum after it.  The result equals
    ``find_r_max(sample_series(weights, t_max, dt), weights)``.
    """
    if dt is None:
        dt = default_dt(weights)
    full = sample_series(weights, min(window, t_max), dt)
    times_all = _time_grid(t_max, dt)
    w = weights.trimmed()
    values = full.values
    while True:
        n = len(values)
        below = np.nonzero(values < 1.0 - DEPARTURE_TOL)[0]
        if len(below):
            j, confirmed = _envelope_peak(values, int(below[0]))
            # the last sample cannot be a maximum yet; need one more slab
            if confirmed:
                return find_r_max(TimeSeries(times_all[:n], values), weights)
        if n >= len(times_all):
            return find_r_max(TimeSeries(times_all, values), weights)
        step = max(int(round(window / dt)), 3)
        nxt = times_all[n:n + step]
        values = np.concatenate([values, _amplitude(w.energies, w.weights, nxt)])


def quench_energy(params: ModelParams, g0: GroundState | None = None) -> float:
    """Mean post-quench energy ``<g0|H1|g0> = E0 + lambda <g0|n_t|g0>``."""
    if g0 is None:
        g0 = ground_state(params)
    return g0.energy + params.lam * g0.expectation_n_t()


def _parabolic_vertex(t, v, j):
    y0, y1, y2 = v[j - 1], v[j], v[j + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return t[j]
    return t[j] + 0.5 * (y0 - y2) / denom * (t[j + 1] - t[j])


def oscillation_maxima(series: TimeSeries, weights: DecoherenceWeights | None = None) -> np.ndarray:
    """Refined times of the prominent interior maxima of a series."""
    v = np.asarray(series.values)
    t = np.asarray(series.times)
    span = float(v.max() - v.min()) if len(v) else 0.0
    if span <= DEPARTURE_TOL:
        return np.empty(0)
    peaks, _ = find_peaks(v, prominence=FREQUENCY_PROMINENCE * span)
    peaks = peaks[(peaks > 0) & (peaks < len(v) - 1)]
    if weights is not None:
        return np.array([_refine(weights, t, j)[0] for j in peaks])
    return np.array([_parabolic_vertex(t, v, j) for j in peaks])


def dominant_frequency(series: TimeSeries, weights: DecoherenceWeights | None = None,
                       min_maxima: int = 5, window: float | None = FREQUENCY_WINDOW) -> float:
    """Ordinary frequency (cycles per unit time) of the revival oscillation.

    Reciprocal of the mean spacing between the prominent interior maxima
    with ``t <= window`` (``window=None`` uses the whole series).
    """
    if window is not None:
        keep = np.asarray(series.times) <= window
        series = TimeSeries(np.asarray(series.times)[keep], np.asarray(series.values)[keep])
    tp = oscillation_maxima(series, weights)
    if len(tp) < min_maxima:
        raise InsufficientOscillationsError(
            f"found {len(tp)} interior maxima, need at least {min_maxima}")
    return (len(tp) - 1) / (tp[-1] - tp[0])
