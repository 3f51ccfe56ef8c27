"""Coupling scans of r_max, dip location and finite-size power-law fits."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import meanfield
from .dynamics import DEFAULT_T_MAX, PeakResult, second_maximum, spectral_weights
from .eigen import GroundState, ground_state
from .errors import BracketingError, ESQPTError, InvalidParameterError
from .model import ModelParams

DEFAULT_SIZES = (250, 500, 1000, 2000, 4000)
DIP_XTOL = 1e-3
BRACKET_FRACTION = 0.25

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class RmaxCurve:
    alpha: float
    n_bosons: int
    lambdas: np.ndarray
    peaks: list  # PeakResult, or None where the evaluation failed
    errors: list = field(default_factory=list)  # (index, message)

    @property
    def r_max_values(self) -> np.ndarray:
        return np.array([p.r_max if p is not None else math.nan for p in self.peaks])

    def argmin(self) -> int:
        return int(np.nanargmin(self.r_max_values))


@dataclass(frozen=True)
class Dip:
    lam: float
    peak: PeakResult
    evaluations: int


@dataclass(frozen=True)
class PowerLawFit:
    amplitude_A: float
    exponent_gamma: float
    rms_log_residual: float
    points: tuple

    def predict(self, n):
        return self.amplitude_A * np.asarray(n, dtype=float) ** (-self.exponent_gamma)


@dataclass(frozen=True)
class ScalingPoint:
    n_bosons: int
    lambda_dip: float
    r_max_dip: float
    lambda_c: float
    r_max_lambda_c: float


def rmax_at(alpha: float, n_bosons: int, lam: float, g0: GroundState | None = None,
            t_max: float = DEFAULT_T_MAX, dt: float | None = None) -> PeakResult:
    params = ModelParams(alpha, lam, n_bosons)
    if g0 is None:
        g0 = ground_state(params)
    return second_maximum(spectral_weights(g0, params), t_max=t_max, dt=dt)


def _scan_point(args):
    alpha, n, lam, t_max, dt = args
    try:
        return rmax_at(alpha, n, lam, t_max=t_max, dt=dt), None
    except ESQPTError as exc:
        return None, str(exc)


def rmax_scan(alpha: float, n_bosons: int, lambda_grid, t_max: float = DEFAULT_T_MAX,
              dt: float | None = None, workers: int = 1) -> RmaxCurve:
    """r_max at each coupling of an ascending grid.

    Failures at individual grid points are recorded in ``errors`` and leave
    ``None`` in ``peaks``; the scan itself carries on.
    """
    lams = np.asarray(lambda_grid, dtype=float)
    if lams.size == 0:
        raise InvalidParameterError("lambda grid is empty")
    if np.any(np.diff(lams) <= 0):
        raise InvalidParameterError("lambda grid must be strictly ascending")
    if np.any(lams < 0):
        raise InvalidParameterError("lambda grid must be non-negative")
    g0 = ground_state(ModelParams(alpha, 0.0, n_bosons))

    peaks, errors = [], []
    if workers > 1:
        jobs = [(alpha, n_bosons, float(l), t_max, dt) for l in lams]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_point, jobs))
    else:
        results = []
        for lam in lams:
            try:
                results.append((rmax_at(alpha, n_bosons, float(lam), g0, t_max, dt), None))
            except ESQPTError as exc:
                results.append((None, str(exc)))
    for i, (peak, err) in enumerate(results):
        peaks.append(peak)
        if err is not None:
            errors.append((i, err))
    return RmaxCurve(alpha, n_bosons, lams, peaks, errors)


def find_dip(alpha: float, n_bosons: int, bracket, xtol: float = DIP_XTOL,
             t_max: float = DEFAULT_T_MAX, dt: float | None = None) -> Dip:
    """Golden-section minimisation of r_max over the coupling."""
    lo, hi = map(float, bracket)
    if not (0 <= lo < hi):
        raise InvalidParameterError(f"invalid bracket {bracket}")
    g0 = ground_state(ModelParams(alpha, 0.0, n_bosons))
    cache = {}

    def f(lam):
        if lam not in cache:
            cache[lam] = rmax_at(alpha, n_bosons, lam, g0, t_max, dt)
        return cache[lam].r_max

    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    best = c if fc <= fd else d
    if best - lo <= xtol or hi - best <= xtol:
        raise BracketingError(
            f"r_max has no interior minimum in [{lo:g}, {hi:g}] (search ran to {best:.6g})")
    return Dip(best, cache[best], len(cache))


def locate_dip(alpha: float, n_bosons: int, bracket, xtol: float = DIP_XTOL, **kwargs) -> float:
    return find_dip(alpha, n_bosons, bracket, xtol, **kwargs).lam


def meanfield_bracket(alpha: float, fraction: float = BRACKET_FRACTION) -> tuple:
    lc = meanfield.lambda_c(alpha)
    return (lc * (1 - fraction), lc * (1 + fraction))


def power_law_fit(points) -> PowerLawFit:
    """Least squares of ``log r`` against ``log N``: ``r = A * N**(-gamma)``."""
    pts = [(float(n), float(r)) for n, r in points]
    if len(pts) < 3:
        raise InvalidParameterError(f"power-law fit needs at least 3 points, got {len(pts)}")
    n = np.array([p[0] for p in pts])
    r = np.array([p[1] for p in pts])
    if np.any(n <= 0) or np.any(r <= 0) or not np.all(np.isfinite(r)):
        raise InvalidParameterError("power-law fit needs strictly positive, finite values")
    x, y = np.log(n), np.log(r)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return PowerLawFit(float(math.exp(intercept)), float(-slope),
                       float(math.sqrt(np.mean(resid**2))), tuple(pts))


def finite_size_scaling(alpha: float, sizes=DEFAULT_SIZES, bracket=None,
                        t_max: float = DEFAULT_T_MAX, dt: float | None = None):
    """Dip and mean-field-coupling r_max for each N, plus a power-law fit of the dips.

    Returns ``(points, fit_dip, fit_lambda_c)``.
    """
    sizes = [int(s) for s in sizes]
    if bracket is None:
        bracket = meanfield_bracket(alpha)
    lc = meanfield.lambda_c(alpha)
    points = []
    for n in sizes:
        dip = find_dip(alpha, n, bracket, t_max=t_max, dt=dt)
        at_lc = rmax_at(alpha, n, lc, t_max=t_max, dt=dt)
        points.append(ScalingPoint(n, dip.lam, dip.peak.r_max, lc, at_lc.r_max))
    fit_dip = power_law_fit([(p.n_bosons, p.r_max_dip) for p in points])
    fit_lc = power_law_fit([(p.n_bosons, p.r_max_lambda_c) for p in points])
    return points, fit_dip, fit_lc
