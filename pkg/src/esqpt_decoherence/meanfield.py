"""Coherent-state (condensed boson) limit of the two-level Hamiltonian.

With a condensate ``(s^+ + beta t^+) / sqrt(1 + beta**2)`` and t-fraction
``x = beta**2 / (1 + beta**2)`` the energy per boson is

    e(x) = a x - 4 (1 - alpha) x (1 - x),

where ``a`` is the coefficient of ``n_t``.  Everything below follows from
minimising this quadratic on ``[0, 1]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

ALPHA_C = 0.8
CRITICAL_ENERGY = 0.0


@dataclass(frozen=True)
class MeanFieldResult:
    x_star: float
    energy_density: float

    @property
    def nt_fraction(self) -> float:
        return self.x_star


def _check_alpha(alpha):
    if not (0.0 <= alpha <= 1.0):
        raise InvalidParameterError(f"alpha must lie in [0, 1], got {alpha}")


def energy_density(alpha: float, a_coeff: float, x):
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0) or np.any(x_arr > 1.0):
        raise InvalidParameterError(f"x must lie in [0, 1], got {x}")
    e = a_coeff * x_arr - 4.0 * (1.0 - alpha) * x_arr * (1.0 - x_arr)
    return float(e) if e.ndim == 0 else e


def minimize_energy(alpha: float, lam: float = 0.0) -> MeanFieldResult:
    """Global minimiser of ``e(x)`` with ``a = alpha + lam``."""
    _check_alpha(alpha)
    if lam < 0:
        raise InvalidParameterError(f"lambda must be >= 0, got {lam}")
    a = alpha + lam
    b = 1.0 - alpha
    if b == 0.0 or a >= 4.0 * b:
        x = 0.0
    else:
        x = min(max((4.0 * b - a) / (8.0 * b), 0.0), 1.0)
    return MeanFieldResult(x, energy_density(alpha, a, x))


def minimize_energy_grid(alpha: float, lam: float = 0.0, resolution: float = 1e-6) -> MeanFieldResult:
    """Brute-force grid minimisation, kept as a check on the closed form."""
    _check_alpha(alpha)
    xs = np.linspace(0.0, 1.0, int(round(1.0 / resolution)) + 1)
    es = energy_density(alpha, alpha + lam, xs)
    k = int(np.argmin(es))
    return MeanFieldResult(float(xs[k]), float(es[k]))


def critical_alpha() -> float:
    return ALPHA_C


def _check_broken(alpha):
    _check_alpha(alpha)
    if alpha >= ALPHA_C:
        raise InvalidParameterError(
            f"critical couplings exist only for alpha < {ALPHA_C}, got {alpha}")


def lambda_star(alpha: float) -> float:
    """Coupling at which H1 crosses its ground-state transition."""
    _check_broken(alpha)
    return 4.0 - 5.0 * alpha


def lambda_c(alpha: float) -> float:
    """Coupling that puts the mean quench energy at the ESQPT energy ``E_c = 0``."""
    _check_broken(alpha)
    return (4.0 - 5.0 * alpha) / 2.0


def lambda_c_from_quench(alpha: float) -> float:
    """``lambda`` solving ``e_min + lambda * x_star = E_c``, evaluated numerically."""
    _check_broken(alpha)
    mf = minimize_energy(alpha, 0.0)
    return (CRITICAL_ENERGY - mf.energy_density) / mf.x_star


def quench_energy_density(alpha: float, lam: float) -> float:
    mf = minimize_energy(alpha, 0.0)
    return mf.energy_density + lam * mf.x_star
