"""Brute-force dense constructions used to validate the tridiagonal blocks.

Nothing here is on the production path.  The boson oracle builds ``Q_t``
from explicit ladder matrices on the two-mode Fock space; the spin oracle
builds the Lipkin chain on the full ``2**N`` space and keeps the maximal
total-spin multiplet.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import CapacityError, InvalidParameterError
from .model import ModelParams, level_coefficient

MAX_BOSON_ORACLE_N = 12
MAX_SPIN_ORACLE_N = 8


@dataclass(frozen=True)
class DenseOracleResult:
    eigenvalues: np.ndarray
    dimension: int


def annihilation(cutoff: int) -> np.ndarray:
    """Single-mode ``a`` on occupations ``0..cutoff``."""
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1)


def dense_boson_matrix(params: ModelParams, use_coupling: bool) -> np.ndarray:
    """(N+1)x(N+1) Hamiltonian in the ``|n_t>`` basis, ascending ``n_t``."""
    n = params.n_bosons
    if n > MAX_BOSON_ORACLE_N:
        raise CapacityError(f"dense boson oracle limited to N <= {MAX_BOSON_ORACLE_N}, got {n}")
    a = annihilation(n)
    eye = np.eye(n + 1)
    # two-mode space |n_s> (x) |n_t>
    s = np.kron(a, eye)
    t = np.kron(eye, a)
    q = s.T @ t + t.T @ s
    n_t = t.T @ t
    h = level_coefficient(params, use_coupling) * n_t - (1.0 - params.alpha) / n * (q @ q)
    # N-boson sector: n_s = N - n_t; flat index n_s*(n+1) + n_t
    sector = [(n - k) * (n + 1) + k for k in range(n + 1)]
    return h[np.ix_(sector, sector)]


def dense_boson_oracle(params: ModelParams, use_coupling: bool) -> DenseOracleResult:
    h = dense_boson_matrix(params, use_coupling)
    return DenseOracleResult(np.linalg.eigvalsh(h), h.shape[0])


def _site_operator(op, site, n_sites):
    eye = np.eye(2)
    return reduce(np.kron, [op if k == site else eye for k in range(n_sites)])


def dense_spin_oracle(n_bosons: int, alpha: float) -> DenseOracleResult:
    """Maximal-spin spectrum of ``alpha (N/2 + sum S^z) - 4(1-alpha)/N sum_{i,j} S^x_i S^x_j``.

    The double sum runs over all ordered pairs including ``i == j``, so the
    interaction is ``(S^x_tot)**2``; this is the convention that maps exactly
    onto the boson Hamiltonian with ``Q_t = 2 S^x_tot``.
    """
    n = n_bosons
    if n < 1:
        raise InvalidParameterError(f"n_bosons must be >= 1, got {n}")
    if n > MAX_SPIN_ORACLE_N:
        raise CapacityError(f"dense spin oracle limited to N <= {MAX_SPIN_ORACLE_N}, got {n}")
    sx = np.array([[0.0, 0.5], [0.5, 0.0]])
    sy = np.array([[0.0, -0.5j], [0.5j, 0.0]])
    sz = np.array([[0.5, 0.0], [0.0, -0.5]])
    tot = [sum(_site_operator(op, i, n) for i in range(n)) for op in (sx, sy, sz)]
    Sx, Sy, Sz = tot
    h = alpha * (n / 2 * np.eye(2**n) + Sz) - 4.0 * (1.0 - alpha) / n * (Sx @ Sx)

    casimir = (Sx @ Sx + Sy @ Sy + Sz @ Sz).real
    s_max = n / 2
    c_vals, c_vecs = np.linalg.eigh(casimir)
    keep = np.abs(c_vals - s_max * (s_max + 1)) < 1e-8
    basis = c_vecs[:, keep]
    if basis.shape[1] != n + 1:
        raise ArithmeticError(f"expected {n + 1} maximal-spin states, found {basis.shape[1]}")
    h_sector = basis.T @ h @ basis
    return DenseOracleResult(np.linalg.eigvalsh((h_sector + h_sector.T) / 2), n + 1)


def dense_echo(params: ModelParams, g0_full: np.ndarray, times) -> np.ndarray:
    """``|<g0| expm(-i H1 t) |g0>|`` by dense matrix exponentiation.

    ``g0_full`` is a state on the full (N+1)-dimensional ``|n_t>`` basis.
    """
    from scipy.linalg import expm

    h1 = dense_boson_matrix(params, True)
    g = np.asarray(g0_full, dtype=complex)
    return np.array([abs(np.vdot(g, expm(-1j * h1 * t) @ g)) for t in np.atleast_1d(times)])


def dense_evolved(params: ModelParams, g0_full: np.ndarray, t: float) -> np.ndarray:
    from scipy.linalg import expm

    return expm(-1j * dense_boson_matrix(params, True) * t) @ np.asarray(g0_full, dtype=complex)
