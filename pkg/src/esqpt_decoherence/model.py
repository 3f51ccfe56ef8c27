"""Two-level (s, t) boson Hamiltonian in parity-resolved tridiagonal form.

The environment Hamiltonian is

    H = a * n_t - (1 - alpha) / N * Q_t**2,    Q_t = s^+ t + t^+ s,

with ``a = alpha`` for the bare environment (H0) and ``a = alpha + lambda``
when the qubit coupling ``lambda * n_t`` is switched on (H1).  ``Q_t**2``
changes ``n_t`` by 0 or 2, so the parity of ``n_t`` is conserved and each
parity sector is a symmetric tridiagonal matrix in the ascending ``n_t``
basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InvalidParameterError

Parity = Literal["even", "odd"]
PARITIES: tuple[Parity, Parity] = ("even", "odd")


@dataclass(frozen=True)
class ModelParams:
    """Control parameter ``alpha``, coupling ``lam`` and boson number ``n_bosons``."""

    alpha: float
    lam: float
    n_bosons: int

    def __post_init__(self):
        if isinstance(self.n_bosons, bool) or int(self.n_bosons) != self.n_bosons:
            raise InvalidParameterError(f"n_bosons must be an integer, got {self.n_bosons!r}")
        if self.n_bosons < 1:
            raise InvalidParameterError(f"n_bosons must be >= 1, got {self.n_bosons}")
        if not (0.0 <= self.alpha <= 1.0):
            raise InvalidParameterError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not (self.lam >= 0.0 and math.isfinite(self.lam)):
            raise InvalidParameterError(f"lambda must be finite and >= 0, got {self.lam}")
        object.__setattr__(self, "n_bosons", int(self.n_bosons))

    def with_coupling(self, lam: float) -> "ModelParams":
        return ModelParams(self.alpha, lam, self.n_bosons)


@dataclass(frozen=True)
class ParityBlock:
    parity: Parity
    n_t_values: np.ndarray
    diag: np.ndarray
    offdiag: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def _check_parity(parity):
    if parity not in PARITIES:
        raise InvalidParameterError(f"parity must be 'even' or 'odd', got {parity!r}")


def block_basis(n_bosons: int, parity: Parity) -> np.ndarray:
    """Ascending ``n_t`` occupations of the given parity in ``[0, n_bosons]``."""
    if n_bosons < 1:
        raise InvalidParameterError(f"n_bosons must be >= 1, got {n_bosons}")
    _check_parity(parity)
    start = 0 if parity == "even" else 1
    return np.arange(start, n_bosons + 1, 2)


def qt2_elements(n_bosons: int, n_t) -> tuple:
    """Matrix elements of ``Q_t**2`` in the ``|n_t>`` basis.

    Returns ``(<n_t|Q^2|n_t>, <n_t+2|Q^2|n_t>)``.  Accepts a scalar or an
    integer array for ``n_t``; the second element is zero when
    ``n_t + 2 > n_bosons``.
    """
    nt = np.asarray(n_t)
    if np.any(nt < 0) or np.any(nt > n_bosons):
        raise InvalidParameterError(f"n_t must lie in [0, {n_bosons}], got {n_t}")
    n = float(n_bosons)
    x = nt.astype(float)
    diag = x * (n - x + 1.0) + (x + 1.0) * (n - x)
    prod = (x + 1.0) * (x + 2.0) * (n - x) * (n - x - 1.0)
    raise2 = np.where(nt + 2 <= n_bosons, np.sqrt(np.clip(prod, 0.0, None)), 0.0)
    if nt.ndim == 0:
        return float(diag), float(raise2)
    return diag, raise2


def level_coefficient(params: ModelParams, use_coupling: bool) -> float:
    """Coefficient of ``n_t``: ``alpha`` for H0, ``alpha + lambda`` for H1."""
    return params.alpha + params.lam if use_coupling else params.alpha


def hamiltonian_block(params: ModelParams, use_coupling: bool, parity: Parity) -> ParityBlock:
    n = params.n_bosons
    nt = block_basis(n, parity)
    a = level_coefficient(params, use_coupling)
    scale = (1.0 - params.alpha) / n
    q_diag, q_raise = qt2_elements(n, nt)
    diag = a * nt - scale * q_diag
    # q_raise[k] couples nt[k] -> nt[k] + 2 == nt[k + 1]; the last entry is always 0
    offdiag = -scale * q_raise[:-1]
    return ParityBlock(parity, nt, np.asarray(diag, float), np.asarray(offdiag, float))
