"""Eigendecomposition of the symmetric tridiagonal parity blocks.

Two engines are available.  ``"mrrr"`` calls LAPACK's ``stemr`` through
scipy and is the default: it is O(dim**2) for the full set of eigenpairs,
which is what makes N of several thousand bosons cheap.  ``"ql"`` is a
self-contained implicit-shift QL iteration with accumulated rotations; it is
O(dim**3), intended for small blocks and as an independent cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import ConvergenceError, InvalidParameterError
from .model import PARITIES, ModelParams, Parity, ParityBlock, hamiltonian_block

MAX_QL_SWEEPS = 50
# components below this are treated as zero when fixing the sign gauge
GAUGE_THRESHOLD = 1e-12
DEGENERACY_RTOL = 1e-10


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, in the block's n_t basis
    parity: Parity | None = None

    def __len__(self):
        return len(self.eigenvalues)


@dataclass(frozen=True)
class GroundState:
    energy: float
    vector: np.ndarray
    parity: Parity
    n_t_values: np.ndarray

    def expectation_n_t(self) -> float:
        return float(np.dot(self.vector**2, self.n_t_values))


def fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the first non-negligible component is positive."""
    vectors = np.array(vectors, dtype=float, copy=True)
    if vectors.size == 0:
        return vectors
    significant = np.abs(vectors) > GAUGE_THRESHOLD
    first = np.argmax(significant, axis=0)
    signs = np.sign(vectors[first, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def tql_implicit(diag, offdiag, max_sweeps: int = MAX_QL_SWEEPS):
    """Implicit-shift QL on a symmetric tridiagonal matrix.

    Parameters
    ----------
    diag, offdiag : array_like
        Diagonal (length n) and sub-diagonal (length n - 1).
    max_sweeps : int
        QL sweeps allowed per eigenvalue before giving up.

    Returns
    -------
    eigenvalues, eigenvectors
        Unsorted eigenvalues and the accumulated rotation matrix whose
        columns are the eigenvectors.
    """
    d = np.array(diag, dtype=float)
    n = len(d)
    e = np.zeros(n)
    e[: n - 1] = offdiag
    z = np.eye(n)
    eps = np.finfo(float).eps

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                raise ConvergenceError(
                    f"QL iteration did not converge for eigenvalue index {l} "
                    f"within {max_sweeps} sweeps", index=l)
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi = z[:, i].copy()
                z[:, i] = c * zi - s * z[:, i + 1]
                z[:, i + 1] = s * zi + c * z[:, i + 1]
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z


def eig_tridiag(block: ParityBlock, method: str = "mrrr") -> SpectralDecomposition:
    """All eigenpairs of a parity block, ascending, sign-gauge fixed."""
    if block.dim < 1:
        raise InvalidParameterError("block dimension must be >= 1")
    if block.dim == 1:
        return SpectralDecomposition(np.array(block.diag, float), np.ones((1, 1)), block.parity)

    if method == "mrrr":
        try:
            vals, vecs = eigh_tridiagonal(block.diag, block.offdiag, lapack_driver="stemr")
        except LinAlgError as exc:
            raise ConvergenceError(f"LAPACK stemr failed: {exc}") from exc
    elif method == "ql":
        vals, vecs = tql_implicit(block.diag, block.offdiag)
        order = np.argsort(vals, kind="stable")
        vals, vecs = vals[order], vecs[:, order]
    else:
        raise InvalidParameterError(f"unknown eigen method {method!r}")
    return SpectralDecomposition(vals, fix_gauge(vecs), block.parity)


def full_spectrum(params: ModelParams, use_coupling: bool = False,
                  method: str = "mrrr") -> dict[Parity, SpectralDecomposition]:
    return {p: eig_tridiag(hamiltonian_block(params, use_coupling, p), method)
            for p in PARITIES}


def _lowest(block: ParityBlock, method: str):
    if method == "mrrr" and block.dim > 1:
        vals, vecs = eigh_tridiagonal(block.diag, block.offdiag,
                                      select="i", select_range=(0, 0), lapack_driver="stemr")
        return float(vals[0]), fix_gauge(vecs)[:, 0]
    dec = eig_tridiag(block, method)
    return float(dec.eigenvalues[0]), dec.eigenvectors[:, 0]


def ground_state(params: ModelParams, method: str = "mrrr") -> GroundState:
    """Lowest eigenpair of H0 over both parity sectors.

    The coupling ``params.lam`` is ignored.  When the even and odd minima
    agree to within ``1e-10 * (1 + |E|)`` the even state is returned.
    """
    found = {}
    for parity in PARITIES:
        block = hamiltonian_block(params, False, parity)
        energy, vector = _lowest(block, method)
        found[parity] = (energy, vector, block.n_t_values)

    e_even = found["even"][0]
    e_odd = found["odd"][0]
    tol = DEGENERACY_RTOL * (1.0 + abs(min(e_even, e_odd)))
    parity: Parity = "even" if e_even <= e_odd + tol else "odd"
    energy, vector, nt = found[parity]
    vector = vector / np.linalg.norm(vector)
    return GroundState(energy, vector, parity, nt)
