"""Qubit decoherence as a probe of the excited-state phase transition of a
two-level boson (Lipkin) environment."""

from .dynamics import (DecoherenceWeights, PeakResult, TimeSeries, decoherence_weights,
                       dominant_frequency, find_r_max, quench_energy, r_abs, sample_series,
                       second_maximum, spectral_weights)
from .eigen import GroundState, SpectralDecomposition, eig_tridiag, full_spectrum, ground_state
from .errors import (AliasingError, BracketingError, CapacityError, ConvergenceError,
                     ESQPTError, InsufficientOscillationsError, InvalidParameterError,
                     NoPeakError)
from .meanfield import (MeanFieldResult, critical_alpha, energy_density, lambda_c, lambda_star,
                        minimize_energy)
from .model import ModelParams, ParityBlock, block_basis, hamiltonian_block, qt2_elements
from .scaling import PowerLawFit, RmaxCurve, locate_dip, power_law_fit, rmax_scan

__version__ = "0.1.0"
