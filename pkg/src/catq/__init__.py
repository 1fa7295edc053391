"""Metric inner products, two-sided evolution and the maximization principle
for non-normal finite-dimensional Hamiltonians."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .dynamics import BoundaryData, QhPropagator, evolve_a, evolve_b, evolve_qh, expand, heisenberg_op
from .errors import (CatqError, DimensionMismatchError, NonFiniteError, DefectiveMatrixError, NumericallySingularError, ZeroVectorError, EmptyInputError, TimeOutOfRangeError, TimeOrderError, DegenerateWeightsError, VanishingOverlapError, NotNormalizedError, GridTooCoarseError, GridMismatchError, MatrixParseError, ConfigError, UnboundedSpectrumWarning, GridExtentWarning)  # noqa: F401
from .matrix_io import format_matrix, load_hamiltonian, parse_matrix, write_hamiltonian
from .maximization import MaxSolution, OracleResult, build_max_pair, dominant_set, oracle_maximize, transition_amplitude
from .models import OscillatorSpec, RandomSpec, oscillator_hamiltonian, random_nonnormal, triangular_demo
from .observables import central_difference_average, ehrenfest_rhs, normalized_matrix_element, reality_sweep, tilde_average, tilde_state
from .probability import GridWavefunction, coherent_state, continuity_residual, current, density
from .qmetric import QMetric, build_q, decompose_h, inner_q, q_adjoint, q_normality_residual, q_normalize
from .spectral import Spectrum, eigendecompose, spectral_residual
