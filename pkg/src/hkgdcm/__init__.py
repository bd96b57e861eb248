"""Generalized density correlation matrices for HK-type Hamiltonians."""

from .eigensolve import GroundState, expectation, ground_state
from .errors import (
    ConvergenceError,
    DegenerateGroundStateError,
    DimensionMismatchError,
    HkError,
    InvalidModelError,
    NonHermitianError,
)
from .fock import DN, UP, FockSector, double_occupancy, fermion_bilinear
from .gdcm import (
    FLAT,
    INVERTIBLE,
    SINGULAR,
    Gdcm,
    ResponseMatrix,
    certify_flat,
    gdcm,
    null_space,
    response_matrix,
    verify_null_direction,
)
from .operators import HkHamiltonian, SparseHermitian, assemble
from .sampling import (
    LambdaMinHistogram,
    SampleConfig,
    mode_estimate,
    one_for_all_test,
    sample_lambda_min,
)

__version__ = "0.1.0"
