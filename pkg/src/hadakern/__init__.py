"""Exact computation of simultaneous Hadamard-power kernels, principal minor
positivity and orbit stratifications of Hermitian matrices."""
from .errors import *  # noqa: F401,F403
from .scalars import (
    DEFAULT_TOLERANCE,
    GAUSSIAN,
    RATIONAL,
    FloatDomain,
    GaussianRational,
    PrimeField,
    PrimeFieldElement,
    domain_from_name,
)
from .matrix import (
    HermitianMatrix,
    KernelBasis,
    Matrix,
    Signature,
    determinant,
    hadamard_power,
    kernel_basis,
    principal_minor,
    rank,
    signature,
    subspace_equal,
)
from .partitions import Partition
from .groups import GroupSpec, orbit_equivalent
from .pmp import is_k_pmp, is_k_psrp, is_psd, pmp_order, check_pmp_signature
from .strata import (
    HnsDecomposition,
    StratumReport,
    block_inflate,
    compression,
    hns_decompose,
    pi_min,
    pi_stratum,
    rank_one_certificates,
)
from .kernels import (
    distinct_diagonal_check,
    ker_block_ones,
    positive_combination_kernel,
    rectangular_simultaneous_kernel,
    simultaneous_kernel,
    simultaneous_kernel_blockdiag,
    stratification_partition,
    verify_t3pmp,
)
from .serialization import load_matrix, matrix_from_json, matrix_to_json

__version__ = "0.1.0"
