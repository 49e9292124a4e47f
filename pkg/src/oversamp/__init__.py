"""Derivative-oversampling toolkit for band-limited signals.

Closed-form dual-generator kernels, recovery of finitely many missing
samples of a function and/or its derivative by solving the associated
linear systems, eigenvalue/conditioning stability analysis, and Tikhonov
regularization with discrepancy-principle parameter selection.
"""

from .kernels import (
    OneChannelParams,
    TwoChannelParams,
    dual_gen_1,
    dual_gen_1_deriv,
    dual_gen_2,
    dual_gen_2_deriv,
    one_channel_kernel,
    riesz_dual_1,
    riesz_dual_2,
    sinc,
    sinc_deriv,
)
from .linalg import (
    DeltaTooLargeError,
    DiscrepancyResult,
    NoConvergenceError,
    NotSymmetricError,
    SingularMatrixError,
    SpectrumReport,
    discrepancy_select,
    eig_general,
    eig_symmetric,
    singular_values,
    solve_linear,
    spectral_condition,
    tikhonov_solve,
)
from .recovery import (
    NoiseSpec,
    RecoveryResult,
    add_noise,
    recover_derivative_channel,
    recover_function_channel,
    recover_one_channel,
    recover_two_channel,
)
from .signals import (
    BandLimitedSignal,
    LengthMismatchError,
    error_metrics,
    reconstruct_one_channel,
    reconstruct_riesz,
    reconstruct_two_channel,
    reconstruct_two_channel_deriv,
    sinc_combination,
    test_signal_g,
)
from .system import (
    BlockSystem,
    EigBounds,
    IntegerCaseError,
    MissingKnownSampleError,
    MissingSet,
    StructuralCase,
    assemble_two_channel,
    eig_bounds,
    one_channel_matrix,
    rhs_one_channel,
    rhs_two_channel,
    separation_threshold,
    split_blocks,
    structural_case,
    two_channel_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BandLimitedSignal",
    "BlockSystem",
    "DeltaTooLargeError",
    "DiscrepancyResult",
    "EigBounds",
    "IntegerCaseError",
    "LengthMismatchError",
    "MissingKnownSampleError",
    "MissingSet",
    "NoConvergenceError",
    "NoiseSpec",
    "NotSymmetricError",
    "OneChannelParams",
    "RecoveryResult",
    "SingularMatrixError",
    "SpectrumReport",
    "StructuralCase",
    "TwoChannelParams",
    "add_noise",
    "assemble_two_channel",
    "discrepancy_select",
    "dual_gen_1",
    "dual_gen_1_deriv",
    "dual_gen_2",
    "dual_gen_2_deriv",
    "eig_bounds",
    "eig_general",
    "eig_symmetric",
    "error_metrics",
    "one_channel_kernel",
    "one_channel_matrix",
    "recover_derivative_channel",
    "recover_function_channel",
    "recover_one_channel",
    "recover_two_channel",
    "reconstruct_one_channel",
    "reconstruct_riesz",
    "reconstruct_two_channel",
    "reconstruct_two_channel_deriv",
    "rhs_one_channel",
    "rhs_two_channel",
    "separation_threshold",
    "sinc",
    "sinc_combination",
    "sinc_deriv",
    "singular_values",
    "solve_linear",
    "spectral_condition",
    "split_blocks",
    "structural_case",
    "test_signal_g",
    "two_channel_matrix",
]
