"""Direct density-matrix reconstruction with two qubit pointers."""

from ._core import (
    analytic_correlation,
    build_coupled_evolution,
    coupling_unitary,
    default_qst_states,
    error_lower_bound,
    exact_correlation,
    finalize,
    matrix_exponential,
    mean_square_error,
    purity,
    qst_linear_inversion,
    random_density,
    read_matrix,
    reconstruct,
    run_config,
    sample_correlation,
    state,
    trace_distance,
    validate,
    write_matrix,
)

__all__ = [
    "analytic_correlation",
    "build_coupled_evolution",
    "coupling_unitary",
    "default_qst_states",
    "error_lower_bound",
    "exact_correlation",
    "finalize",
    "matrix_exponential",
    "mean_square_error",
    "purity",
    "qst_linear_inversion",
    "random_density",
    "read_matrix",
    "reconstruct",
    "run_config",
    "sample_correlation",
    "state",
    "trace_distance",
    "validate",
    "write_matrix",
]
