"""Randomized block subsampling Kaczmarz-Motzkin solver."""

from ._rbskm import (
    ArgumentError,
    CapabilityError,
    DegenerateInputError,
    GeneratorKind,
    LinearSystem,
    ParseError,
    Preset,
    RunReport,
    RunStatus,
    SolverConfig,
    SparseMatrix,
    SpectrumEstimate,
    UndefinedXiError,
    UpdateRule,
    XiEstimate,
    estimate_spectrum,
    estimate_xi,
    generate,
    load_matrix_market,
    load_vector_market,
    make_consistent_system,
    op_count,
    preset,
    rate_factor,
    reference_solution,
    solve,
)

__all__ = [name for name in dir() if not name.startswith("_")]
