"""Smooth Renyi entropy toolkit.

Conventional and smooth Renyi entropies of classical distributions and
quantum density matrices, exact block statistics of stationary ergodic
Markov sources, typicality diagnostics, and rate-convergence experiments
showing the smoothed rates settle at the Shannon / von Neumann entropy
rate of the source.
"""

from .cli import run_cli
from .entropy import (
    INFINITY,
    ONE,
    ZERO,
    EntropyOrder,
    ProbVector,
    WeightedSpectrum,
    as_order,
    as_prob_vector,
    renyi_entropy,
    renyi_entropy_spectrum,
    statistical_distance,
)
from .errors import (
    DomainError,
    EntropyError,
    NumericalError,
    ResourceError,
    UnsupportedError,
    ValidationError,
)
from .experiments import (
    CSV_HEADER,
    ExperimentConfig,
    RatePoint,
    RateSeries,
    convergence_band,
    format_rate_csv,
    quantum_rate_convergence,
    rate_convergence,
    write_rate_csv,
)
from .quantum import (
    DensityMatrix,
    QuantumBlockSource,
    Spectrum,
    WeylReport,
    cc_block_density,
    eigenvalues_hermitian,
    eigh_jacobi,
    quantum_renyi,
    realize_witness,
    smooth_quantum_renyi,
    underlying_chain,
    weyl_check,
)
from .smoothing import (
    BallKind,
    GapReport,
    SmoothingResult,
    SmoothingSpec,
    closeness_gap,
    smooth_oracle,
    smooth_subball,
    smooth_subball_spectrum,
    smooth_traceball,
    smooth_traceball_spectrum,
    verify_witness,
)
from .sources import (
    MarkovChain,
    TypicalSetReport,
    block_distribution,
    block_spectrum,
    count_binary_strings,
    entropy_rate,
    sample_path,
    stationary_distribution,
    typical_fraction_mc,
    typical_set_report,
)
from .units import log_base, set_log_base, unit_label, using_log_base

__version__ = "0.1.0"

__all__ = [
    "BallKind",
    "CSV_HEADER",
    "DensityMatrix",
    "DomainError",
    "EntropyError",
    "EntropyOrder",
    "ExperimentConfig",
    "GapReport",
    "INFINITY",
    "MarkovChain",
    "NumericalError",
    "ONE",
    "ProbVector",
    "QuantumBlockSource",
    "RatePoint",
    "RateSeries",
    "ResourceError",
    "SmoothingResult",
    "SmoothingSpec",
    "Spectrum",
    "TypicalSetReport",
    "UnsupportedError",
    "ValidationError",
    "WeightedSpectrum",
    "WeylReport",
    "ZERO",
    "as_order",
    "as_prob_vector",
    "block_distribution",
    "block_spectrum",
    "cc_block_density",
    "closeness_gap",
    "convergence_band",
    "count_binary_strings",
    "eigenvalues_hermitian",
    "eigh_jacobi",
    "entropy_rate",
    "format_rate_csv",
    "log_base",
    "quantum_rate_convergence",
    "quantum_renyi",
    "rate_convergence",
    "realize_witness",
    "renyi_entropy",
    "run_cli",
    "renyi_entropy_spectrum",
    "sample_path",
    "set_log_base",
    "smooth_oracle",
    "smooth_quantum_renyi",
    "smooth_subball",
    "smooth_subball_spectrum",
    "smooth_traceball",
    "smooth_traceball_spectrum",
    "stationary_distribution",
    "statistical_distance",
    "typical_fraction_mc",
    "typical_set_report",
    "underlying_chain",
    "unit_label",
    "using_log_base",
    "verify_witness",
    "weyl_check",
    "write_rate_csv",
]
