"""
Fast Lyapunov spectra
=====================

Numerical and exact tools for Markov-Rényi maps: symbolic coding, Lyapunov exponents at fast scales, the
Hausdorff dimension formulas of the fast Lyapunov spectrum, and the Cantor-like constructions behind their proofs.

A few summary facts:

- Points, cylinder endpoints and branch coefficients are exact rationals; the Gauss and Rényi maps stay exact
  at every depth.
- Quantities that outgrow double precision (digit products, e^(psi(n)), b^(c^n)) are carried as logarithms or in
  arbitrary precision, controlled by the `FAST_LYAPUNOV_SPECTRA_PRECISION_BITS` environment variable.
- Every limit (beta, B, b, xi, the fast exponents) is reported as a horizon-truncated estimate with its window.
"""

from ._config import FAST_LYAPUNOV_SPECTRA_BASE_FOLDER_PATH, get_default_precision_bits
from ._exceptions import (
    MarkovRenyiError,
    MapSpecificationError,
    ExceptionalSetError,
    ExceptionalOrbitError,
    HypothesisViolationError,
    TruncationError,
    ConstructionError,
    BudgetExceededError,
)
from ._maps import (
    BranchSpec,
    MapSpec,
    HypothesisCheck,
    HypothesisReport,
    load_map,
    evaluate,
    derivative,
    derivative_within_bounds,
    validate_hypotheses,
)
from ._coding import (
    DigitWord,
    CylinderInterval,
    OrbitRecord,
    encode,
    decode,
    cylinder,
    compute_cylinders,
    iterate_cylinders,
    random_repeller_points,
)
from ._digit_word_io import DigitWordReader, read_digit_words, write_digit_words
from ._exponents import (
    ExponentTrace,
    FastExponentPartials,
    DigitStatistics,
    trace,
    trace_from_orbit,
    trace_from_word,
    chain_rule_gap,
    chain_rule_violations,
    fast_exponent_partials,
    digit_statistics,
)
from ._scaling import (
    ScalingFunction,
    ScalingInvariants,
    EquivalenceReport,
    load_scaling_function,
    tabulate_scaling_function,
    noisy_exponential_scaling,
    psi_star,
    scale_scaling_function,
    is_equivalent_increasing,
    invariants,
    xi,
)
from ._spectra import (
    SpectrumQuery,
    SpectrumValue,
    evaluate_spectrum,
    fast_spectrum,
    upper_lower_spectrum,
    lyapunov_at_infinity,
    auxiliary_dimensions,
    is_continuous_at_infinity,
)
from ._indices import (
    LPIndexReport,
    JointIndexResult,
    KeyIndexSequences,
    l_indices,
    p_indices,
    joint_index,
    key_index_sequences,
    key_index_holds,
    key_index,
    search_key_index,
)
from ._tail_search import scan_tail
from ._gpsi import CrossoverRecord, GpsiResult, gpsi_simple, gpsi_appendix
from ._fsw import EnvelopeChecks, EnvelopeSequence, fsw_sequence
from ._sequences import (
    SequenceGenerator,
    SequencePair,
    SequencePairReport,
    load_sequence_generator,
    tabulate_sequence,
    check_sequence_pair,
    exponential_sequence_pair,
    level_set_sequence,
    growth_rate_sequence,
    d_set_sequence,
    fsw_sequence_pair,
)
from ._digit_constructions import digit_window, e_set_digits, d_set_digits, luczak_witnesses
from ._dimension import (
    BasicInterval,
    BasicIntervalTree,
    DimensionEstimate,
    TruncatedDimension,
    ProductTupleCount,
    enumerate_basic_intervals,
    falconer_lower,
    cover_upper,
    e_set_dimension_formula,
    count_product_tuples,
)
from ._run_config import RunConfig
from ._command_line_interface import run

__all__ = [
    "FAST_LYAPUNOV_SPECTRA_BASE_FOLDER_PATH",
    "get_default_precision_bits",
    # Errors
    "MarkovRenyiError",
    "MapSpecificationError",
    "ExceptionalSetError",
    "ExceptionalOrbitError",
    "HypothesisViolationError",
    "TruncationError",
    "ConstructionError",
    "BudgetExceededError",
    # Maps
    "BranchSpec",
    "MapSpec",
    "HypothesisCheck",
    "HypothesisReport",
    "load_map",
    "evaluate",
    "derivative",
    "derivative_within_bounds",
    "validate_hypotheses",
    # Coding
    "DigitWord",
    "CylinderInterval",
    "OrbitRecord",
    "encode",
    "decode",
    "cylinder",
    "compute_cylinders",
    "iterate_cylinders",
    "random_repeller_points",
    "DigitWordReader",
    "read_digit_words",
    "write_digit_words",
    # Exponents
    "ExponentTrace",
    "FastExponentPartials",
    "DigitStatistics",
    "trace",
    "trace_from_orbit",
    "trace_from_word",
    "chain_rule_gap",
    "chain_rule_violations",
    "fast_exponent_partials",
    "digit_statistics",
    # Scaling
    "ScalingFunction",
    "ScalingInvariants",
    "EquivalenceReport",
    "load_scaling_function",
    "tabulate_scaling_function",
    "noisy_exponential_scaling",
    "psi_star",
    "scale_scaling_function",
    "is_equivalent_increasing",
    "invariants",
    "xi",
    # Spectra
    "SpectrumQuery",
    "SpectrumValue",
    "evaluate_spectrum",
    "fast_spectrum",
    "upper_lower_spectrum",
    "lyapunov_at_infinity",
    "auxiliary_dimensions",
    "is_continuous_at_infinity",
    # Constructions
    "LPIndexReport",
    "JointIndexResult",
    "KeyIndexSequences",
    "l_indices",
    "p_indices",
    "joint_index",
    "key_index_sequences",
    "key_index_holds",
    "key_index",
    "search_key_index",
    "scan_tail",
    "CrossoverRecord",
    "GpsiResult",
    "gpsi_simple",
    "gpsi_appendix",
    "EnvelopeChecks",
    "EnvelopeSequence",
    "fsw_sequence",
    "SequenceGenerator",
    "SequencePair",
    "SequencePairReport",
    "load_sequence_generator",
    "tabulate_sequence",
    "check_sequence_pair",
    "exponential_sequence_pair",
    "level_set_sequence",
    "growth_rate_sequence",
    "d_set_sequence",
    "fsw_sequence_pair",
    "digit_window",
    "e_set_digits",
    "d_set_digits",
    "luczak_witnesses",
    # Dimension
    "BasicInterval",
    "BasicIntervalTree",
    "DimensionEstimate",
    "TruncatedDimension",
    "ProductTupleCount",
    "enumerate_basic_intervals",
    "falconer_lower",
    "cover_upper",
    "e_set_dimension_formula",
    "count_product_tuples",
    # Command line
    "RunConfig",
    "run",
]
