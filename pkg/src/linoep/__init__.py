"""Gram-Schmidt and energy-preserving (LINOEP / NOEP) vector set transforms."""
from .crossterm import (
    CrossTermReport,
    Family,
    SweepResult,
    classify,
    cross_term,
    make_cancellation_example,
    make_nested_example,
    nested_permutations,
    permutation_sweep,
)
from .errors import (
    DegenerateTailSum,
    DimensionMismatch,
    EmptySet,
    GenerationFailed,
    InputError,
    LinoepError,
    NotLinearlyIndependent,
    TooManyPermutations,
)
from .gsom import GsomResult, gsom_energy_identity, gsom_transform
from .transform import LinoepResult, energy_report, linoep, linoep_transform, noep_extend
from .vectorspace import (
    DEFAULT_TOL,
    as_vector,
    as_vector_set,
    gram,
    inner,
    is_linearly_independent,
    norm_sq,
    numerical_rank,
    sum_vectors,
)

__version__ = "0.1.0"
