"""permlab: permutation statistics, the chi bijections, and verification."""

from .errors import (
    CapExceededError,
    CycleError,
    InternalInvariantError,
    InvalidPermutationError,
    NotInImageError,
    PermlabError,
)
from .permutation import (
    CycleDecomposition,
    Permutation,
    PositionClasses,
    RunDecomposition,
    cycle_decomposition,
    global_ascents,
    identity,
    inverse,
    left_to_right_maxima,
    parse_permutation,
    position_classes,
    reverse,
    runs,
)
from .statistics import (
    descent_views,
    dv,
    inversions,
    invisible_inversions,
    occurrences_13_2,
    occurrences_31star2,
    visible_inversions,
)
from .maps import (
    fundamental,
    fundamental_inverse,
    runs_short_and_increasing,
    runsort,
    sort_descending_runs_by_bottom,
)
from .chi import (
    ChiStep,
    ChiTrace,
    PartialPermutation,
    bottom_to_top,
    chi,
    chi_exceedances,
    chi_inverse,
    iterated_preimage,
    preimage_chain_map,
    runs_from_exceedances,
)
from .verify import (
    STATISTICS,
    Failure,
    VerificationReport,
    brute_force_exceedance_encodings,
    brute_force_preimage,
    check_completions,
    check_theorem1,
    distribution,
    exhaustive_cap,
    rank,
    unrank,
    verify_suite,
)

__version__ = "0.1.0"
