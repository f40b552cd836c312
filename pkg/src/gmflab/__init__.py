"""gmflab: generalized matrix functions and PSD inequality verification.

The package evaluates generalized matrix functions (determinant, permanent
and immanants from linear characters of permutation subgroups) and checks,
numerically, a family of power inequalities those functions satisfy on sums
of positive semidefinite matrices, including slack computation, randomized
searches and built-in sharp boundary instances.
"""

from .errors import (
    BadLevels,
    BlockCountMismatch,
    DegreeTooLarge,
    DimensionMismatch,
    GmflabError,
    GroupTooLarge,
    InvalidPermutation,
    NegativeEntry,
    NoConvergence,
    NotAHomomorphism,
    NotCyclic,
    NotHermitian,
    NotPsd,
    NotUnitModulus,
    NumericalFailure,
    ReproductionFailed,
    ResidueBreach,
    ResultTooLarge,
)
from .gmf import (
    GmfSpec,
    GmfValue,
    determinant,
    gmf,
    gmf_naive,
    gmf_tensor_oracle,
    permanent_ryser,
    product_gmf,
)
from .inequalities import (
    ConvexFn,
    SlackReport,
    SubsetWeights,
    convex_fn,
    decompose_subset_weights,
    finite_difference_f,
    slack_alternating,
    slack_convex_three_level,
    slack_pairwise,
    slack_partition_schur,
    slack_product_gmf,
    slack_root_superadditivity,
    slack_tensor_three,
    slack_tensor_three_blocks,
    slack_theorem_2_1,
    slack_three_level,
    slack_three_term_basic,
    slack_two_term_power,
    subset_weights_report,
)
from .majorization import (
    majorizes,
    power_sum,
    weak_majorization_margin,
    weak_majorizes,
)
from .matrices import (
    RandomInstanceConfig,
    SpectralDecomposition,
    SplitMix64,
    hermitian_eig,
    is_psd,
    kron,
    kron_power,
    loewner_geq,
    matrix_from_json,
    matrix_root,
    matrix_to_json,
    random_psd,
    substream,
)
from .permutations import (
    LinearCharacter,
    Permutation,
    PermutationGroup,
    closure,
    cyclic_character,
    cyclic_group,
    group_from_json,
    group_to_json,
    sign_character,
    symmetric_group,
    trivial_character,
    validate_character,
)
from .search import (
    SearchConfig,
    SearchResult,
    inequality_ids,
    r_grid,
    random_search,
    reproduce,
    scan_r,
)

__version__ = "0.1.0"
