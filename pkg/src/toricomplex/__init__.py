"""toricomplex: exact complexity invariants of toric pairs.

A toric variety is presented by its fan (lattice rank, primitive rays,
maximal cones as ray-index sets); boundaries are invariant Q-divisors given
by one rational coefficient per ray.  All arithmetic is exact.
"""

__version__ = "0.1.0"

from .lattice import (  # noqa: F401
    ToricomplexError,
    NotPointedError,
    snf,
    kernel_basis,
    cokernel,
    AbelianGroupPresentation,
    hilbert_basis,
    simplex_solve,
)
from .fan import (  # noqa: F401
    Fan,
    InvalidFanError,
    make_fan,
    star_subdivision,
)
from .divisor import (  # noqa: F401
    NotQCartierError,
    class_group,
    local_class_group,
    is_ample,
    is_nef,
)
from .pairmodel import (  # noqa: F401
    InvalidPairError,
    ToricPair,
    build_pair,
    pair_from_dict,
    pair_to_dict,
    pair_class_group,
    is_log_cy,
    is_log_canonical,
)
from .complexity import (  # noqa: F401
    Decomposition,
    InvalidDecompositionError,
    NotLogCanonicalError,
    make_decomposition,
    complexity,
    fine_complexity,
    orbifold_complexity,
    minimize,
    local_complexity_cloc,
)
from .adjunction import (  # noqa: F401
    HypothesisViolationError,
    LcViolationError,
    check_adjunction,
    induced_decomposition,
)
from .birational import (  # noqa: F401
    NotLcPlaceError,
    CrepancyError,
    contraction,
    small_modification,
    extraction,
    check_contraction,
    check_small,
    check_extraction,
    log_discrepancy,
)
from .conecox import (  # noqa: F401
    NotAmpleError,
    NotInteriorError,
    TorsionObstructionError,
    cone_over,
    polarize,
    cox_degrees,
    degree_zero_monoid,
    verify_cone_iso,
)
