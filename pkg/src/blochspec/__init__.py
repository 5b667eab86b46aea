"""Exact spectral theory of n-periodic monic lower-triangular difference operators.

The package computes, entirely over exact rationals:

* characteristic spectral curves by two independent routes, with Newton
  lattice bookkeeping (`curves`);
* formal eigenvector/eigenvalue series at the two marked points of the
  curve (`series`);
* superperiodicity certificates, one-sided division by L + 1, the commuting
  division dual, and the order-swapping transform with its defining signed
  window pairing (`superperiodic`);
* random generators of superperiodic operators, exact and numeric
  (`generators`);
* the curve of a commuting pair and full recovery of the spectral data
  (e, Q, mu, c, P) from the pair (`commuting`);
* JSON wire formats (`serialize`) and a batch CLI (`cli`).
"""

from .commuting import (
    BCCurve,
    DecompositionData,
    NormalizedPair,
    action_on_solutions,
    bc_curve,
    normalize_to_superperiodic,
    polynomial_in_operator,
    recover_e_Q,
    scaling_constant,
)
from .curves import (
    NewtonReport,
    char_curve,
    char_curve_monodromy,
    char_curve_solution_space,
    interior_points,
    lattice_counts,
    monodromy_matrix,
    multiplicity_at,
    newton_report,
    slot_points,
    solution_table,
    transfer_step,
)
from .errors import (
    BlochSpecError,
    CoprimalityError,
    DegenerateError,
    FormatError,
    PeriodMismatchError,
    ShapeError,
    TruncationError,
    VerificationError,
)
from .generators import (
    generate_numeric,
    generate_quiddity,
    generate_superperiodic,
    perturb_operator,
    quiddity_operator,
    random_operator,
    random_triangulation_quiddity,
)
from .operators import (
    BlochSequence,
    DifferenceOperator,
    PeriodicSequence,
    TriangularShape,
    commutator,
    from_recursion,
    is_triangular,
    recursion_rows,
    shape_of,
)
from .poly import BiPoly, UPoly
from .series import (
    InfinityExpansion,
    SeriesCurveReport,
    TruncatedSeries,
    ZeroExpansion,
    expand_infinity,
    expand_zero,
    verify_curve_series,
)
from .superperiodic import (
    BlochTestCertificate,
    DivisionResult,
    DualityReport,
    GaleDualPair,
    KernelBasis,
    admissible,
    bloch_space_test,
    canonical_multiplier,
    canonical_pair,
    divide,
    dual_pair,
    duality_product,
    gauged_kernel_table,
    is_superperiodic,
    kernel_basis,
    matrix_duality_check,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
