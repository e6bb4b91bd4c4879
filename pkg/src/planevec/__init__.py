"""planevec: exact workbench for Lie algebras of plane polynomial vector fields."""

__version__ = "0.1.0"

from .scalars import SQRT2, Scalar, is_rational_ratio  # noqa: E402,F401
from .poly import BiPoly, Mode, poly_text  # noqa: E402,F401
from .parsing import (  # noqa: E402,F401
    parse_automorphism,
    parse_derivation,
    parse_poly,
    split_generators,
)
from .vecfield import (  # noqa: E402,F401
    Derivation,
    GradedForm,
    NewtonPolygon,
    PolyAutomorphism,
    ad_conjugate,
    apply_derivation,
    basis_field,
    bracket,
    bracket_graded,
    classify_lf_shape,
    derivation_text,
    divergence,
    euler_field,
    exp_lnd,
    from_graded,
    graded_text,
    newton_polygon,
    to_graded,
    toral_field,
)
from .finiteness import (  # noqa: E402,F401
    Certificate,
    Inconclusive,
    OrbitBudget,
    OrbitClosure,
    certify_locally_finite,
    certify_locally_nilpotent,
    invariant_subspace,
    is_semisimple,
    jordan_decompose,
)
from .spectral import (  # noqa: E402,F401
    OpportunePair,
    SpectralDecomposition,
    centralizer_basis,
    eigencomponents,
    homogeneous_pieces,
    is_opportune,
    opportune_search,
    principal_part,
    toral_from_opportune,
)
from .closure import (  # noqa: E402,F401
    ClosureBudget,
    ClosureReport,
    LieSpan,
    derived_series,
    exclusion_check,
    finite_dim_verdict,
    full_closure_report,
    lie_closure,
    lower_central_series,
    rank_analysis,
    span_of,
    triangular_analysis,
)
