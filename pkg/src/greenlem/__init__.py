"""Green functions of Reinhardt domains, approximated by homogeneous
polynomial lemniscates with numerically certified sandwich inclusions."""

from ._kernels import backend_name
from .domains import (
    Containment,
    MonomialConstraint,
    ReinhardtDomain,
    ValidationReport,
    contains,
    hull_from_points,
    polydisk,
    polyhedral_domain,
    support_h,
    validate,
    weighted_ball,
)
from .errors import (
    CertificateError,
    ConvergenceCapError,
    DomainValidationError,
    GeneralPositionError,
    GreenlemError,
    InputError,
    SelectionBudgetError,
)
from .exactlp import (
    LinearProgram,
    LPResult,
    cone_membership,
    linear_program,
    solve_lp_exact,
    solve_lp_float,
)
from .green import (
    GreenValue,
    LogPoint,
    check_closed_form,
    eval_green,
    green_grid_oracle,
    green_plus,
)
from .hommap import (
    ComplexLogValue,
    HomogeneousMap,
    build_map,
    eval_component,
    eval_components,
    eval_vs,
    eval_vs_many,
    expand_symbolic,
)
from .pieces import (
    Monomial,
    MonomialSystem,
    RationalPL,
    RationalPiece,
    SupportPiece,
    check_general_position,
    emit_monomials,
    eval_v,
    exact_pieces_polyhedral,
    rationalize,
    select_support_pieces,
)
from .pipeline import ApproximationReport, PipelineResult, RunConfig, approximate
from .verify import (
    ErrorStat,
    SampleSet,
    SandwichCertificate,
    build_sandwich,
    find_s0,
    sample_level_set,
    sup_error,
    verify_certificate,
    zero_locus_margin,
)

__version__ = "0.1.0"
