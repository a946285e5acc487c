"""Square roots of -1, slice functions and twistor maps in finite-dimensional
real associative algebras."""

from .algebra import (
    Algebra,
    Element,
    OperatorMatrix,
    algebra_from_dict,
    algebra_to_dict,
    associativity_residual,
    clifford_algebra,
    dump_algebra,
    inverse,
    is_zerodivisor,
    load_algebra,
    make_algebra,
    multiply,
    operator_matrix,
)
from .errors import (
    BadSectionError,
    BadUnitError,
    BasePointAtInfinityError,
    DegenerateImageError,
    DimensionMismatchError,
    FrameNotFoundError,
    InvalidTwistError,
    NonAssociativeError,
    NonIntegerTraceError,
    NotFoundError,
    NotIntrinsicError,
    NotTangentError,
    PreconditionFailedError,
    SliceAlgebraError,
    SuiteNotApplicableError,
    TooLargeError,
    ZeroDivisorError,
)
from .roots import (
    ComplexSubspace,
    RootOfMinusOne,
    TangentFrame,
    TraceReport,
    component_invariant,
    conjugate_root,
    find_seed_root,
    is_root,
    j_structure,
    minus_i_eigenspace,
    negate_root,
    nijenhuis,
    root_residual,
    sample_root,
    sigma_involution,
    tangent_frame,
    verify_trace_identities,
)
from .zerovariety import (
    ComplexElement,
    WitnessSearch,
    ZeroScanHit,
    ZeroWitness,
    discrete_zero_scan,
    leaf_membership,
    left_absorption,
    pi_eval,
    pi_tensor_eval,
    right_absorption,
    tau_involution,
    zero_variety_witness,
)
from .slicefunctions import (
    StemPolynomial,
    TwistMap,
    alpha_beta,
    cauchy_riemann_residual,
    eval_generalized,
    eval_slice,
    intrinsic_defect,
    is_intrinsic,
    stem_from_slice_poly,
)
from .orthogonal import (
    CharacterizationReport,
    ConeDecomposition,
    InnerProduct,
    Z0Verdict,
    adjoint,
    antisymmetric_subspace,
    cone_decompose,
    is_in_S0,
    orthogonality_characterization,
    sample_S0,
    z0_equivalence_check,
    z0_residual,
)
from .twistor import (
    ProjectivePoint,
    QuaternionFrame,
    delta1,
    fiber_embed,
    fiber_real_basis,
    gamma,
    generalized_twistor,
    rho,
    rho1,
    rho1_general,
    segre1,
    segre2,
    standard_section,
    stereographic_fiber,
    twistor_lift,
)
from .cli import SuiteReport, main, run_suite

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
