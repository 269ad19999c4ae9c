"""Two-variable functional calculus ``f(A, B)`` for pairs of PSD matrices.

``f`` is a homogeneous function of two nonnegative variables, carried by
its section ``psi(t) = f(t, 1 - t)``. The main entry points are
:func:`pw_apply`, :func:`pw_apply_extended` and :func:`decompose`.
"""

from .calculus import PWDecomposition, decompose, numerically_invertible, pw_apply, pw_apply_extended
from .convexity import (
    CheckResult,
    Witness,
    embed_transformer_witness,
    falsify_transformer,
    joint_convexity_check,
    revalidate,
    section_operator_convexity_scan,
    transformer_check,
    transformer_suite,
)
from .errors import (
    PWError,
    NonHermitianInput,
    NotPSD,
    DimensionMismatch,
    DomainError,
    InfiniteValue,
    NotInvertible,
    NotCommuting,
    NotSelfAdjointConjugate,
    UnknownName,
    BadParameter,
    BadWeights,
    FunctionNotContinuous,
    PreconditionViolation,
    SpectrumOutOfInterval,
    ParseError,
)
from .extended import PLUS_INF, ExtendedOperator, format_extended, is_inf
from .homfun import (
    CATALOGUE_NAMES,
    HomogeneousFunction,
    arithmetic,
    catalogue,
    entropy_kernel,
    eval_f,
    left,
    parallel_sum,
    perspective_of,
    power_perspective,
    renyi,
    rescale,
    right,
    weighted_geometric,
)
from .quantities import bs_relative_entropy, renyi_trace, weighted_mean
from .routes import (
    epsilon_regularized,
    limit_study,
    parallel_sum_direct,
    parallel_sum_inverse_form,
    perspective_left,
    perspective_right,
)
from .spectral import (
    SpectralDecomposition,
    apply_scalar_function,
    as_hermitian,
    check_psd,
    commutator_norm,
    eig_hermitian,
    joint_calculus_commuting,
    pinv_power,
    similarity_identity_check,
)

__version__ = "0.1.0"
