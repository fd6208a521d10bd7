"""Slice regular functions of one quaternionic variable.

Quaternions are stored as ``(w, x, y, z)``; polynomials carry their
coefficients on the right, ``f(q) = sum q^k a_k``. Heavy loops run in a
compiled Cython module when it is built and in numpy otherwise
(``slicequat.kernels.BACKEND`` tells which).
"""
from .blaschke import (
    BlaschkeFactor,
    JensenReport,
    blaschke_eval,
    boundary_table,
    evaluate_product,
    factorize,
    jensen,
    schwarz_zero_gap,
    zero_bound_check,
)
from .calculus import (
    SliceDifferentialReport,
    apply_G,
    cullen_derivative,
    delta_prime,
    delta_second,
    differential_report,
    harmonic_conjugate_poly,
    laplace_star,
    product_rule_terms,
    rotate_function,
    rotation_average,
)
from .errors import (
    BoundaryZeroError,
    DegenerateError,
    DiagonalError,
    DomainError,
    NoZeroError,
    NotHarmonicError,
    PoleError,
    PreconditionError,
    SingularityError,
    SliceQuatError,
)
from .kernels import BACKEND
from .quadrature import (
    CircleRule,
    SphereMeasure,
    VerificationReport,
    harmonicity_functional,
    mean_value,
    poisson,
    rep_coefficients,
    rep_R,
    volume_average_S3,
)
from .quaternion import (
    ImaginaryUnit,
    Quaternion,
    from_slice,
    rotate,
    sample_unit_imaginary,
    to_slice,
)
from .slicefunc import (
    SemiRegular,
    SlicePolynomial,
    StemEvaluator,
    StemPolynomial,
    conjugate,
    eval_poly,
    normal,
    reciprocal_eval,
    slice_product,
    symmetrization,
    trace,
)
from .zeros import (
    Divisor,
    classify_sphere,
    divisor_of_poly,
    divisor_semiregular,
    extract_right_factor,
    factor_linear,
    sup_modulus,
    zero_counts,
)

__version__ = "0.1.0"
