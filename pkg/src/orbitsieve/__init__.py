"""Thin-group orbit enumeration, exact local sums, and a sieve harness
for Pythagorean hypotenuses."""

from .algebra import (
    BASE_POINT,
    Mat2,
    Mat3,
    QForm,
    Triple,
    form_f,
    frobenius_norm_sq,
    mat_mul,
    qform_eval,
    qform_of,
    spin,
    triple_of,
)
from .almostprime import (
    Factorization,
    HypotenuseRecord,
    OrbitClassification,
    classification_to_csv,
    classify_orbit,
    factor,
    is_prime,
    is_r_almost_prime,
)
from .congruence import (
    AdmissibleModulus,
    StrongApproxResult,
    admissible_moduli,
    bad_modulus,
    bad_primes,
    closure_mod,
    is_admissible,
    is_squarefree,
    orbit_mod_q,
    prime_factors,
    primes_up_to,
    quotient_size,
    reduce_mod,
    sl2_order,
    strong_approx_check,
)
from .cyclotomic import ComplexExact, cyclotomic_poly
from .errors import BudgetExceededError
from .localsums import (
    LocalRational,
    beta,
    dispersion_expand,
    dispersion_identity_holds,
    joint_primitive_zeros,
    rho1,
    rho1_bruteforce,
    rho1_closed,
    rho_bar,
    s1,
    s1_many,
    s2,
    s2_bound_holds,
    s3_direct,
    s3_factorization_check,
    s4_bruteforce,
    s4_closed,
    s4_grid_check,
    s5_bruteforce,
    xi,
)
from .orbits import (
    BallResult,
    GroupSpec,
    HyperbolicityReport,
    ProductBallSpec,
    ball_to_csv,
    check_hyperbolicity,
    default_group,
    dyadic_counts,
    enumerate_ball,
    estimate_delta,
    load_group,
    product_ball,
    sample_forms,
    word_to_mat,
)
from .sieve import (
    GREAVES_R4_THRESHOLD,
    ExponentParams,
    InequalityCheck,
    SieveReport,
    SieveRow,
    SieveSequence,
    build_sequence,
    feasibility_check,
    greaves_threshold,
    mass_mod,
    recentred_mass,
    report_to_csv,
    sieve_report,
)

__version__ = "0.1.0"
