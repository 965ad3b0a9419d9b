"""disclab: exact discrepancy solvers, lower-bound certification, and
group fair-division tooling built on rational arithmetic."""

from .errors import (
    CapExceededError,
    DimensionMismatchError,
    DisclabError,
    InputError,
    VerificationError,
)
from .rational import Rational, format_rational, parse_rational, pos_part, sqrt_lower, sqrt_upper
from .matrices import (
    RatMatrix,
    SignMatrix,
    hadamard_sylvester,
    lift_w,
    stack_horizontal,
    stack_vertical,
    transfer_z,
)
from .solvers import (
    OdiscResult,
    OracleConfig,
    WdiscResult,
    eval_asymmetric,
    eval_weighted,
    odisc_exact,
    oracle_solve,
    wdisc_exact,
    wdisc_heuristic,
)
from .lower_bounds import (
    CertReport,
    StackedConstruction,
    build_stacked,
    certify_multicolor_lb,
    certify_wdisc_lb,
    check_hadamard_lemma,
    lb_value,
)
from .recursive_coloring import (
    RecursionCertificate,
    RecursionConfig,
    odisc_color,
    reference_bound,
)
from .fairdiv import (
    AgentScaling,
    Allocation,
    FairDivInstance,
    FairnessNotion,
    allocate_prop_via_odisc,
    brute_force_min_c,
    check_fairness,
    check_lemma_prop_to_disc,
    gen_cd_instance,
    gen_ef_lb_instance,
    gen_prop_lb_instance,
    min_c_for_allocation,
)

__version__ = "0.1.0"

__all__ = [
    "AgentScaling",
    "Allocation",
    "CapExceededError",
    "CertReport",
    "DimensionMismatchError",
    "DisclabError",
    "FairDivInstance",
    "FairnessNotion",
    "InputError",
    "OdiscResult",
    "OracleConfig",
    "RatMatrix",
    "Rational",
    "RecursionCertificate",
    "RecursionConfig",
    "SignMatrix",
    "StackedConstruction",
    "VerificationError",
    "WdiscResult",
    "allocate_prop_via_odisc",
    "brute_force_min_c",
    "build_stacked",
    "certify_multicolor_lb",
    "certify_wdisc_lb",
    "check_fairness",
    "check_hadamard_lemma",
    "check_lemma_prop_to_disc",
    "eval_asymmetric",
    "eval_weighted",
    "format_rational",
    "gen_cd_instance",
    "gen_ef_lb_instance",
    "gen_prop_lb_instance",
    "hadamard_sylvester",
    "lb_value",
    "lift_w",
    "min_c_for_allocation",
    "odisc_color",
    "odisc_exact",
    "oracle_solve",
    "parse_rational",
    "pos_part",
    "sqrt_lower",
    "sqrt_upper",
    "stack_horizontal",
    "stack_vertical",
    "transfer_z",
    "wdisc_exact",
    "wdisc_heuristic",
]
