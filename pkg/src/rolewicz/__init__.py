"""Exact chaos certificates and transitivity witnesses for operators
``lam * sum c_i T_{f_i}`` on l_p, where ``T_f x = (x_{f(1)}, x_{f(2)}, ...)``."""

__version__ = "0.1.0"

from .certify import Certificate, Verdict, certify, lambda_threshold, sample_coefficients  # noqa: E402
from .errors import (  # noqa: E402
    BudgetExceeded,
    CertificationError,
    ConfigError,
    ExactnessError,
    FamilyError,
    NonZeroConditionViolation,
    RolewiczError,
)
from .maps import (  # noqa: E402
    Affine,
    CeilPair,
    Family,
    Interleaved,
    PatchedTable,
    Shift,
    ceil_family,
    counterexample_family,
    interleaved_family,
    make_family,
    pairing,
    shift_family,
    unpair,
)
from .operator import OperatorSpec, apply, iterate, iterate_via_words  # noqa: E402
from .scalars import Q, SparseSeq, rational  # noqa: E402
from .witness import build_periodic, build_witness, verify_witness  # noqa: E402
from .words import compute_gamma, enumerate_classes  # noqa: E402

__all__ = [
    "Affine", "BudgetExceeded", "CeilPair", "Certificate", "CertificationError", "ConfigError",
    "ExactnessError", "Family", "FamilyError", "Interleaved", "NonZeroConditionViolation",
    "OperatorSpec", "PatchedTable", "Q", "RolewiczError", "Shift", "SparseSeq", "Verdict",
    "apply", "build_periodic", "build_witness", "ceil_family", "certify", "compute_gamma",
    "counterexample_family", "enumerate_classes", "interleaved_family", "iterate",
    "iterate_via_words", "lambda_threshold", "make_family", "pairing", "rational",
    "sample_coefficients", "shift_family", "unpair", "verify_witness",
]
