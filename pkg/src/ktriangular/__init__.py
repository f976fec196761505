"""Exact checks for k-triangular set functions on finite power sets.

Values are exact rationals (or rational vectors under the componentwise
order); every check over an infinite quantifier runs at an explicit horizon
recorded in its certificate.
"""

__version__ = "0.1.0"

from .lattice import (
    Certificate,
    OSequence,
    Regulator,
    Vec,
    Verdict,
    d_converges,
    fremlin_combine,
    o_sequence_from_regulator,
    regulator_from_o_sequence,
    regulator_sup,
)
from .setfun import (
    FiniteAlgebra,
    SetFunction,
    check_k_triangular,
    finite_chain_check,
    is_monotone,
    make_series_setfunction,
    minimal_k,
    semivariation,
)

__all__ = [
    "__version__",
    "Certificate",
    "OSequence",
    "Regulator",
    "Vec",
    "Verdict",
    "d_converges",
    "fremlin_combine",
    "o_sequence_from_regulator",
    "regulator_from_o_sequence",
    "regulator_sup",
    "FiniteAlgebra",
    "SetFunction",
    "check_k_triangular",
    "finite_chain_check",
    "is_monotone",
    "make_series_setfunction",
    "minimal_k",
    "semivariation",
]
