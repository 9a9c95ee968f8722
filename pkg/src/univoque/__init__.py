"""Extremal shift-bounded sequences and certified smallest univoque numbers.

The package computes, with exact arithmetic and explicit certificates:

* the lexicographically least members (weak and strict) of the sets of
  sequences trapped between their bar image and themselves under shifts,
* the smallest admissible digit sequence over {0..b},
* the smallest univoque number in (b, b+1), enclosed between exact rational
  bounds together with an independent functional-identity residual check.
"""

from .words import (
    Alphabet,
    BarStream,
    ClosedFormStream,
    LexOrder,
    MorphicStream,
    Morphism,
    PeriodicStream,
    PeriodicWord,
    PeriodMinimalityError,
    ShiftedStream,
    SymbolStream,
    bar,
    fixed_point,
    istrail_morphism,
    lex_cmp,
    lex_cmp_index,
    m_closed,
    m_morphic,
    m_stream,
    minimal_period,
    shift,
    stream_from_descriptor,
    theta_universal,
    tm_eps,
)
from .gamma import (
    CheckVerdict,
    EquivalenceReport,
    GammaParams,
    HorizonError,
    SquareScan,
    Status,
    admissible_check,
    admissible_prefix_refutation,
    equivalence_crosscheck,
    gamma_member,
    gamma_strict_check,
    gamma_strict_prefix_refutation,
    phi,
    phi_iterate,
    smallest_admissible,
    smallest_gamma,
    square_free_check,
)
from .numerics import (
    BracketingError,
    CertificationError,
    Enclosure,
    Rational,
    RoundtripReport,
    UnivoqueResult,
    eval_expansion,
    functional_identity_residual,
    greedy_expansion,
    mahler_F,
    quadratic_pisot,
    smallest_univoque,
    solve_lambda,
    sqrt_enclosure,
    univoque_roundtrip,
)

__version__ = "0.1.0"
