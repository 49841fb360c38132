"""Exact real-root isolation for integer polynomials, with the analysis
toolkit and random models used to study the solvers' typical behaviour."""

from rootiso.poly import (
    DyadicRational,
    IntPolynomial,
    derivative,
    evaluate,
    homothety,
    one_norm,
    reciprocal,
    sign_variations,
    squarefree_part,
    taylor_shift,
    var_on_interval,
)

__version__ = "0.1.0"
