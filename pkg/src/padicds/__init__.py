"""Exact p-adic and real approximation sets, their measures, and a seeded
Monte Carlo cross-check."""

from .padic_core import (
    BallUnion,
    PAdicBall,
    PAdicDomainError,
    PrecisionError,
    annulus,
    ball_around,
    normalize,
    padic_abs,
    snap_radius,
    valuation,
)
from .psi import (
    PsiSpec,
    kn,
    make_constant,
    make_psi_k,
    make_psi_prime,
    make_psi_prime_k,
    make_psi_x,
    make_table,
    restrict_coprime,
    scale,
)
from .padic_sets import (
    build_A,
    build_B,
    limsup_ladder,
    measure_A,
    measure_B,
    predicted_spectrum_set,
    window_union,
)
from .real_sets import IntervalUnion, build_A_inf, find_NK, intersect_measure, qia_statistic

__version__ = "0.1.0"
