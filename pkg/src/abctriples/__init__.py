"""Exceptional abc triples from short l1 vectors in prime-log lattices.

The pipeline: pick the first n odd primes, pass to the kernel sublattice
of exponent vectors whose S-unit is 1 mod 2^m, embed it as a full-rank
fixed-point lattice, find a short l1 vector, and read off an abc triple
whose c is provably large relative to rad(abc).  The bound machinery
reproduces the l1 Hermite-constant optimum (about 3.65931) and the merit
exponent 4 sqrt(2 delta / e) (about 6.56338).
"""

from .fixed import DEFAULT_PRECISION, fixed_to_float
from .lattice import (
    DeltaBound,
    EmbeddedLattice,
    build_lattice,
    check_height_lemma,
    check_size_lemma,
    delta_asymptotic_opt,
    delta_bound,
    embed_exponents,
    height_of,
    kappa_constant,
    l1_norm,
    lattice_volume,
    rankin_value,
)
from .modgroup import KernelBasis, UnitDlog, kernel_basis, order_mod, unit_dlog
from .primes import (
    FactorBudget,
    Factorization,
    PrimeBasis,
    SumLemmaReport,
    UnfactoredCofactorError,
    check_log_sum_lemma,
    check_loglog_sum_lemma,
    factorize,
    gen_primes,
    is_probable_prime,
    log_integral,
    prime_pi,
)
from .reduction import (
    NoVectorInRadiusError,
    PrecisionExhaustedError,
    ShortVectorResult,
    full_l1_minimum,
    lll_reduce,
    reduce_rows,
    shortest_l1,
)
from .triples import (
    AbcTriple,
    BoundReport,
    SearchRow,
    TripleQuality,
    choose_m,
    construct_triple,
    radical,
    score,
    search,
    target_radius,
    verify_lemma_bounds,
)

__version__ = "0.1.0"
