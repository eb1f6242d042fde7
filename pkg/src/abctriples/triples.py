"""Construct and score abc triples from short kernel vectors.

A kernel vector e gives an S-unit p/q == 1 mod 2^m.  With c = max(p, q)
and b = min(p, q), the difference a = c - b is divisible by 2^m, which is
what makes c large relative to rad(abc).  The modulus exponent m is tuned
from the target radius R = e p_n^2 / delta and a scan around that value
covers the unknown lower-order terms.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import mpmath

from .fixed import DEFAULT_PRECISION
from .lattice import build_lattice, height_of
from .primes import FactorBudget, DEFAULT_BUDGET, PrimeBasis, UnfactoredCofactorError, factorize, gen_primes
from .reduction import (
    EXACT_DIMENSION_LIMIT,
    NoVectorInRadiusError,
    PrecisionExhaustedError,
    shortest_l1,
)

__all__ = [
    "AbcTriple",
    "TripleQuality",
    "Provenance",
    "BoundReport",
    "SearchRow",
    "MERIT_MIN_C",
    "radical",
    "score",
    "construct_triple",
    "verify_lemma_bounds",
    "choose_m",
    "target_radius",
    "scan_values",
    "search",
]

MERIT_MIN_C = 16  # below this, log log c <= 1 and the merit form degenerates


@dataclass(frozen=True)
class Provenance:
    n: int
    m: int
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class AbcTriple:
    """Coprime a + b = c, stored with a <= b for display."""

    a: int
    b: int
    c: int
    provenance: Provenance | None = None

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise ValueError("triple components must be positive")
        if self.a + self.b != self.c:
            raise ValueError("not additive: a + b != c")
        if math.gcd(self.a, self.b) != 1:
            raise ValueError("triple components share a factor")


@dataclass(frozen=True)
class TripleQuality:
    """radical, quality q = log c / log rad, and the merit exponent.

    merit is the unique kappa with c = rad * exp(kappa sqrt(log c)/log log c);
    it is None when c < 16, where the form degenerates.
    """

    radical: int
    quality: float
    merit: float | None


def radical(t: AbcTriple, budget: FactorBudget = DEFAULT_BUDGET) -> int:
    """Product of the distinct primes dividing a*b*c."""
    primes: set[int] = set()
    for part in (t.a, t.b, t.c):
        for p, _ in factorize(part, budget).factors:
            primes.add(p)
    out = 1
    for p in primes:
        out *= p
    return out


def score(t: AbcTriple, budget: FactorBudget = DEFAULT_BUDGET) -> TripleQuality:
    rad = radical(t, budget)
    log_c = math.log(t.c)
    quality = log_c / math.log(rad)
    merit = None
    if t.c >= MERIT_MIN_C:
        merit = (log_c - math.log(rad)) * math.log(log_c) / math.sqrt(log_c)
    return TripleQuality(radical=rad, quality=quality, merit=merit)


def construct_triple(e, basis: PrimeBasis, m: int) -> AbcTriple:
    """Triple from a kernel exponent vector: c = h(p/q), b = min(p, q).

    The congruence c == b (mod 2^m) is asserted; failing it means e was
    not actually a kernel vector.
    """
    e = tuple(e[: basis.n])
    if not any(e):
        raise ValueError("the zero vector yields no triple")
    p, q, h = height_of(e, basis)
    if (p - q) % (1 << m) != 0:
        raise ValueError(f"exponents are not in the kernel modulo 2^{m}")
    c = h
    b0 = min(p, q)
    a0 = c - b0
    if math.gcd(a0, b0) != 1:
        raise AssertionError("constructed components are not coprime")
    lo, hi = sorted((a0, b0))
    return AbcTriple(a=lo, b=hi, c=c, provenance=Provenance(basis.n, m, e))


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: str
    rhs: str
    holds: bool


@dataclass(frozen=True)
class BoundReport:
    checks: tuple[BoundCheck, ...]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)


def verify_lemma_bounds(
    t: AbcTriple,
    basis: PrimeBasis,
    m: int,
    l1_value: float,
    budget: FactorBudget = DEFAULT_BUDGET,
) -> BoundReport:
    """The four construction bounds, checked exactly where they are exact.

    (i)   2^(m-1) rad(abc) <= c * prod(p_i)        [integer comparison]
    (ii)  2 log c <= R, with R the vector's l1 norm [equality up to rounding]
    (iii) rad(even part) <= c / 2^(m-1)             [integer comparison]
    (iv)  rad(S-unit pair) <= prod(p_i)             [integer comparison]
    """
    if t.provenance is None:
        raise ValueError("bound checks need the kernel provenance")
    e = t.provenance.exponents
    p, q, c = height_of(e, basis)
    b0 = min(p, q)
    a0 = c - b0

    prod_p = 1
    for pi in basis.primes:
        prod_p *= pi
    rad_smooth = 1
    for pi, ei in zip(basis.primes, e):
        if ei:
            rad_smooth *= pi
    rad_even = factorize(a0, budget).radical()
    rad_abc = rad_even * rad_smooth  # a0 is coprime to the smooth pair

    checks = []
    lhs_i = (1 << (m - 1)) * rad_abc
    rhs_i = c * prod_p
    checks.append(
        BoundCheck("radical_vs_c", f"2^(m-1) rad(abc) = {lhs_i}", f"c prod p = {rhs_i}", lhs_i <= rhs_i)
    )
    with mpmath.workprec(64 + c.bit_length().bit_length() * 8):
        two_log_c = float(2 * mpmath.ln(c))
    checks.append(
        BoundCheck(
            "height_vs_l1",
            f"2 log c = {two_log_c!r}",
            f"l1 = {l1_value!r}",
            two_log_c <= l1_value * (1 + 1e-9) + 1e-9,
        )
    )
    lhs_iii = rad_even << (m - 1)
    checks.append(
        BoundCheck("even_part_radical", f"2^(m-1) rad(a) = {lhs_iii}", f"c = {c}", lhs_iii <= c)
    )
    checks.append(
        BoundCheck(
            "smooth_pair_radical", f"rad(bc) = {rad_smooth}", f"prod p = {prod_p}", rad_smooth <= prod_p
        )
    )
    return BoundReport(checks=tuple(checks))


# --------------------------------------------------------------------------
# choosing the modulus exponent

def target_radius(basis: PrimeBasis, delta: float) -> float:
    """R = e p_n^2 / delta, the norm budget the construction aims for."""
    return math.e * basis.primes[-1] ** 2 / delta


def choose_m(basis: PrimeBasis, delta: float) -> int:
    """The m whose kernel determinant makes the norm bound hit R.

    Solves 2^(m-1) n^3 prod(log p_i) = (delta R / (n+1))^(n+1) and rounds;
    the O(log n) slack in the norm bound is taken as zero, which the scan
    strategy compensates for.
    """
    n = basis.n
    if n < 2:
        raise ValueError("choose_m needs n >= 2")
    r = target_radius(basis, delta)
    log2_val = (n + 1) * math.log2(delta * r / (n + 1))
    log2_val -= 3 * math.log2(n)
    log2_val -= sum(math.log2(math.log(p)) for p in basis.primes)
    return max(1, round(1 + log2_val))


def scan_values(basis: PrimeBasis, delta: float, width: int) -> list[int]:
    center = choose_m(basis, delta)
    return sorted({max(1, center + d) for d in range(-width, width + 1)})


# --------------------------------------------------------------------------
# the search table

DELTA_DEFAULT = 3.65931


@dataclass(frozen=True)
class SearchRow:
    n: int
    m: int
    triple: AbcTriple | None
    radical: int | None
    quality: float | None
    merit: float | None
    l1: float | None
    exponents: tuple[int, ...] | None
    exact: bool
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _error_code(exc: Exception) -> str:
    if isinstance(exc, UnfactoredCofactorError):
        return "unfactored_cofactor"
    if isinstance(exc, PrecisionExhaustedError):
        return "precision_exhausted"
    if isinstance(exc, NoVectorInRadiusError):
        return "no_vector_in_radius"
    return "construction_failed"


def _run_cell(args) -> SearchRow:
    n, m, mode, precision, budget = args
    basis = gen_primes(n, precision)
    exact = mode == "exact"
    try:
        if exact and n + 1 > EXACT_DIMENSION_LIMIT:
            raise ValueError("exact mode unavailable at this dimension")
        lat = build_lattice(basis, m=m, full_rank=True)
        vec = shortest_l1(lat, mode)
        t = construct_triple(vec.exponents, basis, m)
        q = score(t, budget)
        return SearchRow(
            n=n,
            m=m,
            triple=t,
            radical=q.radical,
            quality=q.quality,
            merit=q.merit,
            l1=vec.l1,
            exponents=vec.exponents[: basis.n],
            exact=vec.exact,
        )
    except ValueError as exc:
        if "exact mode" not in str(exc):
            raise
        return SearchRow(n, m, None, None, None, None, None, None, exact, "exact_mode_unavailable")
    except (UnfactoredCofactorError, PrecisionExhaustedError, NoVectorInRadiusError) as exc:
        return SearchRow(n, m, None, None, None, None, None, None, exact, _error_code(exc))


def _resolve_cells(n_list, m_strategy, precision) -> list[tuple[int, int]]:
    kind = m_strategy[0]
    cells: list[tuple[int, int]] = []
    for n in n_list:
        if n < 1:
            raise ValueError("n must be >= 1")
        if kind == "fixed":
            ms = list(m_strategy[1])
        elif kind == "paper_optimal":
            ms = [choose_m(gen_primes(n, precision), DELTA_DEFAULT)]
        elif kind == "scan":
            ms = scan_values(gen_primes(n, precision), DELTA_DEFAULT, int(m_strategy[1]))
        else:
            raise ValueError(f"unknown m strategy {kind!r}")
        for m in ms:
            if m < 1:
                raise ValueError("m must be >= 1")
            cells.append((n, m))
    return cells


def _row_sort_key(row: SearchRow):
    if row.ok:
        merit = row.merit if row.merit is not None else float("-inf")
        quality = row.quality if row.quality is not None else float("-inf")
        return (0, -merit, -quality, row.triple.c, row.n, row.m)
    return (1, 0.0, 0.0, 0, row.n, row.m)


def search(
    n_list,
    m_strategy,
    mode: str = "heuristic",
    precision: int = DEFAULT_PRECISION,
    budget: FactorBudget = DEFAULT_BUDGET,
    workers: int | None = None,
) -> list[SearchRow]:
    """One row per (n, m) cell, best-merit first; cell failures become
    error rows rather than aborting the table.

    m_strategy is ("fixed", iterable_of_m), ("paper_optimal",) or
    ("scan", width).  Cells are independent, so worker processes change
    nothing but wall time; assembly order is deterministic.
    """
    if mode not in ("exact", "heuristic"):
        raise ValueError(f"unknown mode {mode!r}")
    cells = _resolve_cells(n_list, m_strategy, precision)
    jobs = [(n, m, mode, precision, budget) for n, m in sorted(set(cells))]
    if workers is None:
        workers = int(os.environ.get("ABCTRIPLES_WORKERS", "1"))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell, jobs, chunksize=1))
    else:
        rows = [_run_cell(j) for j in jobs]
    return sorted(rows, key=_row_sort_key)
