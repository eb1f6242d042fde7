"""The odd prime log lattice, its kernel sublattices, and l1 Hermite bounds.

L_n lives in R^(n+1): row i is log(p_i) times (unit_i + unit_{n+1}), so
lattice points encode S-units and the l1 norm of a point is twice the log
height of its S-unit.  Adjoining [0, ..., 0, n^3] gives the full-rank
variants used for volume and short-vector work.  Everything is stored as
fixed-point integers (scale 2^precision), so determinants and norm
comparisons are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .fixed import DEFAULT_PRECISION, fixed_to_float
from .modgroup import kernel_basis
from .primes import PrimeBasis

__all__ = [
    "EmbeddedLattice",
    "DeltaBound",
    "build_lattice",
    "embed_exponents",
    "l1_norm",
    "height_of",
    "check_height_lemma",
    "HeightLemmaReport",
    "lattice_volume",
    "check_size_lemma",
    "SizeLemmaReport",
    "delta_bound",
    "delta_asymptotic_opt",
    "kappa_constant",
    "rankin_value",
]


# --------------------------------------------------------------------------
# embedded lattices

@dataclass(frozen=True)
class EmbeddedLattice:
    """Fixed-point basis of L_n / L_{n,m}, optionally made full rank.

    exponent_rows maps each basis row back to integer exponents on
    p_1..p_n plus the coefficient of the adjoined row, so every basis
    vector is exactly recoverable as an S-unit.
    """

    prime_basis: PrimeBasis
    m: int | None
    full_rank: bool
    exponent_rows: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.prime_basis.n

    @property
    def precision(self) -> int:
        return self.prime_basis.precision

    @property
    def nrows(self) -> int:
        return len(self.basis)


def embed_exponents(e, basis: PrimeBasis) -> tuple[int, ...]:
    """Fixed-point coordinates of sum(e_i b_i) + e_{n+1} [0,...,0,n^3].

    e has length n (kernel vectors) or n+1 (with the adjoined coefficient).
    """
    n = basis.n
    if len(e) not in (n, n + 1):
        raise ValueError("exponent vector has wrong length")
    coords = [ei * li for ei, li in zip(e, basis.logs)]
    last = sum(coords)
    if len(e) == n + 1 and e[n]:
        last += e[n] * n**3 << basis.precision
    coords.append(last)
    return tuple(coords)


def build_lattice(
    basis: PrimeBasis, m: int | None = None, full_rank: bool = False
) -> EmbeddedLattice:
    """L_n (m absent) or the kernel sublattice L_{n,m}, embedded."""
    n = basis.n
    if m is None:
        exp_rows = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    else:
        exp_rows = [list(r) for r in kernel_basis(basis, m).rows]
    exp_rows = [r + [0] for r in exp_rows]
    if full_rank:
        exp_rows.append([0] * n + [1])
    rows = tuple(embed_exponents(tuple(r), basis) for r in exp_rows)
    return EmbeddedLattice(
        prime_basis=basis,
        m=m,
        full_rank=full_rank,
        exponent_rows=tuple(tuple(r) for r in exp_rows),
        basis=rows,
    )


def l1_norm(v) -> int:
    """Exact l1 norm of a fixed-point vector."""
    return sum(abs(x) for x in v)


# --------------------------------------------------------------------------
# heights

def height_of(e, basis: PrimeBasis) -> tuple[int, int, int]:
    """(p, q, h) with prod p_i^{e_i} = p/q in lowest terms, h = max(p, q)."""
    p = q = 1
    for prime, k in zip(basis.primes, e):
        if k > 0:
            p *= prime**k
        elif k < 0:
            q *= prime ** (-k)
    return p, q, max(p, q)


def two_log_height_fixed(h: int, precision: int) -> int:
    """2*ln(h) as a fixed-point integer, for arbitrarily large h."""
    if h == 1:
        return 0
    with mpmath.workprec(precision + 48 + h.bit_length().bit_length()):
        return int(mpmath.nint(mpmath.ldexp(2 * mpmath.ln(h), precision)))


@dataclass(frozen=True)
class HeightLemmaReport:
    """Compares ||embed(e)||_1 with 2 log h(p/q); they agree identically,
    so the difference only reflects fixed-point rounding of the logs."""

    l1: int
    two_log_h: int
    precision: int

    @property
    def difference(self) -> int:
        return self.l1 - self.two_log_h

    @property
    def difference_value(self) -> float:
        return fixed_to_float(self.difference, self.precision)


def check_height_lemma(e, basis: PrimeBasis) -> HeightLemmaReport:
    lhs = l1_norm(embed_exponents(tuple(e), basis))
    _, _, h = height_of(e, basis)
    rhs = two_log_height_fixed(h, basis.precision)
    return HeightLemmaReport(l1=lhs, two_log_h=rhs, precision=basis.precision)


# --------------------------------------------------------------------------
# volume and the adjoined-row size bound

def _bareiss_det(mat: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    a = [list(r) for r in mat]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def lattice_volume(lattice: EmbeddedLattice) -> Fraction:
    """|det| of a full-rank embedded basis, as an exact rational."""
    if not lattice.full_rank:
        raise ValueError("volume is only defined here for full-rank lattices")
    det = _bareiss_det([list(r) for r in lattice.basis])
    n1 = lattice.nrows
    return Fraction(abs(det), 1 << (lattice.precision * n1))


@dataclass(frozen=True)
class SizeLemmaReport:
    l1: int
    floor: int

    @property
    def holds(self) -> bool:
        return self.l1 >= self.floor


def check_size_lemma(e, lattice: EmbeddedLattice) -> SizeLemmaReport:
    """||embed(e)||_1 >= n^3 |e_{n+1}|, exactly in fixed point."""
    if not lattice.full_rank:
        raise ValueError("the size bound concerns the full-rank lattice")
    basis = lattice.prime_basis
    v = embed_exponents(tuple(e), basis)
    floor = abs(e[basis.n]) * basis.n**3 << basis.precision
    return SizeLemmaReport(l1=l1_norm(v), floor=floor)


# --------------------------------------------------------------------------
# l1 Hermite constant bounds

METHODS = ("minkowski", "blichfeldt", "rankin", "rankin_opt", "mh_lower")


@dataclass(frozen=True)
class DeltaBound:
    """A bound on delta_n, the l1 analogue of the Hermite constant."""

    n: int
    method: str
    x: float | None
    value: float


def rankin_value(n: int, x: float) -> float:
    """Rankin's two-parameter upper bound on delta_n, x in [1/2, 1]."""
    if not 0.5 <= x <= 1.0:
        raise ValueError("rankin parameter x must lie in [1/2, 1]")
    if x == 1.0:
        lead = 1.0  # ((2-x)/(1-x))^(x-1) -> 1 as x -> 1
    else:
        lead = math.exp((x - 1.0) * math.log((2.0 - x) / (1.0 - x)))
    mid = math.exp((math.log((1.0 + x * n) / x) + math.lgamma(x * n + 1.0)) / n)
    tail = math.exp((1.0 - x) * math.log(n))
    return lead * mid * tail / math.gamma(x + 1.0)


def _minkowski(n: int) -> float:
    return math.exp(math.lgamma(n + 1.0) / n)


def _blichfeldt(n: int) -> float:
    lead = math.sqrt(4.0 * (n + 1) * (n + 2) / (3.0 * math.pi * (n + 3)))
    mid = math.exp((math.log(2.0 * (n + 1) / (n + 3)) + math.lgamma(n / 2.0 + 2.0)) / n)
    return lead * mid


def _mh_lower(n: int) -> float:
    zeta = float(mpmath.zeta(n))
    return math.exp((math.log(zeta) + math.lgamma(n + 1.0)) / n) / 2.0


def _golden_min(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def _rankin_opt(n: int) -> tuple[float, float]:
    grid = 10**-4
    steps = round(0.5 / grid)
    best_i, best_v = 0, float("inf")
    for i in range(steps + 1):
        v = rankin_value(n, 0.5 + i * grid)
        if v < best_v:
            best_i, best_v = i, v
    lo = 0.5 + max(0, best_i - 1) * grid
    hi = 0.5 + min(steps, best_i + 1) * grid
    x, v = _golden_min(lambda t: rankin_value(n, t), lo, hi, 1e-10)
    if v > best_v:
        x, v = 0.5 + best_i * grid, best_v
    return x, v


def delta_bound(n: int, method: str, x: float | None = None) -> DeltaBound:
    """Evaluate one member of the delta_n bound family at dimension n.

    minkowski/blichfeldt/rankin/rankin_opt are upper bounds; mh_lower is
    the Minkowski-Hlawka existence lower bound.  Each upper bound is
    sanity-checked against mh_lower at the same n.
    """
    if n < 2:
        raise ValueError("bounds are computed for n >= 2")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    x_out: float | None = None
    if method == "minkowski":
        value = _minkowski(n)
    elif method == "blichfeldt":
        value = _blichfeldt(n)
    elif method == "rankin":
        if x is None:
            raise ValueError("method 'rankin' needs the parameter x")
        value = rankin_value(n, x)
        x_out = x
    elif method == "rankin_opt":
        x_out, value = _rankin_opt(n)
    else:
        value = _mh_lower(n)
    if value <= 0:
        raise AssertionError("bound evaluation produced a nonpositive value")
    if method != "mh_lower" and value < _mh_lower(n):
        raise AssertionError(f"{method} bound at n={n} dips below the lower bound")
    return DeltaBound(n=n, method=method, x=x_out, value=value)


# --------------------------------------------------------------------------
# the asymptotic constant and the merit exponent

def delta_objective(x: float) -> float:
    """((1-x)/(2-x))^(x-1) (e/x)^x x!, to be maximized on [1/2, 1]."""
    if not 0.5 <= x <= 1.0:
        raise ValueError("objective domain is [1/2, 1]")
    if x == 1.0:
        lead = 1.0
    else:
        lead = math.exp((x - 1.0) * math.log((1.0 - x) / (2.0 - x)))
    return lead * math.exp(x * (1.0 - math.log(x))) * math.gamma(x + 1.0)


def delta_asymptotic_opt() -> tuple[float, float]:
    """Maximize the asymptotic delta objective; returns (x_star, delta).

    A coarse grid locates the maximum and doubles as a unimodality check;
    golden-section refines x well below the 1e-6 target.
    """
    grid = [0.5 + i * 1e-3 for i in range(501)]
    vals = [delta_objective(t) for t in grid]
    k = max(range(len(vals)), key=vals.__getitem__)
    rising = all(vals[i] < vals[i + 1] for i in range(k))
    falling = all(vals[i] > vals[i + 1] for i in range(k, len(vals) - 1))
    if not (rising and falling):
        raise AssertionError("delta objective is not unimodal on the grid")
    lo = grid[max(0, k - 1)]
    hi = grid[min(len(grid) - 1, k + 1)]
    x, v = _golden_min(lambda t: -delta_objective(t), lo, hi, 1e-9)
    return x, -v


def kappa_constant(delta: float) -> float:
    """The merit exponent 4 sqrt(2 delta / e)."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return 4.0 * math.sqrt(2.0 * delta / math.e)
