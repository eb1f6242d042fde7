"""Prime generation, counting, factoring and the logarithmic integral.

Also houses numerical residual reports for the two prime-sum estimates
(sum of log p_i and sum of log log p_i over the first n odd primes)
used by the triple pipeline's asymptotic bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fixed import DEFAULT_PRECISION, ln_fixed

__all__ = [
    "PrimeBasis",
    "Factorization",
    "FactorBudget",
    "UnfactoredCofactorError",
    "gen_primes",
    "prime_pi",
    "log_integral",
    "factorize",
    "is_probable_prime",
    "check_log_sum_lemma",
    "check_loglog_sum_lemma",
    "SumLemmaReport",
]

EULER_GAMMA = 0.5772156649015328606065


class UnfactoredCofactorError(ArithmeticError):
    """Raised when a cofactor survives the configured factoring effort."""


# --------------------------------------------------------------------------
# sieving and prime counting

_sieve_limit = 0
_sieve = bytearray()


def _ensure_sieve(limit: int) -> None:
    global _sieve_limit, _sieve
    if limit <= _sieve_limit:
        return
    limit = max(limit, 2 * _sieve_limit, 1 << 12)
    s = bytearray([1]) * (limit + 1)
    s[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if s[p]:
            start = p * p
            s[start :: p] = bytearray(len(range(start, limit + 1, p)))
    _sieve_limit, _sieve = limit, s


def _primes_upto(limit: int) -> list[int]:
    _ensure_sieve(limit)
    return [i for i in range(2, limit + 1) if _sieve[i]]


def prime_pi(x) -> int:
    """Exact number of primes <= x (2 included)."""
    if x < 0:
        raise ValueError("prime_pi requires x >= 0")
    limit = math.floor(x)
    if limit < 2:
        return 0
    _ensure_sieve(limit)
    return sum(_sieve[2 : limit + 1])


def _first_odd_primes(n: int) -> list[int]:
    # Need the (n+1)-th prime; p_k < k (ln k + ln ln k) for k >= 6.
    k = n + 1
    bound = 15 if k < 6 else int(k * (math.log(k) + math.log(math.log(k))) * 1.2) + 10
    while True:
        ps = _primes_upto(bound)
        if len(ps) >= n + 1:
            return ps[1 : n + 1]
        bound *= 2


# --------------------------------------------------------------------------
# prime basis

@dataclass(frozen=True)
class PrimeBasis:
    """The first n odd primes with fixed-point natural logs (p_1 = 3)."""

    n: int
    primes: tuple[int, ...]
    logs: tuple[int, ...]
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.n < 1 or len(self.primes) != self.n or len(self.logs) != self.n:
            raise ValueError("inconsistent prime basis")

    @property
    def float_logs(self) -> tuple[float, ...]:
        return tuple(math.log(p) for p in self.primes)


def gen_primes(n: int, precision: int = DEFAULT_PRECISION) -> PrimeBasis:
    """First n odd primes plus their logs at `precision` fraction bits."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ps = _first_odd_primes(n)
    logs = tuple(ln_fixed(p, precision) for p in ps)
    return PrimeBasis(n=n, primes=tuple(ps), logs=logs, precision=precision)


# --------------------------------------------------------------------------
# logarithmic integral

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _gl_panel(f, a: float, b: float) -> float:
    h = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return h * float(sum(w * f(mid + h * t) for t, w in zip(_GL_NODES, _GL_WEIGHTS)))


def _adaptive_gl(f, a: float, b: float, tol: float, depth: int = 0) -> float:
    whole = _gl_panel(f, a, b)
    mid = 0.5 * (a + b)
    halves = _gl_panel(f, a, mid) + _gl_panel(f, mid, b)
    if depth > 40 or abs(halves - whole) <= tol * max(1.0, abs(halves)):
        return halves
    return _adaptive_gl(f, a, mid, tol, depth + 1) + _adaptive_gl(f, mid, b, tol, depth + 1)


def _pv_pair(u: float) -> float:
    # 1/ln(1+u) + 1/ln(1-u); the 1/u poles cancel symmetrically about t = 1.
    if u >= 1.0:
        return 1.0 / math.log(2.0)
    if u < 1e-5:
        return 1.0 + u * u / 12.0
    return 1.0 / math.log1p(u) + 1.0 / math.log1p(-u)


_PV_LI2: float | None = None


def _li_series(x: float) -> float:
    lx = math.log(x)
    total = EULER_GAMMA + math.log(lx)
    term = 1.0
    acc = 0.0
    for k in range(1, 400):
        term *= lx / k
        delta = term / k
        acc += delta
        if abs(delta) <= 1e-18 * max(1.0, abs(acc)):
            break
    return total + acc


def log_integral(x) -> float:
    """Principal-value li(x) = PV int_0^x dt/ln t, for x > 1.

    Series evaluation below 10, elsewhere symmetric principal-value
    quadrature across t = 1 plus adaptive Gauss-Legendre on [2, x].
    """
    x = float(x)
    if not x > 1.0:
        raise ValueError("log_integral requires x > 1")
    if x < 10.0:
        return _li_series(x)
    global _PV_LI2
    if _PV_LI2 is None:
        _PV_LI2 = _adaptive_gl(_pv_pair, 0.0, 1.0, 1e-13)
    return _PV_LI2 + _adaptive_gl(lambda t: 1.0 / math.log(t), 2.0, x, 1e-13)


# --------------------------------------------------------------------------
# primality and factoring

# Sufficient deterministic Miller-Rabin bases below 3.317e24; above that the
# same bases give a strong probable-prime verdict (deterministic output, not
# a certificate).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactorBudget:
    """Effort limits for factorize; defaults cover any 64-bit input.

    rho_iterations is a word-scaled time budget: the allowance for an
    N-word composite is rho_iterations / N^2, so wide cofactors fail fast
    instead of burning minutes on big-integer cycle finding.
    """

    trial_limit: int = 4096
    rho_iterations: int = 1 << 21
    rho_attempts: int = 24
    cofactor_bits: int = 2048


DEFAULT_BUDGET = FactorBudget()


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError("factors must be strictly increasing prime powers")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError("factorization does not recompose to value")

    def radical(self) -> int:
        r = 1
        for p, _ in self.factors:
            r *= p
        return r


def _brent_rho(n: int, x0: int, c: int, max_iters: int) -> tuple[int | None, int]:
    # Brent cycle detection with gcd batching; returns (factor, iterations).
    y, r, q = x0 % n, 1, 1
    g, x, ys = 1, y, y
    spent = 0
    while g == 1 and spent < max_iters:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            steps = min(128, r - k)
            for _ in range(steps):
                y = (y * y + c) % n
                q = q * (x - y) % n
            g = math.gcd(q, n)
            k += steps
            spent += steps
        r <<= 1
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return (g if 1 < g < n else None), spent


def _split(n: int, budget: FactorBudget) -> int:
    # Deterministic parameter schedule derived from n, reproducible anywhere.
    words = max(1, (n.bit_length() + 63) // 64)
    allowance = max(512, budget.rho_iterations // (words * words))
    spent = 0
    for k in range(budget.rho_attempts):
        if spent >= allowance:
            break
        c = 1 + ((n >> (k % 23)) + 37 * k) % 65536
        x0 = 2 + k * k
        d, used = _brent_rho(n, x0, c, allowance - spent)
        spent += max(used, 1)
        if d is not None:
            return d
    raise UnfactoredCofactorError(
        f"no factor of a {n.bit_length()}-bit composite within the rho budget"
    )


def _remove_factor(v: int, p: int) -> tuple[int, int]:
    """(v / p^e, e) with p no longer dividing the quotient.

    Squares the divisor as long as it divides, so smooth numbers with
    million-bit prime powers strip in O(log e) big divisions instead of e.
    """
    if v % p:
        return v, 0
    v //= p
    v, k = _remove_factor(v, p * p)
    e = 1 + 2 * k
    if v % p == 0:
        v //= p
        e += 1
    return v, e


def factorize(v: int, budget: FactorBudget = DEFAULT_BUDGET) -> Factorization:
    """Complete factorization of v >= 1, or UnfactoredCofactorError.

    Trial division by primes up to budget.trial_limit, then Brent's rho on
    what remains.  Cofactors wider than budget.cofactor_bits are rejected
    up front rather than burning the rho budget on them.
    """
    if v < 1:
        raise ValueError("factorize requires v >= 1")
    found: dict[int, int] = {}
    rest = v
    for p in _primes_upto(budget.trial_limit):
        if p * p > rest:
            break
        if rest % p == 0:
            rest, e = _remove_factor(rest, p)
            found[p] = e
    stack = [rest] if rest > 1 else []
    while stack:
        t = stack.pop()
        if t == 1:
            continue
        # size gate first: even a primality test is unaffordable when the
        # cofactor is far beyond the budget
        if t.bit_length() > budget.cofactor_bits:
            raise UnfactoredCofactorError(
                f"cofactor of {t.bit_length()} bits exceeds the budget"
            )
        if is_probable_prime(t):
            found[t] = found.get(t, 0) + 1
            continue
        d = _split(t, budget)
        stack.append(d)
        stack.append(t // d)
    return Factorization(value=v, factors=tuple(sorted(found.items())))


# --------------------------------------------------------------------------
# prime-sum residual reports

@dataclass(frozen=True)
class SumLemmaReport:
    """LHS/RHS of a prime-sum estimate and its normalized residual.

    normalized = (lhs - rhs) * ln(p_n)**3 / p_n, the finite-scale shadow of
    the O(p_n / ln^3 p_n) remainder.  Report only; no pass/fail here.
    """

    n: int
    p_n: int
    lhs: float
    rhs: float
    residual: float
    normalized: float


def _sum_report(n: int, term) -> tuple[list[int], float]:
    if n < 2:
        raise ValueError("residual reports need n >= 2")
    ps = _first_odd_primes(n)
    return ps, math.fsum(term(p) for p in ps)


def check_log_sum_lemma(n: int) -> SumLemmaReport:
    """Residual of sum(ln p_i) against n ln p_n - n - p_n/ln^2 p_n."""
    ps, lhs = _sum_report(n, math.log)
    pn = ps[-1]
    lpn = math.log(pn)
    rhs = n * lpn - n - pn / lpn**2
    res = lhs - rhs
    return SumLemmaReport(n, pn, lhs, rhs, res, res * lpn**3 / pn)


def check_loglog_sum_lemma(n: int) -> SumLemmaReport:
    """Residual of sum(ln ln p_i) against n ln ln p_n - p_n/ln^2 p_n."""
    ps, lhs = _sum_report(n, lambda p: math.log(math.log(p)))
    pn = ps[-1]
    lpn = math.log(pn)
    rhs = n * math.log(lpn) - pn / lpn**2
    res = lhs - rhs
    return SumLemmaReport(n, pn, lhs, rhs, res, res * lpn**3 / pn)
