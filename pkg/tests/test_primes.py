import math
import random

import mpmath
import pytest

from abctriples.primes import (
    FactorBudget,
    UnfactoredCofactorError,
    check_log_sum_lemma,
    check_loglog_sum_lemma,
    factorize,
    gen_primes,
    is_probable_prime,
    log_integral,
    prime_pi,
)

from oracles import sieve_primes


def test_gen_primes_smallest():
    assert gen_primes(1).primes == (3,)


def test_gen_primes_first_five():
    assert gen_primes(5).primes == (3, 5, 7, 11, 13)


def test_gen_primes_25_matches_sieve():
    want = tuple(sieve_primes(102)[1:26])
    got = gen_primes(25).primes
    assert got == want
    assert got[-1] == 101


def test_gen_primes_rejects_nonpositive():
    with pytest.raises(ValueError):
        gen_primes(0)


def test_log_precision_within_one_ulp():
    basis = gen_primes(40)
    scale = mpmath.mpf(2) ** basis.precision
    with mpmath.workprec(basis.precision + 80):
        for p, l in zip(basis.primes, basis.logs):
            err = abs(mpmath.mpf(l) / scale - mpmath.ln(p))
            assert err < mpmath.mpf(2) ** (1 - basis.precision)


def test_prime_pi_small_values():
    assert prime_pi(1) == 0
    assert prime_pi(2) == 1
    assert prime_pi(100) == 25
    assert prime_pi(31) == 11


def test_prime_pi_matches_sieve_grid():
    primes = set(sieve_primes(5000))
    count = 0
    for x in range(5001):
        if x in primes:
            count += 1
        if x % 97 == 0:
            assert prime_pi(x) == count


def test_prime_pi_counts_nth_odd_prime():
    basis = gen_primes(200)
    for i, p in enumerate(basis.primes, start=1):
        assert prime_pi(p) == i + 1


def test_prime_pi_rejects_negative():
    with pytest.raises(ValueError):
        prime_pi(-1)


# mpmath.li is the independent oracle for the quadrature/series path
def test_log_integral_li2():
    assert log_integral(2) == pytest.approx(1.0451637801174927, rel=1e-10)


def test_log_integral_li10():
    assert log_integral(10) == pytest.approx(6.1655995047872979, rel=1e-10)


def test_log_integral_against_mpmath_grid():
    for x in (1.1, 1.5, 3.0, 9.9, 10.1, 50.0, 1e3, 1e5, 1e6, 1e8):
        assert log_integral(x) == pytest.approx(float(mpmath.li(x)), rel=1e-10)


def test_log_integral_vs_three_term_expansion_at_1e6():
    # the next expansion term is 6x/log^4 x, about 0.21% here
    x = 1e6
    lx = math.log(x)
    trunc = x / lx + x / lx**2 + 2 * x / lx**3
    assert abs(log_integral(x) / trunc - 1) < 4e-3


def test_log_integral_remainder_is_order_x_log4():
    # leading remainder term is 6x/log^4 x; 20 covers the slow tail decay
    for x in (1e4, 1e5, 1e6, 1e7, 1e8):
        lx = math.log(x)
        trunc = x / lx + x / lx**2 + 2 * x / lx**3
        assert abs(log_integral(x) - trunc) < 20 * x / lx**4


def test_log_integral_strictly_increasing():
    xs = [2 * 1.6**k for k in range(40) if 2 * 1.6**k < 1e8]
    vals = [log_integral(x) for x in xs]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_log_integral_domain():
    for bad in (1.0, 0.5, -3.0):
        with pytest.raises(ValueError):
            log_integral(bad)


def test_factorize_unit():
    assert factorize(1).factors == ()


def test_factorize_224():
    assert factorize(224).factors == ((2, 5), (7, 1))


def test_factorize_classic_b_component():
    assert factorize(6436341).factors == ((3, 10), (109, 1))


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_recomposes_random_64bit():
    rng = random.Random(0xFAC7)
    for _ in range(10000):
        v = rng.randrange(1, 1 << 64)
        f = factorize(v)
        prod = 1
        for p, e in f.factors:
            assert is_probable_prime(p)
            prod *= p**e
        assert prod == v


def test_factorize_deterministic():
    v = (2**31 - 1) * (2**61 - 1) * 2**5 * 3
    assert factorize(v).factors == factorize(v).factors


def test_factorize_gives_up_on_wide_composites():
    # product of two 300-bit probable primes, far past the rho budget
    def next_prime(x):
        while not is_probable_prime(x):
            x += 1
        return x

    a = next_prime(1 << 300)
    b = next_prime((1 << 300) + 2**70)
    with pytest.raises(UnfactoredCofactorError):
        factorize(a * b, FactorBudget(rho_iterations=1 << 10, rho_attempts=2))


def test_factorize_accepts_wide_primes():
    def next_prime(x):
        while not is_probable_prime(x):
            x += 1
        return x

    p = next_prime(1 << 200)
    assert factorize(4 * p).factors == ((2, 2), (p, 1))


def test_log_sum_lemma_smallest():
    rep = check_log_sum_lemma(2)
    assert rep.lhs == pytest.approx(math.log(3) + math.log(5), abs=1e-12)
    assert rep.p_n == 5


def test_loglog_sum_lemma_smallest():
    rep = check_loglog_sum_lemma(2)
    want = math.log(math.log(3)) + math.log(math.log(5))
    assert rep.lhs == pytest.approx(want, abs=1e-12)


def test_sum_lemmas_report_at_25():
    for rep in (check_log_sum_lemma(25), check_loglog_sum_lemma(25)):
        assert rep.p_n == 101
        assert math.isfinite(rep.normalized)


def test_sum_lemma_residuals_bounded():
    for n in (100, 1000, 10000):
        assert abs(check_log_sum_lemma(n).normalized) < 10
        assert abs(check_loglog_sum_lemma(n).normalized) < 10


def test_sum_lemmas_need_two_primes():
    with pytest.raises(ValueError):
        check_log_sum_lemma(1)
