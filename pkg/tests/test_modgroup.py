import pytest

from abctriples.modgroup import (
    hnf,
    kernel_basis,
    kernel_contains,
    order_mod,
    solve_in_rowspan,
    unit_dlog,
)
from abctriples.primes import gen_primes

from oracles import kernel_member


def test_dlog_identity():
    for m in (1, 2, 3, 8, 30):
        d = unit_dlog(1, m)
        assert (d.sign_exp, d.gen_exp) == (0, 0)


def test_dlog_of_7_mod_16():
    d = unit_dlog(7, 4)
    assert (d.sign_exp, d.gen_exp) == (1, 2)  # -5^2 = -25 = 7 mod 16


def test_dlog_of_3_mod_16():
    d = unit_dlog(3, 4)
    assert (d.sign_exp, d.gen_exp) == (1, 3)  # -5^3 = -125 = 3 mod 16


def test_dlog_brute_force_all_units():
    for m in (1, 2, 3, 4, 5, 6, 7, 8):
        seen = set()
        for x in range(1, 1 << m, 2):
            d = unit_dlog(x, m)
            assert d.recompose() == x
            seen.add((d.sign_exp, d.gen_exp))
        assert len(seen) == max(1, 1 << (m - 1))


def test_dlog_round_trip_wide():
    for m in range(9, 17):
        for x in range(1, 1 << m, 2):
            assert unit_dlog(x, m).recompose() == x


def test_dlog_rejects_even():
    with pytest.raises(ValueError):
        unit_dlog(4, 5)


def test_order_examples():
    assert order_mod(1, 5) == 1
    assert order_mod(3, 4) == 4
    assert order_mod(5, 8) == 64


def test_order_brute_force():
    for m in range(1, 11):
        mod = 1 << m
        for x in range(1, mod, 2):
            got = order_mod(x, m)
            cur, k = x % mod, 1
            while cur != 1:
                cur = cur * x % mod
                k += 1
            assert got == k


def test_order_rejects_even():
    with pytest.raises(ValueError):
        order_mod(6, 4)


def test_kernel_m1_is_identity():
    kb = kernel_basis(gen_primes(2), 1)
    assert kb.rows == ((1, 0), (0, 1))
    assert kb.determinant == 1


def test_kernel_n2_m3():
    kb = kernel_basis(gen_primes(2), 3)
    assert kb.rows == ((2, 0), (0, 2))
    assert kb.determinant == 4


def test_kernel_n2_m4():
    kb = kernel_basis(gen_primes(2), 4)
    assert kb.rows == ((2, 2), (0, 4))
    assert kb.determinant == 8
    assert (3**2 * 5**2) % 16 == 1  # witness for the first row


def test_kernel_index_theorem():
    for n in range(2, 7):
        basis = gen_primes(n)
        for m in range(1, 13):
            assert kernel_basis(basis, m).determinant == 1 << (m - 1)


def test_kernel_rows_satisfy_congruence():
    for n in (2, 3, 5):
        basis = gen_primes(n)
        for m in (1, 2, 5, 9):
            for row in kernel_basis(basis, m).rows:
                assert kernel_member(basis.primes, m, row)


def test_kernel_membership_completeness_small():
    # every congruence solution in the box lies in the row span
    for n in (2, 3):
        basis = gen_primes(n)
        for m in range(1, 7):
            rows = kernel_basis(basis, m).rows
            box = range(-(1 << m), (1 << m) + 1)

            def walk(prefix):
                if len(prefix) == n:
                    if kernel_member(basis.primes, m, prefix):
                        assert solve_in_rowspan(rows, prefix) is not None
                    return
                for k in box:
                    walk(prefix + [k])

            if (2 * (1 << m) + 1) ** n <= 3 * 10**5:
                walk([])


def test_kernel_n1_has_order_index():
    basis = gen_primes(1)
    for m in range(3, 9):
        kb = kernel_basis(basis, m)
        assert kb.determinant == order_mod(3, m)


def test_hnf_canonical_examples():
    assert hnf([[2, 2], [2, -2]]) == [[2, 2], [0, 4]]
    assert hnf([[0, 4], [2, 2]]) == [[2, 2], [0, 4]]
    assert hnf([[1, 0], [0, 1]]) == [[1, 0], [0, 1]]


def test_hnf_entries_reduced_above_pivot():
    rows = hnf([[4, 7, 2], [0, 5, 9], [0, 0, 11]])
    for j in range(1, 3):
        piv = rows[j][j]
        for i in range(j):
            assert 0 <= rows[i][j] < piv


def test_kernel_contains_helper():
    basis = gen_primes(2)
    assert kernel_contains(basis, 4, (2, 2))
    assert kernel_contains(basis, 4, (2, -2))
    assert not kernel_contains(basis, 4, (1, 0))
