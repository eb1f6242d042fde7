import math

import pytest

from abctriples.primes import FactorBudget, UnfactoredCofactorError, gen_primes
from abctriples.triples import (
    AbcTriple,
    choose_m,
    construct_triple,
    radical,
    scan_values,
    score,
    search,
    target_radius,
    verify_lemma_bounds,
)

DELTA = 3.65931


@pytest.fixture(scope="module")
def b2():
    return gen_primes(2)


def test_triple_validation():
    with pytest.raises(ValueError):
        AbcTriple(1, 2, 4)
    with pytest.raises(ValueError):
        AbcTriple(2, 4, 6)
    with pytest.raises(ValueError):
        AbcTriple(0, 3, 3)


def test_radical_examples():
    assert radical(AbcTriple(1, 8, 9)) == 6
    assert radical(AbcTriple(1, 224, 225)) == 210
    assert radical(AbcTriple(2, 6436341, 6436343)) == 15042


def test_score_189():
    q = score(AbcTriple(1, 8, 9))
    assert q.quality == pytest.approx(math.log(9) / math.log(6), abs=1e-12)
    assert q.merit is None  # c < 16


def test_score_224_225():
    q = score(AbcTriple(1, 224, 225))
    assert q.quality == pytest.approx(math.log(225) / math.log(210), abs=1e-12)


def test_score_classic_triple():
    q = score(AbcTriple(2, 6436341, 6436343))
    assert q.radical == 15042
    assert abs(q.quality - 1.6299) < 1e-4
    assert q.merit == pytest.approx(4.2115, abs=1e-3)


def test_merit_solves_its_defining_equation():
    t = AbcTriple(2, 6436341, 6436343)
    q = score(t)
    recon = q.radical * math.exp(q.merit * math.sqrt(math.log(t.c)) / math.log(math.log(t.c)))
    assert recon == pytest.approx(t.c, rel=1e-9)


def test_merit_monotone_in_c_for_fixed_radical():
    def merit(c, rad):
        lc = math.log(c)
        return (lc - math.log(rad)) * math.log(lc) / math.sqrt(lc)

    rad = 1000
    cs = [10**k for k in range(4, 40, 3)]
    vals = [merit(c, rad) for c in cs]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_construct_189(b2):
    t = construct_triple((2, 0), b2, 3)
    assert (t.a, t.b, t.c) == (1, 8, 9)
    assert t.provenance.exponents == (2, 0)


def test_construct_224_225(b2):
    t = construct_triple((2, 2), b2, 4)
    assert (t.a, t.b, t.c) == (1, 224, 225)


def test_construct_235(b2):
    t = construct_triple((1, -1), b2, 1)
    assert (t.a, t.b, t.c) == (2, 3, 5)


def test_construct_rejects_zero_vector(b2):
    with pytest.raises(ValueError):
        construct_triple((0, 0), b2, 3)


def test_construct_rejects_non_member(b2):
    with pytest.raises(ValueError):
        construct_triple((1, 0), b2, 3)  # 3 is not 1 mod 8


def test_bounds_189(b2):
    t = construct_triple((2, 0), b2, 3)
    rep = verify_lemma_bounds(t, b2, 3, 2 * math.log(9))
    by_name = {c.name: c for c in rep.checks}
    assert rep.all_hold
    # 2^(m-1) rad / prod p = 4*6/15 <= 9 exactly
    assert by_name["radical_vs_c"].holds
    # rad(even part) = 2 <= 9/4
    assert by_name["even_part_radical"].holds
    # the S-unit pair here is (1, 9): radical 3 <= 15
    assert "3" == by_name["smooth_pair_radical"].lhs.split("= ")[1]


def test_bounds_224_225(b2):
    t = construct_triple((2, 2), b2, 4)
    rep = verify_lemma_bounds(t, b2, 4, 2 * math.log(225))
    assert rep.all_hold
    lhs = int(rep.checks[0].lhs.split("= ")[1])
    rhs = int(rep.checks[0].rhs.split("= ")[1])
    assert (lhs, rhs) == (8 * 210, 225 * 15)  # 1680 <= 3375, i.e. 112 <= 225


def test_bounds_need_provenance():
    with pytest.raises(ValueError):
        verify_lemma_bounds(AbcTriple(1, 8, 9), gen_primes(2), 3, 4.4)


def test_target_radius_and_choose_m(b2):
    assert target_radius(b2, DELTA) == pytest.approx(18.571, abs=1e-2)
    assert choose_m(b2, DELTA) == 11
    # with delta = e the radius is p_n^2 but delta*R is unchanged
    assert target_radius(b2, math.e) == pytest.approx(25.0, rel=1e-12)
    assert choose_m(b2, math.e) == 11


def test_choose_m_scaling_window():
    basis = gen_primes(25)
    m = choose_m(basis, DELTA)
    assert 0.5 <= m / (25 * math.log2(25)) <= 2.0


def test_choose_m_needs_n2():
    with pytest.raises(ValueError):
        choose_m(gen_primes(1), DELTA)


def test_scan_values_clamped():
    basis = gen_primes(2)
    vals = scan_values(basis, DELTA, 3)
    assert vals == [8, 9, 10, 11, 12, 13, 14]


def test_search_single_cell_exact():
    rows = search([2], ("fixed", [3]), mode="exact")
    assert len(rows) == 1
    r = rows[0]
    assert (r.triple.a, r.triple.b, r.triple.c) == (1, 8, 9)
    assert r.radical == 6
    assert r.quality == pytest.approx(1.2263, abs=1e-4)
    assert r.exact


def test_search_scan_low_m_has_quality_above_one():
    rows = search([2], ("fixed", range(1, 7)), mode="exact")
    assert len(rows) == 6
    best = rows[0]
    assert best.ok and best.triple.c > best.radical
    # deterministic ordering: merit descending, then quality, then c
    merits = [r.merit if r.merit is not None else float("-inf") for r in rows if r.ok]
    assert merits == sorted(merits, reverse=True)


def test_search_empty():
    assert search([], ("fixed", [3])) == []


def test_search_records_cell_errors():
    # unfactorable cofactor at a large modulus becomes an error row
    rows = search(
        [2],
        ("fixed", [40]),
        mode="heuristic",
        budget=FactorBudget(rho_iterations=1 << 8, rho_attempts=2, cofactor_bits=64),
    )
    assert len(rows) == 1
    assert rows[0].error == "unfactored_cofactor"
    assert rows[0].triple is None


def test_search_exact_mode_unavailable_is_an_error_row():
    rows = search([13], ("fixed", [4]), mode="exact")
    assert rows[0].error == "exact_mode_unavailable"


def test_search_parallel_matches_serial():
    serial = search([2, 3], ("fixed", [3, 4]), mode="exact", workers=1)
    parallel = search([2, 3], ("fixed", [3, 4]), mode="exact", workers=2)
    assert serial == parallel


def test_search_triples_always_validate():
    for r in search([2, 3, 4], ("scan", 1), mode="heuristic"):
        if r.ok:
            t = r.triple
            assert t.a + t.b == t.c
            assert math.gcd(t.a, t.b) == 1
            assert radical(t) == r.radical
