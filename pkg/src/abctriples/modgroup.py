"""Units modulo 2^m: discrete logs against (-1, 5) and integer kernels.

(Z/2^m Z)* is Z/2 x Z/2^(m-2) for m >= 3, generated by -1 and 5.  The
kernel lattice K_{n,m} = {e in Z^n : prod p_i^{e_i} == 1 mod 2^m} is the
integer kernel of the exponent-to-dlog map, returned in Hermite normal
form so equal inputs give identical bases.
"""

from __future__ import annotations

from dataclasses import dataclass

from .primes import PrimeBasis

__all__ = ["UnitDlog", "KernelBasis", "unit_dlog", "order_mod", "kernel_basis", "hnf"]


@dataclass(frozen=True)
class UnitDlog:
    """x == (-1)^sign_exp * 5^gen_exp mod 2^m; gen_exp is 0 for m <= 2."""

    m: int
    sign_exp: int
    gen_exp: int

    def recompose(self) -> int:
        mod = 1 << self.m
        val = pow(5, self.gen_exp, mod)
        if self.sign_exp:
            val = (-val) % mod
        return val % mod


def unit_dlog(x: int, m: int) -> UnitDlog:
    """Decompose an odd x over the generators (-1, 5) modulo 2^m.

    Bit-by-bit lifting in the cyclic part: O(m) group operations.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if x % 2 == 0:
        raise ValueError("x must be odd (a unit modulo 2^m)")
    mod = 1 << m
    x %= mod
    if m == 1:
        return UnitDlog(m, 0, 0)
    sign = 1 if x % 4 == 3 else 0
    if m == 2:
        return UnitDlog(m, sign, 0)
    z = (-x) % mod if sign else x
    # z == 1 (mod 4); peel one bit of gen_exp per level.
    t = 0
    inv5 = pow(5, -1, mod)
    step_inv = inv5
    for j in range(m - 2):
        if z % (1 << (j + 3)) != 1:
            t |= 1 << j
            z = z * step_inv % mod
        step_inv = step_inv * step_inv % mod
    if z != 1:
        raise AssertionError("dlog lifting failed to terminate at 1")
    return UnitDlog(m, sign, t)


def order_mod(x: int, m: int) -> int:
    """Multiplicative order of odd x modulo 2^m (always a power of two)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if x % 2 == 0:
        raise ValueError("x must be odd (a unit modulo 2^m)")
    mod = 1 << m
    cur = x % mod
    order = 1
    while cur != 1:
        cur = cur * cur % mod
        order <<= 1
        if order > mod:
            raise AssertionError("order search overran the group")
    return order


# --------------------------------------------------------------------------
# integer linear algebra

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return g, x, y


def _eliminate_column(rows: list[list[int]], col: int, start: int) -> int | None:
    """Combine rows[start:] so at most one has a nonzero entry in col.

    Returns the pivot row index (moved to `start`) or None.  All row
    operations are unimodular, so the spanned lattice is unchanged.
    """
    piv = None
    for i in range(start, len(rows)):
        if rows[i][col] == 0:
            continue
        if piv is None:
            piv = i
            continue
        a, b = rows[piv][col], rows[i][col]
        g, u, v = _xgcd(a, b)
        rp, ri = rows[piv], rows[i]
        rows[piv] = [u * p + v * q for p, q in zip(rp, ri)]
        rows[i] = [(a // g) * q - (b // g) * p for p, q in zip(rp, ri)]
    if piv is not None:
        rows[start], rows[piv] = rows[piv], rows[start]
    return piv if piv is None else start


def hnf(rows) -> list[list[int]]:
    """Row-style Hermite normal form: echelon, positive pivots, entries
    above each pivot reduced into [0, pivot)."""
    a = [list(r) for r in rows]
    if not a:
        return a
    cols = len(a[0])
    done = 0
    for c in range(cols):
        if done >= len(a):
            break
        if _eliminate_column(a, c, done) is None:
            continue
        if a[done][c] < 0:
            a[done] = [-x for x in a[done]]
        piv = a[done][c]
        for i in range(done):
            q = a[i][c] // piv
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[done])]
        done += 1
    return a


def left_kernel(mat: list[list[int]]) -> list[list[int]]:
    """Basis of {v in Z^r : v * mat == 0} for an r x c integer matrix."""
    r = len(mat)
    c = len(mat[0]) if mat and mat[0] else 0
    aug = [list(mat[i]) + [1 if j == i else 0 for j in range(r)] for i in range(r)]
    done = 0
    for col in range(c):
        if _eliminate_column(aug, col, done) is not None:
            done += 1
    kernel = []
    for row in aug[done:]:
        if any(row[:c]):
            raise AssertionError("kernel elimination left a nonzero residue")
        kernel.append(row[c:])
    return kernel


# --------------------------------------------------------------------------
# kernel lattice

@dataclass(frozen=True)
class KernelBasis:
    """HNF basis of K_{n,m}; |determinant| == 2^(m-1) whenever n >= 2."""

    n: int
    m: int
    rows: tuple[tuple[int, ...], ...]
    determinant: int


def kernel_basis(basis: PrimeBasis, m: int) -> KernelBasis:
    if m < 1:
        raise ValueError("m must be >= 1")
    n = basis.n
    if m == 1:
        rows = tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
        return KernelBasis(n=n, m=m, rows=rows, determinant=1)

    dlogs = [unit_dlog(p, m) for p in basis.primes]
    if m == 2:
        rel = [[d.sign_exp] for d in dlogs] + [[2]]
    else:
        rel = [[d.sign_exp, d.gen_exp] for d in dlogs]
        rel += [[2, 0], [0, 1 << (m - 2)]]
    gens = [v[:n] for v in left_kernel(rel)]
    rows = hnf(gens)
    if len(rows) != n:
        raise AssertionError("kernel rank defect")

    det = 1
    for i in range(n):
        det *= rows[i][i]
    mod = 1 << m
    for row in rows:
        acc = 1
        for p, e in zip(basis.primes, row):
            if e:
                acc = acc * pow(p, e, mod) % mod
        if acc != 1:
            raise AssertionError("kernel row fails its defining congruence")
    if n >= 2 and abs(det) != 1 << (m - 1):
        raise AssertionError(
            f"kernel index {abs(det)} != 2^{m - 1} at n={n}, m={m}"
        )
    return KernelBasis(n=n, m=m, rows=tuple(tuple(r) for r in rows), determinant=abs(det))


def kernel_contains(basis: PrimeBasis, m: int, e) -> bool:
    """Membership test by exact modular arithmetic, independent of any basis."""
    mod = 1 << m
    acc = 1
    for p, k in zip(basis.primes, e):
        if k:
            acc = acc * pow(p, k, mod) % mod
    return acc == 1


def solve_in_rowspan(rows, target) -> list[int] | None:
    """Integer coefficients expressing target over HNF `rows`, or None.

    Back-substitution against the echelon structure; used by membership
    completeness checks.
    """
    a = [list(r) for r in rows]
    t = list(target)
    cols = len(t)
    coeffs = [0] * len(a)
    pivots = []
    for i, row in enumerate(a):
        lead = next((j for j, x in enumerate(row) if x), None)
        if lead is None:
            raise ValueError("rows must be a nonzero echelon basis")
        pivots.append((lead, i))
    for lead, i in pivots:
        if t[lead] % a[i][lead] != 0:
            return None
        q = t[lead] // a[i][lead]
        coeffs[i] = q
        if q:
            t = [x - q * y for x, y in zip(t, a[i])]
    if any(t):
        return None
    return coeffs
