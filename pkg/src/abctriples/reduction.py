"""Short-vector search: LLL reduction and exact l1 enumeration.

Basis rows are exact fixed-point integers throughout; floating point only
steers the reduction (Gram-Schmidt data) and prunes the enumeration, so a
float wobble can cost work but never correctness.  Entries too wide for
IEEE doubles are handled by reducing uniformly truncated copies and
replaying the accumulated unimodular transforms on the exact rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fixed import fixed_to_float, float_to_fixed
from .lattice import EmbeddedLattice, embed_exponents, l1_norm
from .modgroup import left_kernel

__all__ = [
    "ShortVectorResult",
    "PrecisionExhaustedError",
    "NoVectorInRadiusError",
    "lll_reduce",
    "reduce_rows",
    "shortest_l1",
    "full_l1_minimum",
    "EXACT_DIMENSION_LIMIT",
]

EXACT_DIMENSION_LIMIT = 12

# Entries wider than this get staged truncation before float GSO; dot
# products of 500-bit doubles stay clear of the 2^1024 overflow line.
_FLOAT_SAFE_BITS = 500
_STAGE_TARGET_BITS = 440


class PrecisionExhaustedError(ArithmeticError):
    """Gram-Schmidt data degenerated; retry with more fraction bits."""


class NoVectorInRadiusError(RuntimeError):
    """No admissible lattice vector within the requested radius."""


@dataclass(frozen=True)
class ShortVectorResult:
    """A short kernel vector: exponents over p_1..p_n plus the adjoined
    coefficient (always 0 here), with its recomputed fixed-point l1 norm."""

    exponents: tuple[int, ...]
    l1_fixed: int
    l1: float
    exact: bool


# --------------------------------------------------------------------------
# LLL with exact integer rows and cached float GSO

def _float_rows(rows: list[list[int]]) -> np.ndarray:
    f = np.array([[float(x) for x in r] for r in rows], dtype=np.float64)
    if not np.all(np.isfinite(f)):
        raise PrecisionExhaustedError("basis entries overflow doubles")
    return f


def _gso(f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = f.shape[0]
    mu = np.zeros((k, k))
    c = np.zeros(k)
    bstar = f.astype(np.float64).copy()
    for i in range(k):
        v = f[i].copy()
        for j in range(i):
            m = (v @ bstar[j]) / c[j]
            mu[i, j] = m
            v -= m * bstar[j]
        c[i] = v @ v
        bstar[i] = v
    mu[np.arange(k), np.arange(k)] = 1.0
    if not (np.all(np.isfinite(c)) and np.all(c > 0.0)):
        raise PrecisionExhaustedError("Gram-Schmidt norms collapsed to zero")
    return mu, c


def _lll_inplace(b: list[list[int]], u: list[list[int]], delta: float) -> None:
    """Reduce b in place; u receives the same row operations.

    The active row's Gram-Schmidt data is always recomputed from the exact
    integer rows, with size reduction iterated until the rounded
    coefficients vanish.  That costs a matrix-vector product per step but
    stays stable no matter how wide the dynamic range of the basis is;
    doubles only decide the order of operations, never the arithmetic.
    """
    k = len(b)
    if k <= 1:
        return
    dim = len(b[0])
    f = _float_rows(b)
    bstar = np.zeros((k, dim))
    c = np.zeros(k)
    mu = np.zeros((k, k))
    bstar[0] = f[0]
    c[0] = float(bstar[0] @ bstar[0])
    if not (np.isfinite(c[0]) and c[0] > 0.0):
        raise PrecisionExhaustedError("leading basis row has no usable norm")
    max_iter = 40000 + 6000 * k * k
    it = 0
    pos = 1
    while pos < k:
        it += 1
        if it > max_iter:
            raise PrecisionExhaustedError("LLL failed to converge; raise precision")
        # refresh row pos: nearest-plane size reduction, iterated until the
        # rounded coefficients vanish (each sweep clears ~50 bits)
        for _ in range(96):
            fp = np.array([float(x) for x in b[pos]])
            if not np.all(np.isfinite(fp)):
                raise PrecisionExhaustedError("basis entries overflow doubles")
            mus = (bstar[:pos] @ fp) / c[:pos]
            if not np.rint(mus).any():
                mu[pos, :pos] = mus
                f[pos] = fp
                break
            for j in range(pos - 1, -1, -1):
                r = int(np.rint((fp @ bstar[j]) / c[j]))
                if r:
                    rb = b[j]
                    b[pos] = [x - r * y for x, y in zip(b[pos], rb)]
                    ru = u[j]
                    u[pos] = [x - r * y for x, y in zip(u[pos], ru)]
                    fp = fp - r * f[j]
        else:
            raise PrecisionExhaustedError("size reduction did not stabilize")
        v = f[pos] - mu[pos, :pos] @ bstar[:pos]
        cp = float(v @ v)
        if not (np.isfinite(cp) and cp > 0.0):
            raise PrecisionExhaustedError("Gram-Schmidt norms collapsed to zero")
        bstar[pos] = v
        c[pos] = cp

        if cp >= (delta - mu[pos, pos - 1] ** 2) * c[pos - 1]:
            pos += 1
        else:
            b[pos - 1], b[pos] = b[pos], b[pos - 1]
            u[pos - 1], u[pos] = u[pos], u[pos - 1]
            if pos == 1:
                # row 0 changed and the cursor never revisits it
                f[0] = [float(x) for x in b[0]]
                bstar[0] = f[0]
                c[0] = float(bstar[0] @ bstar[0])
                if not (np.isfinite(c[0]) and c[0] > 0.0):
                    raise PrecisionExhaustedError("leading basis row has no usable norm")
            pos = max(pos - 1, 1)


def _max_bits(rows: list[list[int]]) -> int:
    return max((abs(x).bit_length() for r in rows for x in r), default=0)


def _matmul_int(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    out = []
    for row in a:
        acc = [0] * len(b[0])
        for coeff, brow in zip(row, b):
            if coeff:
                acc = [x + coeff * y for x, y in zip(acc, brow)]
        out.append(acc)
    return out


def _identity(k: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def reduce_rows(
    rows, delta: float = 0.99
) -> tuple[list[list[int]], list[list[int]]]:
    """LLL-reduce independent integer rows; returns (reduced, transform).

    transform is unimodular with transform @ rows == reduced.  Rows wider
    than doubles allow are reduced through uniformly truncated stages.
    """
    if not 0.25 < delta < 1.0:
        raise ValueError("delta must lie in (1/4, 1)")
    b = [list(map(int, r)) for r in rows]
    if not b:
        return [], []
    u = _identity(len(b))
    for _stage in range(64):
        mb = _max_bits(b)
        if mb <= _FLOAT_SAFE_BITS:
            _lll_inplace(b, u, delta)
            return b, u
        # keep at least 16 significant bits in the narrowest row
        narrow = min(max(abs(x).bit_length() for x in r) for r in b)
        shift = min(mb - _STAGE_TARGET_BITS, max(narrow - 16, 1))
        half = 1 << (shift - 1)
        bs = [[(x + half) >> shift for x in r] for r in b]
        us = _identity(len(b))
        _lll_inplace(bs, us, delta)
        if us == _identity(len(b)):
            raise PrecisionExhaustedError("truncated stage made no progress")
        b = _matmul_int(us, b)
        u = _matmul_int(us, u)
    raise PrecisionExhaustedError("staged reduction failed to terminate")


def lll_reduce(lattice: EmbeddedLattice, delta_param: float = 0.99) -> EmbeddedLattice:
    """Lovasz-reduced basis of the same lattice, exponent map updated.

    The basis is rebuilt exactly from the transformed exponents, so the
    output is coherent to the last fixed-point bit and the determinant is
    preserved identically.
    """
    _, u = reduce_rows([list(r) for r in lattice.basis], delta_param)
    new_exp = _matmul_int(u, [list(r) for r in lattice.exponent_rows])
    new_rows = tuple(embed_exponents(tuple(r), lattice.prime_basis) for r in new_exp)
    return EmbeddedLattice(
        prime_basis=lattice.prime_basis,
        m=lattice.m,
        full_rank=lattice.full_rank,
        exponent_rows=tuple(tuple(r) for r in new_exp),
        basis=new_rows,
    )


# --------------------------------------------------------------------------
# exact l1 enumeration

def _enum_l1_min(
    rows: list[list[int]], bound: int | None = None
) -> tuple[int | None, list[tuple[int, ...]]]:
    """Provably minimal nonzero l1 vector of the integer row lattice.

    rows should be LLL-reduced.  Depth-first search over coefficients with
    l2-projection pruning (valid since l1 >= l2); leaves are re-checked in
    exact integer arithmetic, so float error can only cost time.  Returns
    the minimal l1 and every coefficient vector attaining it.
    """
    k = len(rows)
    mu, c = _gso(_float_rows(rows))
    best: int | None = None
    cands: list[tuple[int, ...]] = []
    for i, r in enumerate(rows):
        l1 = sum(abs(x) for x in r)
        if best is None or l1 < best:
            best = l1
            cands = [tuple(1 if j == i else 0 for j in range(k))]
        elif l1 == best:
            cands.append(tuple(1 if j == i else 0 for j in range(k)))
    if bound is not None and (best is None or bound < best):
        best = bound
        cands = []
    bound_sq = float(best) ** 2 * (1.0 + 1e-9) if best is not None else float("inf")
    coeffs = [0] * k

    def leaf() -> None:
        nonlocal best, bound_sq
        v = [0] * len(rows[0])
        for i in range(k):
            ci = coeffs[i]
            if ci:
                ri = rows[i]
                v = [x + ci * y for x, y in zip(v, ri)]
        l1 = sum(abs(x) for x in v)
        if l1 == 0:
            return
        if best is None or l1 < best:
            best = l1
            cands.clear()
            cands.append(tuple(coeffs))
            bound_sq = float(best) ** 2 * (1.0 + 1e-9)
        elif l1 == best:
            cands.append(tuple(coeffs))

    def visit(level: int, x: int, center: float, rho: float, zero_above: bool) -> bool:
        d = x - center
        d2 = d * d * c[level]
        if d2 > bound_sq - rho:
            return False
        if not (zero_above and x < 0):
            coeffs[level] = x
            descend(level - 1, rho + d2, zero_above and x == 0)
            coeffs[level] = 0
        return True

    def descend(level: int, rho: float, zero_above: bool) -> None:
        if level < 0:
            leaf()
            return
        center = 0.0
        for i in range(level + 1, k):
            if coeffs[i]:
                center -= coeffs[i] * mu[i, level]
        start = round(center)
        if not visit(level, start, center, rho, zero_above):
            return
        hi, lo = start + 1, start - 1
        hi_ok = lo_ok = True
        while hi_ok or lo_ok:
            if hi_ok:
                hi_ok = visit(level, hi, center, rho, zero_above)
                hi += 1
            if lo_ok:
                lo_ok = visit(level, lo, center, rho, zero_above)
                lo -= 1

    descend(k - 1, 0.0, True)
    return best, cands


def _combine_exponents(
    coeffs, exp_rows: list[list[int]]
) -> tuple[int, ...]:
    acc = [0] * len(exp_rows[0])
    for ci, row in zip(coeffs, exp_rows):
        if ci:
            acc = [x + ci * y for x, y in zip(acc, row)]
    return tuple(acc)


def _sign_normalize(e: tuple[int, ...]) -> tuple[int, ...]:
    for x in e:
        if x > 0:
            return e
        if x < 0:
            return tuple(-y for y in e)
    return e


def _section_exponent_rows(lattice: EmbeddedLattice) -> list[list[int]]:
    """Integer basis, in exponent coordinates, of the sublattice with zero
    coefficient on the adjoined row."""
    exp = [list(r) for r in lattice.exponent_rows]
    col = [[row[-1]] for row in exp]
    if all(v[0] == 0 for v in col):
        return exp
    kern = left_kernel(col)
    return _matmul_int(kern, exp)


def _result_from_exponents(
    lattice: EmbeddedLattice, e: tuple[int, ...], exact: bool
) -> ShortVectorResult:
    if e[-1] != 0:
        raise AssertionError("accepted short vector touches the adjoined row")
    if not any(e):
        raise AssertionError("short vector search returned zero")
    l1 = l1_norm(embed_exponents(e, lattice.prime_basis))
    return ShortVectorResult(
        exponents=e,
        l1_fixed=l1,
        l1=fixed_to_float(l1, lattice.precision),
        exact=exact,
    )


def _pick_minimum(
    lattice: EmbeddedLattice,
    coeff_sets: list[tuple[int, ...]],
    exp_rows: list[list[int]],
    exact: bool,
) -> ShortVectorResult:
    scored: list[tuple[int, tuple[int, ...]]] = []
    for coeffs in coeff_sets:
        e = _sign_normalize(_combine_exponents(coeffs, exp_rows))
        l1 = l1_norm(embed_exponents(e, lattice.prime_basis))
        scored.append((l1, e))
    best_l1 = min(s[0] for s in scored)
    ties = sorted(e for l1, e in scored if l1 == best_l1)
    return _result_from_exponents(lattice, ties[0], exact)


def shortest_l1(
    lattice: EmbeddedLattice,
    mode: str = "exact",
    radius: float | None = None,
) -> ShortVectorResult:
    """Shortest nonzero kernel vector of a full-rank embedded lattice.

    Vectors with a nonzero coefficient on the adjoined row are never
    accepted, so the search runs over the kernel section directly.  exact
    mode enumerates (provably minimal, dimension capped); heuristic mode
    takes the best of the reduced rows and a bounded coefficient search
    over row pairs.
    """
    if lattice.m is None or not lattice.full_rank:
        raise ValueError("shortest_l1 expects a full-rank kernel lattice")
    if mode not in ("exact", "heuristic"):
        raise ValueError(f"unknown mode {mode!r}")
    n = lattice.n
    if mode == "exact" and n + 1 > EXACT_DIMENSION_LIMIT:
        raise ValueError(f"exact mode supports n+1 <= {EXACT_DIMENSION_LIMIT}")

    sexp = _section_exponent_rows(lattice)
    semb = [list(embed_exponents(tuple(r), lattice.prime_basis)) for r in sexp]
    red, u = reduce_rows(semb, 0.99)
    rexp = _matmul_int(u, sexp)

    if mode == "exact":
        best, coeff_sets = _enum_l1_min(red)
        if not coeff_sets:
            raise AssertionError("exact enumeration found no vector")
        result = _pick_minimum(lattice, coeff_sets, rexp, exact=True)
        if result.l1_fixed != best:
            raise AssertionError("enumeration and recomputation disagree")
    else:
        k = len(red)
        fl = np.array([[float(x) for x in r] for r in red])
        pool: list[tuple[float, tuple[int, ...]]] = []
        for i in range(k):
            pool.append((float(np.abs(fl[i]).sum()), tuple(1 if j == i else 0 for j in range(k))))
        span = range(-3, 4)
        for i in range(k):
            for j in range(i + 1, k):
                for ci in span:
                    row = ci * fl[i]
                    for cj in span:
                        if ci == 0 and cj == 0:
                            continue
                        val = float(np.abs(row + cj * fl[j]).sum())
                        coeffs = [0] * k
                        coeffs[i] = ci
                        coeffs[j] = cj
                        pool.append((val, tuple(coeffs)))
        pool.sort(key=lambda t: t[0])
        keep = [coeffs for _, coeffs in pool[:128]]
        result = _pick_minimum(lattice, keep, rexp, exact=False)

    if radius is not None:
        if result.l1_fixed > float_to_fixed(radius, lattice.precision):
            raise NoVectorInRadiusError(
                f"shortest admissible vector has l1 {result.l1:.6g} > radius {radius:.6g}"
            )
    return result


def full_l1_minimum(lattice: EmbeddedLattice) -> tuple[tuple[int, ...], int, float]:
    """Exact l1-shortest nonzero vector of the whole embedded lattice,
    adjoined row included.  Returns (exponents, l1_fixed, l1)."""
    if lattice.nrows > EXACT_DIMENSION_LIMIT:
        raise ValueError(f"exact enumeration supports dimension <= {EXACT_DIMENSION_LIMIT}")
    rows = [list(r) for r in lattice.basis]
    red, u = reduce_rows(rows, 0.99)
    rexp = _matmul_int(u, [list(r) for r in lattice.exponent_rows])
    best, coeff_sets = _enum_l1_min(red)
    if not coeff_sets:
        raise AssertionError("enumeration found no vector")
    scored = []
    for coeffs in coeff_sets:
        e = _sign_normalize(_combine_exponents(coeffs, rexp))
        l1 = l1_norm(embed_exponents(e, lattice.prime_basis))
        scored.append((l1, e))
    best_l1 = min(s[0] for s in scored)
    e = sorted(e for l1, e in scored if l1 == best_l1)[0]
    return e, best_l1, fixed_to_float(best_l1, lattice.precision)
