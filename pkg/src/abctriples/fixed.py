"""Fixed-point scalars: plain ints carrying `precision` fraction bits.

All lattice coordinates in this package are integers scaled by
2**precision, so sums, differences and comparisons are exact.  Only the
initial logarithms are rounded, each to within half an ulp of the true
value.
"""

import math

import mpmath

DEFAULT_PRECISION = 128


def ln_fixed(value, precision: int = DEFAULT_PRECISION) -> int:
    """round(ln(value) * 2**precision) for a positive int or mpmath-convertible."""
    if value <= 0:
        raise ValueError("ln_fixed requires a positive argument")
    # 48 guard bits keep the quadrature of rounding errors far below 1 ulp.
    with mpmath.workprec(precision + 48):
        return int(mpmath.nint(mpmath.ldexp(mpmath.ln(value), precision)))


def fixed_to_float(value: int, precision: int = DEFAULT_PRECISION) -> float:
    """Nearest double to value / 2**precision; safe for arbitrarily wide ints."""
    if value == 0:
        return 0.0
    shift = max(0, value.bit_length() - 64)
    return math.ldexp(float(value >> shift) if shift else float(value), shift - precision)


def float_to_fixed(x: float, precision: int = DEFAULT_PRECISION) -> int:
    if not math.isfinite(x):
        raise ValueError("cannot convert non-finite float to fixed point")
    return round(math.ldexp(x, precision))
