"""Fixed-point integer kernel for alternating binomial sums of square roots.

Sums of the form

    sum_{p=0}^{k} binom(k, p) (-1)^(k+p) sqrt(r0 + r1 * (p + shift))

cancel catastrophically: the result can be ~2^k times smaller than the
largest term. Every square root here is evaluated as ``math.isqrt`` of an
exact integer, scaled by 2^prec, so each term carries an absolute error of
less than one unit and the whole sum less than 2^k units. Precision is
raised until the result clears that bound by the requested number of bits.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction

from .errors import PrecisionExhausted

try:  # gmpy2 square roots are ~20x faster on multi-thousand-bit integers
    from gmpy2 import isqrt as _isqrt, mpz as _int
except ImportError:  # pragma: no cover
    _isqrt, _int = math.isqrt, int

ENV_PRECISION = "JCDRESS_PRECISION_BITS"
MAX_PRECISION_BITS = 1 << 18


def precision_floor() -> int:
    """Minimum working precision requested through the environment."""
    raw = os.environ.get(ENV_PRECISION, "").strip()
    if not raw:
        return 0
    try:
        return max(0, int(raw))
    except ValueError:
        raise ValueError(f"{ENV_PRECISION} must be an integer, got {raw!r}") from None


def dyadic_pair(x: float, y: float) -> tuple[int, int, int]:
    """Exact integers (X, Y, e) with x = X / 2^e and y = Y / 2^e."""
    nx, dx = float(x).as_integer_ratio()
    ny, dy = float(y).as_integer_ratio()
    e = max(dx.bit_length(), dy.bit_length()) - 1
    return nx << (e - dx.bit_length() + 1), ny << (e - dy.bit_length() + 1), e


def binomial_row(k: int) -> list[int]:
    row = [1] * (k + 1)
    for p in range(1, k + 1):
        row[p] = row[p - 1] * (k - p + 1) // p
    return row


def fixed_alternating_sum(k: int, r0: int, r1: int, shift: int, prec: int) -> int:
    """Integer S with |S - 2^prec * sum| < 2^k, radicands r0 + r1*(p+shift) >= 0."""
    total = _int(0)
    coeff = _int(1)
    r0, r1 = _int(r0), _int(r1)
    for p in range(k + 1):
        root = _isqrt((r0 + r1 * (p + shift)) << (2 * prec))
        if (k + p) & 1:
            total -= coeff * root
        else:
            total += coeff * root
        coeff = coeff * (k - p) // (p + 1)
    return int(total)


def alternating_sqrt_sum(
    k: int,
    r0: int,
    r1: int,
    shift: int = 0,
    *,
    good_bits: int = 60,
    prec: int | None = None,
    max_prec: int = MAX_PRECISION_BITS,
) -> tuple[Fraction, int]:
    """Evaluate the alternating sum to ``good_bits`` relative bits.

    Returns the value as an exact fraction together with the working
    precision (bits after the binary point) that achieved it.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if r1 == 0 and k >= 1:
        return Fraction(0), 0
    if k == 0 and r0 + r1 * shift == 0:
        return Fraction(0), 0
    if prec is None:
        prec = 64 + 2 * k
    prec = min(max(prec, precision_floor()), max_prec)
    while True:
        s = fixed_alternating_sum(k, r0, r1, shift, prec)
        # error < 2^k units; demand the result exceeds it by good_bits
        deficit = k + good_bits + 1 - s.bit_length()
        if deficit <= 0:
            return Fraction(s, 1 << prec), prec
        if prec >= max_prec:
            raise PrecisionExhausted(
                f"alternating sum with k={k} not resolved at {prec} bits"
            )
        prec = min(max_prec, prec + max(64, deficit + 16))
