"""k-body interaction coefficients of the dressed Jaynes-Cummings Hamiltonian.

In the dressed basis the single-site Hamiltonian is

    H = omega_c (N - 1/2)
        + sum_k (1/k!) [C_k^+ P_plus + C_k^- P_minus] (a~^dag)^k (a~)^k

with P_plus/P_minus the projectors onto the two ladder branches and

    C_k^- = -(delta/2) sum_p binom(k,p) (-1)^(k+p) sqrt(1 + 4 lambda^2 p)
    C_k^+ = +(delta/2) sum_p binom(k,p) (-1)^(k+p) sqrt(1 + 4 lambda^2 (p+1)).

The alternating sums are evaluated in exact fixed-point integer arithmetic
(see :mod:`jcdress.precision`); ``coeff_forward_difference`` is an
independent mpmath route through the same numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DomainError, PrecisionExhausted
from .model import ApproachSign, Branch, SystemParams
from .precision import (
    MAX_PRECISION_BITS,
    alternating_sqrt_sum,
    binomial_row,
    dyadic_pair,
    fixed_alternating_sum,
    precision_floor,
)


@dataclass(frozen=True)
class CoefficientTable:
    branch: Branch
    k_max: int
    values: tuple[float, ...]
    precision_bits: int

    def __post_init__(self):
        if len(self.values) != self.k_max + 1:
            raise ValueError("table length must be k_max + 1")

    def __getitem__(self, k: int) -> float:
        return self.values[k]


@dataclass(frozen=True)
class EffectiveOnSite:
    """On-site parameters of one branch truncated at two-body order."""

    omega_eff: float
    u_eff: float
    e0: float
    branch: Branch


def _radicand(params: SystemParams) -> tuple[int, int, int]:
    # sqrt(delta^2 + 4 g^2 p) = sqrt(r0 + r1 p) / 2^e with exact integers
    a, g, e = dyadic_pair(params.delta, params.g)
    return a * a, 4 * g * g, e


def coeff_exact_fraction(
    params: SystemParams, k: int, branch: Branch = Branch.MINUS
) -> tuple[Fraction, int]:
    """C_k as an exact fraction (accurate to ~60 bits) plus the working precision."""
    if k < 0:
        raise DomainError("k must be non-negative")
    branch = Branch.parse(branch)
    r0, r1, e = _radicand(params)
    shift = 0 if branch is Branch.MINUS else 1
    total, prec = alternating_sqrt_sum(k, r0, r1, shift)
    # Minus carries -delta/2, Plus carries +delta/2; delta enters through its sign only
    factor = Fraction(branch.value * params.sign, 2 << e)
    return total * factor, prec


def coeff_exact(params: SystemParams, k: int, branch: Branch = Branch.MINUS) -> float:
    """Exact k-body coefficient C_k^{+-} (hbar = 1)."""
    value, _ = coeff_exact_fraction(params, k, branch)
    return float(value)


def coefficient_table(
    params: SystemParams, k_max: int, branch: Branch = Branch.MINUS
) -> CoefficientTable:
    if k_max < 0:
        raise DomainError("k_max must be non-negative")
    branch = Branch.parse(branch)
    values = []
    bits = 53
    for k in range(k_max + 1):
        v, prec = coeff_exact_fraction(params, k, branch)
        values.append(float(v))
        bits = max(bits, prec)
    return CoefficientTable(branch, k_max, tuple(values), bits)


def coeff_forward_difference(
    params: SystemParams, k: int, branch: Branch = Branch.MINUS, prec: int | None = None
) -> float:
    """C_k from an explicit k-th forward-difference table, in mpmath arithmetic.

    Independent of the integer kernel; used as a cross-check. Precision is
    doubled until two successive evaluations agree to 1e-15 relative.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    branch = Branch.parse(branch)
    shift = 0 if branch is Branch.MINUS else 1
    if prec is None:
        prec = max(128 + 3 * k, precision_floor())

    def evaluate(bits: int):
        with mpmath.workprec(bits):
            d2 = mpmath.mpf(params.delta) ** 2
            g2 = 4 * mpmath.mpf(params.g) ** 2
            row = [mpmath.sqrt(d2 + g2 * (p + shift)) for p in range(k + 1)]
            for _ in range(k):
                row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
            return row[0] * branch.value * params.sign / 2

    prev = evaluate(prec)
    while True:
        if prec >= MAX_PRECISION_BITS:
            raise PrecisionExhausted(f"forward difference for k={k} not resolved")
        prec = min(2 * prec, MAX_PRECISION_BITS)
        cur = evaluate(prec)
        if abs(cur - prev) <= 1e-15 * abs(cur):
            return float(cur)
        prev = cur


def coeff_resonant(g: float, k: int, approach: ApproachSign = ApproachSign.FROM_ABOVE) -> float:
    """C_k^- at delta -> 0 from the given side; linear in g."""
    if k < 1:
        raise DomainError("resonant coefficient needs k >= 1")
    if g < 0:
        raise DomainError("g must be non-negative")
    approach = ApproachSign.parse(approach)
    total, _ = alternating_sqrt_sum(k, 0, 1)
    return float(-approach.value * total * Fraction(g))


def coeff_dispersive(g: float, lam: float, k: int) -> float:
    """Leading-order small-lambda form -k! binom(1/2, k) (2 lambda)^(2k-1) g."""
    if k < 1:
        raise DomainError("dispersive coefficient needs k >= 1")
    bound = math.sqrt(1.0 / (4 * k))
    if not 0 < lam < bound:
        raise DomainError(
            f"dispersive form requires 0 < lambda < sqrt(1/(4k)) = {bound:.6g} for k={k}, got {lam}"
        )
    # k! binom(1/2, k) (2 lambda)^(2k) built up by the binom(1/2, j) recurrence,
    # folding the j from k! and one factor (2 lambda)^2 into each step
    x = 4.0 * lam * lam
    acc = 1.0
    for j in range(1, k + 1):
        acc *= (1.5 - j) * x
    return -acc / (2.0 * lam) * g


def asymptotic_resonant_magnitude(g: float, k: float) -> float:
    """Large-k magnitude g / sqrt(pi ln k) of the resonant coefficients."""
    if k < 2:
        raise DomainError("asymptotic form needs k >= 2")
    return g / math.sqrt(math.pi * math.log(k))


def effective_onsite_n2(params: SystemParams, branch: Branch = Branch.MINUS) -> EffectiveOnSite:
    branch = Branch.parse(branch)
    c0, c1, c2 = (coeff_exact(params, k, branch) for k in range(3))
    return EffectiveOnSite(
        omega_eff=params.omega_c + c1,
        u_eff=c2,
        e0=c0 + branch.value * params.omega_c / 2,
        branch=branch,
    )


def ladder_energy_from_kbody(
    params: SystemParams, n: int, branch: Branch = Branch.MINUS, k_max: int | None = None
) -> float:
    """sum_k binom(n_b, k) C_k, the k-body series acting on |n, branch>.

    n_b counts dressed bosons: n on the minus branch, n - 1 on the plus one.
    """
    branch = Branch.parse(branch)
    if n < 0 or (branch is Branch.PLUS and n < 1):
        raise DomainError("invalid ladder state")
    if k_max is None:
        k_max = n
    if k_max < n:
        raise DomainError(f"k_max={k_max} must be >= n={n}")
    nb = n if branch is Branch.MINUS else n - 1
    shift = 0 if branch is Branch.MINUS else 1
    r0, r1, e = _radicand(params)
    if r0 + r1 * (nb + shift) == 0:
        return 0.0
    weights = binomial_row(nb)
    # weighted error bound: sum_k binom(nb,k) 2^k = 3^nb units
    slack = math.ceil(nb * math.log2(3)) + 61
    prec = max(64 + 2 * nb, precision_floor())
    while True:
        total = sum(
            weights[k] * fixed_alternating_sum(k, r0, r1, shift, prec)
            for k in range(min(k_max, nb) + 1)
        )
        deficit = slack - total.bit_length()
        if deficit <= 0:
            break
        if prec >= MAX_PRECISION_BITS:
            raise PrecisionExhausted(f"ladder sum for n={n} not resolved")
        prec = min(MAX_PRECISION_BITS, prec + max(64, deficit + 16))
    return float(Fraction(total * branch.value * params.sign, 2 << (prec + e)))


def effective_hamiltonian_n3_terms(params: SystemParams) -> tuple[float, float]:
    """(C_3^-, C_2^+), the extra couplings needed once three excitations are allowed.

    Written out term by term at 256-bit precision rather than through the
    generic kernel.
    """
    with mpmath.workprec(256):
        d2 = mpmath.mpf(params.delta) ** 2
        g2 = mpmath.mpf(params.g) ** 2
        r = [mpmath.sqrt(d2 + 4 * g2 * p) for p in range(4)]
        half = mpmath.mpf(params.sign) / 2
        c3_minus = -half * (-r[0] + 3 * r[1] - 3 * r[2] + r[3])
        c2_plus = half * (r[1] - 2 * r[2] + r[3])
        return float(c3_minus), float(c2_plus)
