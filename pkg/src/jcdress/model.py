"""Single-site Jaynes-Cummings parameters, spectrum and dressed-operator algebra.

Natural units with hbar = 1 are used throughout. All square roots are taken
in the detuning-regular form sqrt(delta**2 + 4 g**2 n), so resonance
(delta = 0) needs no special casing beyond choosing an approach direction.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError


class ApproachSign(enum.Enum):
    """Direction from which delta = 0 is approached."""

    FROM_ABOVE = 1
    FROM_BELOW = -1

    @classmethod
    def parse(cls, value) -> "ApproachSign":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("above", "fromabove", "from_above", "+", "+1", "1", "up"):
            return cls.FROM_ABOVE
        if key in ("below", "frombelow", "from_below", "-", "-1", "down"):
            return cls.FROM_BELOW
        raise ValueError(f"unknown approach sign {value!r}")


class Branch(enum.Enum):
    MINUS = -1
    PLUS = 1

    @classmethod
    def parse(cls, value) -> "Branch":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("-", "minus", "m", "-1"):
            return cls.MINUS
        if key in ("+", "plus", "p", "1", "+1"):
            return cls.PLUS
        raise ValueError(f"unknown branch {value!r}")

    @property
    def symbol(self) -> str:
        return "-" if self is Branch.MINUS else "+"


class Op(enum.Enum):
    """The dressed operators whose action on |n,+-> is tabulated."""

    A = "a"
    ADAG = "adag"
    ADAG_A = "adag_a"
    SIGMA_MINUS = "sigma_minus"
    SIGMA_PLUS = "sigma_plus"
    SIGMA_Z = "sigma_z"
    SIGMA_PLUS_MINUS = "sigma_plus_minus"
    SIGMA_MINUS_PLUS = "sigma_minus_plus"
    N_TOTAL = "n_total"


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of one Jaynes-Cummings site.

    ``delta`` is the atom-cavity detuning omega_a - omega_c. ``gamma_scale``
    is only used to normalize output; it never enters the physics.
    """

    omega_c: float
    delta: float
    g: float
    gamma_scale: Optional[float] = None
    zero_detuning_sign: ApproachSign = ApproachSign.FROM_ABOVE

    def __post_init__(self):
        for name in ("omega_c", "delta", "g"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.g < 0:
            raise DomainError("coupling g must be non-negative")
        if self.gamma_scale is not None and not self.gamma_scale > 0:
            raise DomainError("gamma_scale must be positive when given")
        if not isinstance(self.zero_detuning_sign, ApproachSign):
            object.__setattr__(
                self, "zero_detuning_sign", ApproachSign.parse(self.zero_detuning_sign)
            )

    @classmethod
    def from_lambda(cls, g: float, lam: float, omega_c: float, **kw) -> "SystemParams":
        """Build parameters from lambda = g / delta instead of delta."""
        if lam == 0:
            raise DomainError("lambda = 0 corresponds to infinite detuning")
        return cls(omega_c=omega_c, delta=g / lam, g=g, **kw)

    @property
    def omega_a(self) -> float:
        return self.omega_c + self.delta

    @property
    def sign(self) -> int:
        """Sign of delta, falling back to the approach direction at delta = 0."""
        if self.delta > 0:
            return 1
        if self.delta < 0:
            return -1
        return self.zero_detuning_sign.value

    @property
    def lam(self) -> float:
        if self.delta == 0:
            raise DomainError("lambda = g/delta is undefined at delta = 0")
        return self.g / self.delta

    def to_config(self) -> dict:
        out = {"omega_c": self.omega_c, "delta": self.delta, "g": self.g}
        if self.gamma_scale is not None:
            out["gamma_scale"] = self.gamma_scale
        out["zero_detuning_sign"] = (
            "above" if self.zero_detuning_sign is ApproachSign.FROM_ABOVE else "below"
        )
        return out

    @classmethod
    def from_config(cls, cfg: dict) -> "SystemParams":
        gamma = cfg.get("gamma_scale")
        return cls(
            omega_c=float(cfg["omega_c"]),
            delta=float(cfg["delta"]),
            g=float(cfg["g"]),
            gamma_scale=None if gamma in (None, "") else float(gamma),
            zero_detuning_sign=ApproachSign.parse(cfg.get("zero_detuning_sign", "above")),
        )


@dataclass(frozen=True)
class DressedLabel:
    """Ladder state |n, branch> with n the excitation manifold."""

    n: int
    branch: Branch = Branch.MINUS

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("manifold index must be non-negative")
        if self.branch is Branch.PLUS and self.n < 1:
            raise DomainError("|0,+> is not a physical state")

    @property
    def bosons(self) -> int:
        """Number of dressed bosons (the m in |m, g/e>_S)."""
        return self.n if self.branch is Branch.MINUS else self.n - 1


def mixing_angle(params: SystemParams, n: int) -> float:
    """Mixing angle theta(n) in [-pi/4, pi/4], signed like delta."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0 or params.g == 0:
        return 0.0
    return 0.5 * math.atan2(2.0 * params.g * math.sqrt(n) * params.sign, abs(params.delta))


def half_splitting(params: SystemParams, n: int) -> float:
    """(delta/2) sqrt(1 + 4 lambda^2 n), evaluated without dividing by delta."""
    # hypot avoids under/overflow of the squares
    return 0.5 * params.sign * math.hypot(params.delta, 2.0 * params.g * math.sqrt(n))


def eigenvalue(params: SystemParams, label: DressedLabel) -> float:
    """Closed-form energy E_{n,+-}."""
    n = label.n
    return (n - 0.5) * params.omega_c + label.branch.value * half_splitting(params, n)


def eigenvector_coeffs(params: SystemParams, n: int) -> tuple[float, float]:
    """(cos theta, sin theta) such that |n,-> = c|n,g> - s|n-1,e>, |n,+> = s|n,g> + c|n-1,e>."""
    if n < 1:
        raise DomainError("eigenvector coefficients need n >= 1")
    theta = mixing_angle(params, n)
    return math.cos(theta), math.sin(theta)


def dressed_apply(op: Op, label: DressedLabel) -> tuple[float, Optional[DressedLabel]]:
    """Action of a dressed operator on |n,+->; a ``None`` result means zero."""
    n, br = label.n, label.branch
    minus = br is Branch.MINUS
    if op is Op.A:
        m = n if minus else n - 1
        if m == 0:
            return 0.0, None
        return math.sqrt(m), DressedLabel(n - 1, br)
    if op is Op.ADAG:
        return math.sqrt(n + 1 if minus else n), DressedLabel(n + 1, br)
    if op is Op.ADAG_A:
        return float(n if minus else n - 1), label
    if op is Op.SIGMA_MINUS:
        if minus:
            return 0.0, None
        return 1.0, DressedLabel(n - 1, Branch.MINUS)
    if op is Op.SIGMA_PLUS:
        if not minus:
            return 0.0, None
        return 1.0, DressedLabel(n + 1, Branch.PLUS)
    if op is Op.SIGMA_Z:
        return (-1.0 if minus else 1.0), label
    if op is Op.SIGMA_PLUS_MINUS:
        return (0.0, None) if minus else (1.0, label)
    if op is Op.SIGMA_MINUS_PLUS:
        return (1.0, label) if minus else (0.0, None)
    if op is Op.N_TOTAL:
        return float(n), label
    raise ValueError(f"unsupported operator {op!r}")
