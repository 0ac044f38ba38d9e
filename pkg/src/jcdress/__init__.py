"""Exact dressed-state toolkit for Jaynes-Cummings and two-site Jaynes-Cummings-Hubbard models."""
from .errors import DomainError, PrecisionExhausted
from .kbody import (
    CoefficientTable,
    EffectiveOnSite,
    coeff_dispersive,
    coeff_exact,
    coeff_forward_difference,
    coeff_resonant,
    coefficient_table,
    effective_onsite_n2,
    ladder_energy_from_kbody,
)
from .model import ApproachSign, Branch, DressedLabel, Op, SystemParams, eigenvalue, mixing_angle
from .twosite import BoseHubbardParams, GroundStateReport, TwoSiteParams, ground_state

__all__ = [
    "ApproachSign",
    "BoseHubbardParams",
    "Branch",
    "CoefficientTable",
    "DomainError",
    "DressedLabel",
    "EffectiveOnSite",
    "GroundStateReport",
    "Op",
    "PrecisionExhausted",
    "SystemParams",
    "TwoSiteParams",
    "coeff_dispersive",
    "coeff_exact",
    "coeff_forward_difference",
    "coeff_resonant",
    "coefficient_table",
    "effective_onsite_n2",
    "eigenvalue",
    "ground_state",
    "ladder_energy_from_kbody",
    "mixing_angle",
]
