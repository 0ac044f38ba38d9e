import math

import numpy as np
import pytest

from jcdress.errors import DomainError
from jcdress.kbody import (
    asymptotic_resonant_magnitude,
    coeff_dispersive,
    coeff_exact,
    coeff_forward_difference,
    coeff_resonant,
    coefficient_table,
    effective_hamiltonian_n3_terms,
    effective_onsite_n2,
    ladder_energy_from_kbody,
)
from jcdress.model import Branch, DressedLabel, SystemParams, eigenvalue

# reference values computed symbolically, delta = g = 1
FROZEN_MINUS = {
    0: -0.5,
    1: -0.6180339887498948482045868,
    2: 0.2360679774997896964091737,
    3: -0.1568776039816791911733711,
    10: 0.06134270365906029820323977,
    40: 0.02676311705853269733155696,
}
FROZEN_PLUS = {
    0: 1.118033988749894848204587,
    1: 0.3819660112501051517954132,
    2: -0.07919037351811050523580253,
    3: 0.03519191086295148702728619,
    10: -0.003768212370190549199089499,
    40: -0.0003544013886497431037337853,
}
UNIT = SystemParams(10.0, 1.0, 1.0)


@pytest.mark.parametrize("k", sorted(FROZEN_MINUS))
def test_frozen_values(k):
    assert coeff_exact(UNIT, k, Branch.MINUS) == pytest.approx(FROZEN_MINUS[k], rel=1e-14)
    assert coeff_exact(UNIT, k, Branch.PLUS) == pytest.approx(FROZEN_PLUS[k], rel=1e-14)


def test_frozen_k25_off_unit():
    assert coeff_exact(SystemParams(1.0, 2.5, 0.75), 25) == pytest.approx(-1.051282983742016818217485e-05, rel=1e-13)
    assert coeff_exact(SystemParams(1.0, -2.5, 0.75), 25, "+") == pytest.approx(-1.235752063217459815517492e-06, rel=1e-13)


def test_c0_and_zero_coupling():
    p = SystemParams(5.0, -3.2, 0.0)
    assert coeff_exact(p, 0) == pytest.approx(1.6)
    assert all(coeff_exact(p, k, br) == 0.0 for k in range(1, 8) for br in Branch)


def test_resonant_closed_forms():
    assert coeff_resonant(1.0, 1) == -1.0
    assert coeff_resonant(2.0, 2) == pytest.approx(2 * (2 - math.sqrt(2)), rel=1e-15)
    c3 = -(3 - 3 * math.sqrt(2) + math.sqrt(3))
    assert coeff_resonant(1.0, 3) == pytest.approx(c3, rel=1e-15)
    assert coeff_resonant(1.0, 3, "below") == pytest.approx(-c3, rel=1e-15)
    assert coeff_resonant(1.0, 10) == pytest.approx(0.3514300009595380369426889, rel=1e-14)
    with pytest.raises(DomainError):
        coeff_resonant(1.0, 0)


@pytest.mark.parametrize("k", range(1, 11))
def test_resonant_matches_tiny_detuning(k):
    p = SystemParams(1.0, 1e-8, 1.3)
    assert abs(coeff_exact(p, k) - coeff_resonant(1.3, k)) < 1e-6 * 1.3


def test_exact_zero_detuning_uses_approach():
    above = SystemParams(1.0, 0.0, 1.0)
    below = SystemParams(1.0, 0.0, 1.0, zero_detuning_sign="below")
    for k in range(1, 6):
        assert coeff_exact(above, k) == pytest.approx(coeff_resonant(1.0, k), rel=1e-14)
        assert coeff_exact(below, k) == pytest.approx(-coeff_exact(above, k), rel=1e-14)


def test_dispersive_forms():
    lam = 0.01
    assert coeff_dispersive(1.0, lam, 1) == pytest.approx(-lam, rel=1e-15)
    assert coeff_dispersive(1.0, lam, 2) == pytest.approx(2 * lam**3, rel=1e-14)
    assert coeff_dispersive(1.0, lam, 3) == pytest.approx(-12 * lam**5, rel=1e-14)
    with pytest.raises(DomainError, match="lambda"):
        coeff_dispersive(1.0, 0.4, 2)
    with pytest.raises(DomainError):
        coeff_dispersive(1.0, -0.01, 1)


def test_dispersive_limit_converges():
    # relative gap shrinks like lambda^2
    gaps = []
    for lam in (1e-2, 1e-3):
        p = SystemParams.from_lambda(1.0, lam, 10.0)
        gaps.append(abs(coeff_exact(p, 2) / coeff_dispersive(1.0, lam, 2) - 1))
    assert gaps[1] < gaps[0] / 50


@pytest.mark.parametrize("k", [0, 1, 2, 7, 30, 90])
@pytest.mark.parametrize("branch", list(Branch))
def test_forward_difference_agrees(k, branch):
    p = SystemParams(1.0, 0.37, 1.9)
    a, b = coeff_exact(p, k, branch), coeff_forward_difference(p, k, branch)
    assert a == pytest.approx(b, rel=1e-13)


def test_table_and_large_k():
    t = coefficient_table(SystemParams.from_lambda(1.0, 0.1, 10.0), 200)
    assert len(t.values) == 201 and t.precision_bits >= 64 + 400
    assert t[200] != 0 and math.isfinite(t[200])
    signs = np.sign(t.values[1:])
    assert np.all(signs[:-1] * signs[1:] == -1)


def test_asymptotic_magnitude():
    assert asymptotic_resonant_magnitude(1.0, math.e) == pytest.approx(1 / math.sqrt(math.pi))
    ratio = abs(coeff_resonant(1.0, 10_000)) / asymptotic_resonant_magnitude(1.0, 10_000)
    assert abs(ratio - 1) < 0.25
    assert asymptotic_resonant_magnitude(1.0, 1e300) < 0.04


def test_effective_onsite():
    p = SystemParams(7.0, 0.6, 0.0)
    eff = effective_onsite_n2(p)
    assert (eff.omega_eff, eff.u_eff) == (7.0, 0.0)
    assert eff.e0 == pytest.approx(-0.3 - 3.5)
    res = effective_onsite_n2(SystemParams(7.0, 0.0, 1.0))
    assert res.u_eff == pytest.approx(2 - math.sqrt(2), rel=1e-14)
    disp = effective_onsite_n2(SystemParams.from_lambda(1.0, 0.1, 7.0))
    assert disp.u_eff == pytest.approx(2e-3, rel=0.1)
    assert np.sign(effective_onsite_n2(SystemParams(7.0, -0.5, 1.0)).u_eff) == -1


@pytest.mark.parametrize("branch", list(Branch))
def test_sum_rule_small_n(branch):
    p = SystemParams(3.0, 0.7, 2.1)
    for n in range(0 if branch is Branch.MINUS else 1, 30):
        target = eigenvalue(p, DressedLabel(n, branch)) - (n - 0.5) * p.omega_c
        assert ladder_energy_from_kbody(p, n, branch) == pytest.approx(target, rel=1e-12)


def test_sum_rule_examples():
    p = SystemParams.from_lambda(1.0, 3.0, 10.0)
    got = ladder_energy_from_kbody(p, 12)
    assert got == pytest.approx(-(p.delta / 2) * math.sqrt(1 + 4 * 9 * 12), rel=1e-9)
    q = SystemParams(1.0, 0.8, 0.45)
    assert ladder_energy_from_kbody(q, 1) == pytest.approx(-(0.4) * math.sqrt(1 + 4 * (0.45 / 0.8) ** 2), rel=1e-14)
    assert ladder_energy_from_kbody(q, 0) == pytest.approx(-0.4)


def test_sum_rule_kmax_independent():
    p = SystemParams(1.0, 1.1, 0.9)
    base = ladder_energy_from_kbody(p, 6)
    assert ladder_energy_from_kbody(p, 6, k_max=20) == pytest.approx(base, rel=1e-12)
    with pytest.raises(DomainError):
        ladder_energy_from_kbody(p, 6, k_max=5)


def test_n3_terms():
    c3, c2p = effective_hamiltonian_n3_terms(SystemParams(1.0, 1e-12, 1.0))
    assert c3 == pytest.approx(-(3 - 3 * math.sqrt(2) + math.sqrt(3)), abs=1e-9)
    assert effective_hamiltonian_n3_terms(SystemParams(1.0, 2.0, 0.0)) == (0.0, 0.0)
    p = SystemParams.from_lambda(1.0, 0.05, 10.0)
    c3, c2p = effective_hamiltonian_n3_terms(p)
    assert c3 == pytest.approx(-12 * 0.05**5, rel=0.05)
    assert c3 == pytest.approx(coeff_exact(p, 3), rel=1e-13)
    assert c2p == pytest.approx(coeff_exact(p, 2, Branch.PLUS), rel=1e-13)
    for delta in (-2.0, 0.5, 3.0):
        c3, _ = effective_hamiltonian_n3_terms(SystemParams(1.0, delta, 0.8))
        assert np.sign(c3) == -np.sign(delta)
