import math

import numpy as np
import pytest
from scipy.linalg import expm

from jcdress.model import Branch, DressedLabel, SystemParams, eigenvalue, eigenvector_coeffs
from jcdress.oracle import (
    FockTlsBasis,
    bare_operators,
    build_bare_hamiltonian,
    build_unitary,
    closed_form_spectrum,
    dense_eigenvalues,
    generator,
    residual_report,
    spectrum,
    to_dressed,
    verify_diagonalization,
)


def test_basis_layout():
    b = FockTlsBasis(3)
    assert b.dim == 7
    assert b.states == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0), (2, 1))
    for i, st in enumerate(b.states):
        assert b.index(*st) == i
    assert b.dressed_label(3) == DressedLabel(2, Branch.MINUS)
    assert b.dressed_label(4) == DressedLabel(2, Branch.PLUS)


def test_operators_canonical():
    op = bare_operators(FockTlsBasis(4))
    assert np.allclose(op["adag"], op["a"].T)
    anti = op["sp"] @ op["sm"] + op["sm"] @ op["sp"]
    # |n_max, g> loses its sigma^+ partner to the truncation
    interior = [i for i in range(9) if i != FockTlsBasis(4).index(4, 0)]
    assert np.allclose(anti[np.ix_(interior, interior)], np.eye(8))
    assert np.allclose(np.diag(op["N"]), [FockTlsBasis(4).manifold(i) for i in range(9)])


def test_bare_hamiltonian_structure():
    p = SystemParams(10.0, 0.5, 1.0)
    h = build_bare_hamiltonian(p, 6)
    op = bare_operators(h.basis)
    assert np.array_equal(h.matrix, h.matrix.T)
    assert np.max(np.abs(h.matrix @ op["N"] - op["N"] @ h.matrix)) < 1e-12
    free = build_bare_hamiltonian(SystemParams(10.0, 0.5, 0.0), 4).matrix
    assert np.count_nonzero(free - np.diag(np.diag(free))) == 0
    lo, hi = np.linalg.eigvalsh(h.block(1))
    assert (lo, hi) == pytest.approx((5 - 0.5 * math.sqrt(4.25), 5 + 0.5 * math.sqrt(4.25)), abs=1e-13)


def test_unitary_properties():
    p = SystemParams(10.0, 0.0, 1.0)
    u = build_unitary(p, 5).matrix
    assert np.allclose(u.T @ u, np.eye(11), atol=1e-15)
    r = 1 / math.sqrt(2)
    assert np.allclose(u[1:3, 1:3], [[r, -r], [r, r]])
    assert np.array_equal(build_unitary(SystemParams(10.0, 2.0, 0.0), 5).matrix, np.eye(11))


def test_unitary_is_exponential_of_generator():
    for p in (SystemParams(10.0, 0.5, 1.0), SystemParams(3.0, -0.8, 0.6), SystemParams(1.0, 0.0, 2.0)):
        assert np.max(np.abs(expm(generator(p, 8).matrix) - build_unitary(p, 8).matrix)) < 1e-13


def test_adjoint_columns_are_eigenvectors():
    p = SystemParams(4.0, 0.9, 1.4)
    b = FockTlsBasis(5)
    ud = build_unitary(p, 5).matrix.T
    h = build_bare_hamiltonian(p, 5).matrix
    for n in range(1, 6):
        c, s = eigenvector_coeffs(p, n)
        minus = ud[:, b.index(n, 0)]
        plus = ud[:, b.index(n - 1, 1)]
        assert minus[b.index(n, 0)] == pytest.approx(c) and minus[b.index(n - 1, 1)] == pytest.approx(-s)
        assert plus[b.index(n, 0)] == pytest.approx(s) and plus[b.index(n - 1, 1)] == pytest.approx(c)
        assert np.allclose(h @ minus, eigenvalue(p, DressedLabel(n, Branch.MINUS)) * minus)
        assert np.allclose(h @ plus, eigenvalue(p, DressedLabel(n, Branch.PLUS)) * plus)


@pytest.mark.parametrize("delta", [0.5, -0.5, 0.0])
def test_dressed_matrix_diagonal_in_label_order(delta):
    p = SystemParams(10.0, delta, 1.0)
    b = FockTlsBasis(20)
    hd = to_dressed(build_bare_hamiltonian(p, 20).matrix, build_unitary(p, 20).matrix)
    assert verify_diagonalization(p, 20) <= 1e-12 * np.max(np.abs(np.diag(hd)))
    expected = [eigenvalue(p, b.dressed_label(i)) for i in range(b.dim)]
    assert np.allclose(np.diag(hd), expected, rtol=1e-13)


def test_spectrum_routes_agree():
    p = SystemParams(2.0, -1.5, 0.8)
    cf = closed_form_spectrum(p, 15)
    num = spectrum(p, 15)
    assert [ln.label for ln in cf] == [ln.label for ln in num]
    assert np.allclose([ln.energy for ln in cf], [ln.energy for ln in num], rtol=1e-12)
    assert np.allclose(sorted(ln.energy for ln in cf), dense_eigenvalues(p, 15), rtol=1e-12)


def test_ground_state_is_dressed_vacuum():
    p = SystemParams(10.0, 0.3, 1.0)
    lowest = spectrum(p, 10)[0]
    assert lowest.label == DressedLabel(0, Branch.MINUS)


def test_residual_report_schema():
    rep = residual_report(SystemParams(10.0, 0.5, 1.0), 20)
    assert set(rep) == {
        "n_max", "params", "offdiag_residual", "offdiag_residual_relative", "unitarity_residual",
        "hermiticity_residual", "number_commutator", "spectrum_max_rel_error",
        "dense_spectrum_max_rel_error",
    }
    assert rep["offdiag_residual_relative"] < 1e-12
    assert rep["unitarity_residual"] < 1e-12
    assert rep["spectrum_max_rel_error"] < 1e-10
