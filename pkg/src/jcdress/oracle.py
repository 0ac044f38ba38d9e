"""Brute-force Jaynes-Cummings matrices on the truncated Fock x two-level space.

Basis ordering (fixed; other modules rely on it): manifold by manifold,
photon number descending within a manifold::

    0: |0,g>    2n-1: |n,g>    2n: |n-1,e>      (n = 1 .. n_max)

After the dressing transform index 2n-1 carries |n,-> and index 2n carries
|n,+>, so index 0 is |0,->.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .model import Branch, DressedLabel, SystemParams, eigenvalue, mixing_angle


@dataclass(frozen=True)
class FockTlsBasis:
    n_max: int
    states: tuple[tuple[int, int], ...] = field(init=False)  # (photons, atom) with atom 0=g, 1=e

    def __post_init__(self):
        if self.n_max < 1:
            raise DomainError("n_max must be >= 1")
        states = [(0, 0)]
        for n in range(1, self.n_max + 1):
            states += [(n, 0), (n - 1, 1)]
        object.__setattr__(self, "states", tuple(states))

    @property
    def dim(self) -> int:
        return 2 * self.n_max + 1

    def index(self, photons: int, atom: int) -> int:
        n = photons + atom
        if n == 0:
            return 0
        return 2 * n - 1 + atom

    def manifold(self, i: int) -> int:
        return (i + 1) // 2

    def manifold_slice(self, n: int) -> slice:
        return slice(0, 1) if n == 0 else slice(2 * n - 1, 2 * n + 1)

    def dressed_label(self, i: int) -> DressedLabel:
        n = self.manifold(i)
        if n == 0 or i == 2 * n - 1:
            return DressedLabel(n, Branch.MINUS)
        return DressedLabel(n, Branch.PLUS)


@dataclass(frozen=True)
class OperatorMatrix:
    matrix: np.ndarray
    basis: FockTlsBasis

    @property
    def offsets(self) -> list[int]:
        return [self.basis.manifold_slice(n).start for n in range(self.basis.n_max + 1)]

    def block(self, n: int) -> np.ndarray:
        s = self.basis.manifold_slice(n)
        return self.matrix[s, s]


def bare_operators(basis: FockTlsBasis) -> dict[str, np.ndarray]:
    """a, a^dag, sigma^-, sigma^+, sigma^z, N restricted to the truncated basis.

    Built on the product space with photon numbers 0..n_max and then
    restricted, so number-conserving products such as a sigma^+ are exact on
    every retained state. Individual ladder operators lose the elements that
    would leave the basis.
    """
    nph = basis.n_max + 1
    a = np.diag(np.sqrt(np.arange(1, nph)), 1)
    sm = np.array([[0.0, 1.0], [0.0, 0.0]])  # atom order (g, e)
    eye_f, eye_a = np.eye(nph), np.eye(2)
    full = {
        "a": np.kron(a, eye_a),
        "adag": np.kron(a.T, eye_a),
        "sm": np.kron(eye_f, sm),
        "sp": np.kron(eye_f, sm.T),
        "sz": np.kron(eye_f, np.diag([-1.0, 1.0])),
    }
    full["N"] = full["adag"] @ full["a"] + full["sp"] @ full["sm"]
    full["I_plus"] = full["adag"] @ full["sm"] + full["a"] @ full["sp"]
    full["I_minus"] = full["adag"] @ full["sm"] - full["a"] @ full["sp"]
    full["n_photon"] = full["adag"] @ full["a"]
    keep = [2 * m + s for m, s in basis.states]
    return {name: mat[np.ix_(keep, keep)] for name, mat in full.items()}


def build_bare_hamiltonian(params: SystemParams, n_max: int) -> OperatorMatrix:
    """H = omega_c a^dag a + omega_a sigma_z / 2 + g (a^dag sigma^- + a sigma^+)."""
    basis = FockTlsBasis(n_max)
    op = bare_operators(basis)
    h = params.omega_c * op["n_photon"] + 0.5 * params.omega_a * op["sz"] + params.g * op["I_plus"]
    return OperatorMatrix(h, basis)


def build_unitary(params: SystemParams, n_max: int) -> OperatorMatrix:
    """The dressing unitary e^S, S = -Lambda(N) I_-, from its resummed closed form.

    Per manifold e^S = cos(theta) - sin(theta) I_-/sqrt(N); its adjoint maps
    |n,g> to |n,-> and |n-1,e> to |n,+>.
    """
    basis = FockTlsBasis(n_max)
    u = np.zeros((basis.dim, basis.dim))
    u[0, 0] = 1.0
    for n in range(1, n_max + 1):
        th = mixing_angle(params, n)
        c, s = np.cos(th), np.sin(th)
        sl = basis.manifold_slice(n)
        u[sl, sl] = [[c, -s], [s, c]]
    return OperatorMatrix(u, basis)


def generator(params: SystemParams, n_max: int) -> OperatorMatrix:
    """S = -Lambda(N) I_- with I_- = a^dag sigma^- - a sigma^+, as a matrix."""
    basis = FockTlsBasis(n_max)
    op = bare_operators(basis)
    i_minus = op["I_minus"]
    lam_n = np.zeros(basis.dim)
    for j in range(basis.dim):
        n = basis.manifold(j)
        if n:
            lam_n[j] = mixing_angle(params, n) / np.sqrt(n)
    return OperatorMatrix(-np.diag(lam_n) @ i_minus, basis)


def to_dressed(h: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Matrix of an operator between dressed states U^dag|bare>, i.e. U h U^dag."""
    return u @ h @ u.conj().T


def verify_diagonalization(params: SystemParams, n_max: int) -> float:
    """Largest off-diagonal entry of the dressed Hamiltonian."""
    h = build_bare_hamiltonian(params, n_max).matrix
    u = build_unitary(params, n_max).matrix
    hd = to_dressed(h, u)
    off = hd - np.diag(np.diag(hd))
    return float(np.max(np.abs(off)))


def unitarity_residual(params: SystemParams, n_max: int) -> float:
    u = build_unitary(params, n_max).matrix
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


@dataclass(frozen=True)
class SpectrumLine:
    label: DressedLabel
    energy: float


def spectrum(params: SystemParams, n_max: int) -> list[SpectrumLine]:
    """Eigenvalues from per-manifold numerical diagonalization, sorted by energy.

    Labels follow the mixing-angle sign: with theta > 0 (delta > 0, or
    delta = 0 approached from above) the lower level of each manifold is
    |n,->, with theta < 0 it is the upper one.
    """
    h = build_bare_hamiltonian(params, n_max)
    lines = [SpectrumLine(DressedLabel(0, Branch.MINUS), float(h.block(0)[0, 0]))]
    for n in range(1, n_max + 1):
        lo, hi = np.linalg.eigvalsh(h.block(n))
        if params.g != 0 and hi - lo <= 1e-13 * max(1.0, abs(hi)):
            raise ArithmeticError(f"degenerate manifold n={n} with g != 0")
        minus, plus = (lo, hi) if params.sign > 0 else (hi, lo)
        lines.append(SpectrumLine(DressedLabel(n, Branch.MINUS), float(minus)))
        lines.append(SpectrumLine(DressedLabel(n, Branch.PLUS), float(plus)))
    lines.sort(key=lambda ln: ln.energy)
    return lines


def dense_eigenvalues(params: SystemParams, n_max: int) -> np.ndarray:
    """Second, block-agnostic route: diagonalize the whole truncated matrix."""
    return np.linalg.eigvalsh(build_bare_hamiltonian(params, n_max).matrix)


def closed_form_spectrum(params: SystemParams, n_max: int) -> list[SpectrumLine]:
    labels = [DressedLabel(0, Branch.MINUS)]
    for n in range(1, n_max + 1):
        labels += [DressedLabel(n, Branch.MINUS), DressedLabel(n, Branch.PLUS)]
    lines = [SpectrumLine(lb, eigenvalue(params, lb)) for lb in labels]
    lines.sort(key=lambda ln: ln.energy)
    return lines


def residual_report(params: SystemParams, n_max: int) -> dict:
    """Fixed-schema summary of every oracle check at one parameter point."""
    h = build_bare_hamiltonian(params, n_max)
    hmax = float(np.max(np.abs(h.matrix)))
    oracle = {(ln.label.n, ln.label.branch): ln.energy for ln in spectrum(params, n_max)}
    closed = {(ln.label.n, ln.label.branch): ln.energy for ln in closed_form_spectrum(params, n_max)}
    # relative to |E|, floored so levels that happen to sit near zero stay meaningful
    spec_err = max(
        abs(oracle[key] - closed[key]) / max(abs(closed[key]), 1e-3 * hmax) for key in closed
    )
    dense = dense_eigenvalues(params, n_max)
    dense_err = float(np.max(np.abs(np.sort(list(closed.values())) - dense))) / hmax
    op = bare_operators(h.basis)
    comm = h.matrix @ op["N"] - op["N"] @ h.matrix
    offdiag = verify_diagonalization(params, n_max)
    return {
        "n_max": n_max,
        "params": params.to_config(),
        "offdiag_residual": offdiag,
        "offdiag_residual_relative": offdiag / hmax,
        "unitarity_residual": unitarity_residual(params, n_max),
        "hermiticity_residual": float(np.max(np.abs(h.matrix - h.matrix.T))),
        "number_commutator": float(np.max(np.abs(comm))),
        "spectrum_max_rel_error": float(spec_err),
        "dense_spectrum_max_rel_error": dense_err,
    }
