"""Two-site Jaynes-Cummings-Hubbard model in fixed total-excitation sectors.

States are labelled |m1, m2, s1, s2>. In the bare basis s = g/e and m is
the photon number; in the dressed basis s = -/+ and m counts dressed
bosons. Both share one index map onto the single-site basis of
:mod:`jcdress.oracle`: (m, g or -) -> |m,g>, (m, e or +) -> |m,e>.

Sector ordering follows the branch subspaces --, +-, -+, ++ and, inside
each, larger single-site occupation first (|20>, |02>, |11> for two
excitations in --).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .kbody import coeff_exact, effective_onsite_n2
from .model import Branch, SystemParams, mixing_angle
from .oracle import FockTlsBasis, bare_operators, build_bare_hamiltonian, build_unitary


@dataclass(frozen=True)
class TwoSiteParams:
    site: SystemParams
    hop_j: float

    def __post_init__(self):
        if not self.hop_j >= 0:
            raise DomainError("hopping J must be non-negative")


@dataclass(frozen=True)
class TwoSiteBasisState:
    m1: int
    m2: int
    s1: Branch
    s2: Branch

    @property
    def n_tot(self) -> int:
        return self.m1 + self.m2 + (self.s1 is Branch.PLUS) + (self.s2 is Branch.PLUS)

    @property
    def site_excitations(self) -> tuple[int, int]:
        return self.m1 + (self.s1 is Branch.PLUS), self.m2 + (self.s2 is Branch.PLUS)

    def __str__(self) -> str:
        return f"|{self.m1},{self.m2},{self.s1.symbol},{self.s2.symbol}>"


@dataclass(frozen=True)
class BoseHubbardParams:
    mu: float
    u: float
    j: float


@dataclass(frozen=True)
class SectorMatrix:
    matrix: np.ndarray
    states: tuple[TwoSiteBasisState, ...]
    n_tot: int

    def index(self, m1: int, m2: int, s1="-", s2="-") -> int:
        key = TwoSiteBasisState(m1, m2, Branch.parse(s1), Branch.parse(s2))
        return self.states.index(key)

    def subspace(self, s1="-", s2="-") -> np.ndarray:
        s1, s2 = Branch.parse(s1), Branch.parse(s2)
        idx = [i for i, st in enumerate(self.states) if st.s1 is s1 and st.s2 is s2]
        return self.matrix[np.ix_(idx, idx)]


class Outcoupling(NamedTuple):
    m1: float
    m2: float
    m3: float
    k1: float
    k2: float


_BRANCH_ORDER = [
    (Branch.MINUS, Branch.MINUS),
    (Branch.PLUS, Branch.MINUS),
    (Branch.MINUS, Branch.PLUS),
    (Branch.PLUS, Branch.PLUS),
]


def sector_basis(n_tot: int) -> tuple[TwoSiteBasisState, ...]:
    if n_tot < 0:
        raise DomainError("n_tot must be non-negative")
    states = []
    for s1, s2 in _BRANCH_ORDER:
        bosons = n_tot - (s1 is Branch.PLUS) - (s2 is Branch.PLUS)
        if bosons < 0:
            continue
        pairs = [(m1, bosons - m1) for m1 in range(bosons + 1)]
        pairs.sort(key=lambda p: (-max(p), -p[0]))
        states += [TwoSiteBasisState(m1, m2, s1, s2) for m1, m2 in pairs]
    return tuple(states)


def _site_index(basis: FockTlsBasis, m: int, s: Branch) -> int:
    return basis.index(m, 1 if s is Branch.PLUS else 0)


def _sector_indices(basis: FockTlsBasis, states) -> list[int]:
    d = basis.dim
    return [_site_index(basis, st.m1, st.s1) * d + _site_index(basis, st.m2, st.s2) for st in states]


def _single_site(n_tot: int) -> FockTlsBasis:
    return FockTlsBasis(max(n_tot, 1))


def _hopping(op: dict) -> np.ndarray:
    return np.kron(op["adag"], op["a"]) + np.kron(op["a"], op["adag"])


def _restrict(full: np.ndarray, basis: FockTlsBasis, n_tot: int) -> SectorMatrix:
    states = sector_basis(n_tot)
    idx = _sector_indices(basis, states)
    return SectorMatrix(full[np.ix_(idx, idx)], states, n_tot)


def build_bare_jch(params: TwoSiteParams, n_tot: int) -> SectorMatrix:
    """Bare two-site JCH Hamiltonian on the n_tot sector (photon/atom basis)."""
    basis = _single_site(n_tot)
    h1 = build_bare_hamiltonian(params.site, basis.n_max).matrix
    eye = np.eye(basis.dim)
    full = np.kron(h1, eye) + np.kron(eye, h1) + params.hop_j * _hopping(bare_operators(basis))
    return _restrict(full, basis, n_tot)


def sector_unitary(params: TwoSiteParams, n_tot: int) -> SectorMatrix:
    """U = U_1 U_2 restricted to the sector; it never mixes sectors."""
    basis = _single_site(n_tot)
    u1 = build_unitary(params.site, basis.n_max).matrix
    return _restrict(np.kron(u1, u1), basis, n_tot)


def dressed_transform_two_site(params: TwoSiteParams, n_tot: int) -> SectorMatrix:
    """The JCH Hamiltonian between dressed states |m1,m2,s1,s2>."""
    h = build_bare_jch(params, n_tot)
    u = sector_unitary(params, n_tot).matrix
    return SectorMatrix(u @ h.matrix @ u.T, h.states, n_tot)


def build_truncated_jch(params: TwoSiteParams, n_tot_max: int = 2) -> tuple[np.ndarray, list[int]]:
    """Full Hamiltonian on all states with N1 + N2 <= n_tot_max, sector by sector.

    Built on the product space and restricted, so any coupling between
    sectors would show up as nonzero off-block entries. Returns the matrix
    and the sector dimensions.
    """
    basis = _single_site(n_tot_max)
    h1 = build_bare_hamiltonian(params.site, basis.n_max).matrix
    eye = np.eye(basis.dim)
    full = np.kron(h1, eye) + np.kron(eye, h1) + params.hop_j * _hopping(bare_operators(basis))
    idx, dims = [], []
    for n in range(n_tot_max + 1):
        sec = _sector_indices(basis, sector_basis(n))
        idx += sec
        dims.append(len(sec))
    return full[np.ix_(idx, idx)], dims


def j_eff(params: TwoSiteParams, manifold: int) -> float:
    """Effective hopping inside the -- subspace for one or two excitations."""
    t1 = mixing_angle(params.site, 1)
    c1, s1 = math.cos(t1), math.sin(t1)
    if manifold == 1:
        return params.hop_j * c1 * c1
    if manifold == 2:
        t2 = mixing_angle(params.site, 2)
        return params.hop_j * c1 * (c1 * math.cos(t2) + s1 * math.sin(t2) / math.sqrt(2))
    raise DomainError("manifold must be 1 or 2")


def outcoupling(params: TwoSiteParams) -> Outcoupling:
    """Amplitudes M1, M2, M3, K1, K2 for leaving the -- subspace via hopping."""
    t1, t2 = mixing_angle(params.site, 1), mixing_angle(params.site, 2)
    c1, s1, c2, s2 = math.cos(t1), math.sin(t1), math.cos(t2), math.sin(t2)
    r2 = math.sqrt(2)
    j = params.hop_j
    return Outcoupling(
        m1=j * c1 * s1,
        m2=j * s1 * (r2 * c1 * c2 + s1 * s2),
        m3=j * c1 * (r2 * c1 * s2 - s1 * c2),
        k1=j * c1 * (r2 * s1 * c2 - c1 * s2),
        k2=j * s1 * (r2 * s1 * c2 - c1 * s2),
    )


def vacuum_energy(params: TwoSiteParams) -> float:
    """Energy of |0,0,-,->, the constant dropped from the -- blocks."""
    return 2 * coeff_exact(params.site, 0) - params.site.omega_c


def hbar_blocks(params: TwoSiteParams) -> tuple[np.ndarray, np.ndarray]:
    """One- and two-excitation blocks of the -- projection, vacuum energy removed.

    Orderings are {|10>, |01>} and {|20>, |02>, |11>}.
    """
    eff = effective_onsite_n2(params.site, Branch.MINUS)
    om, u = eff.omega_eff, eff.u_eff
    j1, j2 = j_eff(params, 1), math.sqrt(2) * j_eff(params, 2)
    h1 = np.array([[om, j1], [j1, om]])
    h2 = np.array([[2 * om + u, 0.0, j2], [0.0, 2 * om + u, j2], [j2, j2, 2 * om]])
    return h1, h2


def bose_hubbard_blocks(params: BoseHubbardParams) -> tuple[np.ndarray, np.ndarray]:
    mu, u, j = params.mu, params.u, params.j
    r = math.sqrt(2) * j
    h1 = np.array([[-mu, j], [j, -mu]])
    h2 = np.array([[-2 * mu + u, 0.0, r], [0.0, -2 * mu + u, r], [r, r, -2 * mu]])
    return h1, h2


def effective_bose_hubbard(params: TwoSiteParams, manifold: int = 2) -> BoseHubbardParams:
    """Bose-Hubbard parameters that reproduce one H-bar block exactly."""
    eff = effective_onsite_n2(params.site, Branch.MINUS)
    return BoseHubbardParams(mu=-eff.omega_eff, u=eff.u_eff, j=j_eff(params, manifold))


def dispersive_hamiltonian(params: TwoSiteParams, n_tot: int) -> SectorMatrix:
    """Small-lambda model: branch-wise Bose-Hubbard blocks plus J*lambda cross terms.

    Acts on the dressed sector basis. On-site energies are the k-body series
    cut at two-body order; the cross-site boson-TLS couplings use lambda = g/delta.
    """
    site = params.site
    lam = site.lam
    if abs(lam) > 0.1:
        warnings.warn(
            f"dispersive model used at lambda={lam:.3g}, outside its intended range |lambda| <= 0.1",
            stacklevel=2,
        )
    basis = _single_site(n_tot)
    # dressed ladder operators act on |m, -/+> exactly as bare ones on |m, g/e>
    op = bare_operators(basis)
    onsite = np.zeros(basis.dim)
    branches = {br: effective_onsite_n2(site, br) for br in Branch}
    for i, (m, s) in enumerate(basis.states):
        eff = branches[Branch.PLUS if s else Branch.MINUS]
        onsite[i] = eff.omega_eff * m + 0.5 * eff.u_eff * m * (m - 1) + eff.e0
    eye = np.eye(basis.dim)
    h = np.kron(np.diag(onsite), eye) + np.kron(eye, np.diag(onsite))
    h = h + params.hop_j * _hopping(op)
    cross = (
        np.kron(op["adag"], op["sm"])
        + np.kron(op["a"], op["sp"])
        + np.kron(op["sm"], op["adag"])
        + np.kron(op["sp"], op["a"])
    )
    h = h + params.hop_j * lam * cross
    return _restrict(h, basis, n_tot)


def ideal_states(states) -> dict[str, np.ndarray]:
    """Mott-insulator |1,1> and superfluid (|2,0> + |0,2>)/2 - |1,1>/sqrt(2) vectors.

    The same coefficient vector is the photonic state in the bare basis and
    the dressed state in the dressed basis.
    """
    idx = {(st.m1, st.m2, st.s1, st.s2): i for i, st in enumerate(states)}
    mm = Branch.MINUS
    mi = np.zeros(len(states))
    mi[idx[(1, 1, mm, mm)]] = 1.0
    sf = np.zeros(len(states))
    sf[idx[(2, 0, mm, mm)]] = 0.5
    sf[idx[(0, 2, mm, mm)]] = 0.5
    sf[idx[(1, 1, mm, mm)]] = -1.0 / math.sqrt(2)
    return {"mi": mi, "sf": sf}


def _site_number_variance(states, amps: np.ndarray, site: int) -> float:
    prob = np.abs(amps) ** 2
    n = np.array([st.site_excitations[site] for st in states], dtype=float)
    mean = prob @ n
    return float(max(prob @ (n * n) - mean * mean, 0.0))


@dataclass(frozen=True)
class GroundStateReport:
    energy: float
    amplitudes: tuple[float, ...]  # over the dressed n_tot = 2 basis
    states: tuple[TwoSiteBasisState, ...]
    variance: float
    variance_site2: float
    overlap_dressed_mi: float
    overlap_photonic_mi: float
    overlap_dressed_sf: float
    overlap_photonic_sf: float
    effective_ratio: float
    gap: float
    near_degenerate: bool

    def as_dict(self) -> dict:
        return {
            "energy": self.energy,
            "variance": self.variance,
            "overlap_dressed_mi": self.overlap_dressed_mi,
            "overlap_photonic_mi": self.overlap_photonic_mi,
            "overlap_dressed_sf": self.overlap_dressed_sf,
            "overlap_photonic_sf": self.overlap_photonic_sf,
            "effective_ratio": self.effective_ratio,
            "gap": self.gap,
            "near_degenerate": self.near_degenerate,
            "amplitudes": {str(st): a for st, a in zip(self.states, self.amplitudes)},
        }


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v if v[k] >= 0 else -v


def ground_state(params: TwoSiteParams, gap_tol: float = 1e-10) -> GroundStateReport:
    """Two-excitation ground state with its number variance and phase overlaps."""
    h = build_bare_jch(params, 2)
    u = sector_unitary(params, 2).matrix
    evals, evecs = np.linalg.eigh(h.matrix)
    psi_bare = evecs[:, 0]
    psi = _fix_phase(u @ psi_bare)
    ideal = ideal_states(h.states)
    u_eff = coeff_exact(params.site, 2)
    j2 = j_eff(params, 2)
    if u_eff != 0:
        ratio = j2 / u_eff
    else:
        ratio = math.inf if j2 > 0 else math.nan
    gap = float(evals[1] - evals[0])
    return GroundStateReport(
        energy=float(evals[0]),
        amplitudes=tuple(float(x) for x in psi),
        states=h.states,
        variance=_site_number_variance(h.states, psi, 0),
        variance_site2=_site_number_variance(h.states, psi, 1),
        overlap_dressed_mi=float((ideal["mi"] @ psi) ** 2),
        overlap_photonic_mi=float((ideal["mi"] @ psi_bare) ** 2),
        overlap_dressed_sf=float((ideal["sf"] @ psi) ** 2),
        overlap_photonic_sf=float((ideal["sf"] @ psi_bare) ** 2),
        effective_ratio=float(ratio),
        gap=gap,
        near_degenerate=gap < gap_tol,
    )


def bare_variance(params: TwoSiteParams) -> float:
    """Site-1 number variance of the ground state evaluated in the bare basis."""
    h = build_bare_jch(params, 2)
    _, evecs = np.linalg.eigh(h.matrix)
    return _site_number_variance(h.states, evecs[:, 0], 0)
