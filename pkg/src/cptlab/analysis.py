"""Numerical experiments on the n = 1 family and the gamma-deformed operator.

H1(mu, nu)   = -d2 + mu^2 x^4 - nu^2 x^2 + 2 mu x + i nu + 2 i mu nu x^3
H_g(mu, nu)  = -d2 + mu^2 x^4 + 2 i mu nu x^3 - nu^2 x^2 + 2 mu g x

so ``H_{g=1} = H1 - i nu``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import blockalg
from .cptmodel import CPTFamilySpec, monomial_family
from .eigen import (
    Spectrum,
    eig_general,
    eig_hermitian,
    lu_solve,
    min_abs_eigenvalue,
)
from .errors import DegenerateLevel
from .exactalg import I, Poly
from .lattice import Grid, discretize_F, discretize_H

log = logging.getLogger(__name__)

BIORTH_TOL = 1e-10
RATIO_GUARD = 1e-8


# reports --------------------------------------------------------------------

@dataclass
class RealityReport:
    mu: float
    nu: float
    omega: float
    half_width: float
    n_points: int
    mode: str
    eigenvalues: np.ndarray  # lowest m in canonical order
    max_im: float
    pairing_defect: float  # over the full spectrum


@dataclass
class RatioCheck:
    j: int
    k: int
    lambda_j: float
    lambda_k: float
    A: float
    B: float
    C: float
    D: float
    lhs: float
    rhs1: float
    rhs2: float
    residual: float


@dataclass
class SectorReport:
    mu: float
    nu: float
    Lambda: np.ndarray
    basis: np.ndarray
    H_elem: np.ndarray
    identity_residual: float
    cross_norm: float
    same_norm: float
    ratio_checks: list = field(default_factory=list)
    guarded_pairs: int = 0
    ratio_max_error: float = 0.0

    @property
    def inverse_eigenvalues(self) -> np.ndarray:
        """Eigenvalues of F^{-1} for the selected states (lambda = 1/Lambda)."""
        return 1.0 / self.Lambda


@dataclass
class PerturbReport:
    level: int
    E0: complex
    rs1: complex
    rs2: complex
    fd1: complex
    fd2: complex
    rs1_discrepancy: float
    rs2_discrepancy: float
    truncation: int  # number of levels in the second-order sum
    biorthogonal_norm: float


@dataclass
class SweepReport:
    gamma: list
    eigenvalues: list  # per gamma, lowest m in canonical order
    max_im: list
    flagged: list
    im_threshold: float


@dataclass
class SusyReport:
    isospectrality_defect: float
    inverse_charge_residual: Optional[float]
    inverse_singular: bool
    condition_indicator: Optional[float]
    min_abs_eigenvalue_F: float
    structural: dict


# helpers --------------------------------------------------------------------

def _values(spectrum) -> np.ndarray:
    if isinstance(spectrum, Spectrum):
        return np.asarray(spectrum.eigenvalues)
    return np.asarray(spectrum, dtype=complex)


def conjugation_pairing_defect(spectrum) -> float:
    """``max_l min_m |conj(l) - m|`` over the eigenvalue set."""
    w = _values(spectrum)
    if w.size == 0:
        raise ValueError("empty spectrum")
    dist = np.abs(w.conj()[:, None] - w[None, :])
    return float(dist.min(axis=1).max())


def hausdorff_distance(a, b) -> float:
    a, b = _values(a), _values(b)
    dist = np.abs(a[:, None] - b[None, :])
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


def h1_spec(mu, nu, omega=0) -> CPTFamilySpec:
    return monomial_family(1, _exact(mu), _exact(nu), _exact(omega))


def _exact(v):
    return v if isinstance(v, (int, Fraction)) else Fraction(float(v))


def gamma_potential(mu, nu, gamma) -> Poly:
    """``mu^2 x^4 + 2 i mu nu x^3 - nu^2 x^2 + 2 mu gamma x`` (exact)."""
    mu, nu, gamma = _exact(mu), _exact(nu), _exact(gamma)
    return Poly([0, 2 * mu * gamma, -nu * nu, 2 * mu * nu * I, mu * mu])


def gamma_matrix(mu, nu, gamma, grid: Grid) -> np.ndarray:
    return discretize_H(None, grid, "direct", potential=gamma_potential(mu, nu, gamma))


# reality --------------------------------------------------------------------

def reality_report(mu, nu, omega, grid: Grid, mode: str = "direct", m: int = 4) -> RealityReport:
    if mu == 0:
        raise ValueError("mu must be nonzero")
    spec = h1_spec(mu, nu, omega)
    h = discretize_H(spec, grid, mode)
    w = eig_general(h).eigenvalues
    m = min(m, len(w))
    low = w[:m]
    return RealityReport(
        float(mu), float(nu), float(omega), grid.half_width, grid.n_points, mode,
        low, float(np.abs(low.imag).max()) if m else 0.0, conjugation_pairing_defect(w),
    )


# supersymmetry --------------------------------------------------------------

def susy_check(spec: CPTFamilySpec, grid: Grid) -> SusyReport:
    f = discretize_F(spec, grid)
    fs = f.conj()
    defect = hausdorff_distance(eig_general(f @ fs), eig_general(fs @ f))
    report = lu_solve(f, np.eye(f.shape[0], dtype=complex), raise_singular=False)
    if report.singular:
        residual = None
    else:
        residual = float(np.abs(f @ report.solution - np.eye(f.shape[0])).max())
    return SusyReport(
        isospectrality_defect=defect,
        inverse_charge_residual=residual,
        inverse_singular=report.singular,
        condition_indicator=report.condition_indicator,
        min_abs_eigenvalue_F=min_abs_eigenvalue(f),
        structural=blockalg.supercharge_identities(),
    )


def invertibility_probe(mu, nu, half_width: float, points: Sequence[int]) -> list[tuple[int, float]]:
    """min|eig(F_h)| as the grid is refined at fixed half width."""
    from .lattice import make_grid

    spec = h1_spec(mu, nu)
    return [(n, min_abs_eigenvalue(discretize_F(spec, make_grid(half_width, n)))) for n in points]


# sectors --------------------------------------------------------------------

def sector_analysis(mu, nu, grid: Grid, m: int = 40, omega=0, select: str = "largest") -> SectorReport:
    """Matrix elements of product-mode H in the eigenbasis of the Hermitian F_h.

    ``select`` picks the m eigenvectors of largest (default) or smallest |Lambda|.
    """
    if mu == 0:
        raise ValueError("mu must be nonzero")
    spec = h1_spec(mu, nu, omega)
    f = discretize_F(spec, grid)
    h = discretize_H(spec, grid, "product")
    eig = eig_hermitian(f)
    lam_all = eig.eigenvalues.real
    by_size = np.argsort(np.abs(lam_all), kind="stable")
    chosen = by_size[::-1][:m] if select == "largest" else by_size[:m]
    chosen = np.sort(chosen)
    lam = lam_all[chosen]
    u = eig.right_vectors[:, chosen]

    h_elem = u.conj().T @ h @ u
    hd_elem = u.conj().T @ h.conj().T @ u
    lhs_side = lam[:, None] * hd_elem
    rhs_side = lam[None, :] * h_elem
    scale = np.abs(lam).max() * np.abs(h_elem).max()
    identity_residual = float(np.abs(lhs_side - rhs_side).max() / scale)

    pos, neg = lam > 0, lam < 0
    cross = math.sqrt(
        np.linalg.norm(h_elem[np.ix_(pos, neg)]) ** 2
        + np.linalg.norm(h_elem[np.ix_(neg, pos)]) ** 2
    )
    same = math.sqrt(
        np.linalg.norm(h_elem[np.ix_(pos, pos)]) ** 2
        + np.linalg.norm(h_elem[np.ix_(neg, neg)]) ** 2
    )

    nu_f = float(nu)
    herm = u.conj().T @ (0.5 * (h + h.conj().T)) @ u
    if nu_f != 0.0:
        anti = u.conj().T @ ((h - h.conj().T) / (2j * nu_f)) @ u
    else:
        anti = np.zeros_like(herm)
    guard = RATIO_GUARD * np.abs(h_elem).max()
    checks, guarded, worst = [], 0, 0.0
    for a in range(len(lam)):
        for b in range(len(lam)):
            A, B = herm[a, b].real, herm[a, b].imag
            C, D = anti[a, b].real, anti[a, b].imag
            den1 = A + nu_f * D
            den2 = B - nu_f * C
            if abs(den1) < guard or abs(den2) < guard:
                guarded += 1
                continue
            lhs = lam[a] / lam[b]  # lambda_k / lambda_j with lambda = 1/Lambda
            rhs1 = (A * A - nu_f**2 * D * D) / den1**2
            rhs2 = (B * B - nu_f**2 * C * C) / den2**2
            err = max(abs(lhs - rhs1), abs(lhs - rhs2)) / max(1.0, abs(lhs))
            worst = max(worst, err)
            checks.append(RatioCheck(
                int(chosen[a]), int(chosen[b]), float(lam[a]), float(lam[b]),
                float(A), float(B), float(C), float(D),
                float(lhs), float(rhs1), float(rhs2), float(err),
            ))
    return SectorReport(
        float(mu), nu_f, lam, u, h_elem, identity_residual, cross, same,
        checks, guarded, worst,
    )


# perturbation in gamma ------------------------------------------------------

def _match(target: complex, candidates: np.ndarray) -> complex:
    """Nearest candidate; ties broken by smaller |Im|."""
    dist = np.abs(candidates - target)
    best = dist.min()
    ties = np.flatnonzero(dist <= best * (1 + 1e-12))
    pick = ties[np.argmin(np.abs(candidates[ties].imag))]
    return complex(candidates[pick])


def perturbation_report(
    mu,
    nu,
    grid: Grid,
    n_levels: int = 3,
    fd_step: float = 1e-3,
    truncation: Optional[int] = None,
) -> list[PerturbReport]:
    """First/second-order RS coefficients of E_n(gamma) at gamma = 0 versus finite differences.

    Levels whose biorthogonal norm ``|<phi_L|phi_R>|`` falls below 1e-10 are
    skipped with a warning; the lowest ``n_levels`` remaining levels are
    reported.  ``truncation`` caps the number of intermediate levels in the
    second-order sum (default: every level of the grid).
    """
    if mu == 0:
        raise ValueError("mu must be nonzero")
    if not fd_step > 0:
        raise ValueError("fd_step must be positive")
    h0 = gamma_matrix(mu, nu, 0, grid)
    v1 = 2.0 * float(mu) * grid.nodes
    n = h0.shape[0]
    count = n if truncation is None else min(truncation, n)
    spec0 = eig_general(h0, want_vectors=True, want_left=True, vector_count=count)
    e0 = spec0.eigenvalues[:count]
    r, l = spec0.right_vectors, spec0.left_vectors
    norms = np.einsum("ij,ij->j", l.conj(), r)
    coupling = l.conj().T @ (v1[:, None] * r)  # <phi_L,a| V1 |phi_R,b>

    plus = eig_general(gamma_matrix(mu, nu, fd_step, grid)).eigenvalues
    minus = eig_general(gamma_matrix(mu, nu, -fd_step, grid)).eigenvalues

    reports = []
    for level in range(count):
        if len(reports) >= n_levels:
            break
        if abs(norms[level]) < BIORTH_TOL:
            err = DegenerateLevel(
                f"level {level}: |<phi_L|phi_R>| = {abs(norms[level]):.2e} < {BIORTH_TOL:g}"
            )
            log.warning("%s; skipped", err)
            continue
        rs1 = coupling[level, level] / norms[level]
        others = [k for k in range(count) if k != level and abs(norms[k]) >= BIORTH_TOL]
        rs2 = complex(sum(
            coupling[level, k] * coupling[k, level]
            / ((e0[level] - e0[k]) * norms[level] * norms[k])
            for k in others
        ))
        ep = _match(e0[level], plus)
        em = _match(e0[level], minus)
        fd1 = (ep - em) / (2 * fd_step)
        fd2 = (ep - 2 * e0[level] + em) / fd_step**2
        reports.append(PerturbReport(
            level=level,
            E0=complex(e0[level]),
            rs1=complex(rs1),
            rs2=rs2,
            fd1=complex(fd1),
            fd2=complex(fd2),
            rs1_discrepancy=float(abs(rs1 - fd1) / max(abs(fd1), 1e-12)),
            rs2_discrepancy=float(abs(2 * rs2 - fd2) / max(abs(fd2), 1e-12)),
            truncation=len(others) + 1,
            biorthogonal_norm=float(abs(norms[level])),
        ))
    return reports


def gamma_sweep(
    mu,
    nu,
    grid: Grid,
    gamma_values: Sequence[float],
    m: int = 4,
    im_threshold: float = 1e-6,
) -> SweepReport:
    gammas = [float(g) for g in gamma_values]
    if not gammas:
        raise ValueError("gamma list is empty")
    if any(b <= a for a, b in zip(gammas, gammas[1:])):
        raise ValueError("gamma values must be strictly increasing")
    rows, ims, flags = [], [], []
    for g in gammas:
        w = eig_general(gamma_matrix(mu, nu, g, grid)).eigenvalues[:m]
        rows.append(w)
        mi = float(np.abs(w.imag).max()) if len(w) else 0.0
        ims.append(mi)
        flags.append(mi > im_threshold)
    return SweepReport(gammas, rows, ims, flags, im_threshold)
