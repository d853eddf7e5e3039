"""CPT-symmetric Hamiltonians generated by the charge ``C = d/dx + w(x)``.

With ``w = sigma + i*alpha`` (sigma even, alpha odd, both real) the
Hamiltonian ``H = -d^2/dx^2 + V`` commuting with ``F = C P`` in the sense
``F H^dagger = H F`` has

    K = sigma',  S = alpha',  Sigma = sigma^2 - alpha^2 + omega,  D = 2 sigma alpha
    V = Sigma + K + i (S + D)

Everything here is exact (see :mod:`cptlab.exactalg`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonRealCoefficient, ParityViolation
from .exactalg import (
    CRational,
    DiffOp,
    I,
    Poly,
    adjoint,
    compose,
    parity_conjugate,
)


@dataclass(frozen=True)
class CPTFamilySpec:
    sigma: Poly
    alpha: Poly
    omega: Fraction
    SigmaPot: Poly
    K: Poly
    S: Poly
    D: Poly
    V: Poly
    w: Poly

    @property
    def potential(self) -> Poly:
        return self.V


@dataclass(frozen=True)
class VerificationResult:
    identity_name: str
    residual: DiffOp

    @property
    def holds(self) -> bool:
        return self.residual.is_zero()

    def __bool__(self):
        return self.holds


def _assemble(sigma, alpha, omega, SigmaPot=None, K=None, S=None, D=None):
    K = sigma.derivative() if K is None else K
    S = alpha.derivative() if S is None else S
    if SigmaPot is None:
        SigmaPot = sigma * sigma - alpha * alpha + Poly([omega])
    D = sigma * alpha * 2 if D is None else D
    V = SigmaPot + K + (S + D) * I
    w = sigma + alpha * I
    return CPTFamilySpec(sigma, alpha, Fraction(omega), SigmaPot, K, S, D, V, w)


def build_family(sigma: Poly, alpha: Poly, omega=0) -> CPTFamilySpec:
    """Derive (Sigma, K, S, D, V) from the superpotential parts.

    Raises NonRealCoefficient for complex inputs and ParityViolation if
    sigma is not even or alpha is not odd.
    """
    omega_c = CRational.coerce(omega)
    if not (sigma.is_real() and alpha.is_real() and omega_c.is_real()):
        raise NonRealCoefficient("sigma, alpha and omega must be real")
    _, sigma_odd = sigma.parity_split()
    if not sigma_odd.is_zero():
        raise ParityViolation(f"sigma has odd part {sigma_odd}")
    alpha_even, _ = alpha.parity_split()
    if not alpha_even.is_zero():
        raise ParityViolation(f"alpha has even part {alpha_even}")
    return _assemble(sigma, alpha, omega_c.re)


def build_family_unchecked(sigma: Poly, alpha: Poly, omega=0, **overrides) -> CPTFamilySpec:
    """Skip parity checks and optionally replace derived fields.

    Only for negative controls: ``overrides`` may set ``SigmaPot``, ``K``,
    ``S`` or ``D`` before ``V`` is assembled.
    """
    return _assemble(sigma, alpha, CRational.coerce(omega).re, **overrides)


def monomial_family(n: int, mu, nu, omega=0) -> CPTFamilySpec:
    """``sigma = mu x^(2n)``, ``alpha = nu x^(2n-1)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return build_family(Poly.monomial(mu, 2 * n), Poly.monomial(nu, 2 * n - 1), omega)


def hamiltonian_of(spec: CPTFamilySpec) -> DiffOp:
    return DiffOp({2: Poly([-1]), 0: spec.V})


def charge_of(spec: CPTFamilySpec) -> DiffOp:
    return DiffOp({1: Poly([1]), 0: spec.w})


def verify_charge_hermiticity(spec: CPTFamilySpec) -> VerificationResult:
    """F = CP is Hermitian iff C^dagger = P C P."""
    c = charge_of(spec)
    return VerificationResult("hermiticity", adjoint(c) - parity_conjugate(c))


def verify_intertwining(spec: CPTFamilySpec) -> VerificationResult:
    """F H^dagger = H F, checked as H C - C (P H^dagger P) = 0."""
    h, c = hamiltonian_of(spec), charge_of(spec)
    residual = compose(h, c) - compose(c, parity_conjugate(adjoint(h)))
    return VerificationResult("intertwining", residual)


def verify_factorization(spec: CPTFamilySpec) -> VerificationResult:
    """H - omega = F F^*, i.e. (d/dx + w) o (-d/dx + w).

    F F^* = C P conj(C) P; P conj(C) P = -d/dx + conj(w)(-x) = -d/dx + w
    because sigma is even and alpha odd.
    """
    c = charge_of(spec)
    partner = DiffOp({1: Poly([-1]), 0: spec.w})
    residual = (hamiltonian_of(spec) - DiffOp.multiplication(spec.omega)) - compose(c, partner)
    return VerificationResult("factorization", residual)


def verify_all(spec: CPTFamilySpec) -> dict[str, VerificationResult]:
    results = (
        verify_intertwining(spec),
        verify_factorization(spec),
        verify_charge_hermiticity(spec),
    )
    return {r.identity_name: r for r in results}
