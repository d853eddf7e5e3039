"""CPT-symmetric non-Hermitian Hamiltonians built from a first-order charge operator.

Modules: exact operator algebra (:mod:`~cptlab.exactalg`), the CPT family
and its identities (:mod:`~cptlab.cptmodel`), finite-difference matrices
(:mod:`~cptlab.lattice`), dense eigensolvers (:mod:`~cptlab.eigen`),
numerical experiments (:mod:`~cptlab.analysis`) and the CLI
(:mod:`~cptlab.cli`).
"""

from .cptmodel import (
    CPTFamilySpec,
    VerificationResult,
    build_family,
    charge_of,
    hamiltonian_of,
    monomial_family,
    verify_charge_hermiticity,
    verify_factorization,
    verify_intertwining,
)
from .exactalg import CRational, DiffOp, Poly

__version__ = "0.1.0"

__all__ = [
    "CPTFamilySpec",
    "CRational",
    "DiffOp",
    "Poly",
    "VerificationResult",
    "build_family",
    "charge_of",
    "hamiltonian_of",
    "monomial_family",
    "verify_charge_hermiticity",
    "verify_factorization",
    "verify_intertwining",
]
