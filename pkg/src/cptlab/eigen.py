"""Dense complex linear algebra: LU solves and eigensolvers.

General matrices go through balancing, Householder Hessenberg reduction and
single-shift complex QR; eigenvectors (right and, on demand, left) come from
inverse iteration on the original matrix.  Hermitian matrices go through
Householder tridiagonalization and implicit QL.

Eigenvalues are always returned in the canonical (real part, imaginary
part) lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels as K
from .errors import NoConvergence, NotHermitian, SingularMatrix

SEED = 0x5EED
MAX_ITER_FACTOR = 30
PIVOT_TOL = 1e-14
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    right_vectors: Optional[np.ndarray] = None  # columns, unit 2-norm
    left_vectors: Optional[np.ndarray] = None
    residual_max: float = 0.0
    vector_indices: tuple = field(default=())  # which eigenvalues carry vectors

    def __len__(self):
        return len(self.eigenvalues)


@dataclass(frozen=True)
class SolveReport:
    solution: Optional[np.ndarray]
    condition_indicator: float  # reciprocal pivot growth, max|A| / max|U|
    singular: bool


def canonical_order(values: np.ndarray) -> np.ndarray:
    return np.lexsort((values.imag, values.real))


def _as_square(a) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


# LU -------------------------------------------------------------------------

def lu_solve(a, b, raise_singular: bool = True) -> SolveReport:
    """Solve ``A x = b`` by partial-pivoting LU.

    ``b`` may be a vector or an (n, m) block of right-hand sides.  A pivot
    below ``1e-14`` times the largest column magnitude of A marks the matrix
    singular: SingularMatrix is raised, or with ``raise_singular=False`` a
    report with ``singular=True`` and no solution is returned.
    """
    a = _as_square(a)
    n = a.shape[0]
    b = np.asarray(b, dtype=np.complex128)
    if b.shape[0] != n:
        raise ValueError("right-hand side does not conform")
    colmax = float(np.max(np.abs(a).sum(axis=0))) if n else 0.0
    amax = float(np.max(np.abs(a))) if n else 0.0
    lu = a.copy()
    piv = np.zeros(n, dtype=np.int64)
    minpiv = K.lu_factor(lu, piv)
    umax = float(np.max(np.abs(np.triu(lu)))) if n else 0.0
    growth = amax / umax if umax else 0.0
    if n and minpiv <= PIVOT_TOL * colmax:
        if raise_singular:
            raise SingularMatrix(
                f"pivot {minpiv:.3e} below {PIVOT_TOL:g} x column scale {colmax:.3e}"
            )
        return SolveReport(None, growth, True)
    rhs = b.reshape(n, -1).copy()
    x = K.lu_solve_factored(lu, piv, rhs)
    return SolveReport(x.reshape(b.shape), growth, False)


# general eigenproblem -------------------------------------------------------

def _eigvals_general(a: np.ndarray) -> np.ndarray:
    h = a.copy()
    K.balance(h)
    K.hessenberg(h)
    w, status, _ = K.hessenberg_qr(h, MAX_ITER_FACTOR)
    if status >= 0:
        partial = w[status + 1:]
        raise NoConvergence(
            f"QR iteration did not converge for eigenvalue {status} "
            f"within {MAX_ITER_FACTOR}*n iterations",
            partial=partial[canonical_order(partial)],
        )
    return w[canonical_order(w)]


def _separate(values: np.ndarray, tol: float) -> np.ndarray:
    """Nudge coincident eigenvalues apart so inverse iteration yields distinct vectors."""
    out = values.copy()
    for i in range(1, len(out)):
        for _ in range(100):
            if np.all(np.abs(out[:i] - out[i]) > tol):
                break
            out[i] += tol
    return out


def inverse_iteration(
    a: np.ndarray,
    shifts: Sequence[complex],
    left: bool = False,
    steps: int = 3,
) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Right (and optionally left) eigenvectors for the given eigenvalue estimates.

    Left vectors satisfy ``y^H A = lambda y^H``.  Both sets are columns
    of unit 2-norm.  Start vectors come from a generator seeded with 0x5EED.
    """
    a = _as_square(a)
    n = a.shape[0]
    rng = np.random.default_rng(SEED)
    scale = float(np.max(np.abs(a))) or 1.0
    eps = np.finfo(float).eps
    floor = eps * scale
    shifts = _separate(np.asarray(shifts, dtype=complex), 10 * floor)
    right = np.empty((n, len(shifts)), dtype=complex)
    lefts = np.empty((n, len(shifts)), dtype=complex) if left else None
    piv = np.zeros(n, dtype=np.int64)
    for col, lam in enumerate(shifts):
        lu = a.copy()
        lu[np.diag_indices(n)] -= lam
        K.lu_factor(lu, piv)
        d = np.diagonal(lu).copy()
        tiny = np.abs(d) < floor
        if tiny.any():
            lu[np.diag_indices(n)] = np.where(tiny, floor, d)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v /= np.linalg.norm(v)
        for _ in range(steps):
            v = K.lu_solve_factored(lu, piv, v.reshape(n, 1).copy()).ravel()
            v /= np.linalg.norm(v)
        right[:, col] = _fix_phase(v)
        if left:
            y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            y /= np.linalg.norm(y)
            for _ in range(steps):
                y = K.lu_solve_adjoint(lu, piv, y.copy())
                y /= np.linalg.norm(y)
            lefts[:, col] = _fix_phase(y)
    return right, lefts


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component real positive (deterministic gauge)."""
    k = int(np.argmax(np.abs(v)))
    out = v * (abs(v[k]) / v[k])
    out[k] = abs(v[k])
    return out


def eig_general(
    a,
    want_vectors: bool = False,
    want_left: bool = False,
    vector_count: Optional[int] = None,
) -> Spectrum:
    """Eigenvalues (and optionally eigenvectors) of a general complex matrix.

    ``vector_count`` limits inverse iteration to the first eigenvalues in
    canonical order; by default every eigenvalue gets a vector.
    ``residual_max`` is ``max ||A v - lambda v||_2`` over the computed pairs
    (0.0 when no vectors were requested).
    """
    a = _as_square(a)
    values = _eigvals_general(a)
    if not (want_vectors or want_left):
        return Spectrum(values)
    count = len(values) if vector_count is None else min(vector_count, len(values))
    idx = tuple(range(count))
    right, left = inverse_iteration(a, values[:count], left=want_left)
    res = np.linalg.norm(a @ right - right * values[:count], axis=0)
    residual = float(res.max()) if count else 0.0
    if want_left:
        lres = np.linalg.norm(
            a.conj().T @ left - left * values[:count].conj(), axis=0
        )
        residual = max(residual, float(lres.max()) if count else 0.0)
    return Spectrum(
        values,
        right if want_vectors else None,
        left,
        residual,
        idx,
    )


# Hermitian eigenproblem -----------------------------------------------------

def hermiticity_scale_defect(a: np.ndarray) -> tuple[float, float]:
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0, scale


def eig_hermitian(a, want_vectors: bool = True) -> Spectrum:
    """Real eigenvalues and orthonormal eigenvectors of a Hermitian matrix.

    Raises NotHermitian when ``max|A - A^H| > 1e-10 max|A|``.
    """
    a = _as_square(a)
    n = a.shape[0]
    defect, scale = hermiticity_scale_defect(a)
    if defect > HERMITIAN_TOL * scale:
        raise NotHermitian(f"Hermiticity defect {defect:.3e} exceeds {HERMITIAN_TOL:g} x {scale:.3e}")
    work = 0.5 * (a + a.conj().T)
    d, e, q = K.hermitian_tridiagonalize(work, want_vectors)
    z = np.eye(n) if want_vectors else np.zeros((1, 1))
    status = K.tridiagonal_ql(d, e, z, want_vectors, MAX_ITER_FACTOR * max(n, 1))
    if status >= 0:
        raise NoConvergence(f"QL iteration did not converge for index {status}")
    order = np.argsort(d, kind="stable")
    values = d[order].astype(complex)
    if not want_vectors:
        return Spectrum(values)
    vecs = q @ z[:, order]
    res = np.linalg.norm(a @ vecs - vecs * d[order], axis=0)
    return Spectrum(
        values,
        vecs,
        vecs,
        float(res.max()) if n else 0.0,
        tuple(range(n)),
    )


def min_abs_eigenvalue(a) -> float:
    """Smallest |lambda| of a Hermitian matrix (its smallest singular value)."""
    return float(np.min(np.abs(eig_hermitian(a, want_vectors=False).eigenvalues.real)))
