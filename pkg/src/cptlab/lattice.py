"""Finite-difference realizations of H, C, P and F on a symmetric grid.

Homogeneous Dirichlet closure outside ``[-L, L]``.  Matrices are plain
``numpy.complex128`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .cptmodel import CPTFamilySpec
from .errors import EvenGridSize, NonPositiveWidth
from .exactalg import Poly

CMatrix = np.ndarray

MODES = ("direct", "product")


@dataclass(frozen=True)
class Grid:
    half_width: float
    n_points: int

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.n_points - 1)

    @property
    def nodes(self) -> np.ndarray:
        """Nodes with exact mirror symmetry ``x[j] == -x[N-1-j]``."""
        n, h = self.n_points, self.spacing
        mid = n // 2
        x = np.empty(n)
        x[:mid] = -self.half_width + h * np.arange(mid)
        x[mid] = 0.0
        x[mid + 1:] = -x[:mid][::-1]
        return x


def make_grid(half_width: float, n_points: int) -> Grid:
    if not half_width > 0:
        raise NonPositiveWidth(f"half width must be positive, got {half_width}")
    if n_points < 3 or n_points % 2 == 0:
        raise EvenGridSize(f"number of points must be odd and >= 3, got {n_points}")
    return Grid(float(half_width), int(n_points))


def parity_matrix(grid: Grid) -> CMatrix:
    return np.eye(grid.n_points, dtype=complex)[::-1].copy()


def derivative_matrix(grid: Grid, order: int) -> CMatrix:
    """Central first difference or 3-point second difference."""
    n, h = grid.n_points, grid.spacing
    m = np.zeros((n, n), dtype=complex)
    i = np.arange(n - 1)
    if order == 1:
        m[i, i + 1] = 0.5 / h
        m[i + 1, i] = -0.5 / h
    elif order == 2:
        m[i, i + 1] = 1.0 / h**2
        m[i + 1, i] = 1.0 / h**2
        m[np.arange(n), np.arange(n)] = -2.0 / h**2
    else:
        raise ValueError("order must be 1 or 2")
    return m


def evaluate(p: Poly, x: np.ndarray) -> np.ndarray:
    """Evaluate p at real nodes, real and imaginary parts by separate Horner sweeps.

    Keeps ``p(-x) == conj(p(x))`` bit-exact when the real part is even and
    the imaginary part odd.
    """
    re = np.zeros_like(x, dtype=float)
    im = np.zeros_like(x, dtype=float)
    for c in reversed(p.coeffs):
        re = re * x + float(c.re)
        im = im * x + float(c.im)
    return re + 1j * im


def multiplication_matrix(grid: Grid, p: Union[Poly, Callable, np.ndarray]) -> CMatrix:
    x = grid.nodes
    if isinstance(p, Poly):
        values = evaluate(p, x)
    elif callable(p):
        values = np.asarray(p(x), dtype=complex)
    else:
        values = np.asarray(p, dtype=complex)
    return np.diag(values.astype(complex))


def discretize_F(spec: CPTFamilySpec, grid: Grid) -> CMatrix:
    """``F_h = (D1 + diag(w)) P``; P is the reversal, so right-multiplying flips columns."""
    c = derivative_matrix(grid, 1) + multiplication_matrix(grid, spec.w)
    return c[:, ::-1].copy()


def discretize_H(
    spec: CPTFamilySpec | None,
    grid: Grid,
    mode: str = "direct",
    potential: Union[Poly, Callable, np.ndarray, None] = None,
) -> CMatrix:
    """Discretized Hamiltonian.

    ``direct``: ``-D2 + diag(V)``.  ``product``: ``F_h conj(F_h) + omega I``,
    which satisfies ``F_h H^dagger = H F_h`` to round-off.

    ``potential`` overrides ``spec.V`` (direct mode only) for benchmark
    potentials outside the CPT family.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if potential is not None:
        if mode != "direct":
            raise ValueError("a raw potential is only supported in direct mode")
        return -derivative_matrix(grid, 2) + multiplication_matrix(grid, potential)
    if spec is None:
        raise ValueError("either spec or potential is required")
    if mode == "direct":
        return -derivative_matrix(grid, 2) + multiplication_matrix(grid, spec.V)
    f = discretize_F(spec, grid)
    h = f @ f.conj()
    h[np.diag_indices_from(h)] += float(spec.omega)
    return h


def hermiticity_defect(a: CMatrix) -> float:
    """``max|A - A^H| / max|A|`` (0 for the zero matrix)."""
    scale = np.max(np.abs(a))
    return float(np.max(np.abs(a - a.conj().T)) / scale) if scale else 0.0


def intertwining_defect(f: CMatrix, h: CMatrix) -> float:
    """``max|F H^H - H F| / (max|F| max|H|)``."""
    r = f @ h.conj().T - h @ f
    return float(np.max(np.abs(r)) / (np.max(np.abs(f)) * np.max(np.abs(h))))
