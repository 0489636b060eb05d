"""Translation lattices B·Z^d, their duals, and unit-cell geometry.

A lattice is described by an invertible d x d matrix ``basis``; translates
live on ``basis @ k`` for integer vectors k.  The dual lattice has basis
``inv(basis.T)``, so lattice and dual vectors pair to integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import NonFiniteInput, SingularMatrix, UnsupportedDimension

MAX_DIM = 3

# Grids sample at dual-scaled points; past this conditioning the certified
# truncation bounds become meaningless.
CONDITION_LIMIT = 1e8


@dataclass(frozen=True, eq=False)
class LatticeSpec:
    """An invertible sampling matrix together with derived geometry.

    Attributes
    ----------
    dim : spatial dimension d (1..3)
    basis : d x d matrix whose integer combinations form the lattice
    det_abs : |det basis|, the volume of the fundamental cell
    dual_basis : inv(basis.T); generates the dual lattice
    """

    dim: int
    basis: np.ndarray
    det_abs: float
    dual_basis: np.ndarray

    def __post_init__(self):
        self.basis.setflags(write=False)
        self.dual_basis.setflags(write=False)


@dataclass(frozen=True, eq=False)
class LatticePoint:
    """An integer index paired with its spatial or frequency coordinates."""

    index: np.ndarray
    coords: np.ndarray


def new_lattice(matrix) -> LatticeSpec:
    """Build a :class:`LatticeSpec` from a square matrix.

    Raises
    ------
    UnsupportedDimension
        for d > 3 (grid sizes grow as N^d and are not worth supporting).
    SingularMatrix
        when |det| falls below 1e-10 * (max |entry|)^d or the condition
        number exceeds ``CONDITION_LIMIT``.
    """
    a = np.atleast_2d(np.asarray(matrix, dtype=float))
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"lattice matrix must be square, got shape {a.shape}")
    d = a.shape[0]
    if d < 1 or d > MAX_DIM:
        raise UnsupportedDimension(f"dimension {d} not supported (1..{MAX_DIM})")
    if not np.all(np.isfinite(a)):
        raise NonFiniteInput("lattice matrix has non-finite entries")

    det = np.linalg.det(a)
    scale = np.max(np.abs(a))
    if scale == 0.0 or abs(det) < 1e-10 * scale**d:
        raise SingularMatrix(f"matrix is numerically singular (det={det:.3e})")
    cond = np.linalg.cond(a)
    if cond > CONDITION_LIMIT:
        raise SingularMatrix(
            f"matrix condition number {cond:.3e} exceeds {CONDITION_LIMIT:.0e}"
        )

    dual = np.linalg.inv(a.T)
    return LatticeSpec(dim=d, basis=a.copy(), det_abs=abs(det), dual_basis=dual)


def wrap_to_unit_cell(gamma) -> np.ndarray:
    """Reduce a point componentwise mod Z^d into [0, 1)^d."""
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    if not np.all(np.isfinite(g)):
        raise NonFiniteInput("cannot wrap non-finite coordinates")
    r = np.mod(g, 1.0)
    # mod can round up to exactly 1.0 for tiny negative inputs
    r[r >= 1.0] = 0.0
    return r


def integer_box(dim: int, radius: int):
    """All integer vectors with sup-norm <= radius, lexicographically ascending."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    rng = range(-radius, radius + 1)
    return [np.array(k, dtype=int) for k in product(rng, repeat=dim)]


def lattice_points_in_box(lattice: LatticeSpec, radius: int, side: str = "spatial"):
    """Lattice points indexed by the sup-norm box of the given radius.

    ``side`` selects the coordinates: "spatial" maps indices through the
    lattice basis, "frequency" through the dual basis.  Order is
    lexicographic in the index, which downstream Gram-matrix layouts rely on.
    """
    if side == "spatial":
        mat = lattice.basis
    elif side == "frequency":
        mat = lattice.dual_basis
    else:
        raise ValueError(f"side must be 'spatial' or 'frequency', got {side!r}")
    return [
        LatticePoint(index=k, coords=mat @ k)
        for k in integer_box(lattice.dim, radius)
    ]


def operator_inf_norm(mat: np.ndarray) -> float:
    """Induced sup-norm of a matrix (max absolute row sum)."""
    return float(np.max(np.sum(np.abs(mat), axis=1)))


def spectral_norm(mat: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(mat, 2))
