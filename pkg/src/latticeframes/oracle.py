"""Definition-level verification: truncated Gram matrices of the translate
system, synthesis-norm identities on explicit coefficient vectors, analysis
coefficients, and span membership via the projection formula.

Everything here works directly with inner products of translates, so it can
cross-check the grid classification without sharing its code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._integrate import grid_nodes
from .errors import ConvergenceFailure, DegenerateSpan, TooLarge
from .generators import CompactFrequencySupport, Generator
from .lattice import LatticeSpec, integer_box
from .periodization import (
    PeriodizationTable,
    autocorrelation,
    choose_truncation,
    cross_phi_values,
    grid_gamma,
)

MAX_GRAM_SIZE = 4096


@dataclass(frozen=True)
class CoefficientVector:
    """Finitely supported coefficients c_k indexed by integer vectors."""

    entries: dict

    def __post_init__(self):
        if not self.entries:
            raise ValueError("coefficient vector must have nonempty support")
        if all(c == 0 for c in self.entries.values()):
            raise ValueError("coefficient vector must not be identically zero")

    def support_radius(self) -> int:
        return max(max(abs(int(v)) for v in k) for k in self.entries)

    def norm_squared(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.entries.values()))


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Hermitian block-Toeplitz matrix of translate inner products.

    Only the difference entries are stored; ``dense()`` materializes the full
    ((2M+1)^d)^2 matrix in lexicographic index order.
    """

    half_width: int
    dim: int
    diffs: dict

    def entry(self, j, k) -> complex:
        dv = tuple(int(b) - int(a) for a, b in zip(j, k))
        return self.diffs[dv]

    def dense(self) -> np.ndarray:
        idx = integer_box(self.dim, self.half_width)
        m = len(idx)
        out = np.empty((m, m), dtype=complex)
        for a, j in enumerate(idx):
            for b, k in enumerate(idx):
                out[a, b] = self.diffs[tuple(k - j)]
        return out


def gram_matrix(g: Generator, lattice: LatticeSpec, half_width: int) -> GramMatrix:
    """Gram matrix of translates with indices in the sup-norm box of radius M.

    Entries come from the autocorrelation (one evaluation per difference
    vector), so the Toeplitz structure holds by construction and Hermitian
    symmetry is enforced via conjugation.
    """
    if half_width < 1:
        raise ValueError("half_width must be >= 1")
    size = (2 * half_width + 1) ** lattice.dim
    if size > MAX_GRAM_SIZE:
        raise TooLarge(f"gram matrix of size {size} exceeds cap {MAX_GRAM_SIZE}")

    diffs = {}
    for dv in integer_box(lattice.dim, 2 * half_width):
        key = tuple(int(v) for v in dv)
        mirror = tuple(-v for v in key)
        if mirror in diffs:
            diffs[key] = np.conj(diffs[mirror])
        else:
            diffs[key] = complex(autocorrelation(g, lattice, dv))
    return GramMatrix(half_width=half_width, dim=lattice.dim, diffs=diffs)


def gram_eigen_bounds(gram: GramMatrix) -> tuple[float, float]:
    """Extreme eigenvalues of the dense Gram matrix."""
    dense = gram.dense()
    try:
        eig = np.linalg.eigvalsh(dense)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigenvalue solver failed: {exc}") from exc
    return float(eig[0]), float(eig[-1])


# ---------------------------------------------------------------------------
# synthesis / analysis identities
# ---------------------------------------------------------------------------


def _synthesis_weight(c: CoefficientVector, lattice: LatticeSpec,
                      xi: np.ndarray) -> np.ndarray:
    """sum_k c_k exp(-2 pi i xi . (B k)) at an (m, d) array of frequencies."""
    out = np.zeros(xi.shape[0], dtype=complex)
    for k, ck in c.entries.items():
        shift = lattice.basis @ np.asarray(k, dtype=float)
        out += ck * np.exp(-2j * np.pi * (xi @ shift))
    return out


def synthesis_norm(g: Generator, lattice: LatticeSpec, c: CoefficientVector,
                   table: PeriodizationTable,
                   gram: GramMatrix | None = None) -> tuple[float, float, float]:
    """Squared norm of sum_k c_k (translate of f by B k), three ways.

    direct    -- frequency quadrature of |weight|^2 |fhat|^2 over R^d
    spectral  -- grid quadrature of |trig poly of c|^2 times the table
    quadratic -- the Gram quadratic form over the support of c

    All three estimate the same quantity; their agreement validates both the
    table and the Gram entries.  A precomputed ``gram`` (covering the support
    of c) avoids rebuilding the difference entries on repeated calls.
    """
    # direct route: the dropped tail is below sup|weight|^2 * target, so
    # scaling the target by the squared coefficient mass keeps the absolute
    # error under 1e-9 for any c
    mass = sum(abs(v) for v in c.entries.values())
    radius = g.fourier_tail_radius(1e-9 / (1.0 + mass**2))
    osc = max(
        float(np.max(np.abs(lattice.basis @ np.asarray(k, dtype=float))))
        for k in c.entries
    )
    # |weight|^2 has twice the bandwidth of the weight itself
    pts, w = grid_nodes(lattice.dim, radius, osc_freq=2.0 * osc + 1.0, density=0.8)
    weight = _synthesis_weight(c, lattice, pts)
    direct = float(
        np.sum(w * np.abs(weight) ** 2 * np.abs(g.fourier(pts)) ** 2).real
    )

    # spectral route on the table grid
    gamma = grid_gamma(table.dim, table.grid_res)
    poly = np.zeros(gamma.shape[0], dtype=complex)
    for k, ck in c.entries.items():
        poly += ck * np.exp(-2j * np.pi * (gamma @ np.asarray(k, dtype=float)))
    spectral = float(np.mean(np.abs(poly) ** 2 * table.values.ravel()))

    # quadratic form through the Gram matrix
    if gram is None:
        gram = gram_matrix(g, lattice, max(1, c.support_radius()))
    elif gram.half_width < c.support_radius():
        raise ValueError("supplied gram matrix does not cover the support of c")
    quadratic = 0.0 + 0.0j
    for j, cj in c.entries.items():
        for k, ck in c.entries.items():
            dv = tuple(int(b) - int(a) for a, b in zip(j, k))
            quadratic += cj * np.conj(ck) * gram.diffs[dv]
    return direct, spectral, float(quadratic.real)


def analysis_coefficients(g: Generator, lattice: LatticeSpec, h: Generator,
                          half_width: int) -> np.ndarray:
    """Inner products of h against translates of f, lexicographic in the index.

    Computed as frequency integrals of hhat * conj(fhat) * exp(2 pi i xi.(B k)).
    The integration box uses the tighter of the two decay radii, since a
    compact factor truncates the product exactly.
    """
    if h.dim != g.dim:
        raise ValueError("generators must share a dimension")
    db_g, db_h = g.decay_bound(), h.decay_bound()
    radii = []
    for db, gen in ((db_g, g), (db_h, h)):
        if isinstance(db, CompactFrequencySupport):
            radii.append(("compact", db.radius))
        else:
            radii.append(("decay", gen.fourier_tail_radius(1e-12)))
    compact = [r for kind, r in radii if kind == "compact"]
    radius = min(compact) if compact else max(r for _, r in radii)

    ks = integer_box(lattice.dim, half_width)
    osc = max(
        (float(np.max(np.abs(lattice.basis @ k.astype(float)))) for k in ks),
        default=0.0,
    )
    pts, w = grid_nodes(lattice.dim, radius, osc_freq=osc + 1.0)
    base = w * h.fourier(pts) * np.conj(g.fourier(pts))
    out = np.empty(len(ks), dtype=complex)
    for i, k in enumerate(ks):
        shift = lattice.basis @ k.astype(float)
        out[i] = np.sum(base * np.exp(2j * np.pi * (pts @ shift)))
    return out


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    residual_norm_sq: float
    is_member: bool
    F_samples: np.ndarray  # periodic multiplier on the grid; NaN off support


def project_onto_span(g: Generator, lattice: LatticeSpec, psi: Generator,
                      table: PeriodizationTable, eps_zero: float | None = None,
                      member_tol: float = 1e-6) -> ProjectionResult:
    """Project psi onto the closed span of the translates of g.

    Membership is equivalent to psihat = F * fhat for a lattice-periodic F;
    on the off-zero set of the table the candidate multiplier is the ratio of
    the mixed periodization to the power periodization, and the squared
    projection residual is ||psi||^2 minus the grid integral of
    |mixed|^2 / phi over that set.
    """
    if psi.dim != g.dim:
        raise ValueError("generators must share a dimension")
    from .classify import default_eps_zero  # local import to avoid a cycle

    if eps_zero is None:
        eps_zero = default_eps_zero(table.values, table.tail)
    mask = table.values >= eps_zero
    if not np.any(mask):
        raise DegenerateSpan("periodization vanishes on the entire grid")

    radius_psi, _ = choose_truncation(psi, lattice, max(table.tail, 1e-12))
    radius = max(table.trunc_radius, radius_psi)
    cross = cross_phi_values(g, psi, lattice, table.grid_res, radius)

    f_samples = np.full(table.values.shape, np.nan + 0j, dtype=complex)
    f_samples[mask] = cross[mask] / table.values[mask]

    psi_norm = psi.norm_squared()
    captured = float(
        np.sum(np.abs(cross[mask]) ** 2 / table.values[mask]) / table.values.size
    )
    residual = psi_norm - captured
    if -1e-9 * max(psi_norm, 1.0) < residual < 0.0:
        residual = 0.0
    return ProjectionResult(
        residual_norm_sq=residual,
        is_member=bool(residual <= member_tol * max(psi_norm, 1e-30)),
        F_samples=f_samples,
    )
