"""Lattice periodizations: the grid table of the periodized power spectrum,
its Fourier coefficients, lattice autocorrelations, and the two-translate
perturbation identity.

For a generator f and lattice basis B, the central object is

    phi(gamma) = (1/|det B|) * sum_k |fhat(inv(B.T) (gamma + k))|^2,

a Z^d-periodic function of gamma sampled on the uniform grid j/N over
[0, 1)^d.  Every table records the truncation radius actually used and a
certified bound on the dropped tail, so downstream classification can widen
its tolerances accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import sici

from ._integrate import grid_nodes, panel_nodes
from .errors import AliasRisk, TailNotAchievable
from .generators import (
    BSpline,
    FrequencyBox,
    Gaussian,
    Generator,
    SampledSpatial,
    tail_bound,
)
from .lattice import LatticeSpec, integer_box

# truncation radius caps per dimension
K_CAP = {1: 10_000, 2: 1_000, 3: 100}

# points * lattice terms processed per vectorized block
_BLOCK_BUDGET = 4_000_000

_MIN_GRID = 8


@dataclass(frozen=True, eq=False)
class PeriodizationTable:
    """Samples of the periodized power spectrum on the grid j/N in [0,1)^d.

    ``values`` is an (N,)*d array of nonnegative reals; true values exceed the
    stored ones by at most ``tail`` (the certified truncation bound for the
    radius ``trunc_radius`` that was summed).
    """

    lattice: LatticeSpec
    grid_res: int
    values: np.ndarray
    trunc_radius: int
    tail: float
    generator_tag: str

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.lattice.dim


@dataclass(frozen=True)
class CoefficientTable:
    """Fourier coefficients of a table, indexed by integer vectors."""

    entries: dict
    n_max: int

    def get(self, n) -> complex:
        return self.entries[tuple(int(v) for v in np.atleast_1d(n))]


def grid_gamma(dim: int, n: int) -> np.ndarray:
    """Flat (n^dim, dim) array of grid points j/n in lexicographic j order."""
    axes = [np.arange(n) / n] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _validate_grid(n: int):
    if n < _MIN_GRID or (n & (n - 1)) != 0:
        raise ValueError(f"grid resolution must be a power of two >= {_MIN_GRID}, got {n}")


def _lattice_sum(eval_fn, lattice: LatticeSpec, pts: np.ndarray, radius: int,
                 matrix: np.ndarray) -> np.ndarray:
    """sum_{|k|_inf <= radius} eval_fn(matrix @ (pts + k)) in fixed lex order."""
    ks = np.array(integer_box(lattice.dim, radius), dtype=float)
    m = pts.shape[0]
    acc = np.zeros(m, dtype=complex)
    block = max(1, _BLOCK_BUDGET // max(1, m))
    for start in range(0, ks.shape[0], block):
        chunk = ks[start : start + block]
        shifted = pts[None, :, :] + chunk[:, None, :]
        args = shifted.reshape(-1, lattice.dim) @ matrix.T
        vals = eval_fn(args).reshape(chunk.shape[0], m)
        acc += np.add.reduce(vals, axis=0)
    return acc


def choose_truncation(g: Generator, lattice: LatticeSpec, target_tail: float):
    """Smallest radius whose certified tail is at most target_tail."""
    cap = K_CAP[lattice.dim]
    for k in range(1, cap + 1):
        t = tail_bound(g, lattice, k)
        if t <= target_tail:
            return k, t
    raise TailNotAchievable(
        f"tail {tail_bound(g, lattice, cap):.3e} at radius cap {cap} "
        f"exceeds target {target_tail:.3e}"
    )


def compute_phi(g: Generator, lattice: LatticeSpec, grid_res: int,
                target_tail: float | None = None) -> PeriodizationTable:
    """Tabulate the periodized power spectrum of ``g`` on the [0,1)^d grid.

    The truncation radius is chosen from the generator's certified decay so
    the dropped tail is at most ``target_tail``.  When ``target_tail`` is
    omitted it defaults to 1e-10 times the grid maximum of a cheap pilot pass,
    which keeps the tail negligible against classification tolerances.
    """
    _validate_grid(grid_res)
    if target_tail is not None and target_tail <= 0:
        raise ValueError("target_tail must be positive")
    d = lattice.dim
    pts = grid_gamma(d, grid_res)
    dual = lattice.dual_basis

    def power(args):
        return np.abs(g.fourier(args)) ** 2

    if target_tail is None:
        pilot = _lattice_sum(power, lattice, pts, min(8, K_CAP[d]), dual).real
        target_tail = 1e-10 * max(float(pilot.max()) / lattice.det_abs, 1e-30)

    radius, tail = choose_truncation(g, lattice, target_tail)
    acc = _lattice_sum(power, lattice, pts, radius, dual).real
    values = (acc / lattice.det_abs).reshape((grid_res,) * d)
    return PeriodizationTable(
        lattice=lattice,
        grid_res=grid_res,
        values=values,
        trunc_radius=radius,
        tail=tail,
        generator_tag=g.label,
    )


def cross_phi_values(g: Generator, psi: Generator, lattice: LatticeSpec,
                     grid_res: int, radius: int) -> np.ndarray:
    """Grid samples of the mixed periodization of psihat * conj(fhat).

    Same lattice sum as the power table but with the cross product as the
    summand; used by the span-projection formula.
    """
    _validate_grid(grid_res)
    pts = grid_gamma(lattice.dim, grid_res)

    def cross(args):
        return psi.fourier(args) * np.conj(g.fourier(args))

    acc = _lattice_sum(cross, lattice, pts, radius, lattice.dual_basis)
    return (acc / lattice.det_abs).reshape((grid_res,) * lattice.dim)


# ---------------------------------------------------------------------------
# spatial periodization (L1 statement)
# ---------------------------------------------------------------------------


def periodize_l1(g: Generator, lattice: LatticeSpec, sample_points, radius: int):
    """Spatial periodization sum_k f(x + B k) at the given points in the cell.

    Returns ``(psi_values, (cell_integral, full_integral))`` where the pair
    holds a quadrature of the periodization over the fundamental cell and a
    quadrature of f over R^d; for integrable f the two integrals agree up to
    truncation and quadrature error.

    Raises NoDecayInfo when the generator has no certified spatial decay
    (frequency boxes and sincs are not integrable).
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    g.spatial_tail_radius(1e-9)  # rejects non-integrable kinds up front

    x = np.atleast_2d(np.asarray(sample_points, dtype=float))
    if x.shape[1] != lattice.dim:
        raise ValueError(f"sample points must have dimension {lattice.dim}")
    u = x @ np.linalg.inv(lattice.basis).T
    if np.any(u < -1e-9) or np.any(u >= 1.0 + 1e-9):
        raise ValueError("sample points must lie in the fundamental cell")

    # f(x + B k) = f(B (u + k)) with u the cell coordinates of x
    psi = _lattice_sum(lambda a: g.spatial(a), lattice, u, radius, lattice.basis)

    # cell integral: periodic rectangle rule on the warped unit grid
    m_per_axis = {1: 2048, 2: 128, 3: 32}[lattice.dim]
    ugrid = grid_gamma(lattice.dim, m_per_axis)
    psi_grid = _lattice_sum(
        lambda a: g.spatial(a), lattice, ugrid, radius, lattice.basis
    )
    cell_integral = lattice.det_abs * float(np.mean(psi_grid.real))

    full_integral = _spatial_integral(g)
    return psi, (cell_integral, full_integral)


def _spatial_integral(g: Generator) -> float:
    if isinstance(g, SampledSpatial):
        # exact integral of the multilinear interpolant with zero boundary
        return float(np.sum(g.values.real) * g.step**g.dim)
    r = g.spatial_tail_radius(1e-10)
    # panels split units evenly, so B-spline knots (integer offsets from the
    # support edge) land on panel boundaries and each panel stays polynomial
    pts, w = grid_nodes(g.dim, r, osc_freq=1.0, order=16)
    return float(np.sum(w * g.spatial(pts).real))


# ---------------------------------------------------------------------------
# autocorrelation (Fourier coefficients of the periodization)
# ---------------------------------------------------------------------------


def autocorrelation(g: Generator, lattice: LatticeSpec, n) -> complex:
    """Inner product of f with its translate by -B n.

    Equals the n-th Fourier coefficient of the periodized power spectrum:
    c_n = integral |fhat(xi)|^2 exp(-2 pi i xi . (B n)) d xi.  Closed forms
    are used for boxes and Gaussians; B-splines go through oscillatory
    frequency quadrature (absolute error <= 1e-9); sampled data uses the
    discrete spatial overlap, since its Riemann transform is periodic and the
    frequency integral does not converge.
    """
    nvec = np.atleast_1d(np.asarray(n, dtype=int))
    if nvec.shape != (lattice.dim,):
        raise ValueError(f"shift index must have dimension {lattice.dim}")
    t = lattice.basis @ nvec

    if isinstance(g, FrequencyBox):
        out = 1.0 + 0.0j
        for i in range(g.dim):
            width = g.upper[i] - g.lower[i]
            center = 0.5 * (g.upper[i] + g.lower[i])
            out *= width * np.sinc(width * t[i]) * np.exp(-2j * np.pi * center * t[i])
        return complex(out)

    if isinstance(g, Gaussian):
        s = g.width
        out = 1.0
        for i in range(g.dim):
            out *= (s / np.sqrt(2.0)) * np.exp(-np.pi * t[i] ** 2 / (2.0 * s**2))
        return complex(out)

    if isinstance(g, BSpline):
        p = 2 * (g.order + 1)
        out = 1.0
        for i in range(g.dim):
            out *= _sinc_power_transform(p, float(t[i]))
        return complex(out)

    if isinstance(g, SampledSpatial):
        shifted = g.spatial(g._coords + t)
        return complex(np.sum(g._flat * np.conj(shifted)) * g.step**g.dim)

    return _autocorr_quadrature(g, t)


def _cos_tail(n: int, c: float, r: float) -> float:
    """integral of cos(c x) / x^n over [r, inf), by recurrence from Si/Ci."""
    if c < 1e-300:
        return r ** (1 - n) / (n - 1)
    si, ci = sici(c * r)
    cval = -ci
    sval = np.pi / 2 - si
    for k in range(2, n + 1):
        ck = math.cos(c * r) * r ** (1 - k) / (k - 1) - (c / (k - 1)) * sval
        sk = math.sin(c * r) * r ** (1 - k) / (k - 1) + (c / (k - 1)) * cval
        cval, sval = ck, sk
    return cval


def _sinc_power_transform(p: int, t: float, head_radius: float = 16.0) -> float:
    """integral of sinc(xi)^p * exp(-2 pi i xi t) d xi (real by symmetry).

    Quadrature over [0, head_radius] plus an exact tail: sin^p(pi x) is a
    finite cosine sum, so the tail reduces to cosine-integral recurrences.
    """
    nodes, w = panel_nodes(0.0, head_radius, osc_freq=abs(t) + p / 2 + 1.0)
    head = float(np.sum(w * np.sinc(nodes) ** p * np.cos(2 * np.pi * t * nodes)))

    half_p = p // 2
    coeffs = {0: math.comb(p, half_p) / 2**p}
    for m in range(1, half_p + 1):
        coeffs[m] = 2 * (-1) ** m * math.comb(p, half_p - m) / 2**p
    tail = 0.0
    for m, am in coeffs.items():
        tail += am * 0.5 * (
            _cos_tail(p, 2 * np.pi * abs(m + t), head_radius)
            + _cos_tail(p, 2 * np.pi * abs(m - t), head_radius)
        )
    tail /= np.pi**p
    return 2.0 * (head + tail)


def _autocorr_quadrature(g: Generator, t: np.ndarray) -> complex:
    """Generic fallback: tensor-grid quadrature over the decay-truncated box."""
    r = g.fourier_tail_radius(1e-10)
    pts, w = grid_nodes(g.dim, r, osc_freq=float(np.max(np.abs(t))) + 4.0)
    vals = np.abs(g.fourier(pts)) ** 2
    phase = np.exp(-2j * np.pi * (pts @ t))
    return complex(np.sum(w * vals * phase))


def phi_fourier_coeffs(table: PeriodizationTable, n_max: int) -> CoefficientTable:
    """Discrete Fourier coefficients of the table for |n|_inf <= n_max.

    Grid coefficients alias orders beyond N/4, so larger requests are refused.
    """
    n = table.grid_res
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if n_max > n // 4:
        raise AliasRisk(f"n_max {n_max} exceeds alias-safe bound {n // 4}")
    spec = np.fft.fftn(table.values) / table.values.size
    entries = {}
    for k in integer_box(table.dim, n_max):
        entries[tuple(int(v) for v in k)] = complex(spec[tuple(k % n)])
    return CoefficientTable(entries=entries, n_max=n_max)


def perturbed_phi(table: PeriodizationTable, n) -> PeriodizationTable:
    """Table for the generator plus its lattice translate by index n.

    Adding the translate multiplies the transform by 1 + exp(-2 pi i xi.(B n)),
    which on the periodization grid collapses to the k-independent factor
    |1 + exp(-2 pi i gamma . n)|^2 = 4 cos^2(pi gamma . n).
    """
    nvec = np.atleast_1d(np.asarray(n, dtype=int))
    if nvec.shape != (table.dim,):
        raise ValueError(f"shift index must have dimension {table.dim}")
    pts = grid_gamma(table.dim, table.grid_res)
    s = pts @ nvec
    factor = 4.0 * np.cos(np.pi * s) ** 2
    values = table.values * factor.reshape(table.values.shape)
    return replace(
        table,
        values=values,
        tail=4.0 * table.tail,
        generator_tag=f"{table.generator_tag}+translate{nvec.tolist()}",
    )


# ---------------------------------------------------------------------------
# exports
# ---------------------------------------------------------------------------


def table_to_csv(table: PeriodizationTable) -> str:
    """CSV dump ``gamma_1,...,gamma_d,phi`` in lexicographic grid order."""
    pts = grid_gamma(table.dim, table.grid_res)
    flat = table.values.ravel()
    header = ",".join(f"gamma_{i + 1}" for i in range(table.dim)) + ",phi"
    lines = [header]
    for row, v in zip(pts, flat):
        coords = ",".join(f"{c:.12g}" for c in row)
        lines.append(f"{coords},{v:.12g}")
    return "\n".join(lines) + "\n"


def table_to_json(table: PeriodizationTable) -> dict:
    """JSON-ready metadata plus the flat value array."""
    return {
        "generator": table.generator_tag,
        "lattice": table.lattice.basis.tolist(),
        "grid_res": table.grid_res,
        "trunc_radius": table.trunc_radius,
        "tail": table.tail,
        "values": table.values.ravel().tolist(),
    }
