"""Generator catalog: functions with evaluable Fourier transforms and decay data.

Transform convention: fhat(xi) = integral f(x) exp(-2*pi*i*xi.x) dx.

Every generator can evaluate its transform pointwise, report its squared L2
norm, and certify how fast |fhat|^2 decays.  The decay data is what lets
lattice sums of |fhat|^2 be truncated with a guaranteed error bound, so the
catalog is deliberately small: boxes, sincs, B-splines, Gaussians, and
uniformly sampled compactly supported data.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .errors import NoDecayInfo, NonFiniteInput, ZeroGenerator
from .lattice import LatticeSpec, operator_inf_norm, spectral_norm

# ---------------------------------------------------------------------------
# decay envelopes
# ---------------------------------------------------------------------------


class DecayBound:
    """Certified envelope for |fhat(xi)|^2 as a function of t = sup-norm of xi."""


@dataclass(frozen=True)
class CompactFrequencySupport(DecayBound):
    """|fhat|^2 vanishes outside the sup-norm ball of the given radius."""

    radius: float
    peak: float = 1.0  # upper bound on |fhat|^2 inside the support


@dataclass(frozen=True)
class PolynomialDecay(DecayBound):
    """|fhat(xi)|^2 <= min(peak, constant / t^order) for t = sup-norm of xi."""

    order: float
    constant: float
    peak: float = 1.0


@dataclass(frozen=True)
class GaussianDecay(DecayBound):
    """|fhat(xi)|^2 <= constant * exp(-rate * t^2)."""

    rate: float
    constant: float


# ---------------------------------------------------------------------------
# generator base class and catalog
# ---------------------------------------------------------------------------


class Generator(ABC):
    """A function in L2(R^d) with an evaluable Fourier transform.

    Batch evaluation methods take an (m, d) array of points and return an
    (m,) complex array.  The module-level ``eval_fourier`` / ``eval_spatial``
    wrappers accept single points.
    """

    dim: int
    label: str = "generator"

    @abstractmethod
    def fourier(self, xi: np.ndarray) -> np.ndarray:
        """Evaluate fhat at an (m, d) array of frequency points."""

    @abstractmethod
    def spatial(self, x: np.ndarray) -> np.ndarray:
        """Evaluate f at an (m, d) array of spatial points."""

    @abstractmethod
    def norm_squared(self) -> float:
        """The squared L2 norm of f."""

    def decay_bound(self) -> DecayBound:
        raise NoDecayInfo(f"no decay information for {self.label}")

    def fourier_tail_radius(self, tol: float) -> float:
        """Radius R with integral of |fhat|^2 over {sup-norm > R} at most tol."""
        return _tail_radius_from_decay(self.decay_bound(), self.dim, tol)

    def spatial_tail_radius(self, tol: float) -> float:
        """Radius R with integral of |f| over {sup-norm > R} at most tol.

        Only available for spatially integrable catalog kinds; box/sinc
        generators decay like 1/x and are rejected.
        """
        raise NoDecayInfo(f"spatial decay unknown for {self.label}")


def _point(x, dim: int) -> np.ndarray:
    pt = np.atleast_1d(np.asarray(x, dtype=float))
    if pt.shape != (dim,):
        raise ValueError(f"expected a point of dimension {dim}, got shape {pt.shape}")
    if not np.all(np.isfinite(pt)):
        raise NonFiniteInput("evaluation point has non-finite coordinates")
    return pt.reshape(1, dim)


def eval_fourier(g: Generator, xi) -> complex:
    """fhat at a single frequency point (scalar allowed when d = 1)."""
    return complex(g.fourier(_point(xi, g.dim))[0])


def eval_spatial(g: Generator, x) -> complex:
    """f at a single spatial point (scalar allowed when d = 1)."""
    return complex(g.spatial(_point(x, g.dim))[0])


def l2_norm_squared(g: Generator) -> float:
    n2 = g.norm_squared()
    if n2 < 1e-14:
        raise ZeroGenerator(f"{g.label} has numerically zero L2 norm")
    return n2


class FrequencyBox(Generator):
    """fhat is the indicator of the half-open box [lower, upper) in frequency.

    The half-open convention makes lattice tilings exact: when translated
    copies of the box tile frequency space, exactly one copy contains each
    point, including points on shared faces.
    """

    def __init__(self, lower, upper):
        lo = np.atleast_1d(np.asarray(lower, dtype=float))
        hi = np.atleast_1d(np.asarray(upper, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("box corners must be 1-d arrays of equal length")
        if not np.all(lo < hi):
            raise ValueError("box corners must satisfy lower < upper componentwise")
        self.lower = lo
        self.upper = hi
        self.dim = lo.size
        self.label = f"box{lo.tolist()}..{hi.tolist()}"

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        inside = np.all((xi >= self.lower) & (xi < self.upper), axis=-1)
        return inside.astype(complex)

    def spatial(self, x):
        # inverse transform of a box indicator: per-axis modulated sinc
        x = np.asarray(x, dtype=float)
        width = self.upper - self.lower
        center = 0.5 * (self.upper + self.lower)
        vals = width * np.sinc(width * x) * np.exp(2j * np.pi * center * x)
        return np.prod(vals, axis=-1)

    def norm_squared(self):
        return float(np.prod(self.upper - self.lower))

    def decay_bound(self):
        radius = float(np.max(np.maximum(np.abs(self.lower), np.abs(self.upper))))
        return CompactFrequencySupport(radius=radius, peak=1.0)


class Sinc(FrequencyBox):
    """Tensor product of sin(pi x)/(pi x); fhat is the unit frequency box."""

    def __init__(self, dim: int = 1):
        super().__init__(np.full(dim, -0.5), np.full(dim, 0.5))
        self.label = f"sinc(d={dim})"


def _bspline_values(order: int, x: np.ndarray) -> np.ndarray:
    """Centered cardinal B-spline of the given order, evaluated pointwise.

    order m is the polynomial degree: m = 0 is the box, m = 1 the hat.
    Uses the divided-difference form sum_j (-1)^j C(m+1, j) (x + (m+1)/2 - j)_+^m / m!.
    """
    m = order
    acc = np.zeros_like(x, dtype=float)
    shift = 0.5 * (m + 1)
    for j in range(m + 2):
        t = np.maximum(x + shift - j, 0.0)
        acc += ((-1) ** j) * math.comb(m + 1, j) * t**m
    return acc / math.factorial(m)


class BSpline(Generator):
    """Tensor-product B-spline: (order+1)-fold convolution of the unit box.

    fhat(xi) = prod_i sinc(xi_i)^(order+1); spatial support is
    [-(order+1)/2, (order+1)/2]^d.
    """

    def __init__(self, order: int, dim: int = 1):
        if order < 1:
            raise ValueError("B-spline order must be >= 1")
        self.order = int(order)
        self.dim = int(dim)
        self.label = f"bspline{order}(d={dim})"

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.prod(np.sinc(xi) ** (self.order + 1), axis=-1).astype(complex)

    def spatial(self, x):
        x = np.asarray(x, dtype=float)
        return np.prod(_bspline_values(self.order, x), axis=-1).astype(complex)

    def norm_squared(self):
        # integral of b_m^2 equals the order-(2m+1) B-spline at the origin
        per_axis = float(_bspline_values(2 * self.order + 1, np.zeros(1))[0])
        return per_axis**self.dim

    def decay_bound(self):
        p = 2 * (self.order + 1)
        return PolynomialDecay(order=p, constant=math.pi**-p, peak=1.0)

    def spatial_tail_radius(self, tol):
        return 0.5 * (self.order + 1)


class Gaussian(Generator):
    """f(x) = exp(-pi |x/width|^2); self-dual when width = 1."""

    def __init__(self, width: float = 1.0, dim: int = 1):
        if width <= 0:
            raise ValueError("Gaussian width must be positive")
        self.width = float(width)
        self.dim = int(dim)
        self.label = f"gaussian(width={width},d={dim})"

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        s = self.width
        return (s**self.dim) * np.exp(-np.pi * s**2 * np.sum(xi**2, axis=-1)).astype(
            complex
        )

    def spatial(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-np.pi * np.sum((x / self.width) ** 2, axis=-1)).astype(complex)

    def norm_squared(self):
        return float((self.width / math.sqrt(2.0)) ** self.dim)

    def decay_bound(self):
        s = self.width
        return GaussianDecay(rate=2.0 * np.pi * s**2, constant=s ** (2 * self.dim))

    def spatial_tail_radius(self, tol):
        # |f| <= exp(-pi (t/width)^2); crude but safe radius for the L1 tail
        s = self.width
        r = s * math.sqrt(max(math.log(max(self.dim * 4.0 / tol, 2.0)), 1.0) / math.pi)
        return r + s


class SampledSpatial(Generator):
    """Compactly supported samples on a uniform spatial grid.

    The transform is the Riemann sum h^d * sum_j v_j exp(-2*pi*i*xi.x_j),
    which is periodic with period 1/h per axis.  A caller-declared
    ``support_radius`` (frequency units) certifies the effective band; without
    it no lattice-sum truncation can be certified and tail queries fail.
    """

    _CHUNK = 4_000_000  # max points*samples per vectorized block

    def __init__(self, values, origin, step: float, support_radius: float | None = None):
        v = np.asarray(values, dtype=complex)
        self.values = v
        self.dim = v.ndim
        self.origin = np.atleast_1d(np.asarray(origin, dtype=float))
        if self.origin.shape != (self.dim,):
            raise ValueError("origin must have one coordinate per value axis")
        if step <= 0:
            raise ValueError("grid step must be positive")
        self.step = float(step)
        self.support_radius = None if support_radius is None else float(support_radius)
        if np.sum(np.abs(v) ** 2) * step**self.dim < 1e-14:
            raise ZeroGenerator("sampled generator is numerically zero")
        self.label = f"sampled(h={step},n={v.shape})"
        # flat sample coordinates for transform sums
        grids = np.meshgrid(
            *[self.origin[i] + self.step * np.arange(v.shape[i]) for i in range(self.dim)],
            indexing="ij",
        )
        self._coords = np.stack([g.ravel() for g in grids], axis=-1)
        self._flat = v.ravel()

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        flat = xi.reshape(-1, self.dim)
        out = np.empty(flat.shape[0], dtype=complex)
        block = max(1, self._CHUNK // max(1, self._flat.size))
        for start in range(0, flat.shape[0], block):
            sl = slice(start, start + block)
            phase = np.exp(-2j * np.pi * (flat[sl] @ self._coords.T))
            out[sl] = phase @ self._flat
        return (self.step**self.dim) * out.reshape(xi.shape[:-1])

    def spatial(self, x):
        # multilinear interpolation on the sample grid; zero outside
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, self.dim)
        rel = (flat - self.origin) / self.step
        base = np.floor(rel).astype(int)
        frac = rel - base
        out = np.zeros(flat.shape[0], dtype=complex)
        shape = self.values.shape
        for corner in range(2**self.dim):
            offs = np.array([(corner >> i) & 1 for i in range(self.dim)])
            idx = base + offs
            ok = np.all((idx >= 0) & (idx < shape), axis=1)
            w = np.prod(np.where(offs, frac, 1.0 - frac), axis=1)
            if np.any(ok):
                vals = self.values[tuple(idx[ok].T)]
                out[ok] += w[ok] * vals
        return out.reshape(x.shape[:-1])

    def norm_squared(self):
        return float(np.sum(np.abs(self.values) ** 2) * self.step**self.dim)

    def decay_bound(self):
        if self.support_radius is None:
            raise NoDecayInfo(
                "sampled data carries no frequency decay; declare support_radius"
            )
        peak = float((np.sum(np.abs(self.values)) * self.step**self.dim) ** 2)
        return CompactFrequencySupport(radius=self.support_radius, peak=peak)

    def spatial_tail_radius(self, tol):
        spans = [
            abs(self.origin[i]) + self.step * self.values.shape[i]
            for i in range(self.dim)
        ]
        return float(max(spans))


def load_sampled_csv(path, support_radius: float | None = None) -> SampledSpatial:
    """Read samples from CSV rows ``x_1,...,x_d,re,im`` on a uniform grid.

    Points must lie on a common uniform grid (one step for all axes); holes
    are filled with zeros.  Raises ValueError when the grid is not uniform.
    """
    rows = np.atleast_2d(np.loadtxt(path, delimiter=",", dtype=float))
    if rows.shape[1] < 3:
        raise ValueError("CSV rows must be x_1,...,x_d,re,im")
    dim = rows.shape[1] - 2
    coords = rows[:, :dim]
    vals = rows[:, dim] + 1j * rows[:, dim + 1]

    steps = []
    for i in range(dim):
        uniq = np.unique(coords[:, i])
        if uniq.size > 1:
            diffs = np.diff(uniq)
            steps.append(diffs.min())
    if not steps:
        raise ValueError("degenerate sample set")
    h = float(min(steps))
    origin = coords.min(axis=0)
    rel = (coords - origin) / h
    idx = np.rint(rel).astype(int)
    if np.max(np.abs(rel - idx)) > 1e-6:
        raise ValueError("samples do not lie on a uniform grid")
    shape = tuple(idx.max(axis=0) + 1)
    dense = np.zeros(shape, dtype=complex)
    dense[tuple(idx.T)] = vals
    return SampledSpatial(dense, origin, h, support_radius=support_radius)


# ---------------------------------------------------------------------------
# certified truncation of lattice sums
# ---------------------------------------------------------------------------


def _shell_count(dim: int, m: int) -> int:
    """Number of integer vectors with sup-norm exactly m."""
    if m == 0:
        return 1
    return (2 * m + 1) ** dim - (2 * m - 1) ** dim

# coefficients alpha_d with shell_count(d, m) <= alpha_d * (m-1)^(d-1) for m >= 2
_SHELL_COEFF = {1: 2.0, 2: 16.0, 3: 98.0}


def tail_bound(g: Generator, lattice: LatticeSpec, radius: int) -> float:
    """Certified bound on the lattice-sum tail beyond the given sup-norm radius.

    Bounds sup_gamma sum_{|k|_inf > radius} |fhat(dual(gamma+k))|^2 / |det B|
    for gamma in [0,1)^d.  Exactly zero when compact frequency support rules
    out every excluded term.
    """
    if radius < 1:
        raise ValueError("truncation radius must be >= 1")
    db = g.decay_bound()
    d = lattice.dim
    det = lattice.det_abs
    at_norm = operator_inf_norm(lattice.basis.T)

    if isinstance(db, CompactFrequencySupport):
        # argument of fhat is dual @ (gamma + k); it stays inside the support
        # ball only while |gamma + k|_inf <= radius * |B^T|_inf
        mapped = db.radius * at_norm
        if radius >= mapped:
            return 0.0
        total = 0.0
        m = radius + 1
        while m - 1 <= mapped:
            total += _shell_count(d, m) * db.peak
            m += 1
        return total / det

    if isinstance(db, PolynomialDecay):
        p = db.order
        if p <= d:
            raise NoDecayInfo(f"polynomial decay order {p} too weak for dimension {d}")
        c_mapped = db.constant * at_norm**p
        total = 0.0
        explicit = 64
        for m in range(radius + 1, radius + explicit + 1):
            # |gamma + k|_inf >= m - 1 for every gamma in [0,1)^d
            total += _shell_count(d, m) * min(db.peak, c_mapped / (m - 1) ** p)
        j = radius + explicit
        alpha = _SHELL_COEFF[d]
        total += alpha * c_mapped * (j ** (d - 1 - p) + j ** (d - p) / (p - d))
        return total / det

    if isinstance(db, GaussianDecay):
        s2 = spectral_norm(lattice.basis.T)
        rate = db.rate / s2**2
        total = 0.0
        m = radius + 1
        while True:
            term = _shell_count(d, m) * db.constant * math.exp(-rate * (m - 1) ** 2)
            total += term
            cnt_ratio = _shell_count(d, m + 1) / _shell_count(d, m)
            ratio = cnt_ratio * math.exp(-rate * (2 * m - 1))
            if ratio < 0.5 and (term == 0.0 or term < 1e-18 * max(total, 1e-300)):
                total += term * ratio / (1.0 - ratio)
                break
            m += 1
            if m > radius + 100_000:
                raise NoDecayInfo("gaussian tail summation failed to converge")
        return total / det

    raise NoDecayInfo(f"unrecognized decay bound {type(db).__name__}")


def _tail_radius_from_decay(db: DecayBound, dim: int, tol: float) -> float:
    """Radius R with the continuum tail integral of |fhat|^2 at most tol."""
    if isinstance(db, CompactFrequencySupport):
        return db.radius
    if isinstance(db, PolynomialDecay):
        p = db.order
        if p <= dim:
            raise NoDecayInfo("polynomial decay too weak to truncate")
        # integral over {|xi|_inf > R} of C/t^p d xi = d 2^d C R^(d-p)/(p-d)
        c = dim * (2.0**dim) * db.constant / (p - dim)
        return max(1.0, (c / tol) ** (1.0 / (p - dim)))
    if isinstance(db, GaussianDecay):
        a, c = db.rate, db.constant
        r = max(1.0, math.sqrt(dim / a))
        while True:
            if dim <= 2:
                bound = dim * (2.0**dim) * c * r ** (dim - 2) * math.exp(-a * r**2) / (2 * a)
            else:
                bound = (
                    dim
                    * (2.0**dim)
                    * c
                    * math.exp(-a * r**2)
                    * (r / a + 1.0 / (2 * a**2 * r))
                )
            if bound <= tol:
                return r
            r += 0.25
    raise NoDecayInfo(f"unrecognized decay bound {type(db).__name__}")
