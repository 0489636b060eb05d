"""Verdicts for translate systems from grid estimates of the periodization.

The decision tree follows the characterization by the essential range of the
periodized power spectrum phi over the unit cell:

* bounded above          -> Bessel (always true on a finite grid; a ceiling
                            guards against runaway tables)
* bounded below off the zero set -> frame sequence
* zero set empty as well -> Riesz sequence
* bounds both ~1         -> Parseval flavor of the above two

Grid extrema are estimates of essential bounds, not certificates; tables
carry their truncation tail so thresholds can dominate it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import EpsilonTooSmall, NotCompactlySupported
from .generators import BSpline, Generator, SampledSpatial
from .lattice import LatticeSpec
from .periodization import PeriodizationTable, grid_gamma, perturbed_phi

DEFAULT_CLASS_TOL = 1e-6
# zero detection: separates true zeros of indicator-type tables from
# truncation noise (tails are kept at ~1e-10 of the grid max)
EPS_ZERO_FRAC = 1e-8
# below this fraction of the sup, an off-zero infimum is treated as
# decay-to-zero rather than a genuine positive lower bound
FRAME_FLOOR_FRAC = 1e-4
NOT_BESSEL_CEILING = 1e12


class Verdict(str, enum.Enum):
    NOT_BESSEL = "NotBessel"
    BESSEL_NOT_FRAME = "BesselNotFrameSeq"
    FRAME_SEQUENCE = "FrameSequence"
    RIESZ_SEQUENCE = "RieszSequence"
    PARSEVAL_FRAME_SEQUENCE = "ParsevalFrameSequence"
    ORTHONORMAL_SEQUENCE = "OrthonormalSequence"


@dataclass(frozen=True)
class SpectralBounds:
    """Grid estimates of the essential bounds of a periodization table."""

    sup_all: float
    inf_all: float
    inf_offzero: float
    zero_fraction: float
    eps_zero: float


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    lower: float | None
    upper: float | None
    evidence: dict


@dataclass(frozen=True)
class RieszCheck:
    is_riesz: bool
    witness_gamma: np.ndarray
    min_value: float


@dataclass(frozen=True)
class PerturbationCheck:
    classification: Classification
    frame_for_original: bool
    inf_on_original_support: float


def default_eps_zero(values: np.ndarray, tail: float) -> float:
    return max(EPS_ZERO_FRAC * (float(values.max()) + tail), 4.0 * tail, 1e-300)


def _jump_excluded(values: np.ndarray) -> np.ndarray:
    """Mask of grid points within one cell of a detected jump.

    A jump is an adjacent (periodic) pair differing by more than half of the
    grid maximum; excluding its endpoints keeps bound estimates from reading
    straddled values next to a discontinuity.
    """
    sup = float(values.max())
    if sup <= 0.0:
        return np.zeros(values.shape, dtype=bool)
    excluded = np.zeros(values.shape, dtype=bool)
    for axis in range(values.ndim):
        diff = np.abs(np.roll(values, -1, axis=axis) - values)
        jump = diff > 0.5 * sup
        excluded |= jump | np.roll(jump, 1, axis=axis)
    return excluded


def _bounds_from_values(values: np.ndarray, tail: float, eps_zero: float) -> SpectralBounds:
    excluded = _jump_excluded(values)
    kept = values[~excluded]
    if kept.size == 0:
        kept = values.ravel()
    sup_all = float(kept.max()) + tail
    inf_all = float(kept.min())
    offzero = kept[kept >= eps_zero]
    inf_offzero = float(offzero.min()) if offzero.size else 0.0
    zero_fraction = float(np.count_nonzero(values < eps_zero)) / values.size
    return SpectralBounds(
        sup_all=sup_all,
        inf_all=inf_all,
        inf_offzero=inf_offzero,
        zero_fraction=zero_fraction,
        eps_zero=eps_zero,
    )


def spectral_bounds(table: PeriodizationTable, eps_zero: float | None = None) -> SpectralBounds:
    """Grid extrema, off-zero infimum and zero-set fraction of a table.

    ``eps_zero`` must dominate the truncation tail (at least 4x) so that a
    dropped tail cannot flip a zero decision; the default scales with the
    grid maximum.
    """
    if eps_zero is None:
        eps_zero = default_eps_zero(table.values, table.tail)
    if eps_zero < 4.0 * table.tail:
        raise EpsilonTooSmall(
            f"eps_zero {eps_zero:.3e} below 4 * tail {4.0 * table.tail:.3e}"
        )
    return _bounds_from_values(table.values, table.tail, eps_zero)


def classify_translates(bounds: SpectralBounds,
                        class_tol: float = DEFAULT_CLASS_TOL,
                        frame_floor_frac: float = FRAME_FLOOR_FRAC,
                        not_bessel_ceiling: float = NOT_BESSEL_CEILING) -> Classification:
    """Decision tree over grid spectral bounds.

    The grid sup always exists, so the system is Bessel unless the table blew
    past the configured ceiling.  A positive infimum off the zero set makes a
    frame sequence; an empty zero set upgrades it to a Riesz sequence; bounds
    within ``class_tol`` of one mark the Parseval / orthonormal cases.
    """
    evidence = {
        "sup_all": bounds.sup_all,
        "inf_all": bounds.inf_all,
        "inf_offzero": bounds.inf_offzero,
        "zero_fraction": bounds.zero_fraction,
        "eps_zero": bounds.eps_zero,
        "class_tol": class_tol,
    }
    if not np.isfinite(bounds.sup_all) or bounds.sup_all > not_bessel_ceiling:
        return Classification(Verdict.NOT_BESSEL, None, None, evidence)

    upper = bounds.sup_all
    degenerate = bounds.sup_all <= 0.0
    if degenerate or bounds.inf_offzero < frame_floor_frac * bounds.sup_all:
        return Classification(Verdict.BESSEL_NOT_FRAME, None, upper, evidence)

    lower = bounds.inf_offzero
    no_zero_set = bounds.zero_fraction == 0.0
    parseval = abs(lower - 1.0) <= class_tol and abs(upper - 1.0) <= class_tol
    if no_zero_set and parseval:
        verdict = Verdict.ORTHONORMAL_SEQUENCE
    elif no_zero_set:
        verdict = Verdict.RIESZ_SEQUENCE
    elif parseval:
        verdict = Verdict.PARSEVAL_FRAME_SEQUENCE
    else:
        verdict = Verdict.FRAME_SEQUENCE
    return Classification(verdict, lower, upper, evidence)


def classify_table(table: PeriodizationTable,
                   eps_zero: float | None = None,
                   class_tol: float = DEFAULT_CLASS_TOL) -> Classification:
    """Convenience pipeline: spectral bounds then the decision tree."""
    bounds = spectral_bounds(table, eps_zero)
    cls = classify_translates(bounds, class_tol)
    cls.evidence.update(
        grid_res=table.grid_res,
        trunc_radius=table.trunc_radius,
        tail=table.tail,
        generator=table.generator_tag,
    )
    return cls


def classify_weighted_exponentials(psi_samples, eps_zero: float,
                                   class_tol: float = DEFAULT_CLASS_TOL) -> Classification:
    """Classify a weighted exponential system from samples of its weight.

    The system behaves exactly like a translate system whose periodization is
    |psi|^2, so the same decision tree applies to the squared magnitudes.
    Reported bounds are on |psi|^2.
    """
    samples = np.asarray(psi_samples)
    if samples.size == 0:
        raise ValueError("sample list must be nonempty")
    power = np.abs(samples.ravel()) ** 2
    bounds = _bounds_from_values(power, 0.0, eps_zero)
    return classify_translates(bounds, class_tol)


def compact_support_riesz_check(g: Generator, lattice: LatticeSpec,
                                table: PeriodizationTable,
                                eps_zero: float | None = None) -> RieszCheck:
    """Riesz test for compactly supported generators: does phi vanish anywhere?

    Compact spatial support makes the periodization continuous (it has
    finitely many Fourier coefficients), so a grid minimum above the zero
    threshold certifies the everywhere-positive condition up to grid
    resolution.  The witness is the argmin grid point.
    """
    if not isinstance(g, (BSpline, SampledSpatial)):
        raise NotCompactlySupported(
            f"{g.label} is not compactly supported in space"
        )
    if eps_zero is None:
        eps_zero = default_eps_zero(table.values, table.tail)
    flat = table.values.ravel()
    idx = int(np.argmin(flat))
    witness = grid_gamma(table.dim, table.grid_res)[idx]
    min_value = float(flat[idx])
    return RieszCheck(is_riesz=bool(min_value >= eps_zero),
                      witness_gamma=witness, min_value=min_value)


def perturbation_frame_check(table: PeriodizationTable, n,
                             eps_zero: float | None = None,
                             class_tol: float = DEFAULT_CLASS_TOL) -> PerturbationCheck:
    """Classify the two-translate perturbation and test frame-ness for the
    original span.

    The perturbed system spans a subspace of the original one; it stays a
    frame for the original span iff the perturbed periodization stays bounded
    away from zero on the off-zero set of the original table (the perturbation
    factor's zeros must avoid the original support).
    """
    if eps_zero is None:
        eps_zero = default_eps_zero(table.values, table.tail)
    pert = perturbed_phi(table, n)
    classification = classify_table(pert, class_tol=class_tol)

    mask = table.values >= eps_zero
    if np.any(mask):
        inf_sup = float(pert.values[mask].min())
    else:
        inf_sup = 0.0
    return PerturbationCheck(
        classification=classification,
        frame_for_original=bool(inf_sup > eps_zero),
        inf_on_original_support=inf_sup,
    )
