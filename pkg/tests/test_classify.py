import numpy as np
import pytest

import latticeframes as lf
from latticeframes.classify import Verdict
from latticeframes.errors import EpsilonTooSmall, NotCompactlySupported


def _family(verdict):
    """Coarse verdict family used by the scaling property."""
    order = {
        Verdict.NOT_BESSEL: 0,
        Verdict.BESSEL_NOT_FRAME: 1,
        Verdict.FRAME_SEQUENCE: 2,
        Verdict.PARSEVAL_FRAME_SEQUENCE: 2,
        Verdict.RIESZ_SEQUENCE: 3,
        Verdict.ORTHONORMAL_SEQUENCE: 3,
    }
    return order[verdict]


def test_bounds_sinc(sinc_table):
    b = lf.spectral_bounds(sinc_table)
    assert b.sup_all == pytest.approx(1.0)
    assert b.inf_all == pytest.approx(1.0)
    assert b.zero_fraction == 0.0


def test_bounds_example(example_table):
    b = lf.spectral_bounds(example_table)
    assert b.sup_all == pytest.approx(1.0)
    assert b.inf_offzero == pytest.approx(1.0)
    assert b.zero_fraction == pytest.approx(1 / 3, abs=2 / 1024)


def test_bounds_bspline(bspline1_table):
    b = lf.spectral_bounds(bspline1_table)
    assert b.inf_all == pytest.approx(1 / 3, abs=1e-6)
    assert b.sup_all == pytest.approx(1.0, abs=1e-6)
    assert b.zero_fraction == 0.0
    assert b.inf_all <= b.inf_offzero <= b.sup_all


def test_bounds_epsilon_guard(bspline1_table):
    with pytest.raises(EpsilonTooSmall):
        lf.spectral_bounds(bspline1_table, eps_zero=bspline1_table.tail)


def test_classify_example(example_table):
    cls = lf.classify_table(example_table)
    assert cls.verdict is Verdict.PARSEVAL_FRAME_SEQUENCE
    assert cls.lower == pytest.approx(1.0)
    assert cls.upper == pytest.approx(1.0)
    assert cls.evidence["zero_fraction"] > 0.25  # not a Riesz sequence


def test_classify_sinc(sinc_table):
    assert lf.classify_table(sinc_table).verdict is Verdict.ORTHONORMAL_SEQUENCE


def test_classify_bspline(bspline1_table):
    cls = lf.classify_table(bspline1_table)
    assert cls.verdict is Verdict.RIESZ_SEQUENCE
    assert cls.lower == pytest.approx(1 / 3, abs=1e-6)
    assert cls.upper == pytest.approx(1.0, abs=1e-6)


def test_classify_gauss(gauss_table):
    cls = lf.classify_table(gauss_table)
    assert cls.verdict is Verdict.RIESZ_SEQUENCE
    assert 0.4 < cls.lower < cls.upper < 1.01


def test_not_bessel_ceiling():
    bounds = lf.SpectralBounds(sup_all=1e13, inf_all=1.0, inf_offzero=1.0,
                               zero_fraction=0.0, eps_zero=1e-8)
    assert lf.classify_translates(bounds).verdict is Verdict.NOT_BESSEL


def test_weighted_exponentials_constant():
    cls = lf.classify_weighted_exponentials(np.ones(512), eps_zero=1e-8)
    assert cls.verdict is Verdict.ORTHONORMAL_SEQUENCE


def test_weighted_exponentials_half_indicator():
    g = np.arange(4096) / 4096
    psi = (g < 0.5).astype(complex)
    cls = lf.classify_weighted_exponentials(psi, eps_zero=1e-8)
    assert cls.verdict is Verdict.PARSEVAL_FRAME_SEQUENCE
    assert cls.evidence["zero_fraction"] == pytest.approx(0.5, abs=2 / 4096)


def test_weighted_exponentials_ramp():
    # inf over off-zero samples sinks with the grid: no positive lower bound
    g = np.arange(4096) / 4096
    cls = lf.classify_weighted_exponentials(g.astype(complex), eps_zero=1e-8)
    assert cls.verdict is Verdict.BESSEL_NOT_FRAME


def test_weighted_exponentials_empty():
    with pytest.raises(ValueError):
        lf.classify_weighted_exponentials([], eps_zero=1e-8)


# ---------------------------------------------------------------------------
# compact support checks
# ---------------------------------------------------------------------------


def test_compact_riesz_bspline_unit(unit_lattice, bspline1_table):
    chk = lf.compact_support_riesz_check(lf.BSpline(1), unit_lattice, bspline1_table)
    assert chk.is_riesz
    assert chk.min_value == pytest.approx(1 / 3, abs=1e-6)
    assert chk.witness_gamma == pytest.approx([0.5])


def test_compact_riesz_coarse_lattice():
    # translates by 2Z of the hat are orthogonal: constant phi, still Riesz
    L2 = lf.new_lattice([[2.0]])
    table = lf.compute_phi(lf.BSpline(1), L2, 1024)
    chk = lf.compact_support_riesz_check(lf.BSpline(1), L2, table)
    assert chk.is_riesz
    assert chk.min_value == pytest.approx(2 / 3, abs=1e-6)
    assert np.max(np.abs(table.values - 2 / 3)) < 1e-6


def test_compact_riesz_dense_lattice():
    # half-integer translates: phi vanishes at gamma = 1/2
    Lh = lf.new_lattice([[0.5]])
    table = lf.compute_phi(lf.BSpline(1), Lh, 1024)
    chk = lf.compact_support_riesz_check(lf.BSpline(1), Lh, table)
    assert not chk.is_riesz
    assert chk.witness_gamma == pytest.approx([0.5])
    assert chk.min_value < 1e-12


def test_compact_riesz_sampled_hat(unit_lattice):
    step = 1 / 64
    xs = np.arange(-1.0, 1.0 + step / 2, step)
    hat = lf.SampledSpatial(np.maximum(0, 1 - np.abs(xs)), [xs[0]], step,
                            support_radius=32.0)
    table = lf.compute_phi(hat, unit_lattice, 1024)
    chk = lf.compact_support_riesz_check(hat, unit_lattice, table)
    assert chk.is_riesz
    assert chk.min_value == pytest.approx(1 / 3, abs=1e-3)


def test_compact_riesz_rejects_sinc(unit_lattice, sinc_table):
    with pytest.raises(NotCompactlySupported):
        lf.compact_support_riesz_check(lf.Sinc(1), unit_lattice, sinc_table)


# ---------------------------------------------------------------------------
# perturbation frame check
# ---------------------------------------------------------------------------


def test_perturbation_sinc_loses_frame(sinc_table):
    chk = lf.perturbation_frame_check(sinc_table, [1])
    assert not chk.frame_for_original
    assert chk.inf_on_original_support < 1e-20


def test_perturbation_example_keeps_frame(example_table):
    # the factor's only zero (gamma = 1/2) falls inside the original zero set
    chk = lf.perturbation_frame_check(example_table, [1])
    assert chk.frame_for_original
    assert chk.inf_on_original_support == pytest.approx(1.0, abs=5e-3)


def test_perturbation_zero_shift(bspline1_table):
    base = lf.classify_table(bspline1_table)
    chk = lf.perturbation_frame_check(bspline1_table, [0])
    assert chk.frame_for_original
    assert chk.classification.lower == pytest.approx(4 * base.lower, rel=1e-12)
    assert chk.classification.upper == pytest.approx(4 * base.upper, rel=1e-12)


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["example", "sinc", "bspline1", "gauss"])
def test_verdict_stable_under_refinement(name, unit_lattice):
    makers = {
        "example": lf.FrequencyBox([-1 / 3], [1 / 3]),
        "sinc": lf.Sinc(1),
        "bspline1": lf.BSpline(1),
        "gauss": lf.Gaussian(1.0),
    }
    verdicts = set()
    for n in (256, 512, 1024, 2048):
        table = lf.compute_phi(makers[name], unit_lattice, n)
        verdicts.add(lf.classify_table(table).verdict)
    assert len(verdicts) == 1


def test_parseval_not_riesz_separation(unit_lattice):
    box = lf.FrequencyBox([-1 / 3], [1 / 3])
    for n in (256, 512, 1024, 2048):
        cls = lf.classify_table(lf.compute_phi(box, unit_lattice, n))
        assert cls.verdict is Verdict.PARSEVAL_FRAME_SEQUENCE
        assert cls.evidence["zero_fraction"] >= 0.3


def test_scaling_equivariance(unit_lattice):
    class Scaled(lf.Generator):
        def __init__(self, base, c):
            self.base, self.c, self.dim = base, c, base.dim
            self.label = f"{c}*{base.label}"

        def fourier(self, xi):
            return self.c * self.base.fourier(xi)

        def spatial(self, x):
            return self.c * self.base.spatial(x)

        def norm_squared(self):
            return self.c**2 * self.base.norm_squared()

        def decay_bound(self):
            import dataclasses

            db = self.base.decay_bound()
            if isinstance(db, lf.CompactFrequencySupport):
                return dataclasses.replace(db, peak=self.c**2 * db.peak)
            if isinstance(db, lf.PolynomialDecay):
                return dataclasses.replace(db, constant=self.c**2 * db.constant,
                                           peak=self.c**2 * db.peak)
            return dataclasses.replace(db, constant=self.c**2 * db.constant)

    for base in (lf.BSpline(1), lf.FrequencyBox([-1 / 3], [1 / 3])):
        plain = lf.classify_table(lf.compute_phi(base, unit_lattice, 512))
        scaled = lf.classify_table(lf.compute_phi(Scaled(base, 2.0), unit_lattice, 512))
        assert _family(scaled.verdict) == _family(plain.verdict)
        assert scaled.lower == pytest.approx(4.0 * plain.lower, rel=1e-12)
        assert scaled.upper == pytest.approx(4.0 * plain.upper, rel=1e-12)


def test_oracle_envelope_consistency(unit_lattice):
    # grid bounds against Gram sections at M=64 for the Riesz-family presets
    for g, table_n in ((lf.Sinc(1), 512), (lf.BSpline(1), 512), (lf.Gaussian(1.0), 512)):
        cls = lf.classify_table(lf.compute_phi(g, unit_lattice, table_n))
        lo, hi = lf.gram_eigen_bounds(lf.gram_matrix(g, unit_lattice, 64))
        assert lo >= cls.lower - 0.05
        assert hi <= cls.upper + 0.05
        assert lo > cls.lower / 2
    # finite sections of the box case go singular: not a Riesz sequence
    box = lf.FrequencyBox([-1 / 3], [1 / 3])
    lo, hi = lf.gram_eigen_bounds(lf.gram_matrix(box, unit_lattice, 32))
    assert lo < 0.01
    assert hi <= 1.0 + 1e-8


def test_degenerate_samples_not_frame():
    cls = lf.classify_weighted_exponentials(np.zeros(64, dtype=complex), eps_zero=1e-8)
    assert cls.verdict is Verdict.BESSEL_NOT_FRAME
    assert cls.lower is None


def test_weighted_engine_matches_translate_engine(sinc_table, bspline1_table,
                                                  example_table, gauss_table):
    # a weight with |psi|^2 equal to the periodization classifies identically
    for table in (sinc_table, bspline1_table, example_table, gauss_table):
        base = lf.classify_table(table)
        psi = np.sqrt(table.values.ravel()).astype(complex)
        weighted = lf.classify_weighted_exponentials(
            psi, eps_zero=base.evidence["eps_zero"]
        )
        assert weighted.verdict is base.verdict
        if base.lower is not None:
            assert weighted.lower == pytest.approx(base.lower, rel=1e-9, abs=1e-12)
