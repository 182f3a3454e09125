import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm

from fluctlab.params import LimitLaw, ParamError
from fluctlab import diststats as ds


class TestGaussian:
    def test_center(self):
        assert ds.gaussian_cdf(0.0) == 0.5

    def test_symmetry(self):
        for x in [0.3, 1.7, 4.2]:
            assert abs(ds.gaussian_cdf(x) - (1.0 - ds.gaussian_cdf(-x))) < 1e-14

    def test_against_quadrature(self):
        # independent oracle: integrate the density
        val = 0.5 + quad(lambda u: math.exp(-u * u / 2) / math.sqrt(2 * math.pi),
                         0.0, 1.959964)[0]
        assert abs(ds.gaussian_cdf(1.959964) - val) < 1e-12
        assert ds.gaussian_cdf(1.959964) == pytest.approx(0.975, abs=5e-8)


class TestG2Product:
    def test_origin(self):
        assert ds.g2_product_cdf(0.0, 1.0) == pytest.approx(0.25)

    def test_factor_inversion_invariance(self):
        xs = np.linspace(-3, 3, 31)
        assert np.allclose(ds.g2_product_cdf(xs, 2.3), ds.g2_product_cdf(xs, 1 / 2.3))

    def test_shock_form_reproduced(self):
        # the two-density shock law G1(a x) G1(b x) via two calls
        rp, rm = 0.6, 0.2
        a = (4 * rp * (1 - rp)) ** -0.5
        b = (4 * rm * (1 - rm)) ** -0.5
        x = 0.8
        direct = norm.cdf(a * x) * norm.cdf(b * x)
        c = math.sqrt(a / b)
        folded = ds.g2_product_cdf(x * math.sqrt(a * b), c)
        assert folded == pytest.approx(direct, rel=1e-12)

    def test_rejects_bad_factor(self):
        with pytest.raises(ParamError):
            ds.g2_product_cdf(0.0, -1.0)


class TestTracyWidom:
    def test_gue_moments(self):
        tab = ds.get_tw_table("GUE")
        mean, var = ds.table_moments(tab, -10, 6)
        assert mean == pytest.approx(-1.771087, abs=2e-4)
        assert var == pytest.approx(0.813195, abs=2e-4)

    def test_gue_tails(self):
        tab = ds.get_tw_table("GUE")
        assert tab.cdf(-10.0) < 1e-8
        assert tab.cdf(6.0) > 1 - 1e-8

    def test_known_point_values(self):
        assert ds.fredholm_det_gue(0.0) == pytest.approx(0.9693728283, abs=1e-8)
        assert ds.fredholm_det_goe(0.0) == pytest.approx(0.8319080562, abs=1e-7)

    def test_node_doubling(self):
        for s in [-6.0, -3.0, -1.0, 0.0, 2.0, 4.0]:
            assert abs(ds.fredholm_det_gue(s, 64) - ds.fredholm_det_gue(s, 128)) < 1e-6
            assert abs(ds.fredholm_det_goe(s, 64) - ds.fredholm_det_goe(s, 128)) < 1e-6

    def test_fredholm_vs_painleve(self):
        xs = np.arange(-8.0, 4.01, 0.5)
        p2, p1 = ds.painleve_tw_cdf(xs)
        f2 = np.array([ds.fredholm_det_gue(float(s)) for s in xs])
        f1 = np.array([ds.fredholm_det_goe(float(s)) for s in xs])
        assert np.max(np.abs(p2 - f2)) < 1e-5
        assert np.max(np.abs(p1 - f1)) < 1e-5

    def test_goe_factorization_identity(self):
        # the Airy-kernel determinant factors as det(I-B) det(I+B)
        for s in [-2.0, 0.0, 1.5]:
            x, w = ds._nystrom_nodes(64)
            from scipy.special import airy
            sq = np.sqrt(w)
            b = airy(x[:, None] + x[None, :] + s)[0] * sq[:, None] * sq[None, :]
            eye = np.eye(64)
            prod = np.linalg.det(eye - b) * np.linalg.det(eye + b)
            assert prod == pytest.approx(ds.fredholm_det_gue(s), abs=1e-9)

    def test_f1_is_goe_squared(self):
        f1 = ds.reference_cdf(LimitLaw("F1"))
        goe = ds.get_tw_table("GOE")
        xs = np.linspace(-6, 4, 41)
        assert np.allclose(f1(xs), goe.cdf(xs) ** 2)

    def test_clamp_flag(self):
        tab = ds.get_tw_table("GUE")
        vals, clamped = tab.evaluate(np.array([-50.0, 0.0, 50.0]))
        assert list(clamped) == [True, False, True]
        assert vals[0] <= 1e-8 and vals[2] >= 1 - 1e-8

    def test_f11_has_no_reference(self):
        with pytest.raises(ParamError):
            ds.reference_cdf(LimitLaw("F11"))


class TestTableIO:
    def test_round_trip(self, tmp_path):
        tab = ds.build_tw_table("GUE", order=24, x_min=-4, x_max=3, step=0.5)
        p = tmp_path / "t.tsv"
        tab.save(p)
        tab2 = ds.CdfTable.load(p)
        assert tab2.family == "GUE" and tab2.order == 24
        assert np.array_equal(tab.xs, tab2.xs)
        assert np.array_equal(tab.fs, tab2.fs)

    def test_header_format(self, tmp_path):
        tab = ds.build_tw_table("GOE", order=16, x_min=-3, x_max=2, step=1.0)
        p = tmp_path / "g.tsv"
        tab.save(p)
        head = p.read_text().splitlines()[0]
        assert head.startswith("# GOE 16 ")
        assert head.split()[-1] == "6"

    def test_monotone_required(self):
        with pytest.raises(ParamError):
            ds.CdfTable("GUE", 8, np.array([0.0, 1.0, 2.0]), np.array([0.5, 0.4, 0.6]))


class TestKs:
    def test_sampled_from_reference(self):
        tab = ds.get_tw_table("GUE")
        u = np.random.default_rng(11).random(10_000)
        e = ds.Ecdf(tab.inverse_sample(u))
        assert ds.ks_statistic(e, tab) < 1.95 / math.sqrt(10_000)

    def test_single_sample_at_median(self):
        e = ds.Ecdf(np.array([0.0]))
        assert ds.ks_statistic(e, ds.gaussian_cdf) == pytest.approx(0.5)

    def test_self_comparison_is_zero(self):
        e = ds.Ecdf(np.random.default_rng(0).random(500))
        assert ds.ks_statistic(e, e) == 0.0

    def test_two_sample_symmetry(self):
        rng = np.random.default_rng(5)
        a, b = rng.standard_normal(300), rng.standard_normal(400) + 0.3
        assert ds.ks_two_sample(a, b) == pytest.approx(ds.ks_two_sample(b, a))

    def test_detects_location_shift(self):
        rng = np.random.default_rng(6)
        e = ds.Ecdf(rng.standard_normal(4000) + 2.0)
        assert ds.ks_statistic(e, ds.gaussian_cdf) > 0.5


class TestSummarize:
    def test_constant_sample(self):
        s = ds.summarize(ds.Ecdf(np.full(50, 3.0)))
        assert s.variance == 0.0

    def test_two_point_sample(self):
        n = 100
        s = ds.summarize(ds.Ecdf(np.array([-1.0, 1.0] * (n // 2))))
        assert s.variance == pytest.approx(n / (n - 1))
        assert s.mean == 0.0

    def test_normal_sample_moments(self):
        v = np.random.default_rng(8).standard_normal(10_000)
        s = ds.summarize(ds.Ecdf(v))
        assert abs(s.mean) < 3 / math.sqrt(10_000)
        assert s.se_mean == pytest.approx(v.std(ddof=1) / math.sqrt(10_000), rel=1e-6)
        assert abs(s.variance - 1.0) < 5 * s.se_variance
        assert abs(s.skewness) < 5 * s.se_skewness + 0.1

    def test_needs_two_samples(self):
        with pytest.raises(ParamError):
            ds.summarize(ds.Ecdf(np.array([1.0])))


class TestMomentsHelper:
    def test_gaussian_moments(self):
        mean, var = ds.table_moments(ds.gaussian_cdf, -10, 10)
        assert mean == pytest.approx(0.0, abs=1e-9)
        assert var == pytest.approx(1.0, abs=1e-5)


class TestCdfRangeInvariant:
    def test_all_references_monotone_in_unit_interval(self):
        xs = np.linspace(-12, 12, 2001)
        refs = [
            ds.gaussian_cdf,
            lambda v: ds.g2_product_cdf(v, 1.7),
            ds.get_tw_table("GUE").cdf,
            ds.reference_cdf(LimitLaw("F1")),
        ]
        for ref in refs:
            f = np.asarray(ref(xs))
            assert (f >= 0.0).all() and (f <= 1.0).all()
            assert (np.diff(f) >= -1e-12).all()


class TestScalingLawPlumbing:
    def test_gue_variance_slope(self):
        # raw L2 variance grows like M^(2/3) in the cube-root regime
        from fluctlab import lpp
        from fluctlab.params import GridShape
        sizes = [200, 400, 800, 1600]
        variances = []
        for k, m in enumerate(sizes):
            ens = lpp.run_ensemble(GridShape(m, m), lpp.TwoSided(0.9, 0.9), 600 + k, 600)
            variances.append(float(np.var(ens.l2, ddof=1)))
        slope = np.polyfit(np.log(sizes), np.log(variances), 1)[0]
        assert slope == pytest.approx(2 / 3, abs=0.15)
