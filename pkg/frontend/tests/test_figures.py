import numpy as np
import pytest

from fluctplots.io import FormatError
from fluctplots.overlay import plot_cdf_overlay
from fluctplots.phase import PhaseDiagramSpec, boundary_curves, plot_phase_diagram


class TestPhase:
    def test_renders_both_formats(self, artifacts, tmp_path):
        res = plot_phase_diagram(PhaseDiagramSpec(gamma=1.0),
                                 artifacts / "regions_1.0.csv", tmp_path / "g1")
        assert res.png_path.stat().st_size > 5_000
        assert res.svg_path.stat().st_size > 5_000
        assert res.critical_point == (0.5, 0.5)
        assert res.resolution == 96

    def test_gamma_mismatch_rejected(self, artifacts, tmp_path):
        with pytest.raises(FormatError, match="gamma"):
            plot_phase_diagram(PhaseDiagramSpec(gamma=2.0),
                               artifacts / "regions_1.0.csv", tmp_path / "x")

    def test_grid_holes_rejected(self, artifacts, tmp_path):
        lines = (artifacts / "regions_1.0.csv").read_text().splitlines()
        p = tmp_path / "holey.csv"
        p.write_text("\n".join(lines[:-10]) + "\n")
        with pytest.raises(FormatError):
            plot_phase_diagram(PhaseDiagramSpec(gamma=1.0), p, tmp_path / "x")

    def test_boundary_curves_satisfy_equations(self):
        for gamma in (0.5, 1.0, 2.0):
            curves = boundary_curves(gamma)
            pis, etas = curves["g2_curve"]
            ginv2 = gamma ** -2
            err = np.max(np.abs(etas - pis / (pis * (1 - ginv2) + ginv2)))
            assert err < 1e-9

    def test_regions_tile_square(self, artifacts):
        from fluctplots.io import read_regions
        grid = read_regions(artifacts / "regions_2.0.csv")
        assert set(np.unique(grid.regime)) <= {
            "GUE", "GOE2_PI", "GOE2_ETA", "CRITICAL_F11",
            "GAUSS_PI", "GAUSS_ETA", "G_SQUARED"}
        assert len(grid.pi) == 96 * 96


class TestOverlay:
    def test_matching_reference_is_coincident(self, artifacts, tmp_path):
        res = plot_cdf_overlay(artifacts / "gue.csv", artifacts / "gue_table.tsv",
                               tmp_path / "ok")
        assert res.ks < 0.12
        assert res.count == 1200
        assert res.png_path.stat().st_size > 5_000
        assert res.svg_path.stat().st_size > 5_000

    def test_mismatched_law_shows_gap(self, artifacts, tmp_path):
        res = plot_cdf_overlay(artifacts / "gauss.csv", artifacts / "gue_table.tsv",
                               tmp_path / "bad")
        assert res.ks > 0.25

    def test_empty_input_errors(self, artifacts, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("replica,raw,rescaled\n")
        with pytest.raises(FormatError):
            plot_cdf_overlay(p, artifacts / "gue_table.tsv", tmp_path / "x")


class TestAcceptanceCriterion14:
    def test_phase_diagram_family(self, artifacts, tmp_path):
        """Criterion 14: diagrams for gamma in {0.5, 1, 2}; critical points at
        (2/3,1/3), (1/2,1/2), (1/3,2/3); the 1/3-order region shifts up and
        to the left along the anti-diagonal as gamma grows."""
        expected = {0.5: (2 / 3, 1 / 3), 1.0: (1 / 2, 1 / 2), 2.0: (1 / 3, 2 / 3)}
        results = {}
        for gamma, point in expected.items():
            res = plot_phase_diagram(PhaseDiagramSpec(gamma=gamma),
                                     artifacts / f"regions_{gamma}.csv",
                                     tmp_path / f"phase_{gamma}")
            assert res.png_path.stat().st_size > 5_000
            assert res.svg_path.stat().st_size > 5_000
            assert res.critical_point == pytest.approx(point, abs=1e-12)
            results[gamma] = res

        cents = {g: results[g].third_order_centroid for g in expected}
        # anti-diagonal drift: pi decreases, eta increases with gamma
        assert cents[0.5][0] > cents[1.0][0] > cents[2.0][0]
        assert cents[0.5][1] < cents[1.0][1] < cents[2.0][1]
        # and the motion is along the anti-diagonal: pi+eta stays put
        sums = [cents[g][0] + cents[g][1] for g in (0.5, 1.0, 2.0)]
        assert max(sums) - min(sums) < 0.05
        ok = True
        print(f"\n[criterion 14] PASS: critical points {expected}, centroids {cents}")
        assert ok
