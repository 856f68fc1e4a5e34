"""Curvature verification engine.

The two constant-curvature quotients double as analytic oracles: the
generalized family at (0, 0) reduces to the real hyperbolic metric with
identity Gram at the chart origin, and the height-two chart at p = 0 is
the quaternionic hyperbolic line.  Both must come out conformally flat
with scalar curvature -48 under the normalization used throughout, and
every other chart must come out self-dual Einstein with negative scalar.
"""

import numpy as np
import pytest

from qkq import curvature, slices

ORIGIN = np.zeros(4)


@pytest.fixture(scope="module")
def rh4_report():
    chart = slices.quotient_chart("GenPedersen", (0.0, 0.0))
    return curvature.curvature_report(chart, ORIGIN, h=1e-3)


class TestRealHyperbolicOracle:
    def test_gram_is_identity_at_origin(self, rh4_report):
        np.testing.assert_allclose(rh4_report.G, np.eye(4), atol=1e-12)

    def test_scalar_is_minus_48(self, rh4_report):
        assert abs(rh4_report.scalar + 48.0) < 1e-3

    def test_conformally_flat_verdict(self, rh4_report):
        assert rh4_report.verdict == "ConformallyFlat"
        riem = np.linalg.norm(rh4_report.riemann)
        assert rh4_report.weyl_sd_norm < 1e-6 * riem
        assert rh4_report.weyl_asd_norm < 1e-6 * riem

    def test_constant_curvature_model_fits(self, rh4_report):
        assert curvature.constant_curvature_residual(rh4_report) < 1e-6


def test_quaternionic_hyperbolic_is_flat():
    chart = slices.quotient_chart("HeightTwo", (0.0,))
    rep = curvature.curvature_report(chart, np.array([-0.5, 0.0, 0.0, 0.0]),
                                     h=1e-3)
    assert rep.verdict == "ConformallyFlat"
    assert abs(rep.scalar + 48.0) < 1e-2
    assert curvature.constant_curvature_residual(rep) < 1e-3


NONFLAT = [
    ("PL_equalWeights", (2, 3, 3), np.array([0.02, -0.01, 0.03, 0.01]), 1e-3),
    ("PL_unequal", (2, 3, 2), np.array([0.01, 0.02, -0.01, 0.02]), 5e-4),
    ("GenPedersen", (1.0, 1.0), np.array([0.03, 0.01, -0.02, 0.02]), 1e-3),
    ("HeightTwo", (1.0,), np.array([0.4, 0.02, 0.01, -0.02]), 1e-3),
    ("Bergman", (1, 1, 1), np.array([0.02, 0.01, 0.03, -0.01]), 1e-3),
]


@pytest.mark.parametrize("family,params,xi,h", NONFLAT,
                         ids=[c[0] for c in NONFLAT])
class TestSelfDualEinstein:
    def test_verdict_and_thresholds(self, family, params, xi, h):
        chart = slices.quotient_chart(family, params)
        rep = curvature.curvature_report(chart, xi, h=h)
        assert rep.verdict == "SDE_Negative"
        assert rep.einstein_residual < 1e-4
        assert rep.scalar < 0
        assert abs(rep.scalar + 48.0) < 0.05
        # one Weyl half dominates by three orders of magnitude
        lo = min(rep.weyl_sd_norm, rep.weyl_asd_norm)
        hi = max(rep.weyl_sd_norm, rep.weyl_asd_norm)
        assert lo < 1e-3 * hi

    def test_dominant_half_has_hermitian_spectrum(self, family, params,
                                                  xi, h):
        chart = slices.quotient_chart(family, params)
        rep = curvature.curvature_report(chart, xi, h=h)
        lam = curvature.weyl_plus_spectrum(rep)
        scale = np.max(np.abs(lam))
        assert scale > 1e-6
        ratios = np.sort(lam / lam[np.argmax(np.abs(lam))])
        np.testing.assert_allclose(ratios, [-0.5, -0.5, 1.0], atol=1e-3)

    def test_weyl_spectrum_trace_free(self, family, params, xi, h):
        chart = slices.quotient_chart(family, params)
        rep = curvature.curvature_report(chart, xi, h=h)
        lam = curvature.weyl_plus_spectrum(rep)
        assert abs(lam.sum()) < 1e-4 * np.max(np.abs(lam))


def test_not_constant_curvature_when_weyl_survives():
    chart = slices.quotient_chart("PL_equalWeights", (2, 3, 3))
    rep = curvature.curvature_report(chart, np.array([0.02, -0.01, 0.03,
                                                      0.01]))
    assert curvature.constant_curvature_residual(rep) > 0.1


def test_einstein_residual_is_second_order_in_h():
    chart = slices.quotient_chart("HeightTwo", (1.0,))
    xi = np.array([0.25, 0.01, 0.01, 0.01])
    r1 = curvature.curvature_report(chart, xi, h=2e-3).einstein_residual
    r2 = curvature.curvature_report(chart, xi, h=1e-3).einstein_residual
    assert 3.0 < r1 / r2 < 5.0


def test_boundary_guard():
    chart = slices.quotient_chart("HeightTwo", (0.0,))
    with pytest.raises(slices.DomainError):
        curvature.curvature_report(chart, np.array([-0.005, 0.0, 0.0, 0.0]),
                                   h=1e-3)


def test_metric_sample_rejects_asymmetry():
    bad = np.eye(4)
    bad[0, 1] = 0.5
    with pytest.raises(ValueError):
        curvature.MetricSample(ORIGIN, bad, 1e-3)


def test_quotient_metric_positive_definite():
    chart = slices.quotient_chart("GenPedersen", (1.0, 1.0))
    sample = curvature.quotient_metric(chart, np.array([0.02, 0.01, -0.01,
                                                        0.03]))
    assert np.linalg.eigvalsh(sample.G).min() > 0


class TestGrid:
    AXES = [(-0.02, 0.02, 2)] * 4

    def test_order_and_alignment(self):
        chart = slices.quotient_chart("GenPedersen", (0.0, 1.0))
        reports, skipped = curvature.curvature_grid(chart, self.AXES)
        assert skipped == []
        assert len(reports) == 16
        # row-major order over the axes
        expect0 = np.array([-0.02, -0.02, -0.02, -0.02])
        np.testing.assert_allclose(reports[0].xi, expect0, atol=0)
        np.testing.assert_allclose(reports[-1].xi, -expect0, atol=0)
        np.testing.assert_allclose(reports[1].xi,
                                   [-0.02, -0.02, -0.02, 0.02], atol=0)

    def test_worker_count_does_not_change_results(self, monkeypatch):
        chart = slices.quotient_chart("GenPedersen", (0.0, 1.0))
        monkeypatch.setenv("QKQ_THREADS", "1")
        serial, _ = curvature.curvature_grid(chart, self.AXES)
        monkeypatch.setenv("QKQ_THREADS", "4")
        threaded, _ = curvature.curvature_grid(chart, self.AXES)
        for a, b in zip(serial, threaded):
            assert a.to_dict() == b.to_dict()

    def test_out_of_domain_points_are_reported(self):
        chart = slices.quotient_chart("HeightTwo", (0.0,))
        axes = [(-0.3, 0.1, 2), (0.0, 0.01, 2), (0.0, 0.01, 2),
                (0.0, 0.01, 2)]
        reports, skipped = curvature.curvature_grid(chart, axes)
        assert len(reports) == 16
        assert 0 < len(skipped) < 16
        for idx, reason in skipped:
            assert reports[idx] is None
            assert "DomainError" in reason


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("QKQ_THREADS", "3")
    assert curvature.worker_count() == 3
    monkeypatch.setenv("QKQ_THREADS", "0")
    with pytest.raises(ValueError):
        curvature.worker_count()
    monkeypatch.setenv("QKQ_THREADS", "two")
    with pytest.raises(ValueError):
        curvature.worker_count()


def test_report_serialization_fields():
    chart = slices.quotient_chart("GenPedersen", (0.0, 0.0))
    rep = curvature.curvature_report(chart, ORIGIN)
    d = rep.to_dict()
    assert set(d) == {"xi", "h", "scalar", "einsteinResidual", "weylSDnorm",
                      "weylASDnorm", "verdict", "orientation", "cond"}
    row = rep.to_row()
    assert len(row) == 8
    np.testing.assert_allclose(row[:4], rep.xi, atol=0)
