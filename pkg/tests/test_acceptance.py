"""The ten headline checks, one test per criterion.

Each test prints a single PASS line with the measured numbers once its
assertions hold, so `pytest -v -s` reads as a checklist.  Tolerances are
frozen here and nowhere else; the unit-level modules probe the same code
paths at looser or tighter scales but this module is the gate.
"""

import itertools
import math
import warnings

import numpy as np
import pytest

from qkq import curvature, hnum, hyperfun, moments, orbits, quaternion as qt
from qkq import slices
from qkq.orbits import GeneratorForm as GF

PHI = hnum.phi_matrix(1, 2)

# chart family, weights or params, grid center, stencil step, flatness.
# Centers sit well inside each chart domain; the two off-origin entries
# have one-sided domains (xi0 <= -0.6 and xi0 >= 0 respectively).
SDE_CONFIGS = [
    ("PL_equalWeights", (2, 3, 3), (0, 0, 0, 0), 1e-3, "curved"),
    ("PL_equalWeights", (1, 3, 3), (0, 0, 0, 0), 1e-3, "curved"),
    ("PL_unequal", (2, 3, 2), (0, 0, 0, 0), 5e-4, "curved"),
    ("GenPedersen", (0.0, 1.0), (0, 0, 0, 0), 1e-3, "curved"),
    ("GenPedersen", (1.0, 1.0), (0, 0, 0, 0), 1e-3, "curved"),
    ("GenPedersen", (2.0, -1.0), (0, 0, 0, 0), 1e-3, "curved"),
    ("HeightOne", (-1.0, 2.0), (0, 0, 0, 0), 1e-3, "curved"),
    ("HeightOne", (0.0, 1.0), (-0.8, 0, 0, 0), 1e-3, "flat"),
    ("HeightTwo", (1.0,), (0.4, 0, 0, 0), 1e-3, "curved"),
    ("Bergman", (1, 1, 1), (0, 0, 0, 0), 1e-3, "curved"),
]

# the two model spaces of constant curvature
FLAT_CONFIGS = [
    ("GenPedersen", (0.0, 0.0), (0, 0, 0, 0), 1e-3),
    ("HeightTwo", (0.0,), (-0.4, 0, 0, 0), 1e-3),
]

HALF_WIDTH = 0.03

FORMS = [
    GF("T0Diag", None, (1.0, 2.0, 3.0)),
    GF("T0Diag", None, (0.5, 1.5, 2.5)),
    GF("T0Split", 0.7, (1.5, 0.3)),
    GF("T0Split", 1.2, (0.4, 2.0)),
    GF("T1", 1.0, (0.5, 2.0)),
    GF("T1", -1.0, (1.5, 0.7)),
    GF("T2", 1.0, (0.8,)),
]


def _grid_reports(family, params, center, h):
    chart = slices.quotient_chart(family, params)
    axes = [(c - HALF_WIDTH, c + HALF_WIDTH, 3) for c in center]
    reports, skipped = curvature.curvature_grid(chart, axes, h=h)
    assert not skipped, f"{family}{params}: grid left the chart domain"
    assert len(reports) == 81
    return reports


@pytest.fixture(scope="module")
def sde_reports():
    return {(family, params): _grid_reports(family, params, center, h)
            for family, params, center, h, _ in SDE_CONFIGS}


@pytest.fixture(scope="module")
def flat_reports():
    return {(family, params): _grid_reports(family, params, center, h)
            for family, params, center, h in FLAT_CONFIGS}


def _announce(num, name, detail):
    print(f"criterion {num:02d} {name}: PASS ({detail})")


def test_criterion_01_einstein_negative_scalar(sde_reports):
    worst_ein = 0.0
    worst_rel = 0.0
    for (family, params), reports in sde_reports.items():
        ein = max(r.einstein_residual for r in reports)
        scalars = np.array([r.scalar for r in reports])
        mean = float(np.mean(scalars))
        rel = float(np.max(np.abs(scalars - mean)) / abs(mean))
        assert ein < 1e-4, f"{family}{params}: einstein residual {ein:.3e}"
        assert mean < 0.0, f"{family}{params}: scalar {mean:+.3f} not negative"
        assert rel < 1e-3, f"{family}{params}: scalar varies by {rel:.3e}"
        worst_ein = max(worst_ein, ein)
        worst_rel = max(worst_rel, rel)
    _announce(1, "einstein residual and negative constant scalar",
              f"10 charts x 81 points, max residual {worst_ein:.2e}, "
              f"max scalar spread {worst_rel:.2e}")


def test_criterion_02_weyl_half_vanishes(sde_reports, flat_reports):
    worst_ratio = 0.0
    for (family, params), reports in sde_reports.items():
        kind = next(c[4] for c in SDE_CONFIGS
                    if c[0] == family and c[1] == params)
        if kind == "flat":
            continue
        for r in reports:
            ratio = r.weyl_asd_norm / max(r.weyl_sd_norm, 1e-30)
            assert ratio < 1e-3, (
                f"{family}{params} at {r.xi}: half ratio {ratio:.3e}")
            worst_ratio = max(worst_ratio, ratio)
    worst_flat = 0.0
    for (family, params), reports in flat_reports.items():
        for r in reports:
            scale = float(np.linalg.norm(r.riemann))
            bound = 1e-4 * scale
            assert max(r.weyl_sd_norm, r.weyl_asd_norm) < bound, (
                f"{family}{params}: Weyl half {r.weyl_sd_norm:.3e} "
                f"vs Riemann scale {scale:.3e}")
            worst_flat = max(worst_flat, r.weyl_sd_norm / scale)
    _announce(2, "one Weyl half vanishes",
              f"max half ratio {worst_ratio:.2e} on curved charts, "
              f"max flat-chart half/Riemann {worst_flat:.2e}")


def test_criterion_03_constant_curvature_oracle(sde_reports, flat_reports):
    residuals = {}
    for key, reports in flat_reports.items():
        ccr = curvature.constant_curvature_residual(reports)
        assert ccr < 1e-3, f"{key}: flat model residual {ccr:.3e}"
        residuals[key] = ccr
    ccr_pl = curvature.constant_curvature_residual(
        sde_reports[("PL_equalWeights", (2, 3, 3))])
    assert ccr_pl >= 0.1, f"curved chart looks constant: {ccr_pl:.3e}"
    flat_max = max(residuals.values())
    _announce(3, "constant-curvature residual separates the model spaces",
              f"flat <= {flat_max:.2e}, curved example {ccr_pl:.3f}")


def test_criterion_04_weyl_plus_spectral_type(sde_reports):
    worst = 0.0
    for (family, params), reports in sde_reports.items():
        kind = next(c[4] for c in SDE_CONFIGS
                    if c[0] == family and c[1] == params)
        if kind == "flat":
            # both halves vanish identically here; no spectral type to test
            continue
        for r in reports:
            lam = curvature.weyl_plus_spectrum(r)
            ratios = np.sort(lam / lam[np.argmax(np.abs(lam))])
            dev = float(np.max(np.abs(ratios - [-0.5, -0.5, 1.0])))
            assert dev < 1e-3, (
                f"{family}{params} at {r.xi}: spectrum {lam} (dev {dev:.2e})")
            worst = max(worst, dev)
    _announce(4, "dominant Weyl half has spectral type (2,-1,-1)",
              f"9 curved charts, max ratio deviation {worst:.2e}")


def test_criterion_05_existence_and_freeness_tables():
    n_nonempty = n_empty = n_free = 0
    for p in itertools.product(range(1, 9), repeat=3):
        p0, p1, p2 = p
        expect_nonempty = max(p1, p2) > p0
        assert moments.zeroset_nonempty(p) == expect_nonempty, p
        if not expect_nonempty:
            with pytest.raises(moments.EmptyZeroSetError):
                moments.zeroset_sample("Diagonal", p, n_starts=4, keep=1)
            n_empty += 1
            continue
        pts = moments.zeroset_sample("Diagonal", p, seed=3, n_starts=12,
                                     max_iter=40, keep=1)
        assert len(pts) >= 1, f"no zero-set point found at {p}"
        hi, lo = max(p1, p2), min(p1, p2)
        all_odd = p0 % 2 and hi % 2 and lo % 2
        expect_free = (hi == p0 + 1 and lo <= p0 + 1) or (
            bool(all_odd) and hi == p0 + 2 and lo <= p0 + 2)
        assert moments.action_free((p0, hi, lo)) == expect_free, p
        n_free += expect_free
        n_nonempty += 1
    assert n_nonempty + n_empty == 512
    empty_pairs = [(0.0, 0.0), (1.0, 1.0), (2.0, 1.0), (1.0, -1.0),
                   (3.0, 2.0)]
    for pq in empty_pairs:
        with pytest.raises(moments.SearchFailedError):
            moments.zeroset_sample("HeightOne", pq, force_search=True,
                                   n_starts=60, max_iter=25)
    _announce(5, "existence and freeness tables",
              f"512 weight triples ({n_nonempty} nonempty, {n_free} free), "
              f"{len(empty_pairs)} forced searches failed as predicted")


def test_criterion_06_bergman_rigidity():
    smooth = []
    n_checked = 0
    for p in itertools.product(range(1, 6), repeat=3):
        if math.gcd(math.gcd(p[0], p[1]), p[2]) != 1:
            continue
        verdict = moments.bergman_smooth(p)
        n_checked += 1
        if verdict.smooth:
            smooth.append(p)
            continue
        p0, p1, p2 = p
        all_odd = p0 % 2 and p1 % 2 and p2 % 2
        first_order = (p0 + p1) // (2 if all_odd else 1)
        if first_order > 1:
            assert verdict.witness_circle == "w1", p
            assert verdict.witness_order == first_order, p
        else:
            assert verdict.witness_circle == "z2", p
            assert verdict.witness_order == (p2 + p0) // 2, p
    assert smooth == [(1, 1, 1)]
    _announce(6, "only the unit weights give a smooth mirror quotient",
              f"{n_checked} primitive triples, all witness orders matched")


def _admissible_points(poles, rng, count):
    pts = []
    while len(pts) < count:
        pt = hyperfun.HalfPlanePoint(float(rng.uniform(0.05, 3.0)),
                                     float(rng.uniform(-2.0, 2.0)))
        with warnings.catch_warnings():
            warnings.simplefilter("error", hyperfun.BranchProximityWarning)
            try:
                hyperfun.eval_F(poles, pt)
            except hyperfun.BranchProximityWarning:
                continue
        pts.append(pt)
    return pts


def test_criterion_07_eigenvalue_three_quarters():
    pole_sets = {
        "monopole": hyperfun.PoleSet(real_poles=((1.0, 0.0, 1),)),
        "signed multipole":
            hyperfun.eigenfunction_of_quotient("Diagonal", (1, 2, 2)),
        "complex pair": hyperfun.PoleSet(complex_pair=(0.7, 1.0, 0.4)),
        "dipole": hyperfun.PoleSet(dipole=1.0),
        "tripole": hyperfun.PoleSet(tripole=1.5),
    }
    rng = np.random.default_rng(23)
    worst = 0.0
    for name, poles in pole_sets.items():
        for pt in _admissible_points(poles, rng, 50):
            res = hyperfun.laplace_check(poles, pt)
            assert res < 1e-8, f"{name} at ({pt.rho}, {pt.eta}): {res:.3e}"
            worst = max(worst, res)
    _announce(7, "eigenfunction equation holds",
              f"5 pole sets x 50 points, max residual {worst:.2e}")


def test_criterion_08_pullback_ratio_constant():
    devs = {}
    for family, params in [("Diagonal", (1, 2, 2)),
                           ("HeightOne", (-1.0, 2.0)),
                           ("HeightTwo", (1.0,))]:
        samples = moments.zeroset_sample(family, params, seed=5,
                                         n_starts=300, keep=50)
        assert len(samples) == 50
        result = hyperfun.pullback_check(family, params, samples)
        assert result.n_used == 50
        assert result.max_rel_dev < 1e-6, (
            f"{family}{params}: deviation {result.max_rel_dev:.3e}")
        devs[family] = result.max_rel_dev
    _announce(8, "eigenfunction pullback is the ambient form",
              "max relative deviation "
              + ", ".join(f"{k} {v:.1e}" for k, v in devs.items()))


def _form_defect(E):
    lhs = qt.qmatmul(qt.qmatmul(qt.qdagger(E), PHI), E)
    return float(np.max(np.abs(lhs - PHI)))


def test_criterion_09_exponential_degeneration():
    gamma = 1e-3
    exponentials = []
    worst_gap = 0.0
    for p0, p1, p2 in [(1.0, 2.0, 0.5), (2.0, 1.0, 1.0), (0.5, 3.0, -0.7)]:
        a = (p0 - p1) / 2.0
        lam = math.sqrt(a * a + gamma * gamma)
        for t in np.linspace(0.0, 1.0, 11):
            A_plus = orbits.exp_mixing_pair(p0, p1, p2, lam, t,
                                            branch="auto")
            A_zero = orbits.exp_mixing_pair(p0, p1, p2, lam, t,
                                            branch="degenerate")
            gap = float(np.max(np.abs(A_plus - A_zero)))
            assert gap < 1e-5, f"p=({p0},{p1},{p2}) t={t}: gap {gap:.3e}"
            worst_gap = max(worst_gap, gap)
            # the shear formula away from lam = |a| is an O(gamma^2)
            # surrogate, not a group element, so only the boost branch
            # and the on-locus shear go into the preservation sweep
            exponentials.append(A_plus)
            exponentials.append(orbits.exp_mixing_pair(
                p0, p1, p2, abs(a), t, branch="degenerate"))
    for form in FORMS:
        for t in (0.7, 1.3):
            exponentials.append(orbits.exp_normal_form(form, t))
    worst_defect = max(_form_defect(E) for E in exponentials)
    assert worst_defect < 1e-10
    _announce(9, "mixing-pair exponentials degenerate continuously",
              f"max branch gap {worst_gap:.2e}, "
              f"max form defect {worst_defect:.2e} over "
              f"{len(exponentials)} exponentials")


def test_criterion_10_oracle_equivalence():
    worst_exp = 0.0
    for form in FORMS:
        Y = orbits.make_normal_form(form)
        for t in (0.25, 1.0, 1.75):
            closed = orbits.exp_normal_form(form, t)
            series = hnum.mat_exp(Y, t)
            worst_exp = max(worst_exp,
                            float(np.max(np.abs(closed - series))))
    p0, p1, p2 = 1.0, 2.0, 0.5
    for lam in (0.3, 0.9):
        Y = np.zeros((3, 3, 4))
        Y[0, 0, 1], Y[1, 1, 1], Y[2, 2, 1] = p0, p1, p2
        Y[0, 1, 0] = Y[1, 0, 0] = lam
        for t in (0.5, 1.0):
            closed = orbits.exp_mixing_pair(p0, p1, p2, lam, t)
            worst_exp = max(worst_exp,
                            float(np.max(np.abs(closed - hnum.mat_exp(Y, t)))))
    assert worst_exp < 1e-9

    rng = np.random.default_rng(31)
    worst_quad = 0.0
    for family in ("Diagonal", "HeightOne", "HeightTwo"):
        basis = "standard" if family == "Diagonal" else "split"
        for _ in range(200):
            u = hnum.HVector(1, 2, rng.normal(size=(3, 4)), basis)
            y = hyperfun.torus_moment_coords(family, u)
            got = hyperfun.quadratic_in_moments(family, y)
            want = float(u.form()[0])
            err = abs(got - want) / max(1.0, abs(want))
            assert err < 1e-10, f"{family}: quadratic off by {err:.3e}"
            worst_quad = max(worst_quad, err)
    _announce(10, "closed forms agree with series and moment quadratics",
              f"max exponential gap {worst_exp:.2e}, "
              f"max quadratic deviation {worst_quad:.2e}")
