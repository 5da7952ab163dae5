import json

import numpy as np
import pytest

from jacobi_needlets import (JacobiParams, ParameterError, build_frame, default_cutoff,
                             lp_ratio_scan, needlet_localization_scan,
                             node_weight_equivalence_scan, smoothed_kernel, theorem29_scan,
                             theorem31_scan, weight_envelope)
from jacobi_needlets.verify import (boundary_kernel, frame_suite, lp_closed_form,
                                    lp_inner_integrals, node_weight_ratios, theta_grid)

A = default_cutoff()
LEG = JacobiParams(0, 0)
SWEEP = [32, 64, 128, 256]


class TestInteriorScan:
    def test_bounded_sigma2(self):
        rep = theorem31_scan(LEG, A, SWEEP, 2)
        assert rep.verdict == "bounded" and rep.bounded
        assert rep.probe == {"sigma": 2, "k": 5.0}
        assert all(np.isfinite(rep.constants)) and min(rep.constants) > 0

    def test_pointwise_values_below_constant(self):
        n = 32
        rep = theorem31_scan(LEG, A, [n], 2)
        for t, p in [(0.0, np.pi), (0.4, 0.4), (1.0, 2.5)]:
            x, y = np.cos(t), np.cos(p)
            val = (abs(smoothed_kernel(LEG, A, n, x, y))
                   * np.sqrt(weight_envelope(LEG, n, x) * weight_envelope(LEG, n, y))
                   * (1 + n * abs(t - p)) ** 2 / n)
            assert np.isfinite(val)
            assert val <= rep.constants[0] * (1 + 1e-12)

    def test_larger_sigma_not_smaller(self):
        small = theorem31_scan(LEG, A, [64], 2)
        big = theorem31_scan(LEG, A, [64], 4)
        assert big.constants[0] >= small.constants[0]
        assert big.argmax[0]["n_dist"] <= 32

    def test_preconditions(self):
        with pytest.raises(ParameterError):
            theorem31_scan(JacobiParams(-0.5, 0), A, [32], 2)
        with pytest.raises(ParameterError):
            theorem31_scan(LEG, A, [32], 0)

    def test_threads_match_sequential(self):
        p = JacobiParams(0.5, 0.5)
        a = theorem31_scan(p, A, [32, 64], 2)
        b = theorem31_scan(p, A, [32, 64], 2, threads=2)
        assert a.constants == b.constants and a.argmax == b.argmax

    def test_report_serializes(self):
        rep = theorem31_scan(LEG, A, [32], 2)
        doc = json.loads(json.dumps(rep.to_dict()))
        assert doc["grid"]["points_per_n"] == 4
        assert doc["n_values"] == [32]


class TestBoundaryScan:
    def test_boundary_term(self):
        n = 64
        rep = theorem29_scan(LEG, A, [n], 4)
        at_one = abs(boundary_kernel(LEG, A, n, np.array([0.0]))[0]) / n ** 2
        assert at_one <= rep.constants[0]

    def test_legendre_k4(self):
        assert theorem29_scan(LEG, A, [64, 128, 256], 4).bounded

    def test_alpha_one_k5(self):
        assert theorem29_scan(JacobiParams(1, 0), A, [64, 128], 5).bounded

    def test_reflection(self):
        p = JacobiParams(0.2, 1.5)
        th = np.linspace(0, np.pi, 17)
        at_minus_one = smoothed_kernel(p, A, 20, -np.cos(th), -1.0)
        np.testing.assert_allclose(boundary_kernel(p.swapped(), A, 20, th), at_minus_one,
                                   rtol=1e-11, atol=1e-11)
        rep = theorem29_scan(p, A, [32, 64], 4)
        assert rep.probe["reflected"]
        assert rep.constants == theorem29_scan(p.swapped(), A, [32, 64], 4).constants

    def test_precondition(self):
        with pytest.raises(ParameterError):
            theorem29_scan(JacobiParams(0, -0.6), A, [32], 4)


class TestLp:
    @pytest.mark.parametrize("a,b", [(0, 0), (2, 0), (-0.4, 0.3)])
    def test_closed_form(self, a, b):
        p = JacobiParams(a, b)
        xs = np.cos(theta_grid(48))
        np.testing.assert_allclose(lp_inner_integrals(p, A, 48, 2, xs),
                                   lp_closed_form(p, A, 48, xs), rtol=1e-10)

    def test_p2_bounded(self):
        rep = lp_ratio_scan(LEG, A, SWEEP, 2)
        assert rep.bounded and rep.extra["closed_form_rel_error"] <= 1e-10

    def test_p1_bounded(self):
        rep = lp_ratio_scan(JacobiParams(0.5, 0.5), A, [32, 64, 128], 1)
        assert rep.bounded and rep.extra["approximate"]

    def test_bad_p(self):
        with pytest.raises(ParameterError):
            lp_inner_integrals(LEG, A, 32, 3, np.zeros(2))

    def test_user_grid(self):
        rep = lp_ratio_scan(LEG, A, [32], 2, x_grid=[0.0, 0.5])
        assert rep.grid == {"kind": "user", "points": 2}


class TestQuadratureEquivalence:
    def test_chebyshev(self):
        gaps, ratios = node_weight_ratios(JacobiParams(-0.5, -0.5), 16)
        np.testing.assert_allclose(gaps[1:-1], np.pi, atol=1e-12)
        assert gaps[0] == pytest.approx(np.pi / 2) and gaps[-1] == pytest.approx(np.pi / 2)

    def test_stable(self):
        rep = node_weight_equivalence_scan(LEG, [64, 256, 1024])
        assert rep.verdict == "stable"
        assert rep.extra["gap_spread_drift"] < 1.5

    def test_sentinels_inside_bounds(self):
        gaps, _ = node_weight_ratios(JacobiParams(2, 0), 256)
        inner = gaps[1:-1]
        lo, hi = inner.min() / 4, inner.max() * 4
        assert lo <= gaps[0] <= hi and lo <= gaps[-1] <= hi


class TestNeedlets:
    @pytest.mark.parametrize("k", [2, 4])
    def test_bounded(self, k):
        rep = needlet_localization_scan(JacobiParams(0.5, 0.5), A, range(4, 8), k)
        assert rep.bounded
        assert rep.n_values == [16, 32, 64, 128]

    def test_precondition(self):
        with pytest.raises(ParameterError):
            needlet_localization_scan(JacobiParams(-0.7, 0), A, [4], 2)


def test_frame_suite_passes(params):
    rep = frame_suite(build_frame(params, J=6), trials=5)
    assert all(r["ok"] for r in rep.values()), rep
