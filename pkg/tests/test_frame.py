import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobi_needlets import (DegreeOverflowError, band_weights, Expansion, JacobiParams, ParameterError,
                             QuadratureOrderError, analyze, build_frame, calderon_project,
                             default_cutoff, expand, gauss_jacobi, levels_for_degree,
                             needlet_eval, needlet_matrix, needlet_norm_sq,
                             orthonormal_table, synthesize, tail_energy,
                             vanishing_moments_check)
from jacobi_needlets.kernels import level_coefficients

from oracles import legendre_hat, orthonormal

A = default_cutoff()
LEG = JacobiParams(0, 0)


def random_expansion(params, degree, rng):
    return Expansion(params, rng.uniform(-1, 1, degree + 1))


class TestBuild:
    def test_level_zero_only(self):
        f = build_frame(LEG, J=0)
        assert len(f.levels) == 1 and f.n_atoms == 1
        for x in (-1.0, 0.2, 1.0):
            assert needlet_eval(f, 0, 1, x) == 1.0

    def test_counts(self):
        f = build_frame(JacobiParams(0.5, 2), J=3)
        assert [r.n for r in f.levels] == [1, 2, 4, 8]
        assert f.n_atoms == 15 == 2 ** 4 - 1

    def test_rules_match_standalone(self):
        f = build_frame(LEG, J=5)
        ref = gauss_jacobi(LEG, 32)
        np.testing.assert_array_equal(f.levels[5].nodes, ref.nodes)
        np.testing.assert_array_equal(f.levels[5].weights, ref.weights)

    @pytest.mark.parametrize("J", [-1, 15])
    def test_level_cap(self, J):
        with pytest.raises(ParameterError):
            build_frame(LEG, J=J)

    def test_exact_degree(self):
        assert [build_frame(LEG, J=J).max_degree for J in range(5)] == [0, 1, 2, 4, 8]
        assert [levels_for_degree(d) for d in (0, 1, 2, 3, 4, 5, 31, 32, 33)] == \
            [0, 1, 2, 3, 3, 4, 6, 6, 7]

    def test_stored_rules_checked(self):
        rules = [gauss_jacobi(LEG, 2 ** j) for j in range(3)]
        with pytest.raises(ParameterError):
            build_frame(LEG, J=3, rules=rules)


class TestAtoms:
    def test_bad_indices(self):
        f = build_frame(LEG, J=3)
        with pytest.raises(IndexError):
            needlet_eval(f, 4, 1, 0.0)
        with pytest.raises(IndexError):
            needlet_eval(f, 2, 0, 0.0)
        with pytest.raises(IndexError):
            needlet_eval(f, 2, 5, 0.0)

    @pytest.mark.parametrize("j", [1, 3, 6])
    def test_value_at_own_node(self, params, j):
        f = build_frame(params, J=j)
        r = f.levels[j]
        coef = level_coefficients(A, j)
        for nu in (1, r.n // 2 + 1, r.n):
            xi = r.nodes[nu - 1]
            ref = math.sqrt(r.weights[nu - 1]) * math.fsum(
                coef[m] * orthonormal(params.alpha, params.beta, m, xi) ** 2
                for m in range(coef.shape[0]))
            got = needlet_eval(f, j, nu, xi)
            assert got > 0
            assert got == pytest.approx(ref, rel=1e-11)

    def test_matrix_matches_pointwise(self):
        f = build_frame(JacobiParams(2, 0), J=4)
        xs = np.linspace(-1, 1, 9)
        m = needlet_matrix(f, 4, xs)
        for nu in (1, 7, 16):
            np.testing.assert_allclose(m[:, nu - 1], needlet_eval(f, 4, nu, xs),
                                       rtol=1e-12, atol=1e-12)

    def test_norms_bounded(self, params):
        f = build_frame(params, J=8)
        norms = []
        for j in range(0, 9):
            for nu in sorted({1, f.levels[j].n // 2 + 1, f.levels[j].n}):
                q = needlet_norm_sq(f, j, nu)
                c = needlet_norm_sq(f, j, nu, closed_form=True)
                assert q == pytest.approx(c, rel=1e-10)
                norms.append(q)
        assert max(norms) <= 1.0 + 1e-12


class TestExpand:
    def test_constant(self, params):
        d = expand(params, lambda x: np.ones_like(x), 0, n_max=6)
        np.testing.assert_allclose(d.coeffs, [1, 0, 0, 0, 0, 0, 0], atol=1e-14)

    def test_basis_polynomial(self):
        d = expand(LEG, lambda x: legendre_hat(3, x), 3)
        np.testing.assert_allclose(d.coeffs, [0, 0, 0, 1], atol=1e-12)

    def test_square(self):
        d = expand(LEG, lambda x: x ** 2, 2, n_max=5)
        np.testing.assert_allclose(d.coeffs, [1 / 3, 0, 2 / (3 * math.sqrt(5)), 0, 0, 0],
                                   atol=1e-15)

    def test_order_check(self):
        with pytest.raises(QuadratureOrderError):
            expand(LEG, lambda x: x ** 9, 9, 5)
        expand(LEG, lambda x: x ** 9, 9, 10)
        expand(LEG, lambda x: np.abs(x), 9, 3, polynomial=False)

    def test_tail_energy(self):
        assert tail_energy(LEG, lambda x: x ** 3, 3, 8) <= 1e-28
        assert tail_energy(LEG, np.abs, 8, 64) > 1e-6


class TestAnalyze:
    def test_constant(self, params):
        f = build_frame(params, J=5)
        c = analyze(f, Expansion(params, [1.0]))
        assert c.levels[0][0] == 1.0
        assert all(np.all(lv == 0) for lv in c.levels[1:])

    def test_first_basis_function_only_level_one(self, params):
        f = build_frame(params, J=5)
        c = analyze(f, Expansion(params, [0.0, 1.0]))
        nonzero = [j for j, lv in enumerate(c.levels) if np.any(lv != 0)]
        assert nonzero == [1]

    def test_parseval_degree_31(self, rng):
        d = random_expansion(LEG, 31, rng)
        f = build_frame(LEG, J=levels_for_degree(31))
        c = analyze(f, d)
        assert abs(c.norm_sq() - d.norm_sq()) <= 1e-11 * d.norm_sq()

    def test_overflow(self, rng):
        f = build_frame(LEG, J=5)
        with pytest.raises(DegreeOverflowError):
            analyze(f, random_expansion(LEG, 31, rng))
        analyze(f, random_expansion(LEG, 16, rng))

    def test_definition(self, params, rng):
        f = build_frame(params, J=4)
        d = random_expansion(params, 8, rng)
        c = analyze(f, d)
        j, r = 3, f.levels[3]
        tab = orthonormal_table(params, 8, r.nodes)
        coef = band_weights(A, j, 8)  # a(8/4) = 0 closes the band
        ref = np.sqrt(r.weights) * (tab @ (coef * d.coeffs))
        np.testing.assert_allclose(c.levels[j], ref, rtol=1e-13, atol=1e-14)
        # and as the inner product with the atom, by exact quadrature
        fine = gauss_jacobi(params, 16)
        psi = needlet_matrix(f, j, fine.nodes)
        direct = (fine.weights * d(fine.nodes)) @ psi
        np.testing.assert_allclose(c.levels[j], direct, atol=1e-12)

    def test_deterministic(self, rng):
        f = build_frame(JacobiParams(0.5, 0.5), J=7)
        d = random_expansion(f.params, 64, rng)
        a1, a2 = analyze(f, d), analyze(f, d)
        for x, y in zip(a1.levels, a2.levels):
            np.testing.assert_array_equal(x, y)


class TestSynthesize:
    def test_constant_round_trip(self):
        f = build_frame(LEG, J=4)
        back = synthesize(f, analyze(f, Expansion(LEG, [1.0])))
        np.testing.assert_allclose(back.coeffs, [1.0], atol=1e-15)

    def test_degree_100(self, rng):
        p = JacobiParams(0.5, 0.5)
        f = build_frame(p, J=levels_for_degree(100))
        d = random_expansion(p, 100, rng)
        back = synthesize(f, analyze(f, d))
        assert np.max(np.abs(back.coeffs - d.coeffs)) <= 1e-10

    def test_zero(self):
        f = build_frame(LEG, J=3)
        c = analyze(f, Expansion(LEG, np.zeros(5)))
        assert np.all(synthesize(f, c).coeffs == 0)

    def test_default_degree(self):
        f = build_frame(LEG, J=3)
        c = analyze(f, Expansion(LEG, [0, 0, 1.0]))
        assert synthesize(f, c).degree == 2
        bare = type(c)(c.params, c.levels)
        assert synthesize(f, bare).degree == 7

    def test_level_mismatch(self):
        f = build_frame(LEG, J=3)
        c = analyze(build_frame(LEG, J=4), Expansion(LEG, [1.0]))
        with pytest.raises(ParameterError):
            synthesize(f, c)

    @given(st.sampled_from([(0, 0), (0.5, 0.5), (2, 0), (-0.4, 0.3), (-0.9, 3)]),
           st.integers(0, 64), st.integers(0, 2 ** 32 - 1))
    def test_tight_frame_property(self, ab, degree, seed):
        p = JacobiParams(*ab)
        f = build_frame(p, J=levels_for_degree(64))
        d = random_expansion(p, degree, np.random.default_rng(seed))
        c = analyze(f, d)
        assert abs(c.norm_sq() - d.norm_sq()) <= 1e-12 * max(d.norm_sq(), 1e-300) + 1e-300
        np.testing.assert_allclose(synthesize(f, c).coeffs, d.coeffs, atol=1e-12)

    def test_basis_identity(self, params):
        J = 6
        f = build_frame(params, J=J + 1)
        n = 2 ** J
        for nu in range(n):
            e = np.zeros(n)
            e[nu] = 1.0
            back = synthesize(f, analyze(f, Expansion(params, e)))
            assert np.max(np.abs(back.coeffs - e)) <= 1e-10


class TestCalderon:
    def test_sum_is_identity(self, rng):
        d = random_expansion(LEG, 2 ** 7 - 1, rng)
        total = sum(calderon_project(LEG, A, j, d).coeffs for j in range(9))
        np.testing.assert_allclose(total, d.coeffs, atol=1e-12)

    def test_band_support(self):
        for j in range(1, 8):
            for nu in range(0, 2 ** (j + 1)):
                e = np.zeros(2 ** (j + 1) + 1)
                e[nu] = 1.0
                band = calderon_project(LEG, A, j, Expansion(LEG, e)).coeffs
                if not 2 ** (j - 2) < nu < 2 ** j:
                    assert np.all(band == 0)

    def test_index_one(self):
        e = Expansion(LEG, [0.0, 1.0])
        bands = [calderon_project(LEG, A, j, e).coeffs[1] for j in range(6)]
        assert bands == [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]

    def test_level_zero(self):
        d = Expansion(LEG, [2.0, 3.0, 4.0])
        np.testing.assert_array_equal(calderon_project(LEG, A, 0, d).coeffs, [2, 0, 0])


class TestVanishingMoments:
    def test_closed_form_exact(self, params):
        f = build_frame(params, J=6)
        for j in range(2, 7):
            assert vanishing_moments_check(f, j) == 0.0

    def test_level_two_constant(self):
        f = build_frame(LEG, J=2)
        assert vanishing_moments_check(f, 2) == 0.0

    def test_quadrature(self, params):
        f = build_frame(params, J=6)
        for j in range(2, 7):
            assert vanishing_moments_check(f, j, method="quadrature") <= 1e-11

    def test_level_below_two(self):
        with pytest.raises(ParameterError):
            vanishing_moments_check(build_frame(LEG, J=3), 1)
