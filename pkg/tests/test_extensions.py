import math

import numpy as np
import pytest

from dbkit import (RealEntireFunction, apply_S, apply_S_beta, check_lemma_inner,
                   check_lemma_orthogonality, function_of_S_apply, inner_product,
                   matrix_model, rank_one_extension, relation_pair_S0,
                   resolvent_s0, verify_generating, verify_rank_one)
from dbkit.errors import (BetaSingular, NotInDomain, ResolventPole,
                          SpectrumMissing)
from dbkit.extensions import relation_record_S0

PI = math.pi
ONE = RealEntireFunction.const(1.0)


class TestMatrixModel:
    def test_dim1(self, dim1):
        m = matrix_model(dim1)
        assert np.allclose(m.base_points, [0.0], atol=1e-12)
        assert np.allclose(m.s0_coeffs, [1.0], atol=1e-12)

    def test_cheb2(self, cheb2):
        m = matrix_model(cheb2)
        assert np.allclose(m.base_points, [-0.5, 0.5], atol=1e-12)
        assert np.allclose(m.s0_coeffs, [-1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-12)

    def test_s0_norm(self, cheb2):
        assert abs(matrix_model(cheb2).norm_sq_s0 - 1.0) < 1e-12

    def test_insufficient_spectrum(self, cheb2):
        with pytest.raises(SpectrumMissing) as err:
            matrix_model(cheb2, N=5)
        assert err.value.code == "spectrum-missing"


class TestRankOneExtension:
    def test_half_pi_unchanged(self, cheb2):
        m = matrix_model(cheb2)
        assert np.allclose(rank_one_extension(m, PI / 2), np.diag(m.base_points),
                           atol=1e-15)

    def test_dim1_quarter_pi(self, dim1):
        m = matrix_model(dim1)
        assert np.allclose(rank_one_extension(m, PI / 4), [[-1 / PI]], atol=1e-14)

    def test_cheb2_quarter_pi_entries(self, cheb2):
        m = rank_one_extension(matrix_model(cheb2), PI / 4)
        a = 1 / (2 * PI)
        expected = np.array([[-0.5 - a, a], [a, 0.5 - a]])
        assert np.max(np.abs(m - expected)) < 1e-14

    def test_symmetric(self, cheb5, rng):
        m = matrix_model(cheb5)
        for beta in rng.uniform(0.1, PI - 0.1, 10):
            mat = rank_one_extension(m, float(beta))
            assert np.max(np.abs(mat - mat.T)) == 0.0

    def test_guard_band(self, cheb2):
        m = matrix_model(cheb2)
        for beta in (1e-4, PI - 1e-4):
            with pytest.raises(BetaSingular) as err:
                rank_one_extension(m, beta)
            assert err.value.code == "beta-singular"

    def test_monotone_eigenvalue_flow(self, cheb5):
        # sorted eigenvalues strictly increase with beta (decrease in cot beta)
        m = matrix_model(cheb5)
        betas = np.linspace(0.05, PI - 0.05, 25)
        prev = None
        for beta in betas:
            eig = np.sort(np.linalg.eigvalsh(rank_one_extension(m, float(beta))))
            if prev is not None:
                assert np.all(eig > prev)
            prev = eig


class TestVerifyRankOne:
    def test_cheb2_quarter_pi(self, cheb2):
        rep = verify_rank_one(cheb2, PI / 4)
        assert rep and rep.residual < 1e-12

    def test_dim1_band(self, dim1):
        for beta in (0.01, 1.0, PI / 2, PI - 0.01):
            assert verify_rank_one(dim1, beta)

    def test_half_pi_trivial(self, cheb5):
        rep = verify_rank_one(cheb5, PI / 2)
        assert rep and rep.residual < 1e-12


class TestApplyS:
    def test_one_maps_to_z(self, cheb2):
        zf = apply_S(cheb2, ONE)
        for x in (0.0, 0.7, -2.0):
            assert abs(zf.eval(x) - x) < 1e-12

    def test_z_not_in_domain(self, cheb2):
        with pytest.raises(NotInDomain) as err:
            apply_S(cheb2, RealEntireFunction.poly([0.0, 1.0]))
        assert err.value.code == "not-in-domain"

    def test_dim1_domain_trivial(self, dim1):
        with pytest.raises(NotInDomain):
            apply_S(dim1, ONE)


class TestApplySBeta:
    def test_cheb2_half_pi_closed_form(self, cheb2):
        g, sbg = apply_S_beta(cheb2, PI / 2, ONE, 0.0)
        for x in (0.3, -1.2, 0.5 + 0.25j):
            assert abs(g.eval(x) - (-2 * PI * x)) < 1e-9
            assert abs(sbg.eval(x) - (-PI / 2)) < 1e-9

    def test_vanishing_f_at_w_kills_correction(self, cheb2):
        f = cheb2.s0  # s0(0) = 0
        # f must be in the space but need not be in dom(S_beta) as input
        g, sbg = apply_S_beta(cheb2, PI / 3, f, 0.0)
        for x in (0.4, -0.9):
            assert abs(sbg.eval(x) - x * g.eval(x)) < 1e-10

    def test_removable_singularity(self, cheb2):
        g, _ = apply_S_beta(cheb2, PI / 2, ONE, 0.25)
        near = g.eval(0.25 + 1e-9)
        limit = g.eval(0.25)
        assert abs(near - limit) < 1e-6 * (1 + abs(limit))

    def test_matrix_consistency(self, cheb5, rng):
        # expanding g in the kernel basis and applying the rank-one matrix
        # reproduces the S_beta g samples
        spec = cheb5.spectrum(PI / 2)
        m = matrix_model(cheb5)
        for _ in range(5):
            beta = float(rng.uniform(0.2, PI - 0.2))
            f = RealEntireFunction.poly(rng.standard_normal(cheb5.dim))
            w = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            g, sbg = apply_S_beta(cheb5, beta, f, w)
            gv = np.array([g.eval(x) for x in spec.points])
            coeffs = gv / np.sqrt(spec.diag)
            out = rank_one_extension(m, beta) @ coeffs
            expected = np.array([sbg.eval(x) for x in spec.points]) / np.sqrt(spec.diag)
            assert np.max(np.abs(out - expected)) <= 1e-9 * (1 + np.max(np.abs(expected)))


class TestRelationS0:
    def test_zero_first_component(self, cheb2):
        zero = RealEntireFunction.const(0.0)
        g, second = relation_pair_S0(cheb2, zero, 1.0)
        for x in (0.3, -1.0):
            assert abs(second.eval(x) - cheb2.s0.eval(x)) < 1e-12

    def test_one_with_zero_c(self, cheb2):
        g, second = relation_pair_S0(cheb2, ONE, 0.0)
        for x in (0.3, -1.0):
            assert abs(second.eval(x) - x) < 1e-12

    def test_record_direction(self, cheb2):
        rec = relation_record_S0(cheb2)
        assert rec.multivalued_direction is cheb2.s0

    def test_out_of_domain(self, cheb2):
        with pytest.raises(NotInDomain):
            relation_pair_S0(cheb2, cheb2.s0, 1.0)


class TestResolvent:
    def test_dim1_at_i(self, dim1):
        r = resolvent_s0(dim1, 1j)
        for z in (0.0, 2.3, -1j):
            assert abs(r.eval(z) - 1j) < 1e-12

    def test_identity_via_samples(self, cheb5):
        # (x_k - w) r(x_k) = s0(x_k) exactly on spec(S_pi/2)
        spec = cheb5.spectrum(PI / 2)
        for w in (1j, 0.3 + 0.9j, 5.0):
            r = resolvent_s0(cheb5, w)
            for x in spec.points:
                lhs = (x - w) * r.eval(x)
                assert abs(lhs - cheb5.s0.eval(x)) <= 1e-9

    def test_pole_detected(self, cheb2):
        with pytest.raises(ResolventPole) as err:
            resolvent_s0(cheb2, 0.5)
        assert err.value.code == "resolvent-pole"

    def test_real_w_gives_real_function(self, cheb2):
        r = resolvent_s0(cheb2, 3.0)
        assert r.realness_report([0.1, -0.4, 1 + 1j])


class TestGenerating:
    def test_cheb2_half_pi(self, cheb2):
        assert verify_generating(cheb2, PI / 2, [1j, 2j])

    def test_relation_case_not_generating(self, cheb2):
        rep = verify_generating(cheb2, 0.0)
        assert not rep.passed
        assert rep.detail["min_projection"] < 1e-10

    def test_beta_third_pi(self, cheb5):
        assert verify_generating(cheb5, PI / 3)

    def test_too_few_points(self, cheb5):
        with pytest.raises(ValueError):
            verify_generating(cheb5, PI / 2, [1j])


class TestLemmas:
    def test_orthogonality_cheb2(self, cheb2):
        for beta in (PI / 2, PI / 4):
            rep = check_lemma_orthogonality(cheb2, beta, ONE)
            assert rep and rep.residual <= 1e-8

    def test_orthogonality_zero_function(self, cheb2):
        zero = RealEntireFunction.const(0.0)
        rep = check_lemma_orthogonality(cheb2, 1.1, zero)
        assert rep.residual < 1e-14

    def test_inner_cheb2_closed_form(self, cheb2):
        rep = check_lemma_inner(cheb2, PI / 2, ONE, 0.0)
        assert rep
        assert abs(rep.detail["inner"] - (-PI)) < 1e-10

    def test_inner_vanishing_f(self, cheb2):
        rep = check_lemma_inner(cheb2, PI / 3, cheb2.s0, 0.0)
        assert rep
        assert abs(rep.detail["inner"]) < 1e-9

    def test_randomized_draws(self, cheb5, rng):
        for _ in range(25):
            beta = float(rng.uniform(0.05, PI - 0.05))
            f = RealEntireFunction.poly(rng.standard_normal(cheb5.dim))
            h = RealEntireFunction.poly(rng.standard_normal(cheb5.dim - 1))
            w = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            assert check_lemma_orthogonality(cheb5, beta, h)
            assert check_lemma_inner(cheb5, beta, f, w)


class TestFunctionOfS:
    def test_identity_multiplier(self, cheb2):
        f = RealEntireFunction.poly([0.5, 1.0])
        out = function_of_S_apply(cheb2, ONE, f)
        for x in (0.2, -1.5):
            assert abs(out.eval(x) - f.eval(x)) < 1e-10

    def test_z_multiplier_on_one(self, cheb2):
        z = RealEntireFunction.poly([0.0, 1.0])
        out = function_of_S_apply(cheb2, z, ONE)
        for x in (0.2, -1.5):
            assert abs(out.eval(x) - x) < 1e-10

    def test_product_leaving_space(self, cheb2):
        z = RealEntireFunction.poly([0.0, 1.0])
        with pytest.raises(NotInDomain):
            function_of_S_apply(cheb2, z, z)
