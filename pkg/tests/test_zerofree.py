import math

import numpy as np
import pytest

from dbkit import (RealEntireFunction, SampledFunction, U_beta_apply,
                   canonical_product, cartwright_check, check_gauge_identities,
                   gauge_check, norm_sq, partial_fraction_check, residues,
                   summability_stat, theorem43_consistency, uniqueness_check,
                   zero_free_membership)
from dbkit.errors import (DBKError, IndeterminateBound, InvalidGrid,
                          ModelCorruption, NonSimpleZero, RelationCase)

PI = math.pi


class TestCanonicalProduct:
    def test_cheb2_half_pi(self, cheb2):
        h = canonical_product(cheb2, PI / 2)
        for z in (0.0, 0.3, 2 - 1j):
            assert abs(h.eval(z) - (1 - 4 * z * z)) < 1e-12

    def test_dim1_zero_branch(self, dim1):
        h = canonical_product(dim1, PI / 2)
        assert h.eval(0.7) == 0.7

    def test_cheb2_quarter_pi_root_product(self, cheb2):
        h = canonical_product(cheb2, PI / 4)
        # h = (1 - z/r1)(1 - z/r2) with r1 r2 = -1/4: coefficient of z^2 is 1/(r1 r2)
        spec = cheb2.spectrum(PI / 4)
        r1r2 = float(np.prod(spec.points))
        assert abs(r1r2 - (-0.25)) < 1e-9
        z = 2.0
        expected = (1 - z / spec.points[0]) * (1 - z / spec.points[1])
        assert abs(h.eval(z) - expected) < 1e-12

    def test_empty_spectrum_gives_one(self, dim1):
        h0 = canonical_product(dim1, 0.0)
        assert h0.eval(123.0) == 1.0

    def test_truncation_guard(self, cheb2):
        with pytest.raises(ValueError):
            canonical_product(cheb2, PI / 2, truncation=3)


class TestResidues:
    def test_cheb2(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        j = canonical_product(cheb2, PI / 2)
        c = residues(cheb2, spec, j)
        assert np.allclose(c, [0.25, -0.25], atol=1e-12)

    def test_dim1(self, dim1):
        spec = dim1.spectrum(PI / 2)
        c = residues(dim1, spec, canonical_product(dim1, PI / 2))
        assert np.allclose(c, [1.0], atol=1e-12)

    def test_scaling(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        j = canonical_product(cheb2, PI / 2)
        c = residues(cheb2, spec, j)
        c2 = residues(cheb2, spec, j.scale(2.0))
        assert np.allclose(c2, c / 2.0, atol=1e-12)

    def test_double_zero_rejected(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        j = RealEntireFunction.poly([1.0, 0.0, -8.0, 0.0, 16.0])  # (1-4z^2)^2
        with pytest.raises(NonSimpleZero) as err:
            residues(cheb2, spec, j)
        assert err.value.code == "non-simple-zero"


class TestPartialFractions:
    def test_cheb2_exact(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        j = canonical_product(cheb2, PI / 2)
        c = residues(cheb2, spec, j)
        rep = partial_fraction_check(spec, c, j, [0.0, 1j, 2.0])
        assert rep and rep.residual < 1e-12
        # at z = 0 the sum equals 1/j(0) = 1
        assert abs(sum(ck / (0.0 - xk) for ck, xk in zip(c, spec.points)) - 1.0) < 1e-12

    def test_dim1_at_i(self, dim1):
        spec = dim1.spectrum(PI / 2)
        j = canonical_product(dim1, PI / 2)
        c = residues(dim1, spec, j)
        rep = partial_fraction_check(spec, c, j, [1j])
        assert rep

    def test_wrong_residues_fail(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        j = canonical_product(cheb2, PI / 2)
        c = residues(cheb2, spec, j) * 2.0
        rep = partial_fraction_check(spec, c, j, [0.0, 1j, 2.0])
        assert not rep
        assert rep.residual > 0.5  # deviation about |1/j|

    def test_grid_too_close(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        j = canonical_product(cheb2, PI / 2)
        c = residues(cheb2, spec, j)
        with pytest.raises(InvalidGrid):
            partial_fraction_check(spec, c, j, [0.501])


class TestSummability:
    def test_cheb2_half_pi(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        c = residues(cheb2, spec, canonical_product(cheb2, PI / 2))
        stat, tail = summability_stat(cheb2, spec, c)
        assert abs(stat - PI / 4) < 1e-10
        assert tail.certified and tail.estimate == 0.0

    def test_dim1_half_pi(self, dim1):
        spec = dim1.spectrum(PI / 2)
        c = residues(dim1, spec, canonical_product(dim1, PI / 2))
        stat, _ = summability_stat(dim1, spec, c)
        assert abs(stat - PI) < 1e-10

    def test_zero_residues(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        stat, _ = summability_stat(cheb2, spec, np.zeros(2))
        assert stat == 0.0

    def test_relation_case_refused(self, cheb2):
        spec = cheb2.spectrum(0.0)
        with pytest.raises(RelationCase):
            summability_stat(cheb2, spec, np.ones(len(spec)))


class TestMembership:
    def test_cheb2_half_pi(self, cheb2):
        cand = zero_free_membership(cheb2, PI / 2)
        assert cand.verdict == "in-space"
        assert abs(cand.stat - PI / 4) < 1e-10
        for z in (0.0, 0.7, -2 + 1j):
            assert abs(cand.g.eval(z) - (-PI / 2)) < 1e-9
        assert abs(cand.norm_sq - PI * PI / 4) < 1e-8
        assert cand.checks["norm_identity_residual"] <= 1e-8

    def test_dim1_half_pi(self, dim1):
        cand = zero_free_membership(dim1, PI / 2)
        assert cand.verdict == "in-space"
        for z in (0.4, -1.0):
            assert abs(cand.g.eval(z) - PI) < 1e-9
        assert abs(cand.norm_sq - PI * PI) < 1e-8

    def test_cheb2_quarter_pi(self, cheb2):
        cand = zero_free_membership(cheb2, PI / 4)
        assert cand.verdict == "in-space"
        target = -math.sqrt(2) * PI / 4
        for z in (0.0, 1.7):
            assert abs(cand.g.eval(z) - target) < 1e-9

    def test_norm_identity_beta_sweep(self, cheb5):
        for beta in np.linspace(0.15, PI - 0.15, 9):
            cand = zero_free_membership(cheb5, float(beta))
            assert cand.verdict == "in-space"
            got = norm_sq(cheb5, cand.g)
            assert abs(got - cand.norm_sq) <= 1e-8 * (1 + abs(cand.norm_sq))

    def test_zero_free_on_grid(self, cheb5):
        cand = zero_free_membership(cheb5, 1.3)
        lo, hi = cheb5.numerics.window
        grid = np.linspace(lo, hi, 200)
        vals = np.abs(cand.g.eval_array(grid.astype(complex)))
        assert np.min(vals) > 0.0

    def test_beta_zero_refused(self, cheb2):
        with pytest.raises(RelationCase):
            zero_free_membership(cheb2, 0.0)


class TestWoracekProduct:
    def test_user_j_matches_product_up_to_constant(self, cheb5):
        # a user-supplied j with the correct zeros and arbitrary normalization
        # yields an in-space verdict and j/h_beta constant on a grid
        beta = 1.1
        spec = cheb5.spectrum(beta)
        h = canonical_product(cheb5, beta)
        j = h.scale(-3.7)
        c = residues(cheb5, spec, j)
        stat, _ = summability_stat(cheb5, spec, c)
        assert math.isfinite(stat)
        grid = np.linspace(-1.5, 1.5, 40)
        ratio = j.eval_array(grid.astype(complex)) / h.eval_array(grid.astype(complex))
        assert np.max(np.abs(ratio - ratio[0])) < 1e-10


class TestCartwright:
    def test_cheb2_quarter_pi_pointwise(self, cheb2):
        spec = cheb2.spectrum(PI / 4)
        c = residues(cheb2, spec, canonical_product(cheb2, PI / 4))
        rep = cartwright_check(cheb2, spec, c)
        # independent evaluation of the bound at each point
        for i, x in enumerate(spec.points):
            lhs = abs(c[i]) * (1 + abs(x))
            rhs = abs(cheb2.s0.eval(x) / cheb2.s_half.eval(x))
            assert rep.detail["pointwise"][i] == (lhs >= rhs * (1 - 1e-12))

    def test_large_c_trivially_true(self, cheb2):
        spec = cheb2.spectrum(PI / 4)
        c = residues(cheb2, spec, canonical_product(cheb2, PI / 4)) * 1e6
        assert cartwright_check(cheb2, spec, c)

    def test_zero_c_false(self, cheb2):
        spec = cheb2.spectrum(PI / 4)
        rep = cartwright_check(cheb2, spec, np.zeros(2))
        assert not rep
        assert rep.detail["pointwise"] == [False, False]

    def test_indeterminate_on_half_pi_spectrum(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        with pytest.raises(IndeterminateBound) as err:
            cartwright_check(cheb2, spec, np.ones(2))
        assert err.value.code == "indeterminate-bound"


class TestUBeta:
    def test_unit_samples_give_s0(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        res = U_beta_apply(cheb2, PI / 2, SampledFunction(cheb2, spec, [1.0, 1.0]))
        for x in (0.3, -1.1):
            assert abs(res.g.eval(x) - cheb2.s0.eval(x)) < 1e-12
        assert abs(res.norm_sq - float(np.sum(spec.jumps))) < 1e-12

    def test_inverse_j0_samples(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        samples = [1.0 / x for x in spec.points]  # 1/j0 with j0(z) = z
        res = U_beta_apply(cheb2, PI / 2, SampledFunction(cheb2, spec, samples))
        for z in (0.3, 1j):
            assert abs(res.g.eval(z) - 2.0) < 1e-12
        assert abs(res.norm_sq - 4.0) < 1e-12

    def test_zero_samples(self, cheb2):
        spec = cheb2.spectrum(PI / 2)
        res = U_beta_apply(cheb2, PI / 2, SampledFunction(cheb2, spec, [0.0, 0.0]))
        assert res.norm_sq == 0.0
        assert abs(res.g.eval(0.9)) == 0.0

    def test_isometry_random_samples(self, cheb5, rng):
        spec = cheb5.spectrum(1.0)
        for _ in range(10):
            vals = rng.standard_normal(len(spec)) + 1j * rng.standard_normal(len(spec))
            res = U_beta_apply(cheb5, 1.0, SampledFunction(cheb5, spec, vals))
            got = norm_sq(cheb5, res.g)
            assert abs(got - res.norm_sq) <= 1e-10 * (1 + abs(res.norm_sq))


class TestTheorem43:
    def test_cheb2(self, cheb2):
        j0 = RealEntireFunction.poly([0.0, 1.0], name="z")
        rep = theorem43_consistency(cheb2, [PI / 3, PI / 2, 2 * PI / 3], j0)
        assert rep
        # the common function is s0/j0 = 2
        assert rep.detail["cross_beta_deviation"] < 1e-10

    def test_dim1_empty_product(self, dim1):
        j0 = RealEntireFunction.const(1.0)
        rep = theorem43_consistency(dim1, [PI / 4, PI / 2], j0)
        assert rep

    def test_perturbed_j0_fails(self, cheb2):
        bad = RealEntireFunction.poly([0.0, 1.0, 0.1], name="z(1+0.1z)")
        rep = theorem43_consistency(cheb2, [PI / 3, PI / 2, 2 * PI / 3], bad)
        assert not rep

    def test_j0_vanishing_on_spectrum(self, cheb2):
        # j0 with a zero exactly at a spec(S_pi/2) point is model corruption
        bad = RealEntireFunction.poly([-0.5, 1.0], name="z-1/2")
        with pytest.raises(ModelCorruption):
            theorem43_consistency(cheb2, [PI / 2, PI / 3], bad)


class TestUniqueness:
    def test_cheb2_pair(self, cheb2):
        rep = uniqueness_check(cheb2, PI / 2, PI / 4)
        assert rep
        assert abs(rep.detail["ratio"] - math.sqrt(2)) < 1e-9

    def test_same_beta_ratio_one(self, cheb2):
        rep = uniqueness_check(cheb2, PI / 2, PI / 2)
        assert rep
        assert abs(rep.detail["ratio"] - 1.0) < 1e-12

    def test_dim1(self, dim1):
        rep = uniqueness_check(dim1, PI / 2, PI / 3)
        assert rep


class TestGauge:
    def test_zero_free_passes(self, cheb2):
        cand = zero_free_membership(cheb2, PI / 2)
        rep = gauge_check(cheb2, cand.g, [0.3 + 0.7j, -1 + 2j, 0.0, 5.0])
        assert rep

    def test_s0_fails_at_own_zero(self, cheb2):
        rep = gauge_check(cheb2, cheb2.s0, [1.0, 0.0])
        assert not rep
        assert any(abs(w) < 1e-12 for w in rep.detail["failures"])

    def test_random_complex_grid(self, cheb2, rng):
        cand = zero_free_membership(cheb2, PI / 2)
        grid = [complex(x, y) for x, y in zip(rng.uniform(-2, 2, 20), rng.uniform(-2, 2, 20))]
        assert gauge_check(cheb2, cand.g, grid)

    def test_identities(self, cheb2, dim1, cheb5):
        for space in (cheb2, dim1, cheb5):
            rep = check_gauge_identities(space)
            assert rep and rep.residual <= 1e-9
