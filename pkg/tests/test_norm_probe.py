import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riesz_lab.group_lattice import GroupSpec, LatticeFunction, random_real_function
from riesz_lab.norm_probe import (
    check_exp_estimate,
    check_log_estimate,
    mixed_norm_ratio,
    power_iterate_lp,
    weak_type_lower_bound,
)
from riesz_lab.spectral_ops import RieszCoefficients
from conftest import cosine_mode, rand_mz


class TestPowerIterate:
    def test_constant_multiplier_exact_after_one_step(self, z4):
        # alpha = c * identity makes the operator c times the mean-zero
        # projection, so the very first ratio equals c.
        c = 0.7
        coeffs = RieszCoefficients.for_group(z4, alpha_x=[c])
        res = power_iterate_lp(coeffs, 3.0, rand_mz(z4, 1), iters=5)
        assert res.bound_sequence[0] == pytest.approx(c, rel=1e-12)
        assert res.satisfied

    def test_t2_signature_p2_hits_one(self):
        # ||R_1^2 - R_2^2||_{2->2} = 1 on T^2; the extremal character
        # starts the iteration at the optimum.
        spec = GroupSpec((), (32, 32))
        coeffs = RieszCoefficients.for_group(spec, alpha_y=[[1.0, 0.0], [0.0, -1.0]])
        res = power_iterate_lp(coeffs, 2.0, cosine_mode(spec, (1, 0)), iters=50)
        assert res.bound == pytest.approx(1.0, abs=1e-6)
        assert res.satisfied

    def test_bounds_nondecreasing(self, z4sq):
        coeffs = RieszCoefficients.for_group(z4sq, alpha_x=[1.0, -1.0])
        res = power_iterate_lp(coeffs, 4.0, rand_mz(z4sq, 7), iters=40)
        seq = np.asarray(res.bound_sequence)
        assert np.all(np.diff(seq) >= -1e-12)

    def test_p4_respects_cap(self, z4sq):
        coeffs = RieszCoefficients.for_group(z4sq, alpha_x=[1.0, -1.0])
        res = power_iterate_lp(coeffs, 4.0, rand_mz(z4sq, 3), iters=60)
        assert res.bound <= 3.0 + 1e-9
        assert res.theorem_cap == pytest.approx(3.0, abs=1e-14)

    def test_duality_agreement(self, z4sq):
        coeffs = RieszCoefficients.for_group(z4sq, alpha_x=[1.0, -1.0])
        p = 3.0
        a = power_iterate_lp(coeffs, p, rand_mz(z4sq, 5), iters=200)
        b = power_iterate_lp(coeffs, p / (p - 1.0), rand_mz(z4sq, 5), iters=200)
        assert abs(a.bound - b.bound) < 2e-3

    def test_rejects_bad_p(self, z4):
        coeffs = RieszCoefficients.for_group(z4, alpha_x=[1.0])
        with pytest.raises(ValueError):
            power_iterate_lp(coeffs, 1.0, rand_mz(z4, 0))

    def test_rejects_constant_init(self, z4):
        coeffs = RieszCoefficients.for_group(z4, alpha_x=[1.0])
        one = LatticeFunction(z4, np.ones(4, dtype=complex), "spatial")
        with pytest.raises(ValueError):
            power_iterate_lp(coeffs, 2.0, one)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 300), st.sampled_from([1.5, 2.0, 3.0]))
    def test_lower_bound_below_cap(self, seed, p):
        spec = GroupSpec((3, 5), ())
        coeffs = RieszCoefficients.for_group(spec, alpha_x=[1.0, -0.5])
        res = power_iterate_lp(coeffs, p, rand_mz(spec, seed), iters=30)
        assert res.bound <= res.theorem_cap * (1.0 + 1e-9)
        assert res.satisfied


class TestWeakType:
    def test_p2_cap_is_matrix_norm(self, z4sq):
        coeffs = RieszCoefficients.for_group(z4sq, alpha_x=[1.0, -1.0])
        res = weak_type_lower_bound(coeffs, 2.0, rand_mz(z4sq, 2))
        assert res.theorem_cap == pytest.approx(coeffs.matrix_norm(), abs=1e-14)
        assert res.satisfied

    def test_one_level_function_exact(self, z4):
        # alpha = identity gives R^2 f = -f on mean-zero f; a two-valued f
        # makes the superlevel sweep exactly computable.
        coeffs = RieszCoefficients.for_group(z4, alpha_x=[1.0])
        f = LatticeFunction(z4, np.array([1.0, 1.0, -1.0, -1.0], dtype=complex), "spatial")
        res = weak_type_lower_bound(coeffs, 2.0, f)
        # |R^2 f| = 1 everywhere: ratio = mu^{-1/2} * mu / ||f||_2 = sqrt(mu)/2,
        # maximized at the full group, mu = 4.
        assert res.bound == pytest.approx(1.0, rel=1e-12)

    def test_zero_operator(self, z4):
        coeffs = RieszCoefficients.for_group(z4)  # all-zero alpha
        res = weak_type_lower_bound(coeffs, 2.0, rand_mz(z4, 4))
        assert res.bound == 0.0
        assert res.satisfied

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 300), st.sampled_from([1.25, 1.5, 2.0, 3.0]))
    def test_bound_below_cap(self, seed, p):
        spec = GroupSpec((4, 4), ())
        coeffs = RieszCoefficients.for_group(spec, alpha_x=[1.0, -1.0])
        res = weak_type_lower_bound(coeffs, p, rand_mz(spec, seed))
        assert res.bound <= res.theorem_cap * (1.0 + 1e-9)


class TestLogExp:
    def test_log_estimate_holds(self, z4sq):
        coeffs = RieszCoefficients.for_group(z4sq, alpha_x=[1.0, -1.0])
        f = rand_mz(z4sq, 6)
        E = np.abs(f.values) > 0.3
        rep = check_log_estimate(coeffs, f, E, 2.0)
        assert rep.holds

    def test_exp_estimate_holds(self, z4sq):
        coeffs = RieszCoefficients.for_group(z4sq, alpha_x=[1.0, -1.0])
        f = rand_mz(z4sq, 8)
        f = LatticeFunction(z4sq, f.values / max(np.abs(f.values)), "spatial")
        rep = check_exp_estimate(coeffs, f, 2.0)
        assert rep.holds

    def test_rejects_k_at_most_one(self, z4):
        coeffs = RieszCoefficients.for_group(z4, alpha_x=[1.0])
        f = rand_mz(z4, 1)
        with pytest.raises(ValueError):
            check_log_estimate(coeffs, f, np.ones(4, dtype=bool), 1.0)

    def test_exp_rejects_unbounded(self, z4):
        coeffs = RieszCoefficients.for_group(z4, alpha_x=[1.0])
        f = LatticeFunction(z4, 5.0 * np.ones(4, dtype=complex), "spatial")
        with pytest.raises(ValueError):
            check_exp_estimate(coeffs, f, 2.0)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 400), st.sampled_from([1.1, 2.0, 5.0]))
    def test_log_holds_random(self, seed, K):
        spec = GroupSpec((3, 5), ())
        coeffs = RieszCoefficients.for_group(spec, alpha_x=[1.0, -1.0])
        f = rand_mz(spec, seed)
        E = np.real(f.values) > 0
        assert check_log_estimate(coeffs, f, E, K).holds


class TestMixedNorm:
    def test_reported_ratio_finite(self, z4sq):
        coeffs = RieszCoefficients.for_group(z4sq, alpha_x=[1.0, -1.0])
        f = rand_mz(z4sq, 10)
        E = np.abs(f.values) > 0.1
        r = mixed_norm_ratio(coeffs, f, E, 1.0, 2.0)
        assert np.isfinite(r) and r >= 0

    def test_rejects_bad_exponents(self, z4):
        coeffs = RieszCoefficients.for_group(z4, alpha_x=[1.0])
        with pytest.raises(ValueError):
            mixed_norm_ratio(coeffs, rand_mz(z4, 0), np.ones(4, dtype=bool), 2.0, 2.0)
