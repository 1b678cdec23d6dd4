"""Acceptance gate: one test per criterion, tolerances pinned in the asserts.

A one-line PASS/FAIL summary per criterion is printed at the end of the run
(see the terminal-summary hook in conftest.py)."""

import math

import numpy as np
import pytest

from riesz_lab.constants import gamma, weak_type_constant
from riesz_lab.fd_transfer import (
    CosineBump,
    CosProduct,
    GaussianBump,
    FDGrid,
    consistency_order,
    ratio_convergence_study,
    sample,
    scale_invariance_check,
    weak_type_set_transfer,
)
from riesz_lab.group_lattice import (
    GroupSpec,
    LatticeFunction,
    lp_norm,
    mean_zero_project,
    random_real_function,
    sup_norm,
)
from riesz_lab.martingale_mc import (
    WalkConfig,
    check_quadratic_covariation,
    check_subordination,
    estimate_representation,
    evolve_martingales,
    simulate_walk,
)
from riesz_lab.norm_probe import (
    check_exp_estimate,
    check_log_estimate,
    power_iterate_lp,
    weak_type_lower_bound,
)
from riesz_lab.spectral_ops import (
    RieszCoefficients,
    apply_riesz2,
    eigenvalue_grid,
    multiplier_grid,
    weak_form_residual,
)
from riesz_lab.zigzag_laminate import (
    TransformNode,
    certify_weak_type_lower,
    chain_tree,
    critical_lambda,
    from_transform_pair,
    search_gap_tree,
    to_fg_atoms,
    verify_biconvex_monotone,
)
from conftest import cosine_mode, rand_mz

CRITERIA = {
    1: "multiplier identity sum R_i^2 = -(I - mean) on four groups, residual < 1e-12",
    2: "weak-formulation identity < 1e-10 on 100 random (f, g, alpha) triples",
    3: "L^p ratios below ||A||(p*-1)(1+1e-6); power method reaches 0.999 at p=2 on T^2",
    4: "weak-type bounds below the ceiling; branch agreement and Gamma oracle",
    5: "log/exp estimate slack >= -1e-10 on 200 random (f, E, K) instances",
    6: "MC representation within max(3se, 1e-3) per bin; subordination 100%",
    7: "quadratic covariation MC within 3se of the closed form, 5 pairs",
    8: "zigzag round-trip, monotonicity on 100 trees, certified bound in (0, ceiling]",
    9: "FD slope in [1.9, 2.1], exact scale invariance, gap halving, 2% set transfer",
    10: "sharp constants are ceilings, not attained equalities, at desk scale",
}

GROUPS_4 = [
    GroupSpec((4, 4), ()),
    GroupSpec((3, 5), ()),
    GroupSpec((), (32, 32)),
    GroupSpec((4,), (16,)),
]


def identity_alpha(spec):
    return RieszCoefficients.for_group(spec, alpha_x=[1.0] * spec.m,
                                       alpha_y=np.eye(spec.n))


def random_alpha(spec, rng):
    ax = rng.uniform(-2.0, 2.0, spec.m)
    ay = rng.uniform(-2.0, 2.0, (spec.n, spec.n))
    ay = 0.5 * (ay + ay.T)
    return RieszCoefficients.for_group(spec, ax, ay)


def test_criterion_01_multiplier_identity():
    worst = 0.0
    for spec in GROUPS_4:
        grid = multiplier_grid(spec, identity_alpha(spec))
        lam = eigenvalue_grid(spec)
        worst = max(worst, float(np.max(np.abs(grid[lam > 0] + 1.0))))
        worst = max(worst, float(np.max(np.abs(grid[lam == 0]))))
    assert worst < 1e-12


def test_criterion_02_weak_formulation():
    rng = np.random.default_rng(0)
    for spec in (GroupSpec((3, 5), ()), GroupSpec((4,), (16,))):
        for i in range(50):
            coeffs = random_alpha(spec, rng)
            f = rand_mz(spec, 1000 + i)
            g = rand_mz(spec, 2000 + i)
            assert weak_form_residual(coeffs, f, g) < 1e-10


def test_criterion_03_lp_ceiling_and_power_method():
    rng = np.random.default_rng(1)
    spec = GroupSpec((4, 4), ())
    for p in (1.25, 1.5, 2.0, 3.0, 4.0):
        cap_factor = (max(p, p / (p - 1.0)) - 1.0) * (1.0 + 1e-6)
        for i in range(10):
            coeffs = random_alpha(spec, rng)
            f = rand_mz(spec, 3000 + i)
            ratio = lp_norm(apply_riesz2(coeffs, f), p) / lp_norm(f, p)
            assert ratio <= coeffs.matrix_norm() * cap_factor
        # power-method witnesses obey the same ceiling
        coeffs = random_alpha(spec, rng)
        res = power_iterate_lp(coeffs, p, rand_mz(spec, int(10 * p)), iters=30)
        assert res.bound <= coeffs.matrix_norm() * cap_factor
        w = res.witness
        assert lp_norm(apply_riesz2(coeffs, w), p) / lp_norm(w, p) <= \
            coeffs.matrix_norm() * cap_factor
    # sharp direction at p = 2: ||R_1^2 - R_2^2||_{2->2} = 1 on T^2
    t2 = GroupSpec((), (64, 64))
    sig = RieszCoefficients.for_group(t2, alpha_y=[[1.0, 0.0], [0.0, -1.0]])
    res = power_iterate_lp(sig, 2.0, rand_mz(t2, 42), iters=300)
    assert res.bound >= 0.999
    assert res.bound <= 1.0 + 1e-9


def test_criterion_04_weak_type_ceiling_and_oracles():
    rng = np.random.default_rng(2)
    spec = GroupSpec((4, 4), ())
    for p in (1.25, 1.5, 2.0, 3.0, 4.0):
        for i in range(10):
            coeffs = random_alpha(spec, rng)
            res = weak_type_lower_bound(coeffs, p, rand_mz(spec, 4000 + i))
            assert res.bound <= weak_type_constant(p) * coeffs.matrix_norm() * (1.0 + 1e-9)
    # branch agreement at p = 2
    low = (0.5 * gamma(3.0)) ** (1.0 - 1.0 / 2.0)
    high = (2.0 ** (2.0 - 1.0) / 2.0) ** (1.0 / 2.0)
    assert abs(low - high) < 1e-12
    # Gamma validated against factorials
    for n in range(2, 11):
        assert abs(gamma(n) - math.factorial(n - 1)) <= 1e-13 * math.factorial(n - 1)


def test_criterion_05_log_exp_slack():
    rng = np.random.default_rng(3)
    spec = GroupSpec((4, 4), ())
    count = 0
    for K in (1.1, 2.0, 5.0):
        for i in range(67):
            coeffs = random_alpha(spec, rng)
            f = rand_mz(spec, 5000 + 100 * int(K * 10) + i)
            E = rng.random(spec.size) < rng.uniform(0.2, 0.9)
            rep = check_log_estimate(coeffs, f, E, K)
            assert rep.slack >= -1e-10
            fb = LatticeFunction(spec, f.values / sup_norm(f), "spatial")
            rep = check_exp_estimate(coeffs, fb, K)
            assert rep.slack >= -1e-10
            count += 1
    assert count >= 200


@pytest.mark.slow
def test_criterion_06_mc_representation():
    spec = GroupSpec((4, 4), ())
    pairs = [
        (rand_mz(spec, 60), RieszCoefficients.for_group(spec, alpha_x=[1.0, -1.0])),
        (rand_mz(spec, 61), RieszCoefficients.for_group(spec, alpha_x=[1.0, 1.0])),
        (rand_mz(spec, 62), RieszCoefficients.for_group(spec, alpha_x=[0.5, -0.25])),
    ]
    for seed, (f, coeffs) in enumerate(pairs):
        cfg = WalkConfig(spec, horizon=4.0, dt=4.0, seed=seed, paths=1_000_000)
        est = estimate_representation(cfg, f, coeffs)
        oracle = apply_riesz2(coeffs, f)
        assert not est.empty_bins.any()
        dev = np.abs(est.estimate.values.real - oracle.values.real)
        tol = np.maximum(3.0 * est.std_error, 1e-3)
        assert np.all(dev <= tol)
        # pathwise subordination on a per-path subsample
        sub = WalkConfig(spec, horizon=4.0, dt=4.0, seed=seed, paths=200)
        for path in simulate_walk(sub):
            pair = evolve_martingales(sub, f, coeffs, path)
            assert check_subordination(pair, coeffs) == 1.0


def test_criterion_07_quadratic_covariation():
    spec = GroupSpec((4,), ())
    pairs = [(70, 71), (72, 73), (74, 75), (76, 76), (77, 78)]
    for sa, sb in pairs:
        cfg = WalkConfig(spec, horizon=1.0, dt=1.0, seed=sa, paths=100_000)
        rep = check_quadratic_covariation(cfg, rand_mz(spec, sa), rand_mz(spec, sb))
        assert rep.within_3se
        assert rep.paths == 100_000


def test_criterion_08_zigzag_certificate():
    # round trip: transform pair -> zigzag tree -> (F, G) atoms
    inc = TransformNode([
        (0.25, 3.0, TransformNode([(0.5, 1.0, TransformNode()),
                                   (0.5, -1.0, TransformNode())])),
        (0.75, -1.0, TransformNode()),
    ])
    tree = from_transform_pair(inc, [1, -1])
    atoms = sorted(to_fg_atoms(tree))
    assert atoms == [(0.125, 2.0, 4.0), (0.125, 4.0, 2.0), (0.75, -1.0, -1.0)]
    # monotonicity of a biconvex zeta on 100 random chain trees
    rng = np.random.default_rng(8)
    for _ in range(100):
        hist = [(rng.integers(1, 9) / 4.0, rng.integers(1, 9) / 4.0)
                for _ in range(rng.integers(1, 6))]
        t = chain_tree(hist)
        assert verify_biconvex_monotone(t, lambda x, y: x * x + y * y)
    # certificate at p = 1.5: positive, below the proven ceiling
    witness = search_gap_tree(1.5, depth=8, beam=24)
    bound = certify_weak_type_lower(1.5, witness, 1e-9)
    ceiling = weak_type_constant(1.5)
    assert 0.0 < bound <= ceiling
    print(f"criterion 8 ratio to ceiling: {bound / ceiling:.4f} "
          f"(bound {bound:.7f}, ceiling {ceiling:.7f})")


def test_criterion_09_fd_harness():
    # consistency: second-order stencil slope on the smooth family
    for func, dim in ((GaussianBump(0.3), 2), (CosProduct(2.0), 1)):
        res = consistency_order(func, dim, 1.5, [0.1, 0.05, 0.025])
        assert 1.9 <= res["slope"] <= 2.1
    # exact zero-homogeneity scale invariance
    grid = FDGrid(0.05, 2, 1.5)
    f = sample(grid, GaussianBump(0.3))
    assert scale_invariance_check(f, [1.0, -1.0], 2.0) < 1e-12
    # ratio gaps halve (+-25%) per h-halving against the refined reference
    for func, dim in ((CosineBump(0.6), 1), (CosineBump(0.6), 2)):
        study = ratio_convergence_study(func, dim, 1.0, [1.0] + [0.0] * (dim - 1),
                                        2.0, [0.1, 0.05, 0.025, 0.0125])
        gaps = [r["gap"] for r in sorted(study["table"], key=lambda r: -r["h"])]
        for a, b in zip(gaps, gaps[1:]):
            assert 0.375 <= b / a <= 0.625
    # superlevel-set measures stabilize within 2% at the finest step
    for dim in (1, 2):
        res = weak_type_set_transfer(CosineBump(0.6), dim, 1.5, 0.5,
                                     [0.1, 0.05, 0.025, 0.0125])
        finest = min(res["table"], key=lambda r: r["h"])
        ref = res["reference"]["measure"]
        assert abs(finest["measure"] - ref) / ref <= 0.02


def test_criterion_10_ceilings_not_attained():
    # The sharp constants p* - 1 (p != 2) and the weak-type constants are
    # suprema over all groups and functions; no finite lattice witness attains
    # them, so the suite asserts ceilings and convergence trends, never
    # equality.  Desk-scale probes stay strictly below.
    spec = GroupSpec((4, 4), ())
    coeffs = RieszCoefficients.for_group(spec, alpha_x=[1.0, -1.0])
    for p in (1.25, 4.0):
        cap = max(p, p / (p - 1.0)) - 1.0
        res = power_iterate_lp(coeffs, p, rand_mz(spec, 90), iters=100)
        assert res.bound < cap  # strict at desk scale
    res = weak_type_lower_bound(coeffs, 1.5, rand_mz(spec, 91))
    assert res.bound < weak_type_constant(1.5)
    tree = search_gap_tree(1.5, depth=8, beam=24)
    assert certify_weak_type_lower(1.5, tree, 1e-9) < weak_type_constant(1.5)
