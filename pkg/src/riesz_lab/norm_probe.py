"""Lower-bound probes for operator norms and direct checks of the
L^p, weak-type, logarithmic/exponential and mixed-norm inequalities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import weak_type_constant, young_phi, young_psi
from .group_lattice import (
    LatticeFunction,
    inner_product,
    lp_norm,
    mean_zero_project,
    sup_norm,
)
from .spectral_ops import RieszCoefficients, apply_riesz2


@dataclass
class ProbeResult:
    bound_sequence: list[float]
    witness: LatticeFunction
    theorem_cap: float
    satisfied: bool
    converged: bool = False
    iterations: int = 0

    @property
    def bound(self) -> float:
        return self.bound_sequence[-1] if self.bound_sequence else 0.0


def _dual_map(y: np.ndarray, r: float) -> np.ndarray:
    """|y|^{r-1} times the phase of y (the duality map of the L^r norm)."""
    a = np.abs(y)
    out = np.zeros_like(y)
    nz = a > 0
    out[nz] = a[nz] ** (r - 1.0) * (y[nz] / a[nz])
    return out


def power_iterate_lp(
    coeffs: RieszCoefficients,
    p: float,
    init: LatticeFunction,
    iters: int = 100,
    tol: float = 1e-10,
) -> ProbeResult:
    """Boyd-style nonlinear power method for a lower bound on ||R_alpha^2||_{p->p}.

    Each recorded ratio ||T x_k||_p / ||x_k||_p is a certified lower bound;
    the sequence is nondecreasing. Stops on |r_{k+1}-r_k| < tol or the cap.
    """
    if not (1.0 < p < np.inf):
        raise ValueError(f"p must satisfy 1 < p < inf, got {p}")
    x = mean_zero_project(init)
    nx = lp_norm(x, p)
    if nx == 0:
        raise ValueError("init must be nonzero after mean removal")
    x = LatticeFunction(x.group, x.values / nx, "spatial")
    pp = p / (p - 1.0)
    adjoint = coeffs.conjugate()
    cap = coeffs.matrix_norm() * (max(p, pp) - 1.0)
    bounds: list[float] = []
    converged = False
    k = 0
    for k in range(1, iters + 1):
        y = apply_riesz2(coeffs, x)
        r = lp_norm(y, p)
        bounds.append(r)
        if len(bounds) >= 2 and abs(bounds[-1] - bounds[-2]) < tol:
            converged = True
            break
        if r == 0:
            break
        z = LatticeFunction(x.group, _dual_map(y.values, p), "spatial")
        w = apply_riesz2(adjoint, z)
        xv = _dual_map(w.values, pp)
        x = LatticeFunction(x.group, xv, "spatial")
        nx = lp_norm(x, p)
        if nx == 0:
            break
        x.values = x.values / nx
    last = bounds[-1] if bounds else 0.0
    return ProbeResult(
        bound_sequence=bounds,
        witness=x,
        theorem_cap=cap,
        satisfied=last <= cap * (1.0 + 1e-9),
        converged=converged,
        iterations=k,
    )


def weak_type_lower_bound(
    coeffs: RieszCoefficients, p: float, f: LatticeFunction
) -> ProbeResult:
    """Best superlevel-set value of mu(E)^{1/p-1} int_E |R_alpha^2 f| dmu / ||f||_p.

    Superlevel sets of |R_alpha^2 f| are optimal among sets of equal measure,
    and the ratio is invariant under the scaling f -> lambda f, so the sweep
    over the distinct values of |R_alpha^2 f| realizes the scale-optimized bound.
    """
    if not (1.0 < p < np.inf):
        raise ValueError(f"p must satisfy 1 < p < inf, got {p}")
    fnorm = lp_norm(f, p)
    if fnorm == 0:
        raise ValueError("f must be nonzero")
    u = apply_riesz2(coeffs, f)
    w = f.group.point_weight
    a = np.sort(np.abs(u.values))[::-1]
    cap = weak_type_constant(p) * coeffs.matrix_norm()
    if a[0] == 0:
        return ProbeResult([0.0], f, cap, True)
    mass = np.cumsum(a) * w
    measure = np.arange(1, a.size + 1) * w
    ratios = measure ** (1.0 / p - 1.0) * mass / fnorm
    best = float(np.maximum.accumulate(ratios).max())
    seq = list(np.maximum.accumulate(ratios)[:: max(1, a.size // 64)])
    if seq[-1] != best:
        seq.append(best)
    return ProbeResult(seq, f, cap, best <= cap * (1.0 + 1e-9))


@dataclass
class SlackReport:
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -1e-10


def _measure_of(mask: np.ndarray, f: LatticeFunction) -> float:
    return float(np.count_nonzero(mask)) * f.group.point_weight


def check_log_estimate(
    coeffs: RieszCoefficients, f: LatticeFunction, E: np.ndarray, K: float
) -> SlackReport:
    """int_E |R_alpha^2 f| <= ||A||(K int Psi(|f|) + mu(E)/(2(K-1)))."""
    if K <= 1:
        raise ValueError(f"K must be > 1, got {K}")
    E = np.asarray(E, dtype=bool).reshape(-1)
    u = apply_riesz2(coeffs, f)
    w = f.group.point_weight
    lhs = float(np.sum(np.abs(u.values)[E]) * w)
    psi_int = float(sum(young_psi(t) for t in np.abs(f.values)) * w)
    rhs = coeffs.matrix_norm() * (K * psi_int + _measure_of(E, f) / (2.0 * (K - 1.0)))
    return SlackReport(lhs, rhs)


def check_exp_estimate(
    coeffs: RieszCoefficients, f: LatticeFunction, K: float
) -> SlackReport:
    """int Phi(|R_alpha^2 f| / (K ||A||)) <= ||f||_1 / (2K(K-1)) for ||f||_inf <= 1."""
    if K <= 1:
        raise ValueError(f"K must be > 1, got {K}")
    if sup_norm(f) > 1.0 + 1e-12:
        raise ValueError("f must be bounded by 1 in modulus")
    w = f.group.point_weight
    norm_a = coeffs.matrix_norm()
    if norm_a == 0:
        lhs = 0.0
    else:
        u = apply_riesz2(coeffs, f)
        lhs = float(sum(young_phi(t) for t in np.abs(u.values) / (K * norm_a)) * w)
    rhs = lp_norm(f, 1) / (2.0 * K * (K - 1.0))
    return SlackReport(lhs, rhs)


def mixed_norm_ratio(
    coeffs: RieszCoefficients,
    f: LatticeFunction,
    E: np.ndarray,
    p: float,
    q: float,
) -> float:
    """||R_alpha^2 f||_{L^p(E)} / (||A|| ||f||_q mu(E)^{1/p-1/q}); reported, not gated."""
    if not (1.0 <= p < q < np.inf):
        raise ValueError(f"need 1 <= p < q < inf, got p={p}, q={q}")
    E = np.asarray(E, dtype=bool).reshape(-1)
    mu = _measure_of(E, f)
    if mu <= 0:
        raise ValueError("E must have positive measure")
    fq = lp_norm(f, q)
    if fq == 0:
        raise ValueError("f must be nonzero")
    norm_a = coeffs.matrix_norm()
    if norm_a == 0:
        return 0.0
    u = apply_riesz2(coeffs, f)
    w = f.group.point_weight
    up = float((np.sum(np.abs(u.values)[E] ** p) * w) ** (1.0 / p))
    return up / (norm_a * fq * mu ** (1.0 / p - 1.0 / q))
