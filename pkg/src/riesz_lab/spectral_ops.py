"""Fourier-side operators on the product group: Laplacian, heat semigroup,
second-order Riesz multipliers and the weak-formulation identity.

Frequency layout follows numpy's fftn axis order: axis a of the frequency
grid indexes k_a for discrete factors (k mod N) and the torus frequency
q in (-M/2, M/2] via q = k for k <= M/2 and q = k - M otherwise.
A frequency-domain LatticeFunction stores expansion coefficients c(idx)
with f = sum_idx c(idx) e_idx, so Parseval reads
||f||_2^2 = prod(N_i) * sum |c|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .group_lattice import GroupSpec, LatticeFunction, inner_product, mean_zero_project


@dataclass(frozen=True)
class FrequencyIndex:
    """Discrete frequencies k_i mod N_i and torus frequencies q_j in (-M_j/2, M_j/2]."""

    k: tuple[int, ...] = ()
    q: tuple[int, ...] = ()

    def validate(self, spec: GroupSpec):
        if len(self.k) != spec.m or len(self.q) != spec.n:
            raise ValueError("frequency index does not match group")
        for ki, n in zip(self.k, spec.discrete_cycles):
            if not 0 <= ki < n:
                raise ValueError(f"discrete frequency {ki} out of range for N={n}")
        for qj, m in zip(self.q, spec.torus_resolutions):
            if not -m // 2 < qj <= m // 2:
                raise ValueError(f"torus frequency {qj} out of range for M={m}")

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.k) and all(v == 0 for v in self.q)


def torus_frequencies(m: int) -> np.ndarray:
    """Frequencies along one torus axis in fft order, Nyquist taken positive."""
    q = np.arange(m)
    return np.where(q <= m // 2, q, q - m)


@dataclass
class RieszCoefficients:
    """Index alpha = (alpha^x, alpha^y) of the combination sum alpha_i R_i^2 + sum alpha_jk R_j R_k."""

    alpha_x: np.ndarray
    alpha_y: np.ndarray

    def __post_init__(self):
        self.alpha_x = np.atleast_1d(np.asarray(self.alpha_x, dtype=np.complex128))
        self.alpha_y = np.atleast_2d(np.asarray(self.alpha_y, dtype=np.complex128))
        if self.alpha_y.size == 0:
            self.alpha_y = self.alpha_y.reshape(0, 0)
        if self.alpha_y.shape[0] != self.alpha_y.shape[1]:
            raise ValueError("alpha_y must be square")

    @classmethod
    def for_group(cls, spec: GroupSpec, alpha_x=None, alpha_y=None) -> "RieszCoefficients":
        ax = np.zeros(spec.m) if alpha_x is None else np.asarray(alpha_x, dtype=np.complex128)
        ay = np.zeros((spec.n, spec.n)) if alpha_y is None else np.asarray(alpha_y, dtype=np.complex128)
        return cls(ax.reshape(spec.m), ay.reshape(spec.n, spec.n))

    def matrix_norm(self) -> float:
        """max(max_i |alpha_i^x|, spectral norm of alpha_y)."""
        nx = float(np.max(np.abs(self.alpha_x))) if self.alpha_x.size else 0.0
        ny = float(np.linalg.norm(self.alpha_y, 2)) if self.alpha_y.size else 0.0
        return max(nx, ny)

    @property
    def real_symmetric(self) -> bool:
        return bool(
            np.all(np.abs(self.alpha_x.imag) == 0)
            and np.all(np.abs(self.alpha_y.imag) == 0)
            and np.allclose(self.alpha_y, self.alpha_y.T, atol=0.0)
        )

    def conjugate(self) -> "RieszCoefficients":
        return RieszCoefficients(np.conj(self.alpha_x), np.conj(self.alpha_y).T)


# ---------------------------------------------------------------------------
# eigenvalues and multiplier tables

def laplacian_eigenvalue(spec: GroupSpec, idx: FrequencyIndex) -> float:
    """Eigenvalue of -Delta on the character at idx:
    sum_i 4 sin^2(pi k_i/N_i) + sum_j 4 pi^2 q_j^2."""
    idx.validate(spec)
    lam = 0.0
    for ki, n in zip(idx.k, spec.discrete_cycles):
        lam += 4.0 * np.sin(np.pi * ki / n) ** 2
    for qj in idx.q:
        lam += 4.0 * np.pi**2 * qj**2
    return float(lam)


def eigenvalue_grid(spec: GroupSpec) -> np.ndarray:
    """-Delta eigenvalues over the whole frequency grid, fft layout."""
    lam = np.zeros(spec.shape)
    for a, n in enumerate(spec.discrete_cycles):
        ax = 4.0 * np.sin(np.pi * np.arange(n) / n) ** 2
        lam = lam + ax.reshape([-1 if b == a else 1 for b in range(spec.m + spec.n)])
    for j, m in enumerate(spec.torus_resolutions):
        a = spec.m + j
        ax = 4.0 * np.pi**2 * torus_frequencies(m).astype(float) ** 2
        lam = lam + ax.reshape([-1 if b == a else 1 for b in range(spec.m + spec.n)])
    return lam


def axis_eigenvalue_grids(spec: GroupSpec) -> list[np.ndarray]:
    """Per discrete axis i: 4 sin^2(pi k_i/N_i) broadcast over the frequency grid."""
    out = []
    for a, n in enumerate(spec.discrete_cycles):
        ax = 4.0 * np.sin(np.pi * np.arange(n) / n) ** 2
        out.append(np.broadcast_to(
            ax.reshape([-1 if b == a else 1 for b in range(spec.m + spec.n)]), spec.shape
        ))
    return out


def torus_frequency_grids(spec: GroupSpec) -> list[np.ndarray]:
    out = []
    for j, m in enumerate(spec.torus_resolutions):
        a = spec.m + j
        ax = torus_frequencies(m).astype(float)
        out.append(np.broadcast_to(
            ax.reshape([-1 if b == a else 1 for b in range(spec.m + spec.n)]), spec.shape
        ))
    return out


def multiplier_grid(spec: GroupSpec, coeffs: RieszCoefficients) -> np.ndarray:
    """m_alpha over the whole frequency grid; 0 at frequency 0 by convention."""
    if coeffs.alpha_x.shape != (spec.m,) or coeffs.alpha_y.shape != (spec.n, spec.n):
        raise ValueError("coefficients do not match group")
    num = np.zeros(spec.shape, dtype=np.complex128)
    for i, lam_i in enumerate(axis_eigenvalue_grids(spec)):
        num = num - coeffs.alpha_x[i] * lam_i
    qg = torus_frequency_grids(spec)
    for j in range(spec.n):
        for k in range(spec.n):
            num = num - coeffs.alpha_y[j, k] * 4.0 * np.pi**2 * qg[j] * qg[k]
    lam = eigenvalue_grid(spec)
    out = np.zeros(spec.shape, dtype=np.complex128)
    nz = lam > 0
    out[nz] = num[nz] / lam[nz]
    return out


def riesz2_multiplier(spec: GroupSpec, coeffs: RieszCoefficients, idx: FrequencyIndex) -> complex:
    """Symbol of R_alpha^2 at one frequency; 0 at idx = 0."""
    idx.validate(spec)
    if idx.is_zero():
        return 0.0
    num = 0.0 + 0.0j
    for i, (ki, n) in enumerate(zip(idx.k, spec.discrete_cycles)):
        num -= coeffs.alpha_x[i] * 4.0 * np.sin(np.pi * ki / n) ** 2
    for j in range(spec.n):
        for k in range(spec.n):
            num -= coeffs.alpha_y[j, k] * 4.0 * np.pi**2 * idx.q[j] * idx.q[k]
    return complex(num / laplacian_eigenvalue(spec, idx))


# ---------------------------------------------------------------------------
# transforms

def transform(f: LatticeFunction) -> LatticeFunction:
    """Expansion coefficients c(idx) of f over the characters e_idx."""
    if f.domain_tag != "spatial":
        raise ValueError("transform expects a spatial-domain function")
    coef = np.fft.fftn(f.grid()) / f.group.size
    return LatticeFunction(f.group, coef.reshape(-1), "frequency")


def inverse_transform(F: LatticeFunction) -> LatticeFunction:
    if F.domain_tag != "frequency":
        raise ValueError("inverse_transform expects a frequency-domain function")
    vals = np.fft.ifftn(F.grid()) * F.group.size
    return LatticeFunction(F.group, vals.reshape(-1), "spatial")


def apply_multiplier(f: LatticeFunction, mult: np.ndarray) -> LatticeFunction:
    coef = np.fft.fftn(f.grid())
    out = np.fft.ifftn(coef * mult)
    return LatticeFunction(f.group, out.reshape(-1), "spatial")


def apply_riesz2(coeffs: RieszCoefficients, f: LatticeFunction) -> LatticeFunction:
    """R_alpha^2 f via the multiplier table; annihilates the mean."""
    if f.domain_tag != "spatial":
        raise ValueError("apply_riesz2 expects a spatial-domain function")
    out = apply_multiplier(f, multiplier_grid(f.group, coeffs))
    real_input = bool(np.all(f.values.imag == 0))
    if real_input and coeffs.real_symmetric:
        out.values = out.values.real.astype(np.complex128)
    return out


def heat_semigroup(f: LatticeFunction, t: float) -> LatticeFunction:
    """P_t f = e^{t Delta} f: frequency idx scaled by exp(-lambda(idx) t)."""
    if t < 0:
        raise ValueError(f"heat time must be >= 0, got {t}")
    if f.domain_tag != "spatial":
        raise ValueError("heat_semigroup expects a spatial-domain function")
    return apply_multiplier(f, np.exp(-eigenvalue_grid(f.group) * t))


# ---------------------------------------------------------------------------
# identities

def weak_form_residual(coeffs: RieszCoefficients, f: LatticeFunction, g: LatticeFunction) -> float:
    """|(R_alpha^2 f, g) - RHS| / (1 + |(R_alpha^2 f, g)|), where RHS is
    -2 int_0^inf (A_alpha grad P_t f, grad P_t g) dt with the 1/2-weighted
    discrete pairing, the t-integral taken in closed form per frequency."""
    spec = f.group
    if g.group != spec:
        raise ValueError("mismatched GroupSpec")
    for h in (f, g):
        if h.domain_tag != "spatial":
            raise ValueError("weak_form_residual expects spatial functions")
    from .group_lattice import mean_value
    if abs(mean_value(f)) > 1e-9 or abs(mean_value(g)) > 1e-9:
        raise ValueError("weak formulation requires mean-zero inputs")

    lhs = inner_product(apply_riesz2(coeffs, f), g)

    cf = np.fft.fftn(f.grid()) / spec.size
    cg = np.fft.fftn(g.grid()) / spec.size
    lam = eigenvalue_grid(spec)
    # 1/2 sum_{i,tau} alpha_i |sigma_i^tau|^2 = alpha_i * 4 sin^2(pi k_i/N_i)
    pairing = np.zeros(spec.shape, dtype=np.complex128)
    for i, lam_i in enumerate(axis_eigenvalue_grids(spec)):
        pairing = pairing + coeffs.alpha_x[i] * lam_i
    qg = torus_frequency_grids(spec)
    for j in range(spec.n):
        for k in range(spec.n):
            pairing = pairing + coeffs.alpha_y[j, k] * 4.0 * np.pi**2 * qg[j] * qg[k]
    nz = lam > 0
    # int_0^inf e^{-2 lam t} dt = 1/(2 lam); Parseval weight = ||e_idx||_2^2
    weight = float(np.prod(spec.discrete_cycles)) if spec.m else 1.0
    rhs = -2.0 * np.sum(cf[nz] * np.conj(cg[nz]) * pairing[nz] / (2.0 * lam[nz])) * weight
    return float(abs(lhs - rhs) / (1.0 + abs(lhs)))


def shift(f: LatticeFunction, axis: int, step: int) -> LatticeFunction:
    """Translate along one discrete axis: (shift f)(x) = f(x + step e_axis)."""
    vals = np.roll(f.grid(), -step, axis=axis)
    return LatticeFunction(f.group, vals.reshape(-1), f.domain_tag)


def discrete_derivative(f: LatticeFunction, axis: int, tau: int) -> LatticeFunction:
    """X_i^+ f = f(x + g_i) - f(x), X_i^- f = f(x) - f(x - g_i); spatial rolls."""
    if tau == +1:
        out = shift(f, axis, +1).values - f.values
    elif tau == -1:
        out = f.values - shift(f, axis, -1).values
    else:
        raise ValueError("tau must be +-1")
    return LatticeFunction(f.group, out, "spatial")


def torus_derivative(f: LatticeFunction, j: int) -> LatticeFunction:
    """Y_j f via the exact spectral symbol 2 pi i q_j."""
    spec = f.group
    qg = torus_frequency_grids(spec)[j]
    return apply_multiplier(f, 2j * np.pi * qg)


def commutation_check(spec: GroupSpec, idx: FrequencyIndex, t: float) -> float:
    """max over generators of ||D P_t e_idx - P_t D e_idx||_inf."""
    from .group_lattice import character
    idx.validate(spec)
    e = character(spec, idx.k + idx.q)
    worst = 0.0
    ops = []
    for i in range(spec.m):
        ops.append(lambda h, i=i: discrete_derivative(h, i, +1))
        ops.append(lambda h, i=i: discrete_derivative(h, i, -1))
    for j in range(spec.n):
        ops.append(lambda h, j=j: torus_derivative(h, j))
    for op in ops:
        a = op(heat_semigroup(e, t)).values
        b = heat_semigroup(op(e), t).values
        worst = max(worst, float(np.max(np.abs(a - b))))
    return worst


def multiplier_table_csv(spec: GroupSpec, coeffs: RieszCoefficients, path: str):
    mult = multiplier_grid(spec, coeffs).reshape(-1)
    with open(path, "w") as fh:
        for flat, v in enumerate(mult):
            idx = np.unravel_index(flat, spec.shape)
            fh.write(",".join(str(int(i)) for i in idx))
            fh.write(f",{float(v.real)!r},{float(v.imag)!r}\n")
