"""Product groups Z_N1 x ... x Z_Nm x T^n, functions on them, measures and norms.

The discrete factors carry counting measure, each torus circle has
circumference 1 and carries normalized Haar measure, so the weight of a
grid point is prod_j 1/M_j independently of the point.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

MAX_GRID_SIZE = 1 << 26


class GroupSpecError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    """Cycle lengths of the discrete factors and sample counts of the torus factors."""

    discrete_cycles: tuple[int, ...] = ()
    torus_resolutions: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "discrete_cycles", tuple(int(n) for n in self.discrete_cycles))
        object.__setattr__(self, "torus_resolutions", tuple(int(m) for m in self.torus_resolutions))
        if len(self.discrete_cycles) + len(self.torus_resolutions) < 1:
            raise GroupSpecError("need at least one factor")
        for n in self.discrete_cycles:
            if n < 2:
                raise GroupSpecError(f"cycle length {n} < 2")
        for m in self.torus_resolutions:
            if m < 2 or m % 2 != 0:
                raise GroupSpecError(f"torus resolution {m} must be even and >= 2")
        if self.size > MAX_GRID_SIZE:
            raise GroupSpecError(f"grid size {self.size} exceeds limit {MAX_GRID_SIZE}")

    @property
    def m(self) -> int:
        return len(self.discrete_cycles)

    @property
    def n(self) -> int:
        return len(self.torus_resolutions)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.discrete_cycles + self.torus_resolutions

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64))

    @property
    def point_weight(self) -> float:
        """Measure weight of one grid point: 1 per discrete axis, 1/M_j per torus axis."""
        w = 1.0
        for m in self.torus_resolutions:
            w /= m
        return w


@dataclass
class LatticeFunction:
    """Complex samples over the full product grid, row-major over (k_1..k_m, s_1..s_n)."""

    group: GroupSpec
    values: np.ndarray
    domain_tag: str = "spatial"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if self.values.size != self.group.size:
            raise ValueError(
                f"values length {self.values.size} != grid size {self.group.size}"
            )
        if self.domain_tag not in ("spatial", "frequency"):
            raise ValueError(f"bad domain_tag {self.domain_tag!r}")

    def grid(self) -> np.ndarray:
        return self.values.reshape(self.group.shape)

    def copy(self) -> "LatticeFunction":
        return LatticeFunction(self.group, self.values.copy(), self.domain_tag)


def _require_spatial(f: LatticeFunction):
    if f.domain_tag != "spatial":
        raise ValueError("expected a spatial-domain function")


def lp_norm(f: LatticeFunction, p: float) -> float:
    """Weighted L^p norm (sum_z |f(z)|^p w)^{1/p} with the product-measure weight."""
    _require_spatial(f)
    if not np.isfinite(p) or p < 1:
        raise ValueError(f"p must be a finite real >= 1, got {p}")
    w = f.group.point_weight
    a = np.abs(f.values)
    if p == 1:
        return float(np.sum(a) * w)
    if p == 2:
        return float(np.sqrt(np.sum(a * a) * w))
    return float((np.sum(a**p) * w) ** (1.0 / p))


def sup_norm(f: LatticeFunction) -> float:
    _require_spatial(f)
    return float(np.max(np.abs(f.values))) if f.values.size else 0.0


def inner_product(f: LatticeFunction, g: LatticeFunction) -> complex:
    """sum_z f(z) conj(g(z)) w(z); conjugation on the second slot."""
    _require_spatial(f)
    _require_spatial(g)
    if f.group != g.group:
        raise ValueError("mismatched GroupSpec")
    return complex(np.vdot(g.values, f.values) * f.group.point_weight)


def mean_value(f: LatticeFunction) -> complex:
    """Integral of f against the product measure divided by the total mass."""
    _require_spatial(f)
    total_mass = f.group.size * f.group.point_weight
    return complex(np.sum(f.values) * f.group.point_weight / total_mass)


def mean_zero_project(f: LatticeFunction) -> LatticeFunction:
    _require_spatial(f)
    return LatticeFunction(f.group, f.values - mean_value(f), "spatial")


def random_function(spec: GroupSpec, seed: int) -> LatticeFunction:
    """Deterministic pseudo-random complex samples; same seed gives identical output."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed & (2**64 - 1), 0x52495A]))
                              )
    vals = rng.standard_normal(spec.size) + 1j * rng.standard_normal(spec.size)
    return LatticeFunction(spec, vals, "spatial")


def random_real_function(spec: GroupSpec, seed: int) -> LatticeFunction:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed & (2**64 - 1), 0x52495B]))
                              )
    return LatticeFunction(spec, rng.standard_normal(spec.size).astype(np.complex128), "spatial")


def point_indicator(spec: GroupSpec, index: tuple[int, ...] | None = None) -> LatticeFunction:
    vals = np.zeros(spec.size, dtype=np.complex128)
    flat = 0 if index is None else int(np.ravel_multi_index(index, spec.shape))
    vals[flat] = 1.0
    return LatticeFunction(spec, vals, "spatial")


def character(spec: GroupSpec, idx: tuple[int, ...]) -> LatticeFunction:
    """The character exp(2 pi i (sum k_i x_i / N_i + sum q_j s_j)) sampled on the grid."""
    if len(idx) != spec.m + spec.n:
        raise ValueError("frequency index has wrong length")
    grids = np.meshgrid(*[np.arange(d) for d in spec.shape], indexing="ij")
    phase = np.zeros(spec.shape, dtype=np.float64)
    for a, d in enumerate(spec.shape):
        phase += 2 * np.pi * idx[a] * grids[a] / d
    return LatticeFunction(spec, np.exp(1j * phase).reshape(-1), "spatial")


# ---------------------------------------------------------------------------
# serialization

_HEADER_FMT = "group: {discrete} ; {torus}\n"


def save_binary(f: LatticeFunction, path: str):
    """Header line `group: N1,..,Nm ; M1,..,Mn` then interleaved (re, im) little-endian doubles."""
    header = _HEADER_FMT.format(
        discrete=",".join(str(n) for n in f.group.discrete_cycles),
        torus=",".join(str(m) for m in f.group.torus_resolutions),
    )
    inter = np.empty(2 * f.values.size, dtype="<f8")
    inter[0::2] = f.values.real
    inter[1::2] = f.values.imag
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(inter.tobytes())


def load_binary(path: str) -> LatticeFunction:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii")
        payload = fh.read()
    if not header.startswith("group: "):
        raise ValueError("missing group header")
    disc_s, torus_s = header[len("group: "):].strip().split(";")
    discrete = tuple(int(t) for t in disc_s.strip().split(",") if t.strip())
    torus = tuple(int(t) for t in torus_s.strip().split(",") if t.strip())
    spec = GroupSpec(discrete, torus)
    inter = np.frombuffer(payload, dtype="<f8")
    if inter.size != 2 * spec.size:
        raise ValueError("payload size does not match group")
    return LatticeFunction(spec, inter[0::2] + 1j * inter[1::2], "spatial")


def save_csv(f: LatticeFunction, path: str):
    shape = f.group.shape
    axes = [f"k{i}" for i in range(f.group.m)] + [f"s{j}" for j in range(f.group.n)]
    with open(path, "w") as fh:
        fh.write(",".join(axes + ["re", "im"]) + "\n")
        for flat, v in enumerate(f.values):
            idx = np.unravel_index(flat, shape)
            fh.write(",".join(str(int(i)) for i in idx))
            fh.write(f",{float(v.real)!r},{float(v.imag)!r}\n")
