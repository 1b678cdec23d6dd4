"""Sharp constants and special functions for the five operator-norm theorems."""

from __future__ import annotations

import math
from dataclasses import dataclass


class UnsupportedCaseError(ValueError):
    """Raised where no closed form exists and approximation would be misleading."""


def _check_p(p: float):
    if not (1.0 < p < math.inf):
        raise ValueError(f"p must satisfy 1 < p < inf, got {p}")


def gamma(x: float) -> float:
    """Euler Gamma on (0, inf); Lanczos-backed math.gamma, factorial-validated in tests."""
    if x <= 0:
        raise ValueError(f"gamma requires x > 0, got {x}")
    return math.gamma(x)


def p_star(p: float) -> float:
    """max(p, p/(p-1)); symmetric under p -> p/(p-1)."""
    _check_p(p)
    return max(p, p / (p - 1.0))


def sharp_lp_constant(p: float) -> float:
    """The L^p operator-norm constant p* - 1."""
    return p_star(p) - 1.0


def weak_type_constant(p: float) -> float:
    """(Gamma((2p-1)/(p-1))/2)^{1-1/p} for 1<p<=2, (p^{p-1}/2)^{1/p} for p>=2."""
    _check_p(p)
    if p <= 2.0:
        return (0.5 * gamma((2.0 * p - 1.0) / (p - 1.0))) ** (1.0 - 1.0 / p)
    return (p ** (p - 1.0) / 2.0) ** (1.0 / p)


def weak_type_threshold(p: float) -> float:
    """The martingale weak-type threshold p^{-1/(p-1)}/2 * Gamma(p/(p-1)) for 1<p<2."""
    if not (1.0 < p < 2.0):
        raise ValueError(f"threshold branch requires 1 < p < 2, got {p}")
    return p ** (-1.0 / (p - 1.0)) / 2.0 * gamma(p / (p - 1.0))


_LOG_HALF_1E2 = math.log((1.0 + math.exp(-2.0)) / 2.0)


def choi_beta2() -> float:
    """Second coefficient of the large-p expansion of the (0,1) Choi constant."""
    r = math.exp(-2.0) / (1.0 + math.exp(-2.0))
    return _LOG_HALF_1E2**2 + 0.5 * _LOG_HALF_1E2 - 2.0 * r * r


def choi_01_approx(p: float) -> float:
    """Three-term large-p truncation p/2 + log((1+e^-2)/2)/2 + beta_2/p."""
    _check_p(p)
    return 0.5 * p + 0.5 * _LOG_HALF_1E2 + choi_beta2() / p


def burkholder_symmetric(a: float, b: float, p: float) -> float:
    """b (p*-1) in the symmetric case a = -b, b > 0; no closed form otherwise."""
    if not (b > 0 and a == -b):
        raise UnsupportedCaseError(
            f"closed form only for a = -b with b > 0, got a={a}, b={b}"
        )
    return b * sharp_lp_constant(p)


def young_phi(t: float) -> float:
    """Phi(t) = e^t - 1 - t."""
    if t < 0:
        raise ValueError(f"young_phi requires t >= 0, got {t}")
    return math.expm1(t) - t


def young_psi(t: float) -> float:
    """Psi(t) = (t+1) log(t+1) - t."""
    if t < 0:
        raise ValueError(f"young_psi requires t >= 0, got {t}")
    return (t + 1.0) * math.log1p(t) - t


_REPORT_NAMES = (
    "sharp_lp",
    "weak_type",
    "choi_01_approx",
    "burkholder_symmetric",
    "young_phi",
    "young_psi",
)


@dataclass
class ConstantReport:
    p: float
    name: str
    value: float
    q: float | None = None

    def __post_init__(self):
        if self.name not in _REPORT_NAMES:
            raise ValueError(f"unknown constant name {self.name!r}")
        if not (math.isfinite(self.value) and self.value >= 0):
            raise ValueError(f"constant value must be finite and >= 0, got {self.value}")


def constants_table(ps) -> list[ConstantReport]:
    out = []
    for p in ps:
        out.append(ConstantReport(p, "sharp_lp", sharp_lp_constant(p)))
        out.append(ConstantReport(p, "weak_type", weak_type_constant(p)))
        out.append(ConstantReport(p, "choi_01_approx", choi_01_approx(p)))
    return out
