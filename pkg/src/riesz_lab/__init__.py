"""Numerical laboratory for second-order Riesz transforms on products of
cyclic lattices and flat tori: spectral oracles, sharp-constant tables,
operator-norm probes, martingale Monte Carlo, zigzag laminate certificates,
and a finite-difference transfer harness."""

__version__ = "0.1.0"
