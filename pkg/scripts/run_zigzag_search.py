#!/usr/bin/env python3
"""Beam search for gap-positive zigzag trees and the weak-type lower-bound
certificates they imply, swept over exponents in (1, 2)."""

import argparse

from riesz_lab.constants import weak_type_constant
from riesz_lab.zigzag_laminate import (
    CertificateRefused,
    certify_weak_type_lower,
    critical_lambda,
    search_gap_tree,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-list", default="1.25,1.5,1.75")
    ap.add_argument("--depth", type=int, default=8)
    ap.add_argument("--beam", type=int, default=24)
    args = ap.parse_args()

    print(f"{'p':>6} {'lambda':>10} {'bound':>10} {'ceiling':>10} {'ratio':>8}")
    for p in (float(x) for x in args.p_list.split(",")):
        ceiling = weak_type_constant(p)
        try:
            tree = search_gap_tree(p, depth=args.depth, beam=args.beam)
            lam = critical_lambda(tree, p)
            bound = certify_weak_type_lower(p, tree, 1e-9)
            print(f"{p:6.2f} {lam:10.6f} {bound:10.6f} {ceiling:10.6f} "
                  f"{bound / ceiling:8.4f}")
        except CertificateRefused as e:
            print(f"{p:6.2f} refused: {e} (ceiling {ceiling:.6f})")


if __name__ == "__main__":
    main()
