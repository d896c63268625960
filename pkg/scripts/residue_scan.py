#!/usr/bin/env python3
"""Sweep primes for a named family and compare the observed density of
ordinary primes with the residue-class prediction.

Examples:
    python scripts/residue_scan.py monomial d=6 --bound 2000
    python scripts/residue_scan.py four_dim D=2 k=2 --bound 2000
"""

import argparse
from fractions import Fraction
from math import gcd

from npoly import catalog, diagonal
from npoly.primes import primes_below


def parse_params(pairs):
    params = {}
    for pair in pairs:
        key, _, value = pair.partition("=")
        if not value:
            raise SystemExit(f"parameter {pair!r} is not of the form key=value")
        if "," in value:
            params[key] = [int(v) for v in value.split(",")]
        else:
            params[key] = int(value)
    return params


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("family", choices=catalog.FAMILY_NAMES)
    parser.add_argument("params", nargs="*", help="key=value family parameters")
    parser.add_argument("--bound", type=int, default=1000)
    args = parser.parse_args()

    family = catalog.make(args.family, parse_params(args.params))
    ds = diagonal.DiagonalSimplex.from_support(family.support)
    res = diagonal.ordinary_residues(ds)
    phi = sum(1 for m in range(1, res.modulus + 1) if gcd(m, res.modulus) == 1)

    per_class = {}
    tested = ordinary = 0
    for p in primes_below(args.bound):
        if gcd(p, ds.group_order) != 1:
            continue
        verdict = diagonal.is_ordinary(ds, p).ordinary
        tested += 1
        ordinary += verdict
        bucket = per_class.setdefault(p % res.modulus, [0, 0])
        bucket[0] += verdict
        bucket[1] += 1

    print(f"family {family.name} {dict(family.parameters)}")
    print(f"largest invariant factor d_n = {res.modulus}")
    print(f"predicted ordinary classes mod d_n: {set(res.classes)}")
    print(f"predicted density mu/phi = {Fraction(res.mu, phi)}")
    print()
    print("residue  ordinary/tested")
    for residue in sorted(per_class):
        o, t = per_class[residue]
        marker = "*" if residue in res.classes else " "
        print(f"  {residue:4d}{marker}   {o}/{t}")
    print()
    print(f"overall: {ordinary}/{tested} = {ordinary / tested:.4f} "
          f"vs predicted {float(Fraction(res.mu, phi)):.4f}")


if __name__ == "__main__":
    main()
