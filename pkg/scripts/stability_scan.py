#!/usr/bin/env python3
"""Sign statistics of sectional curvature: ideal flow vs ideal MHD on the 2-torus.

Samples seeded random planes over the same trigonometric mode family
(|k|_inf <= band) for three backends and tabulates the curvature signs:

* velocity planes on the volume-preserving group (ideal hydrodynamics),
* pure magnetic planes (0, A(Y1)), (0, A(Y2)) of the magnetic extension,
* mixed planes (X, 0), (0, A(Y)) of the magnetic extension,
* full random planes of the magnetic extension.

Negative sectional curvature is associated with exponential instability of
geodesics, so the comparison below shows a descriptive account of the
relative stability of the two systems for this mode family.  It is a report,
not an assertion: no pass/fail threshold is attached to the comparison.

Usage:
    python scripts/stability_scan.py [--seed 7] [--count 200] [--band 2]
"""

import argparse

from liecurv import torus
from liecurv.curvature import curvature_numerator_generic, curvature_numerator_semidirect
from liecurv.sampling import sample_planes

ZERO_TOL = 1e-12


def sign_counts(backend, planes, semidirect):
    counts = {"-": 0, "0": 0, "+": 0}
    k_min, k_max = float("inf"), float("-inf")
    for plane in planes:
        if semidirect:
            br = curvature_numerator_semidirect(backend, plane.x, plane.y)
        else:
            br = curvature_numerator_generic(backend, plane.x, plane.y)
        k = br.numerator / br.denominator
        k_min, k_max = min(k_min, k), max(k_max, k)
        if abs(k) <= ZERO_TOL:
            counts["0"] += 1
        elif k > 0:
            counts["+"] += 1
        else:
            counts["-"] += 1
    return counts, k_min, k_max


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--band", type=int, default=2)
    args = parser.parse_args()

    vol = torus.volume_preserving_backend()
    mhd = torus.mhd_backend()

    rows = []
    planes = sample_planes(vol, args.seed, args.count, band=args.band)
    rows.append(("euler velocity planes", *sign_counts(vol, planes, semidirect=False)))
    for family, label in (("hh", "mhd pure magnetic planes"),
                          ("gh", "mhd mixed planes"),
                          ("full", "mhd full planes")):
        planes = sample_planes(mhd, args.seed, args.count, family=family, band=args.band)
        rows.append((label, *sign_counts(mhd, planes, semidirect=True)))

    print(f"seed={args.seed} count={args.count} band={args.band} zero_tol={ZERO_TOL}")
    print(f"{'planes':<28}{'neg':>6}{'zero':>6}{'pos':>6}{'min K':>14}{'max K':>14}")
    for label, counts, k_min, k_max in rows:
        print(
            f"{label:<28}{counts['-']:>6}{counts['0']:>6}{counts['+']:>6}"
            f"{k_min:>14.5g}{k_max:>14.5g}"
        )
    neg_euler = rows[0][1]["-"]
    neg_mhd = rows[3][1]["-"]
    print()
    print(
        f"negative-curvature fraction: euler {neg_euler}/{args.count}, "
        f"mhd full {neg_mhd}/{args.count}"
    )


if __name__ == "__main__":
    main()
