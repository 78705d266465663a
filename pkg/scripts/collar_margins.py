#!/usr/bin/env python3
"""Tabulate the collar margin w(l) - K_C(l) over the thin range for a
sweep of epsilon values, locating where the positivity argument breaks.

Usage:
    python3 scripts/collar_margins.py [--eps-min 0.60] [--eps-max 0.80]
        [--steps 21]

The infimum of the margin is attained as l -> 0 where it tends to
-log(sinh(eps)); positivity therefore fails once sinh(eps) >= 1, i.e.
just above eps = 0.72 at the printed resolution.
"""

import argparse
import math
import sys

from hypdel import thickthin as TT


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--eps-min", type=float, default=0.60)
    ap.add_argument("--eps-max", type=float, default=0.80)
    ap.add_argument("--steps", type=int, default=21)
    args = ap.parse_args(argv)

    print(f"{'eps':>6} {'infimum':>10} {'limit l->0':>12} {'ok':>4}")
    last_ok = None
    for k in range(args.steps):
        eps = args.eps_min + (args.eps_max - args.eps_min) * k / \
            (args.steps - 1)
        rep = TT.collar_margin_audit(eps)
        lim = -math.log(math.sinh(eps))
        print(f"{eps:6.3f} {rep.values['infimum']:10.4f} {lim:12.4f} "
              f"{'yes' if rep.passed else 'NO':>4}")
        if rep.passed:
            last_ok = eps
    if last_ok is not None:
        print(f"largest passing eps in sweep: {last_ok:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
