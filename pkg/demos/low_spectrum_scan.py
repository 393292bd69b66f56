"""Scan a small spectral window and print the verified eigenvalues.

Defaults to the window holding the first eigenvalue of the level-5 group
(about half a minute).  Widen the window to reproduce the full low spectrum:

    python3 demos/low_spectrum_scan.py --group 5 --r-hi 7.0
"""

import argparse
import time

from moonmaass.groups import builtin_profile
from moonmaass.hejhal import scan


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--group", type=int, default=5, choices=(1, 5, 6))
    ap.add_argument("--r-lo", type=float, default=3.9)
    ap.add_argument("--r-hi", type=float, default=4.4)
    ap.add_argument("--eps", type=float, default=1e-8)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    profile = builtin_profile(args.group)
    events = []
    t0 = time.time()
    found = scan(profile, args.r_lo, args.r_hi, args.eps, grid_step=0.005,
                 seed=0, workers=args.workers, log=events.append)
    dt = time.time() - t0

    dips = sum(1 for e in events if e["event"] == "dip")
    tried = sum(1 for e in events if e["event"] == "candidate")
    print(f"level {args.group}, window [{args.r_lo}, {args.r_hi}]: "
          f"{dips} dip(s), {tried} candidate(s), {len(found)} accepted "
          f"({dt:.0f}s)")
    for c in found:
        v = c.verification
        print(f"\n  r = {c.r:.9f}   lambda = {c.lam:.6f}   "
              f"parity {'even' if c.parity == 1 else 'odd'}")
        print(f"  residual {max(v.residuals):.2e} over {len(v.residuals)} "
              f"heights, hecke defect "
              f"{'n/a' if v.hecke_defect is None else f'{v.hecke_defect:.2e}'}")
        head = ", ".join(f"{a:+.6f}" for a in c.coeffs[:8])
        print(f"  a_1..a_{min(8, len(c.coeffs))}: {head}")


if __name__ == "__main__":
    main()
