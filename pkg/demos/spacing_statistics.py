"""Unfold an eigenvalue list and compare its spacing law to the references.

Pass the CSV produced by `moonmaass scan` to analyze a computed spectrum:

    python3 demos/spacing_statistics.py out/eigenvalues.csv

Without an argument a synthetic complete list is generated instead, whose
spacings should land closer to the Poisson law than to the GOE surmise.
"""

import math
import sys

from scipy.optimize import brentq

from moonmaass.groups import builtin_profile
from moonmaass.stats import (ks_distance, reference_cdf, spacing_histogram,
                             spacings, unfold)
from moonmaass.weyl import EigenvalueList, load_list, main_term


def synthetic(profile, T_hi=25.0):
    total = lambda T: main_term(profile, T).total
    count = int(math.floor(total(T_hi) + 0.5))
    rs, lo = [], 1.2
    for k in range(1, count + 1):
        r = brentq(lambda T, k=k: total(T) - (k - 0.5), lo, T_hi, xtol=1e-12)
        rs.append(r)
        lo = r
    return EigenvalueList(N=profile.N, rs=tuple(rs), eps=1e-8,
                          r_lo=0.0, r_hi=T_hi)


if len(sys.argv) > 1:
    lst = load_list(sys.argv[1])
    profile = builtin_profile(lst.N)
    print(f"loaded {len(lst)} eigenvalues (level {lst.N}) from {sys.argv[1]}")
else:
    profile = builtin_profile(6)
    lst = synthetic(profile)
    print(f"synthetic level-6 list with {len(lst)} eigenvalues")

s = spacings(unfold(lst, profile))
print(f"{s.size} unfolded spacings, mean {s.mean():.4f} (unit by design)")
kp = ks_distance(s, "poisson")
kg = ks_distance(s, "goe")
print(f"KS distance to Poisson {kp:.4f}, to GOE {kg:.4f} "
      f"-> closer to {'Poisson' if kp < kg else 'GOE'}")

try:
    hist = spacing_histogram(s)
    print(f"\n{'s':>6} {'density':>9} {'poisson':>9} {'goe':>9}")
    for k in range(len(hist.density)):
        mid = 0.5 * (hist.edges[k] + hist.edges[k + 1])
        width = hist.edges[k + 1] - hist.edges[k]
        pp = (reference_cdf("poisson", hist.edges[k + 1])
              - reference_cdf("poisson", hist.edges[k])) / width
        pg = (reference_cdf("goe", hist.edges[k + 1])
              - reference_cdf("goe", hist.edges[k])) / width
        print(f"{mid:6.3f} {hist.density[k]:9.4f} {pp:9.4f} {pg:9.4f}")
except Exception as exc:  # small lists: histogram is refused, KS still valid
    print(f"(no histogram: {exc})")
