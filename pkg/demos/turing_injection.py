"""Consecutiveness testing on a synthetic complete list, then with edits.

The list places r_n where the averaged count crosses n - 1/2, which is the
cleanest possible input: the averaged fluctuation stays near zero.  Removing
or injecting an eigenvalue shifts it by exactly -(1 - r0/T) / +(1 - r0/T)
for T past r0, and the verdict machinery flags the window.
"""

import math

from scipy.optimize import brentq

from moonmaass.groups import builtin_profile
from moonmaass.turing import consecutiveness, inject, remove
from moonmaass.weyl import EigenvalueList, averaged_s, main_term

profile = builtin_profile(6)
T_HI = 18.0

total = lambda T: main_term(profile, T).total
count = int(math.floor(total(T_HI) + 0.5))
rs, lo = [], 1.2
for k in range(1, count + 1):
    r = brentq(lambda T, k=k: total(T) - (k - 0.5), lo, T_HI, xtol=1e-12)
    rs.append(r)
    lo = r
lst = EigenvalueList(N=6, rs=tuple(rs), eps=1e-8, r_lo=0.0, r_hi=T_HI)
print(f"synthetic level-6 list: {len(lst)} eigenvalues up to r = {T_HI}")

report = consecutiveness(lst, profile)
print(f"verdict on the full list: {report.verdict} "
      f"(end drift {report.drift_at_end:+.4f})")

n = len(lst) // 3
r0 = lst.rs[n - 1]
damaged = remove(lst, n)
rep = consecutiveness(damaged, profile)
base = averaged_s(lst, profile, T_HI)
shifted = averaged_s(damaged, profile, T_HI)
print(f"\nremove #{n} (r0 = {r0:.4f}):")
print(f"  verdict {rep.verdict}, window {rep.window}")
print(f"  mean-fluctuation shift {shifted - base:+.12f} "
      f"vs exact {-(1 - r0 / T_HI):+.12f}")

fake_r = 0.5 * (lst.rs[n - 1] + lst.rs[n])
fake_lam = fake_r ** 2 + 0.25
rep = consecutiveness(inject(lst, fake_lam), profile)
print(f"\ninject fake lambda = {fake_lam:.4f} (r = {fake_r:.4f}):")
print(f"  verdict {rep.verdict}, window {rep.window}")
