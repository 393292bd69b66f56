"""Walk through the eigenvalue-counting main term, term by term.

Shows the breakdown at a few heights, the exact smooth difference between
the level-5 and level-6 counts, and how the sawtooth/arctan pair stays
continuous across a prime-cell boundary where each piece jumps by 1/2.
"""

import math

from moonmaass.groups import builtin_profile
from moonmaass.weyl import g_envelope, main_term

p1 = builtin_profile(1)
p5 = builtin_profile(5)
p6 = builtin_profile(6)

print("term breakdown (level 6)")
print(f"{'T':>5} {'quadratic':>11} {'T log T':>11} {'linear':>9} "
      f"{'consts':>9} {'sawtooth':>9} {'arctan':>9} {'total':>10}")
for T in (5.0, 10.0, 20.0, 30.0):
    w = main_term(p6, T)
    consts = w.elliptic_const + w.volume_const + w.spectral_const
    print(f"{T:5.1f} {w.quadratic:11.4f} {w.tlogt:11.4f} {w.linear:9.4f} "
          f"{consts:9.4f} {w.sawtooth:9.4f} {w.arctan_term:9.4f} "
          f"{w.total:10.4f}")

print("\nconstant terms:")
for label, p, ref in (("level 1", p1, -131.0 / 144.0),
                      ("level 5", p5, -43.0 / 48.0),
                      ("level 6", p6, -43.0 / 48.0)):
    w = main_term(p, 10.0)
    c = w.elliptic_const + w.volume_const + w.spectral_const
    print(f"  {label}: {c:+.15f}   (exact {ref:+.15f})")

print("\nsmooth level-5 minus level-6 difference vs (T/pi) log(6/5):")
for T in (5.0, 15.0, 45.0):
    m5, m6 = main_term(p5, T), main_term(p6, T)
    diff = (m5.total - m5.sawtooth - m5.arctan_term) \
        - (m6.total - m6.sawtooth - m6.arctan_term)
    print(f"  T = {T:4.1f}: {diff:.12f} vs {T * math.log(1.2) / math.pi:.12f}")

# at T log 2 = k pi the level-6 sawtooth drops by 1/2 while the arctan term
# rises by 1/2; the total crosses the boundary smoothly
Tc = 10 * math.pi / math.log(2.0)
eps = 1e-9
lo, hi = main_term(p6, Tc - eps), main_term(p6, Tc + eps)
print(f"\nprime-cell boundary at T = 10 pi / log 2 = {Tc:.6f}:")
print(f"  sawtooth jump: {hi.sawtooth - lo.sawtooth:+.6f}")
print(f"  arctan jump:   {hi.arctan_term - lo.arctan_term:+.6f}")
print(f"  total jump:    {hi.total - lo.total:+.2e}")

print(f"\nfluctuation envelope at T = 10, 20, 40 (level 1): "
      + ", ".join(f"{g_envelope(p1, T):.5f}" for T in (10.0, 20.0, 40.0)))
